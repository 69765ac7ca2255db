from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ragadapt.metrics import (
    EvalRecord,
    aggregate,
    bleu,
    edit_similarity,
    exact_match,
    normalize_line,
    score_instance,
    truncate_to_first_line,
)
from ragadapt.tokenizer import DEFAULT_TOKENIZER

# ---------------------------------------------------------------------------
# oracle 1: full-matrix Wagner-Fischer, structurally different from the
# two-row implementation under test


def levenshtein_oracle(a: str, b: str) -> int:
    m, n = len(a), len(b)
    d = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        d[i][0] = i
    for j in range(n + 1):
        d[0][j] = j
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            d[i][j] = min(d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost)
    return d[m][n]


# ---------------------------------------------------------------------------
# oracle 2: hand n-gram enumeration for sentence-level overlap scoring


def bleu_oracle(pred: str, target: str, max_n: int = 4) -> float:
    p = DEFAULT_TOKENIZER.tokenize(pred)
    t = DEFAULT_TOKENIZER.tokenize(target)
    if not p:
        return 1.0 if not t else 0.0
    if not t:
        return 0.0

    def grams(tokens, n):
        out = {}
        for g in zip(*(tokens[i:] for i in range(n))):
            out[g] = out.get(g, 0) + 1
        return out

    logs = []
    for n in range(1, max_n + 1):
        pg, tg = grams(p, n), grams(t, n)
        clipped = sum(min(c, tg.get(g, 0)) for g, c in pg.items())
        total = max(len(p) - n + 1, 0)
        if n == 1:
            if clipped == 0:
                return 0.0
            logs.append(math.log(clipped / total))
        elif clipped == 0:
            logs.append(math.log((clipped + 1) / (total + 1)))
        else:
            logs.append(math.log(clipped / total))
    bp = 1.0 if len(p) >= len(t) else math.exp(1.0 - len(t) / len(p))
    return bp * math.exp(sum(logs) / max_n)


# -- exact match -------------------------------------------------------------


def test_exact_match_trims_only():
    assert exact_match("  return x;  ", "return x;") == 1
    assert exact_match("return  x;", "return x;") == 0  # inner spacing differs
    assert exact_match("a", "b") == 0


def test_normalize_line_is_strip():
    assert normalize_line("\t code \n") == "code"


# -- edit similarity ---------------------------------------------------------


def test_kitten_sitting():
    assert edit_similarity("kitten", "sitting") == pytest.approx(1 - 3 / 7)


def test_es_identical_is_one():
    assert edit_similarity("same", "same") == 1.0
    assert edit_similarity("", "") == 1.0


def test_es_disjoint_is_zero():
    assert edit_similarity("aaaa", "bbbb") == 0.0
    assert edit_similarity("", "abc") == 0.0


def test_es_against_oracle_1000_random_pairs():
    rng = random.Random(42)
    alphabet = "ab();= _x"
    for _ in range(1000):
        a = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 25)))
        b = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 25)))
        expected = (
            1.0 if not a and not b else 1.0 - levenshtein_oracle(a, b) / max(len(a), len(b))
        )
        assert edit_similarity(a, b) == pytest.approx(expected, abs=1e-12)


@given(st.text(max_size=30), st.text(max_size=30))
def test_es_symmetric_and_bounded(a, b):
    es = edit_similarity(a, b)
    assert 0.0 <= es <= 1.0
    assert es == edit_similarity(b, a)


# -- bleu ----------------------------------------------------------------------


def test_bleu_precomputed_near_miss():
    # one token differs at the tail: (3/4 * 2/3 * 1/2 * smoothed 1/2)^(1/4)
    assert bleu("a b c d", "a b c e") == pytest.approx(0.5946035575013605, abs=1e-12)


def test_bleu_identical_is_one():
    assert bleu("return total + 1;", "return total + 1;") == pytest.approx(1.0)


def test_bleu_no_unigram_overlap_is_zero():
    assert bleu("alpha beta", "gamma delta") == 0.0


def test_bleu_empty_cases():
    assert bleu("", "") == 1.0
    assert bleu("", "x") == 0.0
    assert bleu("x", "") == 0.0


def test_bleu_brevity_penalty_applies_to_short_pred():
    longer = bleu("a b c d", "a b c d")
    shorter = bleu("a b", "a b c d")
    assert shorter < longer


def test_bleu_50_fixture_pairs_match_oracle():
    rng = random.Random(7)
    vocab = ["return", "int", "x", "y", "(", ")", ";", "+", "=", "call", "0", "1"]
    pairs = []
    for _ in range(44):
        a = " ".join(rng.choice(vocab) for _ in range(rng.randrange(0, 12)))
        b = " ".join(rng.choice(vocab) for _ in range(rng.randrange(0, 12)))
        pairs.append((a, b))
    pairs += [
        ("a b c d", "a b c e"),
        ("return x;", "return x;"),
        ("", ""),
        ("int a = 1;", "int a = 2;"),
        ("x", "x y z w v u"),
        ("u v w x y z", "z"),
    ]
    assert len(pairs) == 50
    for a, b in pairs:
        assert bleu(a, b) == pytest.approx(bleu_oracle(a, b), abs=1e-12), (a, b)


@given(st.text(alphabet=st.sampled_from(list("abc ;()=x1")), max_size=25))
def test_em_implies_es_implies_bleu(text):
    # identical strings: all three metrics saturate
    assert exact_match(text, text) == 1
    assert edit_similarity(text, text) == 1.0
    assert bleu(text, text) == pytest.approx(1.0)


@given(
    st.text(alphabet=st.sampled_from(list("ab ;x1")), max_size=20),
    st.text(alphabet=st.sampled_from(list("ab ;x1")), max_size=20),
)
def test_bleu_bounded(a, b):
    assert 0.0 <= bleu(a, b) <= 1.0 + 1e-12


# -- output truncation and scoring -------------------------------------------


def test_truncate_to_first_line():
    assert truncate_to_first_line("line one\nline two") == "line one"
    assert truncate_to_first_line("only") == "only"
    assert truncate_to_first_line("\nfoo") == ""


def test_score_instance_scores_first_line_only():
    rec = score_instance(3, "int v = 7;\nint w = 8;", "int v = 7;")
    assert rec.instance_id == 3
    assert rec.em == 1
    assert rec.es == 1.0
    assert rec.bleu == pytest.approx(1.0)


def test_score_instance_trims_both_sides():
    rec = score_instance(0, "   return x;   \nmore", "\treturn x;")
    assert rec.em == 1


def test_eval_record_validation():
    with pytest.raises(ValueError):
        EvalRecord(instance_id=0, prediction="", target="", em=2, es=0.5, bleu=0.5)
    with pytest.raises(ValueError):
        EvalRecord(instance_id=0, prediction="", target="", em=0, es=1.5, bleu=0.5)


# -- aggregation ---------------------------------------------------------------


def test_aggregate_means_as_percentages():
    records = [
        score_instance(0, "return 1;", "return 1;"),
        score_instance(1, "return 2;", "return 3;"),
    ]
    report = aggregate(records, "sim_bm25", 2)
    assert report.n_instances == 2
    assert report.em_pct == pytest.approx(50.0)
    assert report.es_pct == pytest.approx(100.0 * (records[0].es + records[1].es) / 2)


def test_aggregate_order_independent():
    records = [score_instance(i, f"pred {i}", "pred 0") for i in range(5)]
    a = aggregate(records, "random", 1)
    b = aggregate(list(reversed(records)), "random", 1)
    assert a == b


def test_aggregate_empty_rejected():
    with pytest.raises(ValueError):
        aggregate([], "random", 0)
