from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ragadapt.tokenizer import DEFAULT_TOKENIZER, CodeTokenizer, TOKENIZER_ID

code_text = st.text(
    alphabet=st.sampled_from(list("abcXY_019 \t\n(){};=+*.,->/\"'")),
    max_size=200,
)


def test_tokenize_classes():
    assert DEFAULT_TOKENIZER.tokenize("int foo_1 = bar(2.5);") == [
        "int",
        "foo_1",
        "=",
        "bar",
        "(",
        "2.5",
        ")",
        ";",
    ]


def test_identifiers_keep_underscores_and_digits():
    assert DEFAULT_TOKENIZER.tokenize("_a9 b_") == ["_a9", "b_"]


def test_punctuation_is_single_char():
    assert DEFAULT_TOKENIZER.tokenize("->") == ["-", ">"]


def test_count_matches_tokenize():
    text = "for (int i = 0; i < n; ++i) total += data[i];"
    assert DEFAULT_TOKENIZER.count(text) == len(DEFAULT_TOKENIZER.tokenize(text))


def test_token_ids_stable_across_instances():
    a, b = CodeTokenizer(), CodeTokenizer()
    assert a.encode("foo bar 12") == b.encode("foo bar 12")


def test_token_ids_fit_63_bits():
    for token in ("x", "very_long_identifier_name", ";", "123.456"):
        assert 0 <= DEFAULT_TOKENIZER.token_id(token) < 2**63


@given(code_text, code_text)
def test_count_additive_over_newline_join(a: str, b: str):
    # whitespace separation means concatenation can never merge tokens
    joined = a + "\n" + b
    assert DEFAULT_TOKENIZER.count(joined) == DEFAULT_TOKENIZER.count(a) + DEFAULT_TOKENIZER.count(b)


@given(code_text)
def test_encode_is_deterministic(text: str):
    assert DEFAULT_TOKENIZER.encode(text) == DEFAULT_TOKENIZER.encode(text)


def test_clip_exact_boundary():
    text = "alpha beta gamma"
    clipped = DEFAULT_TOKENIZER.clip(text, 2)
    assert clipped == "alpha beta"
    assert DEFAULT_TOKENIZER.count(clipped) == 2


def test_clip_zero_and_negative():
    assert DEFAULT_TOKENIZER.clip("a b", 0) == ""
    assert DEFAULT_TOKENIZER.clip("a b", -3) == ""


def test_clip_beyond_length_returns_text():
    assert DEFAULT_TOKENIZER.clip("a b", 99) == "a b"


@given(code_text, st.integers(min_value=0, max_value=50))
def test_clip_never_exceeds_budget(text: str, budget: int):
    assert DEFAULT_TOKENIZER.count(DEFAULT_TOKENIZER.clip(text, budget)) <= budget


def test_tokenizer_id_constant():
    assert DEFAULT_TOKENIZER.tokenizer_id == TOKENIZER_ID == "code-v1"


@pytest.mark.parametrize("text", ["", "   ", "\n\n\t"])
def test_whitespace_only_counts_zero(text: str):
    assert DEFAULT_TOKENIZER.count(text) == 0
