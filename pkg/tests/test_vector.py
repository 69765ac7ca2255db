from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ragadapt.providers.mocks import mock_embed
from ragadapt.retrieval.types import EmbeddingVector
from ragadapt.retrieval.vector import build_vector_index, cosine_sim, vector_topk


def _unit_vec(values: list[float]) -> EmbeddingVector:
    norm = math.sqrt(sum(v * v for v in values))
    return EmbeddingVector(dims=len(values), values=tuple(v / norm for v in values))


def test_cosine_of_identical_vectors_is_one():
    v = _unit_vec([1.0, 2.0, 3.0, 4.0, 0.5, 0.1, 0.2, 0.3])
    assert cosine_sim(v, v) == pytest.approx(1.0, abs=1e-12)


def test_cosine_of_orthogonal_vectors_is_zero():
    a = _unit_vec([1, 0, 0, 0, 0, 0, 0, 0])
    b = _unit_vec([0, 1, 0, 0, 0, 0, 0, 0])
    assert cosine_sim(a, b) == pytest.approx(0.0, abs=1e-12)


def test_cosine_of_opposite_vectors_is_minus_one():
    a = _unit_vec([1, 1, 0, 0, 0, 0, 0, 0])
    b = _unit_vec([-1, -1, 0, 0, 0, 0, 0, 0])
    assert cosine_sim(a, b) == pytest.approx(-1.0, abs=1e-12)


def test_cosine_dim_mismatch_rejected():
    a = _unit_vec([1] * 8)
    b = _unit_vec([1] * 9)
    with pytest.raises(ValueError):
        cosine_sim(a, b)


def test_index_rejects_mixed_dims():
    with pytest.raises(ValueError):
        build_vector_index([(1, _unit_vec([1] * 8)), (2, _unit_vec([1] * 9))])


def test_index_rejects_duplicate_ids():
    v = _unit_vec([1] * 8)
    with pytest.raises(ValueError):
        build_vector_index([(1, v), (1, v)])


def test_topk_ranks_by_cosine():
    target = _unit_vec([1, 0, 0, 0, 0, 0, 0, 0])
    near = _unit_vec([0.9, 0.1, 0, 0, 0, 0, 0, 0])
    far = _unit_vec([0, 0, 1, 0, 0, 0, 0, 0])
    index = build_vector_index([(10, near), (20, far)])
    results = vector_topk(index, target, 2)
    assert [r.unit_id for r in results] == [10, 20]
    assert results[0].score > results[1].score
    assert [r.rank for r in results] == [1, 2]


def test_topk_k_above_size_warns_and_clamps(caplog):
    v = _unit_vec([1] * 8)
    index = build_vector_index([(1, v)])
    with caplog.at_level("WARNING"):
        results = vector_topk(index, v, 5)
    assert len(results) == 1


def test_tie_break_by_unit_id():
    v = _unit_vec([1, 2, 3, 4, 5, 6, 7, 8])
    index = build_vector_index([(7, v), (3, v)])
    results = vector_topk(index, v, 2)
    assert [r.unit_id for r in results] == [3, 7]


@settings(max_examples=100)
@given(
    texts=st.lists(
        st.text(alphabet=st.sampled_from(list("abcdef ")), min_size=1, max_size=20).filter(
            lambda t: t.strip()
        ),
        min_size=1,
        max_size=10,
    ),
    query=st.text(alphabet=st.sampled_from(list("abcdef ")), min_size=1, max_size=20).filter(
        lambda t: t.strip()
    ),
    k=st.integers(min_value=1, max_value=10),
)
def test_topk_matches_numpy_oracle(texts, query, k):
    entries = [(i, mock_embed(t, dims=16)) for i, t in enumerate(texts)]
    index = build_vector_index(entries)
    q = mock_embed(query, dims=16)

    matrix = np.array([e[1].values for e in entries], dtype=np.float64)
    sims = matrix @ np.array(q.values, dtype=np.float64)
    order = sorted(range(len(texts)), key=lambda i: (-sims[i], i))[: min(k, len(texts))]

    got = vector_topk(index, q, min(k, len(texts)))
    assert [r.unit_id for r in got] == order
    for r in got:
        assert r.score == pytest.approx(float(sims[r.unit_id]), abs=1e-6)


@settings(max_examples=60)
@given(
    a=st.lists(st.floats(min_value=-5, max_value=5), min_size=8, max_size=8),
    b=st.lists(st.floats(min_value=-5, max_value=5), min_size=8, max_size=8),
)
def test_cosine_matches_numpy(a, b):
    if sum(x * x for x in a) < 1e-6 or sum(x * x for x in b) < 1e-6:
        return  # zero vectors are rejected elsewhere
    va, vb = _unit_vec(a), _unit_vec(b)
    expected = float(np.dot(va.values, vb.values) / (np.linalg.norm(va.values) * np.linalg.norm(vb.values)))
    assert cosine_sim(va, vb) == pytest.approx(expected, abs=1e-9)


def test_embedding_vector_validates_norm_when_flagged():
    with pytest.raises(ValueError):
        EmbeddingVector(dims=8, values=tuple([1.0] * 8), unit_norm=True)  # norm sqrt(8)
    EmbeddingVector(dims=8, values=tuple([1.0] * 8))  # unflagged: accepted


def test_embedding_vector_validates_length():
    with pytest.raises(ValueError):
        EmbeddingVector(dims=8, values=(1.0,))
