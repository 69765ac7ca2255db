"""HTTP layer: wire-protocol conformance, error statuses, scheduling.

The conformance test runs the protocol checks that the retrieval toolkit
applies to every embedding provider; passing them means this server is a
drop-in backend for it.
"""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor

import pytest
from fastapi.testclient import TestClient
from ragadapt.providers.conformance import check_embedding_protocol

from embedserver.app import build_app
from embedserver.backends import TinyRandomEncoder
from embedserver.types import ModelSpec


def _transport(client):
    def transport(method, path, body):
        response = client.get(path) if method == "GET" else client.post(path, json=body)
        try:
            parsed = response.json()
        except ValueError:
            parsed = {}
        return response.status_code, parsed

    return transport


def test_health_shape(client, spec):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok", "model": spec.model_name}


def test_wire_protocol_conformance(client, spec):
    issues = check_embedding_protocol(
        _transport(client),
        model=spec.model_name,
        dims=spec.dims,
        unit_norm_tol=1e-5,
        determinism_tol=1e-6,
    )
    assert issues == []


def test_malformed_json_is_400(client):
    response = client.post("/embed", content=b"{not json", headers={"Content-Type": "application/json"})
    assert response.status_code == 400
    assert "JSON" in response.json()["error"]


@pytest.mark.parametrize(
    "body",
    [
        {},
        {"texts": "just one string"},
        {"texts": ["ok", 7]},
        {"texts": ["ok"], "model": 42},
        ["not", "an", "object"],
    ],
)
def test_schema_violations_are_400(client, body):
    response = client.post("/embed", json=body)
    assert response.status_code == 400
    assert "error" in response.json()


def test_model_mismatch_is_400(client):
    response = client.post("/embed", json={"model": "someone-else", "texts": ["x"]})
    assert response.status_code == 400
    assert "someone-else" in response.json()["error"]


def test_overlong_batch_is_413(client):
    response = client.post("/embed", json={"texts": ["x"] * 17})
    assert response.status_code == 413
    assert "17" in response.json()["error"]


def test_empty_texts_list_is_served(client, spec):
    response = client.post("/embed", json={"texts": []})
    assert response.status_code == 200
    body = response.json()
    assert body["vectors"] == []
    assert body["truncated"] == []
    assert body["dims"] == spec.dims


def test_truncation_flag_reaches_the_response():
    spec = ModelSpec(model_name="tiny-random", dims=16, max_input_tokens=4)
    app = build_app(spec, backend=TinyRandomEncoder(spec))
    with TestClient(app) as client:
        response = client.post(
            "/embed", json={"texts": ["alpha beta gamma delta epsilon", "alpha"]}
        )
    assert response.status_code == 200
    assert response.json()["truncated"] == [True, False]


class CountingBackend:
    def __init__(self, inner):
        self.inner = inner
        self.calls: list[int] = []

    @property
    def spec(self):
        return self.inner.spec

    def encode(self, texts):
        self.calls.append(len(texts))
        return self.inner.encode(texts)


def test_requests_are_chunked_into_model_calls(spec, backend):
    counting = CountingBackend(backend)
    app = build_app(spec, backend=counting, batch_size=4, max_request_texts=16)
    texts = [f"int value_{i} = {i};" for i in range(10)]
    with TestClient(app) as client:
        response = client.post("/embed", json={"texts": texts})
        assert response.status_code == 200
        assert counting.calls == [4, 4, 2]
        # chunking must not reorder: each slot matches its single-text result
        batched = response.json()["vectors"]
        for i, text in enumerate(texts):
            single = client.post("/embed", json={"texts": [text]}).json()["vectors"][0]
            assert max(abs(a - b) for a, b in zip(batched[i], single)) < 1e-9


def test_concurrent_requests_serialize_cleanly(client, backend):
    texts = [f"case {i}" for i in range(6)]
    expected, _ = backend.encode(texts)

    def post(i):
        response = client.post("/embed", json={"texts": [texts[i]]})
        return i, response.status_code, response.json()["vectors"][0]

    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(post, list(range(6)) * 4))
    for i, status, vector in results:
        assert status == 200
        assert max(abs(a - b) for a, b in zip(vector, expected[i])) < 1e-9


def test_live_server_speaks_the_toolkit_client(spec, backend):
    """Real socket round trip through the retrieval toolkit's HTTP client."""
    uvicorn = pytest.importorskip("uvicorn")
    from ragadapt.providers.http import HttpEmbeddingProvider
    from ragadapt.providers.types import EmbeddingProviderConfig

    app = build_app(spec, backend=backend, batch_size=4)
    server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=0, log_level="error"))
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    try:
        deadline = time.monotonic() + 10.0
        while not server.started:
            assert time.monotonic() < deadline, "server did not start"
            time.sleep(0.05)
        port = server.servers[0].sockets[0].getsockname()[1]
        provider = HttpEmbeddingProvider(
            EmbeddingProviderConfig(
                endpoint=f"http://127.0.0.1:{port}",
                model_name=spec.model_name,
                dims=spec.dims,
                batch_size=3,
            )
        )
        texts = [f"int live_{i} = {i};" for i in range(7)]
        vectors = provider.embed_batch(texts)
        expected, _ = backend.encode(texts)
        assert len(vectors) == 7
        for got, want in zip(vectors, expected):
            assert got.dims == spec.dims
            assert got.unit_norm
            assert max(abs(a - b) for a, b in zip(got.values, want)) < 1e-9
    finally:
        server.should_exit = True
        thread.join(timeout=10.0)
