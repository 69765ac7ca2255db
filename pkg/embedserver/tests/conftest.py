"""Shared fixtures: one tiny seeded encoder served through the app."""

from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from embedserver.app import build_app
from embedserver.backends import TinyRandomEncoder
from embedserver.types import ModelSpec


def pytest_runtest_logreport(report):
    """One visible pass/fail line for the wire-protocol gate."""
    if "test_server_app.py" not in str(report.nodeid):
        return
    name = report.nodeid.split("::")[-1]
    if "conformance" not in name:
        return
    if report.when == "call" and report.passed:
        print(f"\nacceptance PASS: {name}", flush=True)
    elif report.failed:
        print(f"\nacceptance FAIL: {name}", flush=True)


@pytest.fixture(scope="session")
def spec() -> ModelSpec:
    return ModelSpec(model_name="tiny-random", dims=32, pooling="mean", max_input_tokens=64)


@pytest.fixture(scope="session")
def backend(spec) -> TinyRandomEncoder:
    return TinyRandomEncoder(spec)


@pytest.fixture(scope="session")
def client(spec, backend):
    app = build_app(spec, backend=backend, batch_size=4, max_request_texts=16)
    with TestClient(app) as test_client:
        yield test_client
