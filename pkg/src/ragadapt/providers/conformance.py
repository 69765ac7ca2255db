"""Transport-agnostic wire-protocol conformance checks.

Both the in-process test double and any external server implementing the
embedding/completion protocol are validated with the same checks; callers
supply a transport callable and get back a list of human-readable issues
(empty means conformant).

    transport(method, path, json_body) -> (status_code, parsed_body)
"""

from __future__ import annotations

import math
from typing import Callable, Optional

Transport = Callable[[str, str, Optional[dict]], tuple[int, dict]]

_PROBE_TEXTS = [
    "int add(int a, int b) { return a + b; }",
    "for (size_t i = 0; i < n; ++i) { total += values[i]; }",
    "class Buffer { public: void clear(); };",
    "static const char* kName = \"probe\";",
    "double mean = sum / static_cast<double>(count);",
]


def check_embedding_protocol(
    transport: Transport,
    model: str,
    dims: int,
    unit_norm_tol: float = 1e-5,
    determinism_tol: float = 1e-6,
) -> list[str]:
    issues: list[str] = []

    status, body = transport("GET", "/health", None)
    if status != 200:
        issues.append(f"/health returned status {status}")
    else:
        if body.get("status") != "ok":
            issues.append(f"/health status field is {body.get('status')!r}, expected 'ok'")
        if "model" not in body:
            issues.append("/health response lacks a model field")

    text = _PROBE_TEXTS[0]
    status, body = transport("POST", "/embed", {"model": model, "texts": [text, text]})
    if status != 200:
        return issues + [f"/embed returned status {status}"]
    for key in ("vectors", "dims", "model"):
        if key not in body:
            issues.append(f"/embed response lacks the {key} field")
    if issues:
        return issues

    if body["dims"] != dims:
        issues.append(f"/embed dims field is {body['dims']}, expected {dims}")
    vectors = body["vectors"]
    if len(vectors) != 2:
        issues.append(f"/embed returned {len(vectors)} vectors for 2 texts")
        return issues
    for i, vec in enumerate(vectors):
        if len(vec) != dims:
            issues.append(f"vector {i} has {len(vec)} components, expected {dims}")
            return issues
        norm = math.sqrt(sum(v * v for v in vec))
        if abs(norm - 1.0) > unit_norm_tol:
            issues.append(f"vector {i} norm is {norm}, outside unit-norm tolerance {unit_norm_tol}")
    if _max_abs_diff(vectors[0], vectors[1]) > determinism_tol:
        issues.append("identical texts in one batch produced different vectors")

    status, repeat = transport("POST", "/embed", {"model": model, "texts": [text, text]})
    if status != 200:
        issues.append(f"repeated /embed returned status {status}")
    elif _max_abs_diff(vectors[0], repeat["vectors"][0]) > determinism_tol:
        issues.append("repeated identical request produced different vectors")

    status, batch = transport("POST", "/embed", {"model": model, "texts": _PROBE_TEXTS})
    if status != 200:
        issues.append(f"multi-text /embed returned status {status}")
    else:
        for i, probe in enumerate(_PROBE_TEXTS):
            status, single = transport("POST", "/embed", {"model": model, "texts": [probe]})
            if status != 200:
                issues.append(f"single-text /embed returned status {status}")
                break
            if _max_abs_diff(batch["vectors"][i], single["vectors"][0]) > determinism_tol:
                issues.append(f"batch order not preserved: position {i} differs from single-text result")
    return issues


def check_completion_protocol(transport: Transport, determinism_required: bool = True) -> list[str]:
    issues: list[str] = []
    request = {
        "prompt": "int x = 1;\nint y = x + ",
        "max_tokens": 8,
        "temperature": 0.0,
        "stop": None,
    }
    status, body = transport("POST", "/complete", request)
    if status != 200:
        return [f"/complete returned status {status}"]
    if not isinstance(body.get("text"), str):
        issues.append("/complete response lacks a text string")
    usage = body.get("usage")
    if not isinstance(usage, dict):
        issues.append("/complete response lacks a usage object")
    else:
        for key in ("prompt_tokens", "completion_tokens"):
            if not isinstance(usage.get(key), int) or usage[key] < 0:
                issues.append(f"usage.{key} is not a non-negative integer")

    if determinism_required:
        status, repeat = transport("POST", "/complete", request)
        if status != 200:
            issues.append(f"repeated /complete returned status {status}")
        elif repeat.get("text") != body.get("text"):
            issues.append("identical greedy requests produced different completions")

    status, clipped = transport("POST", "/complete", {**request, "max_tokens": 1})
    if status != 200:
        issues.append(f"/complete with max_tokens=1 returned status {status}")
    else:
        usage = clipped.get("usage", {})
        if isinstance(usage, dict) and usage.get("completion_tokens", 0) > 1:
            issues.append(f"max_tokens=1 yielded completion_tokens={usage.get('completion_tokens')}")
    return issues


def _max_abs_diff(a: list[float], b: list[float]) -> float:
    if len(a) != len(b):
        return math.inf
    return max((abs(x - y) for x, y in zip(a, b)), default=0.0)
