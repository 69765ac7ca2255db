"""Shared corpus builders for the test suite."""

from __future__ import annotations

import pytest

from ragadapt.corpus.types import SourceFile


def pytest_runtest_logreport(report):
    """One visible pass/fail line per end-to-end acceptance check."""
    if "test_acceptance.py" not in str(report.nodeid):
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" and report.passed:
        print(f"\nacceptance PASS: {name}", flush=True)
    elif report.failed:
        print(f"\nacceptance FAIL: {name}", flush=True)


def function_file(path: str, fn_name: str, lines: list[str]) -> SourceFile:
    """A file holding one function whose body is the given lines."""
    body = "\n".join(f"    {line}" for line in lines)
    return SourceFile.from_content(path, f"int {fn_name}() {{\n{body}\n    return 0;\n}}\n")


def grounded_corpus(n_files: int, body_lines: int = 30, tag: str = "alpha") -> list[SourceFile]:
    """Files of one function each, every line unique to its file.

    Any window of consecutive body lines plus its continuation sits verbatim
    inside exactly one retrieval unit, which makes the copy-oracle able to
    reach 100% exact match when retrieval brings in the right unit.
    """
    files = []
    for fid in range(n_files):
        lines = [f"int {tag}_{fid}_{i} = use_{tag}_{fid}({i});" for i in range(body_lines)]
        files.append(function_file(f"{tag}/file_{fid}.cc", f"driver_{tag}_{fid}", lines))
    return files


@pytest.fixture
def small_corpus() -> list[SourceFile]:
    return grounded_corpus(6, body_lines=25)
