"""Line-delimited JSON stores for units, benchmark instances, and blocks.

Every store starts with a header record carrying the format version, the
store kind, the tokenizer id, and the window/stride used to build it (null
where not applicable). Records are serialized with sorted keys and compact
separators so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable

from ..tokenizer import TOKENIZER_ID
from .types import CompletionInstance, RetrievalUnit, SourceFile, TrainingBlock

FORMAT_VERSION = 1


def dump_compact(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dump_compact(obj) + "\n", encoding="utf-8", newline="\n")


def write_units(path: str | Path, units: Iterable[RetrievalUnit], tokenizer_id: str = TOKENIZER_ID) -> None:
    records = (
        {
            "id": u.id,
            "source_path": u.source_path,
            "kind": u.kind,
            "name": u.name,
            "start_line": u.start_line,
            "end_line": u.end_line,
            "content": u.content,
            "token_count": u.token_count,
        }
        for u in units
    )
    _write_store(path, "units", tokenizer_id, None, None, records)


def load_units(path: str | Path) -> list[RetrievalUnit]:
    return [RetrievalUnit(**rec) for rec in _read_store(path, "units")]


def write_sources(path: str | Path, files: Iterable[SourceFile], tokenizer_id: str = TOKENIZER_ID) -> None:
    records = ({"path": f.path, "content": f.content} for f in files)
    _write_store(path, "sources", tokenizer_id, None, None, records)


def load_sources(path: str | Path) -> list[SourceFile]:
    return [SourceFile.from_content(rec["path"], rec["content"]) for rec in _read_store(path, "sources")]


def write_benchmark(
    path: str | Path,
    instances: Iterable[CompletionInstance],
    window: int,
    stride: int,
    tokenizer_id: str = TOKENIZER_ID,
) -> None:
    records = (
        {
            "id": inst.id,
            "source_path": inst.source_path,
            "context": inst.context,
            "target": inst.target,
            "context_token_count": inst.context_token_count,
        }
        for inst in instances
    )
    _write_store(path, "benchmark", tokenizer_id, window, stride, records)


def load_benchmark(path: str | Path) -> list[CompletionInstance]:
    return [CompletionInstance(**rec) for rec in _read_store(path, "benchmark")]


def write_blocks(path: str | Path, blocks: Iterable[TrainingBlock], tokenizer_id: str = TOKENIZER_ID) -> None:
    records = ({"tokens": list(b.tokens), "origin": list(b.origin)} for b in blocks)
    _write_store(path, "blocks", tokenizer_id, None, None, records)


def load_blocks(path: str | Path) -> list[TrainingBlock]:
    return [
        TrainingBlock(tokens=tuple(rec["tokens"]), origin=(rec["origin"][0], rec["origin"][1]))
        for rec in _read_store(path, "blocks")
    ]


def read_header(path: str | Path) -> dict[str, Any]:
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
    if not first:
        raise ValueError(f"empty store file: {path}")
    return json.loads(first)


def _write_store(
    path: str | Path,
    kind: str,
    tokenizer_id: str,
    window: int | None,
    stride: int | None,
    records: Iterable[dict[str, Any]],
) -> None:
    header = {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "tokenizer_id": tokenizer_id,
        "window": window,
        "stride": stride,
    }
    lines = [dump_compact(header)]
    lines.extend(dump_compact(rec) for rec in records)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _read_store(path: str | Path, expected_kind: str) -> list[dict[str, Any]]:
    with open(path, encoding="utf-8") as fh:
        header_line = fh.readline()
        if not header_line:
            raise ValueError(f"empty store file: {path}")
        header = json.loads(header_line)
        version = header.get("format_version")
        if version != FORMAT_VERSION:
            raise ValueError(
                f"unsupported store format_version {version!r} in {path}, expected {FORMAT_VERSION}"
            )
        kind = header.get("kind")
        if kind != expected_kind:
            raise ValueError(f"store kind mismatch in {path}: expected {expected_kind}, got {kind!r}")
        return [json.loads(line) for line in fh if line.strip()]
