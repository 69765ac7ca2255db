"""Index persistence: versioned line-delimited files.

The lexical and symbol indexes share one file (they are built together from
the same unit store); the vector index gets its own. Loaders reject files
with a mismatched format version.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..corpus.store import FORMAT_VERSION, dump_compact
from ..tokenizer import TOKENIZER_ID
from .lexical import LexicalIndex
from .symbols import SymbolIndex
from .types import EmbeddingVector
from .vector import VectorIndex


def save_lexical_symbols(
    path: str | Path,
    lexical: LexicalIndex,
    symbols: SymbolIndex,
    tokenizer_id: str = TOKENIZER_ID,
) -> None:
    lines = [
        dump_compact(
            {
                "format_version": FORMAT_VERSION,
                "kind": "lexical+symbols",
                "k1": lexical.k1,
                "b": lexical.b,
                "tokenizer_id": tokenizer_id,
            }
        )
    ]
    for uid in sorted(lexical.doc_len):
        lines.append(dump_compact({"section": "doc_len", "unit_id": uid, "len": lexical.doc_len[uid]}))
    for term in sorted(lexical.postings):
        lines.append(
            dump_compact(
                {"section": "term", "term": term, "postings": [[uid, tf] for uid, tf in lexical.postings[term]]}
            )
        )
    for name in sorted(symbols.definitions):
        lines.append(dump_compact({"section": "symbol", "name": name, "ids": list(symbols.definitions[name])}))
    for uid in sorted(symbols.unit_paths):
        lines.append(dump_compact({"section": "unit_path", "unit_id": uid, "path": symbols.unit_paths[uid]}))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def load_lexical_symbols(path: str | Path) -> tuple[LexicalIndex, SymbolIndex]:
    with open(path, encoding="utf-8") as fh:
        header = _check_header(fh.readline(), path, "lexical+symbols")
        doc_len: dict[int, int] = {}
        postings: dict[str, list[tuple[int, int]]] = {}
        definitions: dict[str, tuple[int, ...]] = {}
        unit_paths: dict[int, str] = {}
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            section = rec["section"]
            if section == "doc_len":
                doc_len[rec["unit_id"]] = rec["len"]
            elif section == "term":
                postings[rec["term"]] = [(uid, tf) for uid, tf in rec["postings"]]
            elif section == "symbol":
                definitions[rec["name"]] = tuple(rec["ids"])
            elif section == "unit_path":
                unit_paths[rec["unit_id"]] = rec["path"]
            else:
                raise ValueError(f"unknown section {section!r} in {path}")
    if not doc_len:
        raise ValueError(f"lexical index in {path} has no documents")
    lexical = LexicalIndex(
        doc_count=len(doc_len),
        avg_doc_len=sum(doc_len.values()) / len(doc_len),
        postings=postings,
        doc_len=doc_len,
        k1=header["k1"],
        b=header["b"],
    )
    return lexical, SymbolIndex(definitions=definitions, unit_paths=unit_paths)


def save_vectors(path: str | Path, index: VectorIndex) -> None:
    lines = [dump_compact({"format_version": FORMAT_VERSION, "kind": "vectors", "dims": index.dims})]
    for uid, vec in index.entries:
        lines.append(dump_compact({"id": uid, "unit_norm": vec.unit_norm, "values": list(vec.values)}))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def load_vectors(path: str | Path) -> VectorIndex:
    with open(path, encoding="utf-8") as fh:
        header = _check_header(fh.readline(), path, "vectors")
        dims = header["dims"]
        entries = []
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            entries.append(
                (rec["id"], EmbeddingVector(dims=dims, values=tuple(rec["values"]), unit_norm=rec["unit_norm"]))
            )
    return VectorIndex(dims=dims, entries=entries)


def _check_header(line: str, path: str | Path, expected_kind: str) -> dict:
    if not line:
        raise ValueError(f"empty index file: {path}")
    header = json.loads(line)
    version = header.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported format_version {version!r} in {path}, expected {FORMAT_VERSION}")
    kind = header.get("kind")
    if kind != expected_kind:
        raise ValueError(f"index kind mismatch in {path}: expected {expected_kind}, got {kind!r}")
    return header
