"""Symbol index and dependency-based retrieval.

Calls are resolved by unqualified name against function and class units.
When a name has several definitions, the one whose source path shares the
longest component-wise prefix with the querying file's path wins; remaining
ties go to the smallest unit id.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..corpus.types import RetrievalUnit
from .types import CallSite, RetrievalResult


@dataclass
class SymbolIndex:
    # unqualified name -> unit ids defining it, ascending
    definitions: dict[str, tuple[int, ...]]
    unit_paths: dict[int, str]


@dataclass
class DependencyRetrieval:
    results: list[RetrievalResult]
    misses: list[str] = field(default_factory=list)

    @property
    def miss_count(self) -> int:
        return len(self.misses)


def build_symbol_index(units: list[RetrievalUnit]) -> SymbolIndex:
    definitions: dict[str, list[int]] = {}
    unit_paths: dict[int, str] = {}
    for unit in units:
        if unit.kind not in ("function", "class") or not unit.name:
            continue
        name = unit.name.split("::")[-1]
        definitions.setdefault(name, []).append(unit.id)
        unit_paths[unit.id] = unit.source_path
    return SymbolIndex(
        definitions={name: tuple(sorted(ids)) for name, ids in definitions.items()},
        unit_paths=unit_paths,
    )


def dependency_retrieve(
    sym: SymbolIndex,
    calls: list[CallSite],
    query_path: str | None = None,
) -> DependencyRetrieval:
    """One definition per resolvable call, in call order; rank carries the
    call order and score is a constant 1.0 placeholder."""
    results: list[RetrievalResult] = []
    misses: list[str] = []
    for call in calls:
        ids = sym.definitions.get(call.name)
        if not ids:
            misses.append(call.name)
            continue
        uid = _resolve_collision(sym, ids, query_path)
        results.append(RetrievalResult(unit_id=uid, score=1.0, rank=len(results) + 1))
    return DependencyRetrieval(results=results, misses=misses)


def _resolve_collision(sym: SymbolIndex, ids: tuple[int, ...], query_path: str | None) -> int:
    if len(ids) == 1 or query_path is None:
        return ids[0]
    query_parts = query_path.split("/")
    best = min(ids, key=lambda uid: (-_common_prefix_len(sym.unit_paths[uid].split("/"), query_parts), uid))
    return best


def _common_prefix_len(a: list[str], b: list[str]) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n
