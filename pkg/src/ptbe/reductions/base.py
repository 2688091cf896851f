"""Shared plumbing for reduction generators: vertex naming, provenance, validation."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Generic, Iterable, Mapping, TypeVar

from ..errors import InputError, ValidationFailure
from ..model import Edge, Graph, edge

T = TypeVar("T")


@dataclass(frozen=True)
class ReductionOutput(Generic[T]):
    """Target instance of a reduction together with readable gadget bookkeeping.

    ``names[v]`` is the structured name of vertex ``v`` (for example
    ``"S[2].x[3]"``) and ``provenance`` maps each source object (``"triple[0]"``,
    ``"element[4]"``, ``"clause[1]"``, ...) to the vertices generated for it.
    ``data`` holds whatever the solution translators of the reduction need.
    """

    source: object
    instance: T
    names: tuple[str, ...]
    provenance: Mapping[str, tuple[int, ...]]
    data: Mapping[str, object] = field(default_factory=dict)

    def id_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"no generated vertex is named {name!r}") from None

    def uncovered(self) -> frozenset[int]:
        """Generated vertices that no source object accounts for (should be empty)."""
        covered = {v for vs in self.provenance.values() for v in vs}
        return frozenset(range(len(self.names))) - covered


class Namer:
    """Hands out dense integer ids for structured vertex names."""

    def __init__(self) -> None:
        self._ids: dict[str, int] = {}
        self.names: list[str] = []
        self._prov: dict[str, list[int]] = defaultdict(list)

    def new(self, name: str, *sources: str) -> int:
        if name in self._ids:
            raise InputError(f"vertex name {name!r} used twice")
        v = len(self.names)
        self._ids[name] = v
        self.names.append(name)
        for s in sources:
            self._prov[s].append(v)
        return v

    def __getitem__(self, name: str) -> int:
        return self._ids[name]

    def __contains__(self, name: str) -> bool:
        return name in self._ids

    def tag(self, source: str, *vertices: int) -> None:
        self._prov[source].extend(vertices)

    @property
    def count(self) -> int:
        return len(self.names)

    def output(self, source: object, instance: T, data: Mapping[str, object] | None = None) -> ReductionOutput[T]:
        prov = {k: tuple(sorted(set(vs))) for k, vs in sorted(self._prov.items())}
        return ReductionOutput(source, instance, tuple(self.names), prov, dict(data or {}))


def require(ok: bool, claim: str) -> None:
    """Raise :class:`ValidationFailure` naming ``claim`` unless ``ok``."""
    if not ok:
        raise ValidationFailure(claim)


def edges_of(pairs: Iterable[tuple[int, int]]) -> set[Edge]:
    return {edge(u, v) for u, v in pairs}


def graph_of(vertices: Iterable[int], edges: Iterable[Edge]) -> Graph:
    return Graph(frozenset(vertices), frozenset(edges))
