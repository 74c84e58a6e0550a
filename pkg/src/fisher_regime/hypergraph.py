"""Hypergraphs, the observer topology catalog and observer boundaries."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import DomainError

Edge = tuple[int, ...]

FAMILIES = ("P", "S", "C", "K")
_FAMILY_NAMES = {"P": "chain", "S": "star", "C": "cycle", "K": "complete"}
_CATALOG_SIZES = {"P": (3, 4, 5, 6), "S": (4, 5, 6), "C": (4, 5, 6), "K": (3, 4, 5)}


@dataclass(frozen=True)
class Hypergraph:
    """Node count plus an ordered list of hyperedges.

    Each edge is stored as a sorted tuple of distinct node indices, so two
    hypergraphs with the same edges in the same order compare and hash equal.
    """

    node_count: int
    edges: tuple[Edge, ...]

    def __init__(self, node_count: int, edges: Iterable[Iterable[int]]):
        if int(node_count) < 1:
            raise DomainError(f"node_count must be positive, got {node_count}")
        canon = []
        seen = set()
        for raw in edges:
            nodes = tuple(sorted(int(i) for i in raw))
            if len(set(nodes)) != len(nodes):
                raise DomainError(f"edge {nodes} repeats a node")
            if len(nodes) < 2:
                raise DomainError(f"edge {nodes} has fewer than two nodes")
            if nodes[0] < 0 or nodes[-1] >= node_count:
                raise DomainError(f"edge {nodes} references a node outside 0..{node_count - 1}")
            if nodes in seen:
                raise DomainError(f"duplicate edge {nodes}")
            seen.add(nodes)
            canon.append(nodes)
        object.__setattr__(self, "node_count", int(node_count))
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def with_edge(self, edge: Iterable[int]) -> "Hypergraph":
        return Hypergraph(self.node_count, list(self.edges) + [tuple(edge)])


@dataclass(frozen=True)
class Observer:
    """A set of interior nodes of a host hypergraph."""

    interior: frozenset[int]
    host: Hypergraph

    def __init__(self, interior: Iterable[int], host: Hypergraph):
        nodes = frozenset(int(i) for i in interior)
        bad = [i for i in nodes if i < 0 or i >= host.node_count]
        if bad:
            raise DomainError(f"interior nodes {sorted(bad)} not in host")
        object.__setattr__(self, "interior", nodes)
        object.__setattr__(self, "host", host)

    def complement(self) -> "Observer":
        rest = set(range(self.host.node_count)) - self.interior
        return Observer(rest, self.host)


def boundary(observer: Observer) -> list[Edge]:
    """Edges with at least one node inside the observer and one outside.

    Returned in the host's edge order.
    """
    inside = observer.interior
    out = []
    for e in observer.host.edges:
        n_in = sum(1 for i in e if i in inside)
        if 0 < n_in < len(e):
            out.append(e)
    return out


@dataclass(frozen=True, order=True)
class TopologyId:
    family: str
    size: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown topology family {self.family!r}")
        if self.size not in _CATALOG_SIZES[self.family]:
            raise DomainError(f"{self.family}{self.size} is not in the catalog")

    @classmethod
    def parse(cls, text: str) -> "TopologyId":
        m = re.fullmatch(r"([A-Za-z])(\d+)", text.strip())
        if not m:
            raise DomainError(f"malformed topology id {text!r}")
        return cls(m.group(1).upper(), int(m.group(2)))

    @property
    def family_name(self) -> str:
        return _FAMILY_NAMES[self.family]

    def __str__(self) -> str:
        return f"{self.family}{self.size}"


CATALOG: tuple[TopologyId, ...] = tuple(
    TopologyId(f, n) for f in FAMILIES for n in _CATALOG_SIZES[f]
)


def catalog_graph(topology: TopologyId | str) -> Hypergraph:
    """Build the ordinary graph for a catalog topology, edges in lexicographic order."""
    if isinstance(topology, str):
        topology = TopologyId.parse(topology)
    n = topology.size
    if topology.family == "P":
        edges = [(i, i + 1) for i in range(n - 1)]
    elif topology.family == "S":
        edges = [(0, i) for i in range(1, n)]
    elif topology.family == "C":
        edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    else:
        edges = list(combinations(range(n), 2))
    return Hypergraph(n, sorted(edges))


def surprise(prob: float) -> float:
    """Prediction error -ln(p) in nats."""
    if not 0.0 < prob <= 1.0:
        raise DomainError(f"probability must lie in (0, 1], got {prob}")
    return -math.log(prob)


def persistence_score(surprise_series: Sequence[float]) -> float:
    """Long-run average surprise of an observer."""
    values = list(surprise_series)
    if not values:
        raise DomainError("persistence score of an empty series")
    if any(v < 0 for v in values):
        raise DomainError("surprise values must be non-negative")
    return math.fsum(values) / len(values)
