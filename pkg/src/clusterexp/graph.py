"""Finite abstract polymer systems and the cluster graphs they induce.

Polymers are dense integer ids ``0..n-1``.  Incompatibility is stored as one
bitmask per polymer (its open neighbourhood).  Every polymer is incompatible
with itself, but that relation is never stored as an edge; predicates handle
``u == v`` explicitly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence


class CapExceeded(ValueError):
    """An enumeration would exceed its configured size cap."""


@dataclass(frozen=True)
class InteractionGraph:
    n_polymers: int
    adj: tuple[int, ...]
    labels: Mapping[int, str] = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return self.n_polymers

    @property
    def full_mask(self) -> int:
        return (1 << self.n_polymers) - 1

    def closed_mask(self, v: int) -> int:
        return self.adj[v] | (1 << v)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n_polymers)
                for v in range(u + 1, self.n_polymers) if self.adj[u] >> v & 1]

    def degree(self, v: int) -> int:
        return bin(self.adj[v]).count("1")

    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.n_polymers)), default=0)

    def _check(self, v: int) -> None:
        if not 0 <= v < self.n_polymers:
            raise IndexError(f"polymer {v} out of range [0, {self.n_polymers})")


@dataclass(frozen=True)
class ClusterGraph:
    """Simple graph on ``0..n_vertices-1``; vertex 0 is the root."""

    n_vertices: int
    edges: frozenset[tuple[int, int]]

    @classmethod
    def from_edges(cls, n_vertices: int, edges: Iterable[tuple[int, int]]) -> "ClusterGraph":
        es = set()
        for i, j in edges:
            if i == j or not (0 <= i < n_vertices and 0 <= j < n_vertices):
                raise ValueError(f"bad edge {(i, j)} for {n_vertices} vertices")
            es.add((min(i, j), max(i, j)))
        return cls(n_vertices, frozenset(es))

    @property
    def adj(self) -> tuple[int, ...]:
        a = [0] * self.n_vertices
        for i, j in self.edges:
            a[i] |= 1 << j
            a[j] |= 1 << i
        return tuple(a)

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


def build_graph(n_polymers: int, incompat_pairs: Iterable[Sequence[int]] = (),
                labels: Mapping[int, str] | None = None) -> InteractionGraph:
    """Build an interaction graph from a list of incompatible pairs.

    Explicit self-pairs are rejected: self-incompatibility is implicit.
    """
    if n_polymers < 0:
        raise ValueError("n_polymers must be nonnegative")
    adj = [0] * n_polymers
    for pair in incompat_pairs:
        u, v = (int(x) for x in pair)
        for x in (u, v):
            if not 0 <= x < n_polymers:
                raise IndexError(f"polymer {x} out of range [0, {n_polymers})")
        if u == v:
            raise ValueError(f"explicit self-loop on polymer {u}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return InteractionGraph(n_polymers, tuple(adj), dict(labels or {}))


def are_compatible(g: InteractionGraph, u: int, v: int) -> bool:
    g._check(u)
    g._check(v)
    return u != v and not (g.adj[u] >> v & 1)


def closed_neighborhood(g: InteractionGraph, v: int) -> frozenset[int]:
    g._check(v)
    return frozenset(mask_to_set(g.closed_mask(v)))


def open_neighborhood(g: InteractionGraph, v: int) -> frozenset[int]:
    g._check(v)
    return frozenset(mask_to_set(g.adj[v]))


def induced_subgraph(g: InteractionGraph, members: Iterable[int]) -> InteractionGraph:
    """Restrict ``g`` to ``members``, relabelling them densely in increasing order."""
    keep = sorted(set(members))
    for v in keep:
        g._check(v)
    index = {v: i for i, v in enumerate(keep)}
    pairs = [(index[u], index[v]) for u, v in g.edges() if u in index and v in index]
    labels = {index[v]: g.labels[v] for v in keep if v in g.labels}
    return build_graph(len(keep), pairs, labels)


def cluster_graph(g: InteractionGraph, seq: Sequence[int]) -> ClusterGraph:
    """Graph on positions of ``seq``; ``i -- j`` iff the polymers are incompatible.

    Repeated polymers are always joined.
    """
    if len(seq) == 0:
        raise ValueError("cluster_graph needs a nonempty polymer sequence")
    for v in seq:
        g._check(v)
    edges = [(i, j) for i in range(len(seq)) for j in range(i + 1, len(seq))
             if not are_compatible(g, seq[i], seq[j])]
    return ClusterGraph.from_edges(len(seq), edges)


def is_connected(cg: ClusterGraph) -> bool:
    return mask_connected(cg.adj, (1 << cg.n_vertices) - 1)


def mask_connected(adj: Sequence[int], vertices: int) -> bool:
    """Whether the subgraph induced on the bitmask ``vertices`` is connected."""
    if vertices == 0:
        return True
    seen = vertices & -vertices
    frontier = seen
    while frontier:
        v = frontier.bit_length() - 1
        frontier &= ~(1 << v)
        new = adj[v] & vertices & ~seen
        seen |= new
        frontier |= new
    return seen == vertices


def mask_to_set(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def set_to_mask(items: Iterable[int]) -> int:
    m = 0
    for v in items:
        m |= 1 << v
    return m


# --- I/O -------------------------------------------------------------------

def parse_graph_text(text: str) -> InteractionGraph:
    """Parse ``n <count>`` followed by one ``u v`` line per incompatible pair."""
    n = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise ValueError(f"line {lineno}: expected 'n <n_polymers>'")
            n = int(parts[1])
            continue
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v'")
        pairs.append((int(parts[0]), int(parts[1])))
    if n is None:
        raise ValueError("missing 'n <n_polymers>' header")
    return build_graph(n, pairs)


def format_graph_text(g: InteractionGraph) -> str:
    lines = [f"n {g.n_polymers}"] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def graph_from_json(obj: Mapping) -> InteractionGraph:
    labels = {int(k): str(v) for k, v in obj.get("labels", {}).items()}
    return build_graph(int(obj["n"]), obj.get("edges", []), labels)


def graph_to_json(g: InteractionGraph) -> dict:
    out: dict = {"n": g.n_polymers, "edges": [list(e) for e in g.edges()]}
    if g.labels:
        out["labels"] = {str(k): v for k, v in sorted(g.labels.items())}
    return out


def load_graph(path: str | Path) -> InteractionGraph:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        return graph_from_json(json.loads(text))
    return parse_graph_text(text)
