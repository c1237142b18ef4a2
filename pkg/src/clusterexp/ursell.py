"""Truncated (Ursell) functions, Penrose trees and the pinned/Mayer series.

Two independent routes to the truncated function are provided:

* :func:`css_signed_sum` sums ``(-1)**|E|`` over the connected spanning
  subgraphs of a cluster graph by brute force over edge subsets;
* :func:`ursell_multiset` uses the recursion that peels off the connected
  component of a root vertex, working on polymer multiplicities.

Edge subsets of a graph on ``n`` vertices are encoded as bitmasks over the
edges of the complete graph ``K_n`` (in the order of :func:`kn_edges`).
"""

from __future__ import annotations

import heapq
import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .exact import Activities, as_activities, volume_mask
from .graph import (CapExceeded, ClusterGraph, InteractionGraph, cluster_graph,
                    is_connected, mask_to_set)

EDGE_CAP = 24
TREE_VERTEX_CAP = 8
TABLE_VERTICES = 6
SERIES_CAP = 12


@dataclass(frozen=True)
class RootedLabeledTree:
    """Spanning tree on ``0..n-1`` rooted at 0; ``parent[0] == -1``."""

    parent: tuple[int, ...]

    @property
    def n_vertices(self) -> int:
        return len(self.parent)

    @property
    def depth(self) -> tuple[int, ...]:
        d = [-1] * len(self.parent)
        d[0] = 0

        def get(v):
            if d[v] < 0:
                d[v] = get(self.parent[v]) + 1
            return d[v]

        return tuple(get(v) for v in range(len(self.parent)))

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((min(v, p), max(v, p)) for v, p in enumerate(self.parent) if v)

    def children(self, v: int) -> list[int]:
        return [c for c, p in enumerate(self.parent) if p == v and c != v]

    def as_graph(self) -> ClusterGraph:
        return ClusterGraph(self.n_vertices, self.edges)


@dataclass
class PartitionReport:
    ok: bool
    n_css: int
    n_trees: int
    n_fixed: int
    violations: list = field(default_factory=list)


# --- edge-mask helpers ------------------------------------------------------

@lru_cache(maxsize=None)
def kn_edges(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(itertools.combinations(range(n), 2))


@lru_cache(maxsize=None)
def _kn_index(n: int) -> dict:
    return {e: k for k, e in enumerate(kn_edges(n))}


def edge_mask(n: int, edges: Iterable[tuple[int, int]]) -> int:
    idx = _kn_index(n)
    m = 0
    for i, j in edges:
        m |= 1 << idx[(min(i, j), max(i, j))]
    return m


def mask_edges(n: int, mask: int) -> frozenset[tuple[int, int]]:
    es = kn_edges(n)
    return frozenset(es[k] for k in mask_to_set(mask))


def _popcount(arr: np.ndarray) -> np.ndarray:
    out = np.zeros(arr.shape, dtype=np.int64)
    a = arr.copy()
    while np.any(a):
        out += a & 1
        a >>= 1
    return out


def _connected_flags(n: int, edges: Sequence[tuple[int, int]]) -> np.ndarray:
    """For every subset of ``edges`` (as a bitmask), whether it spans ``0..n-1`` connectedly."""
    masks = np.arange(1 << len(edges), dtype=np.int64)
    reach = np.ones(masks.shape, dtype=np.int64)
    for _ in range(max(n - 1, 0)):
        for k, (i, j) in enumerate(edges):
            on = (masks >> k) & 1
            ri = (reach >> i) & 1
            rj = (reach >> j) & 1
            reach |= (on & ri) << j
            reach |= (on & rj) << i
    return reach == (1 << n) - 1


@lru_cache(maxsize=None)
def _kn_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    """All connected spanning edge-masks of K_n and their edge counts."""
    flags = _connected_flags(n, kn_edges(n))
    masks = np.flatnonzero(flags).astype(np.int64)
    return masks, _popcount(masks)


def _css_masks(cg: ClusterGraph, cap: int = EDGE_CAP) -> np.ndarray:
    """K_n edge-masks of all connected spanning subgraphs of ``cg``."""
    n = cg.n_vertices
    if len(cg.edges) > cap:
        raise CapExceeded(f"{len(cg.edges)} edges exceed the subset-enumeration cap {cap}")
    g = edge_mask(n, cg.edges)
    if n <= TABLE_VERTICES:
        masks, _ = _kn_table(n)
        return masks[(masks & ~g) == 0]
    local = cg.edge_list()
    sub = np.flatnonzero(_connected_flags(n, local)).astype(np.int64)
    idx = _kn_index(n)
    out = np.zeros(sub.shape, dtype=np.int64)
    for k, e in enumerate(local):
        out |= ((sub >> k) & 1) << idx[e]
    return out


# --- connected spanning subgraphs -------------------------------------------

def css_signed_sum(cg: ClusterGraph, cap: int = EDGE_CAP) -> int:
    """Sum of ``(-1)**|E(G)|`` over connected spanning subgraphs ``G`` of ``cg``."""
    if not is_connected(cg):
        raise ValueError("css_signed_sum needs a connected graph")
    masks = _css_masks(cg, cap)
    odd = int(np.count_nonzero(_popcount(masks) & 1))
    return int(len(masks)) - 2 * odd


def ursell_coefficient(g: InteractionGraph, seq: Sequence[int], cap: int = EDGE_CAP) -> int:
    """Truncated function of the polymer sequence ``seq`` via its cluster graph."""
    cg = cluster_graph(g, seq)
    if cg.n_vertices == 1:
        return 1
    if not is_connected(cg):
        return 0
    return css_signed_sum(cg, cap)


def _multiset_value(g: InteractionGraph, counts: tuple, cache: dict) -> int:
    hit = cache.get(counts)
    if hit is not None:
        return hit
    support = [k for k, c in enumerate(counts) if c]
    if len(support) == 1 and counts[support[0]] == 1:
        cache[counts] = 1
        return 1
    root = support[0]
    # Value of the "all spanning subgraphs" sum: 1 iff no edge at all.
    flat = all(counts[k] == 1 for k in support) and not any(
        g.adj[u] >> v & 1 for u, v in itertools.combinations(support, 2))
    total = 1 if flat else 0
    # Subtract terms where the root component is a proper subset: the
    # complement must be an edgeless set, i.e. one copy each of an
    # independent set of polymers.
    for r in range(1, len(support) + 1):
        for w in itertools.combinations(support, r):
            if any(g.adj[u] >> v & 1 for u, v in itertools.combinations(w, 2)):
                continue
            ways = 1
            rest = list(counts)
            for k in w:
                ways *= counts[k] - 1 if k == root else counts[k]
                rest[k] -= 1
            if ways == 0:
                continue
            total -= ways * _multiset_value(g, tuple(rest), cache)
    cache[counts] = total
    return total


def ursell_multiset(g: InteractionGraph, counts: Sequence[int],
                    cache: dict | None = None) -> int:
    """Truncated function of a cluster given by polymer multiplicities."""
    counts = tuple(int(c) for c in counts)
    if len(counts) != g.n_polymers or any(c < 0 for c in counts) or sum(counts) == 0:
        raise ValueError("counts must be a nonempty multiplicity vector over the polymers")
    return _multiset_value(g, counts, {} if cache is None else cache)


def truncated_function(g: InteractionGraph, seq: Sequence[int]) -> int:
    """Same value as :func:`ursell_coefficient`, without enumerating edge subsets."""
    for v in seq:
        g._check(v)
    c = Counter(seq)
    return ursell_multiset(g, [c.get(k, 0) for k in range(g.n_polymers)])


# --- spanning trees and the Penrose scheme ----------------------------------

def prufer_to_parent(seq: Sequence[int], n: int) -> tuple[int, ...]:
    """Decode a Prufer sequence on ``0..n-1`` into a parent array rooted at 0."""
    if n == 1:
        return (-1,)
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    adj: list[list[int]] = [[] for _ in range(n)]
    for x in seq:
        leaf = heapq.heappop(leaves)
        adj[leaf].append(x)
        adj[x].append(leaf)
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    adj[u].append(v)
    adj[v].append(u)
    parent = [-1] * n
    stack, seen = [0], {0}
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                parent[y] = x
                stack.append(y)
    return tuple(parent)


def all_labeled_trees(n: int) -> list[RootedLabeledTree]:
    """Every labelled tree on ``0..n-1``, rooted at 0 (``n**(n-2)`` of them)."""
    if n < 1:
        raise ValueError("need at least one vertex")
    if n > TREE_VERTEX_CAP:
        raise CapExceeded(f"{n} vertices exceed the tree-enumeration cap {TREE_VERTEX_CAP}")
    if n <= 2:
        return [RootedLabeledTree(prufer_to_parent((), n))]
    return [RootedLabeledTree(prufer_to_parent(s, n))
            for s in itertools.product(range(n), repeat=n - 2)]


def _penrose_extra_edges(tree: RootedLabeledTree, candidates: Iterable[tuple[int, int]],
                         literal: bool = False):
    # Cross-generation edge {i, j}, j one generation deeper: Penrose adds it when
    # i precedes j's parent.  ``literal`` compares with j itself instead, which
    # is not a partition scheme (the 4-cycle 0-2-1-3 is left uncovered).
    d = tree.depth
    par = tree.parent
    own = tree.edges
    for i, j in candidates:
        e = (min(i, j), max(i, j))
        if e in own:
            continue
        if d[i] == d[j]:
            yield e
            continue
        if d[i] > d[j]:
            i, j = j, i
        if d[j] == d[i] + 1 and i < (j if literal else par[j]):
            yield e


@lru_cache(maxsize=None)
def _tree_table(n: int) -> tuple[list[RootedLabeledTree], np.ndarray, np.ndarray]:
    trees = all_labeled_trees(n)
    tmask = np.array([edge_mask(n, t.edges) for t in trees], dtype=np.int64)
    pmask = np.array([edge_mask(n, _penrose_extra_edges(t, kn_edges(n))) for t in trees],
                     dtype=np.int64)
    return trees, tmask, pmask


def enumerate_rooted_spanning_trees(cg: ClusterGraph,
                                    cap: int = TREE_VERTEX_CAP) -> list[RootedLabeledTree]:
    if cg.n_vertices > cap:
        raise CapExceeded(f"{cg.n_vertices} vertices exceed the tree cap {cap}")
    if not is_connected(cg):
        raise ValueError("graph is not connected")
    trees, tmask, _ = _tree_table(cg.n_vertices)
    g = edge_mask(cg.n_vertices, cg.edges)
    return [trees[k] for k in np.flatnonzero((tmask & ~g) == 0)]


def penrose_closure(tree: RootedLabeledTree, cg: ClusterGraph) -> ClusterGraph:
    """Add to ``tree`` the edges of ``cg`` joining equal generations, or joining a
    vertex ``j`` to a parent-generation vertex of smaller index than ``j``'s parent."""
    if tree.n_vertices != cg.n_vertices or not tree.edges <= cg.edges:
        raise ValueError("tree is not a spanning tree of the graph")
    return ClusterGraph(cg.n_vertices, tree.edges | frozenset(_penrose_extra_edges(tree, cg.edges)))


def literal_index_closure(tree: RootedLabeledTree, cg: ClusterGraph) -> ClusterGraph:
    """Variant comparing a cross-generation neighbour with the vertex itself rather
    than with its parent.  Kept to exhibit why the parent comparison is needed."""
    if tree.n_vertices != cg.n_vertices or not tree.edges <= cg.edges:
        raise ValueError("tree is not a spanning tree of the graph")
    extra = _penrose_extra_edges(tree, cg.edges, literal=True)
    return ClusterGraph(cg.n_vertices, tree.edges | frozenset(extra))


Scheme = Callable[[RootedLabeledTree, ClusterGraph], ClusterGraph]


def penrose_tree_count(cg: ClusterGraph, cap: int = TREE_VERTEX_CAP) -> int:
    """Number of spanning trees fixed by the Penrose closure."""
    if cg.n_vertices > cap:
        raise CapExceeded(f"{cg.n_vertices} vertices exceed the tree cap {cap}")
    if not is_connected(cg):
        raise ValueError("graph is not connected")
    _, tmask, pmask = _tree_table(cg.n_vertices)
    g = edge_mask(cg.n_vertices, cg.edges)
    return int(np.count_nonzero(((tmask & ~g) == 0) & ((pmask & g) == 0)))


def scheme_tree_count(cg: ClusterGraph, scheme: Scheme = penrose_closure) -> int:
    """Number of trees ``t`` with ``scheme(t) == t``, by direct evaluation."""
    return sum(1 for t in enumerate_rooted_spanning_trees(cg)
               if scheme(t, cg).edges == t.edges)


def _submasks(mask: int) -> np.ndarray:
    out = np.zeros(1, dtype=np.int64)
    for k in mask_to_set(mask):
        out = np.concatenate([out, out | (1 << k)])
    return out


def verify_partition_scheme(cg: ClusterGraph, scheme: Scheme | None = None,
                            cap: int = TREE_VERTEX_CAP) -> PartitionReport:
    """Check that the intervals ``[t, R(t)]`` partition the connected spanning subgraphs.

    ``scheme`` defaults to the Penrose closure.
    """
    n = cg.n_vertices
    if n > cap:
        raise CapExceeded(f"{n} vertices exceed the tree cap {cap}")
    if not is_connected(cg):
        raise ValueError("graph is not connected")
    css = _css_masks(cg)
    g = edge_mask(n, cg.edges)
    size = 1 << len(kn_edges(n))
    counts = np.zeros(size, dtype=np.int64)
    violations = []
    n_trees = n_fixed = 0
    if scheme is None:
        _, tmask, pmask = _tree_table(n)
        sel = np.flatnonzero((tmask & ~g) == 0)
        closures = [(int(tmask[k]), int(tmask[k]) | (int(pmask[k]) & g)) for k in sel]
    else:
        closures = []
        for t in enumerate_rooted_spanning_trees(cg):
            r = scheme(t, cg)
            tm, rm = edge_mask(n, t.edges), edge_mask(n, r.edges)
            if tm & ~rm or rm & ~g:
                violations.append(("not a supergraph within G", sorted(t.edges)))
            closures.append((tm, rm))
    for tm, rm in closures:
        n_trees += 1
        extra = rm & ~tm
        if extra == 0:
            n_fixed += 1
        np.add.at(counts, tm | _submasks(extra), 1)
    in_css = np.zeros(size, dtype=bool)
    in_css[css] = True
    for m in np.flatnonzero(counts > 1):
        violations.append(("overlap", sorted(mask_edges(n, int(m)))))
    for m in css[counts[css] == 0]:
        violations.append(("uncovered", sorted(mask_edges(n, int(m)))))
    for m in np.flatnonzero((counts > 0) & ~in_css):
        violations.append(("outside", sorted(mask_edges(n, int(m)))))
    return PartitionReport(not violations, int(len(css)), n_trees, n_fixed, violations)


# --- series -----------------------------------------------------------------

def _compositions(total: int, slots: int):
    """All nonnegative integer vectors of length ``slots`` summing to ``total``."""
    if slots == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


def _check_series_cap(n_max: int, cap: int) -> None:
    if n_max > cap:
        raise CapExceeded(f"series order {n_max} exceeds cap {cap}")


def pi_truncated(g: InteractionGraph, gamma0: int, rho: Activities, n_max: int,
                 cap: int = SERIES_CAP, ordered: bool = False) -> float:
    """Pinned positive-term series summed up to clusters of ``n_max`` extra polymers.

    The default sums over multisets with multinomial weights; ``ordered=True``
    sums literally over ordered tuples with the edge-subset truncated function
    (only practical for very small orders).
    """
    rho = as_activities(g, rho)
    if any(r < 0 for r in rho):
        raise ValueError("pi_truncated needs nonnegative rho")
    g._check(gamma0)
    _check_series_cap(n_max, cap)
    if ordered:
        total = 1.0
        for n in range(1, n_max + 1):
            s = 0.0
            for seq in itertools.product(range(g.n_polymers), repeat=n):
                w = math.prod(rho[k] for k in seq)
                if w:
                    s += abs(ursell_coefficient(g, (gamma0,) + seq)) * w
            total += s / math.factorial(n)
        return total
    active = [k for k in range(g.n_polymers) if rho[k] > 0]
    cache: dict = {}
    total = 1.0
    for n in range(1, n_max + 1):
        for comp in _compositions(n, len(active)):
            counts = [0] * g.n_polymers
            counts[gamma0] += 1
            w = 1.0
            for k, m in zip(active, comp):
                counts[k] += m
                w *= rho[k] ** m / math.factorial(m)
            total += abs(_multiset_value(g, tuple(counts), cache)) * w
    return total


def mayer_log_truncated(g: InteractionGraph, lam: Iterable[int] | None, z: Activities,
                        n_max: int, cap: int = SERIES_CAP, ordered: bool = False) -> float:
    """Mayer series of ``log Xi_lam(z)`` summed up to clusters of ``n_max`` polymers."""
    z = as_activities(g, z)
    _check_series_cap(n_max, cap)
    members = mask_to_set(volume_mask(g, lam))
    if ordered:
        total = 0.0
        for n in range(1, n_max + 1):
            s = 0.0
            for seq in itertools.product(members, repeat=n):
                w = math.prod(z[k] for k in seq)
                if w:
                    s += ursell_coefficient(g, seq) * w
            total += s / math.factorial(n)
        return total
    active = [k for k in members if z[k] != 0]
    cache: dict = {}
    total = 0.0
    for n in range(1, n_max + 1):
        for comp in _compositions(n, len(active)):
            counts = [0] * g.n_polymers
            w = 1.0
            for k, m in zip(active, comp):
                counts[k] = m
                w *= z[k] ** m / math.factorial(m)
            total += _multiset_value(g, tuple(counts), cache) * w
    return total

