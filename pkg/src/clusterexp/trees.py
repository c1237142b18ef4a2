"""Tree-graph representation of the criterion maps.

Each criterion function is a power series whose coefficients are 0/1
"vertex functions" ``c_n(g0; g1..gn)``.  Iterating ``T`` k times is the same
as summing rooted trees of depth at most k, each vertex carrying
``c_s/s!`` for its ``s`` offspring, generation-k vertices weighted by
``mu`` and all others by ``rho``.  This module evaluates those sums directly
from the vertex functions, independently of the closed forms in
:mod:`clusterexp.criteria`.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .criteria import FP, IMPDOB, KP, CriterionKind, _vec
from .graph import CapExceeded, InteractionGraph, are_compatible, mask_to_set
from .ursell import RootedLabeledTree, all_labeled_trees

BOUND_CAP = 6
COUNT_CAP = 8
KP_SMAX = 64


class TruncationError(RuntimeError):
    """The branching series was cut while its terms were still significant."""


def vertex_function(kind, g: InteractionGraph, gamma0: int, offspring: Sequence[int]) -> int:
    """0/1 constraint on the offspring polymers of a tree vertex carrying ``gamma0``."""
    kind = CriterionKind.parse(kind)
    n = len(offspring)
    if n == 0:
        return 1
    if any(are_compatible(g, gamma0, x) for x in offspring):
        return 0
    if kind is KP:
        return 1
    pairs = list(itertools.combinations(offspring, 2))
    if kind is FP:
        return int(all(are_compatible(g, a, b) for a, b in pairs))
    if any(a == b for a, b in pairs):
        return 0
    if kind is IMPDOB and n >= 2 and gamma0 in offspring:
        return 0
    return 1


def tree_bound_sum(kind, g: InteractionGraph, seq: Sequence[int], cap: int = BOUND_CAP) -> int:
    """Sum over rooted labelled trees on the positions of ``seq`` of the product of
    vertex functions; bounds the absolute truncated function of ``seq``."""
    kind = CriterionKind.parse(kind)
    n = len(seq) - 1
    if n < 0:
        raise ValueError("need a nonempty sequence")
    if n > cap:
        raise CapExceeded(f"{n} non-root vertices exceed cap {cap}")
    total = 0
    for tree in all_labeled_trees(n + 1):
        kids: list[list[int]] = [[] for _ in range(n + 1)]
        for v, p in enumerate(tree.parent):
            if v:
                kids[p].append(seq[v])
        if all(vertex_function(kind, g, seq[i], kids[i]) for i in range(n + 1)):
            total += 1
    return total


# --- planar rooted trees ----------------------------------------------------

@dataclass(frozen=True)
class PlanarRootedTree:
    """Ordered rooted tree: ``children`` is the ordered tuple of child subtrees."""

    children: tuple["PlanarRootedTree", ...] = ()

    @property
    def n_vertices(self) -> int:
        """Number of non-root vertices."""
        return sum(1 + c.n_vertices for c in self.children)

    @property
    def depth(self) -> int:
        return 1 + max(c.depth for c in self.children) if self.children else 0

    def branching(self) -> dict[tuple[int, ...], int]:
        out: dict[tuple[int, ...], int] = {}

        def walk(t, path):
            out[path] = len(t.children)
            for i, c in enumerate(t.children, 1):
                walk(c, path + (i,))

        walk(self, (0,))
        return out


def planar_multiplicity(t: PlanarRootedTree) -> int:
    """Number of labelled rooted trees drawn as ``t``: ``|V|! / prod s_v!``."""
    den = math.prod(math.factorial(s) for s in t.branching().values())
    return math.factorial(t.n_vertices) // den


@lru_cache(maxsize=None)
def _forests(n: int) -> tuple[tuple[PlanarRootedTree, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(1, n + 1):
        for head in planar_trees(first - 1):
            for rest in _forests(n - first):
                out.append((head,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def planar_trees(n: int) -> tuple[PlanarRootedTree, ...]:
    """All planar rooted trees with ``n`` non-root vertices."""
    return tuple(PlanarRootedTree(f) for f in _forests(n))


def planar_shape(tree: RootedLabeledTree) -> PlanarRootedTree:
    """Planar drawing of a labelled tree, offspring ordered by increasing label."""
    def build(v):
        return PlanarRootedTree(tuple(build(c) for c in sorted(tree.children(v))))

    return build(0)


def labeled_rooted_tree_count(n: int) -> int:
    """``|T^0_n| = (n+1)**(n-1)``: labelled trees on ``0..n`` rooted at 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > COUNT_CAP:
        raise CapExceeded(f"n = {n} exceeds cap {COUNT_CAP}")
    return 1 if n == 0 else (n + 1) ** (n - 1)


# --- iterates as tree sums --------------------------------------------------

def _offspring_sum(kind: CriterionKind, g: InteractionGraph, gamma: int, w: np.ndarray,
                   s_max: int, tail_tol: float) -> float:
    """``sum_s (1/s!) sum_{seq in P^s} c_s(gamma; seq) prod w``, grouped by multisets."""
    cand = mask_to_set(g.closed_mask(gamma))
    total = 0.0
    bound = sum(w[v] for v in cand)
    for s in range(0, s_max + 1):
        level = 0.0
        for combo in itertools.combinations_with_replacement(cand, s):
            if not vertex_function(kind, g, gamma, combo):
                continue
            term = 1.0
            for v, m in Counter(combo).items():
                term *= w[v] ** m / math.factorial(m)
            level += term
        total += level
        if level == 0.0 and s > 0 and kind is not KP:
            return total
        if kind is KP and s > bound and level <= tail_tol * total:
            return total
    if kind is KP and level > tail_tol * total:
        raise TruncationError(f"branching series at polymer {gamma} still at {level:g} "
                              f"after {s_max} offspring")
    return total


def _root_sums(kind: CriterionKind, g: InteractionGraph, rho: np.ndarray, mu: np.ndarray,
               k: int, s_max: int | None, tail_tol: float) -> np.ndarray:
    """Tree sums at the root *without* the root factor rho, depth <= k."""
    if s_max is None:
        s_max = KP_SMAX if kind is KP else g.n_polymers + 1
    w = mu.copy()
    sums = np.ones_like(rho)
    for _ in range(k):
        sums = np.array([_offspring_sum(kind, g, v, w, s_max, tail_tol)
                         for v in range(g.n_polymers)])
        w = rho * sums
    return sums


def iterate_via_trees(kind, g: InteractionGraph, rho, k: int, mu,
                      s_max: int | None = None, tail_tol: float = 1e-18) -> np.ndarray:
    """``T^k(mu)`` summed generation by generation over rooted trees of depth <= k.

    ``k = 0`` returns ``mu`` (zero applications of the map).
    """
    kind = CriterionKind.parse(kind)
    rho, mu = _vec(g, rho), _vec(g, mu)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return mu
    return rho * _root_sums(kind, g, rho, mu, k, s_max, tail_tol)


def tree_layer(kind, g: InteractionGraph, rho, depth: int, **kw) -> np.ndarray:
    """Sum over trees of exact depth ``depth`` with all weights ``rho`` (root factor excluded)."""
    kind = CriterionKind.parse(kind)
    rho = _vec(g, rho)
    zero = np.zeros_like(rho)
    upper = _root_sums(kind, g, rho, zero, depth + 1, kw.get("s_max"), kw.get("tail_tol", 1e-18))
    if depth == 0:
        return upper
    lower = _root_sums(kind, g, rho, zero, depth, kw.get("s_max"), kw.get("tail_tol", 1e-18))
    return upper - lower


def tree_remainder(kind, g: InteractionGraph, rho, mu, k: int, **kw) -> np.ndarray:
    """Sum over trees of exact depth ``k`` whose generation-k vertices carry ``mu``
    (root factor excluded)."""
    kind = CriterionKind.parse(kind)
    rho, mu = _vec(g, rho), _vec(g, mu)
    if k < 1:
        raise ValueError("the remainder is defined for k >= 1")
    s_max, tol = kw.get("s_max"), kw.get("tail_tol", 1e-18)
    return (_root_sums(kind, g, rho, mu, k, s_max, tol)
            - _root_sums(kind, g, rho, np.zeros_like(mu), k, s_max, tol))
