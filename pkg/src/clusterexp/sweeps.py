"""Invariant sweeps behind ``clusterexp verify``.

Each sweep returns a :class:`SweepReport`; ``failures`` holds a few
counterexamples, enough to reproduce a problem by hand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .criteria import ALL_KINDS, FP, _phi, _t, fixed_point, geometric_interpolation_check
from .exact import DEFAULT_CAP, OutsideRegionError, pi_volume
from .graph import ClusterGraph, InteractionGraph, build_graph, cluster_graph, is_connected
from .trees import iterate_via_trees, labeled_rooted_tree_count, planar_multiplicity, \
    planar_trees, tree_bound_sum
from .ursell import css_signed_sum, kn_edges, mask_edges, penrose_tree_count, \
    truncated_function, verify_partition_scheme

MAX_DUMP = 5


@dataclass
class SweepReport:
    suite: str
    checked: int = 0
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, **info) -> None:
        if len(self.failures) < MAX_DUMP:
            self.failures.append(info)
        else:
            self.notes["more_failures"] = self.notes.get("more_failures", 0) + 1

    def as_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "checked": self.checked,
                "failures": self.failures, **self.notes}


def connected_cluster_graphs(n: int):
    """Every connected graph on ``0..n-1`` as an edge subset of K_n (isomorphic copies included)."""
    for m in range(1 << len(kn_edges(n))):
        cg = ClusterGraph.from_edges(n, mask_edges(n, m))
        if n == 1 or is_connected(cg):
            yield cg


def all_graphs(n: int):
    for m in range(1 << (n * (n - 1) // 2)):
        yield build_graph(n, sorted(mask_edges(n, m)))


def random_graph(rng: np.random.Generator, n_min: int, n_max: int) -> InteractionGraph:
    n = int(rng.integers(n_min, n_max + 1))
    p = rng.uniform(0.1, 0.9)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return build_graph(n, pairs)


def penrose_sweep(max_vertices: int = 6) -> SweepReport:
    rep = SweepReport("penrose")
    for n in range(2, max_vertices + 1):
        for cg in connected_cluster_graphs(n):
            rep.checked += 1
            css = css_signed_sum(cg)
            count = penrose_tree_count(cg)
            if css != (-1) ** (n - 1) * count:
                rep.fail(edges=cg.edge_list(), css=css, penrose=count)
    return rep


def partition_scheme_sweep(max_vertices: int = 6) -> SweepReport:
    rep = SweepReport("partition-scheme")
    for n in range(2, max_vertices + 1):
        for cg in connected_cluster_graphs(n):
            rep.checked += 1
            r = verify_partition_scheme(cg)
            if not r.ok:
                rep.fail(edges=cg.edge_list(), violations=r.violations[:3])
    return rep


def _multisets(n_polymers: int, max_size: int):
    for size in range(1, max_size + 1):
        yield from itertools.combinations_with_replacement(range(n_polymers), size)


def signs_sweep(max_polymers: int = 4, max_size: int = 5) -> SweepReport:
    """Sign and magnitude of the truncated function over all small systems."""
    rep = SweepReport("signs")
    for n in range(1, max_polymers + 1):
        for g in all_graphs(n):
            for seq in _multisets(n, max_size):
                rep.checked += 1
                val = truncated_function(g, seq)
                conn = is_connected(cluster_graph(g, seq))
                size = len(seq) - 1
                if conn and not (val * (-1) ** size >= 1):
                    rep.fail(edges=g.edges(), seq=seq, value=val)
                if not conn and val != 0:
                    rep.fail(edges=g.edges(), seq=seq, value=val, connected=False)
    return rep


def chain_sweep(g: InteractionGraph, rho, kind=FP, steps: int = 50, tol: float = 1e-12,
                max_iter: int = 100_000, cap: float = 1e12) -> SweepReport:
    """Fixed point, bound chain and (when small enough) the exact pinned series."""
    rep = SweepReport("chain")
    rho = np.broadcast_to(np.asarray(rho, dtype=float), (g.n_polymers,)).copy()
    res = fixed_point(kind, g, rho, tol, max_iter, cap)
    rep.notes["converged"] = res.converged
    if not res.converged:
        rep.fail(reason="fixed point iteration did not converge", iterations=res.iterations)
        return rep
    star = res.rho_star
    rep.checked += 1
    resid = float(np.max(np.abs(_t(kind, g, rho, star) - star)))
    if resid > 1e-9:
        rep.fail(reason="fixed point residual", residual=resid)
    # A certificate strictly above rho*: the fixed point for a slightly larger rho.
    mu = None
    for bump in (1.1, 1.01, 1.001):
        up = fixed_point(kind, g, rho * bump, tol, max_iter, cap)
        if up.converged:
            mu = up.rho_star
            break
    if mu is None:
        mu = star
    prev = mu
    for _ in range(steps):
        nxt = _t(kind, g, rho, prev)
        rep.checked += 1
        if np.any(nxt > prev + 1e-12) or np.any(nxt < star - 1e-9):
            rep.fail(reason="bound chain not monotone above rho*", values=nxt.tolist())
            break
        prev = nxt
    if g.n_polymers <= DEFAULT_CAP:
        for v in range(g.n_polymers):
            rep.checked += 1
            try:
                val = rho[v] * pi_volume(g, None, v, rho.tolist())
            except OutsideRegionError as exc:
                rep.fail(reason=str(exc), polymer=v)
                continue
            if val > star[v] + 1e-9:
                rep.fail(reason="pinned series above rho*", polymer=v, value=val,
                         bound=float(star[v]))
    else:
        rep.notes["pi_volume"] = f"skipped: {g.n_polymers} polymers exceed cap {DEFAULT_CAP}"
    return rep


def _satisfying_pair(rng, kind, g):
    mu = rng.uniform(0.0, 0.5, g.n_polymers)
    phis = np.array([_phi(kind, g, v, mu) for v in range(g.n_polymers)])
    rho = mu / phis * rng.uniform(0.2, 1.0, g.n_polymers)
    return rho, mu


def logconvex_sweep(seed: int = 0, trials: int = 500, max_polymers: int = 6) -> SweepReport:
    rep = SweepReport("logconvex")
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        g = random_graph(rng, 1, max_polymers)
        for kind in ALL_KINDS:
            a = _satisfying_pair(rng, kind, g)
            b = _satisfying_pair(rng, kind, g)
            for lam in (0.25, 0.5, 0.75):
                rep.checked += 1
                if not geometric_interpolation_check(kind, g, a, b, lam, rtol=1e-12):
                    rep.fail(kind=kind.value, edges=g.edges(), lam=lam,
                             pair=[x.tolist() for x in a], other=[x.tolist() for x in b])
    return rep


def tree_equivalence_sweep(seed: int = 0, trials: int = 10, max_polymers: int = 4,
                           max_k: int = 3) -> SweepReport:
    rep = SweepReport("tree-equivalence")
    rng = np.random.default_rng(seed)
    for n in range(0, 5):
        rep.checked += 1
        total = sum(planar_multiplicity(t) for t in planar_trees(n))
        if total != labeled_rooted_tree_count(n):
            rep.fail(reason="planar multiplicities", n=n, total=total)
    worst = 0.0
    for _ in range(trials):
        g = random_graph(rng, 1, max_polymers)
        rho = rng.uniform(0.0, 0.15, g.n_polymers)
        mu = rng.uniform(0.0, 0.3, g.n_polymers)
        for kind in ALL_KINDS:
            direct = mu.copy()
            for k in range(1, max_k + 1):
                direct = _t(kind, g, rho, direct)
                via = iterate_via_trees(kind, g, rho, k, mu)
                rep.checked += 1
                err = float(np.max(np.abs(via - direct) / np.maximum(np.abs(direct), 1e-300)))
                worst = max(worst, err)
                if err > 1e-12:
                    rep.fail(kind=kind.value, k=k, edges=g.edges(), rel_err=err)
    rep.notes["max_rel_err"] = worst
    return rep


def prop6_sweep(max_polymers: int = 4, max_size: int = 4) -> SweepReport:
    rep = SweepReport("prop6-bound")
    for n in range(1, max_polymers + 1):
        for g in all_graphs(n):
            for seq in _multisets(n, max_size):
                val = abs(truncated_function(g, seq))
                # every ordering of the multiset has the same truncated function,
                # but the tree sum depends on which copy sits at the root
                for root in set(seq):
                    rest = list(seq)
                    rest.remove(root)
                    ordered = (root,) + tuple(rest)
                    for kind in ALL_KINDS:
                        rep.checked += 1
                        bound = tree_bound_sum(kind, g, ordered)
                        if val > bound:
                            rep.fail(kind=kind.value, edges=g.edges(), seq=ordered,
                                     value=val, bound=bound)
    return rep


SUITES = ("penrose", "signs", "partition-scheme", "chain", "logconvex",
          "tree-equivalence", "prop6-bound")

