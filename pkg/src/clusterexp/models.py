"""Builtin polymer families and homogeneous model descriptors."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Hashable, Mapping, Sequence, Union

import numpy as np

from .criteria import DOB, IMPDOB, KP, CriterionKind
from .exact import IndependencePolynomial, independence_polynomial
from .graph import InteractionGraph, build_graph

Site = Hashable

# Table value printed for the triangular lattice; direct enumeration of the
# centre-plus-hexagon neighbourhood gives 1 + 7m + 9m^2 + 2m^3 instead.
PAPER_TRIANGULAR_POLYNOMIAL = (1, 7, 8, 2)

TRIANGULAR_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))


@dataclass(frozen=True)
class SubsetPolymerFamily:
    """Polymers are finite site subsets; two polymers clash iff they overlap."""

    sites: tuple
    polymers: tuple[frozenset, ...]

    def __post_init__(self):
        for k, p in enumerate(self.polymers):
            if not p:
                raise ValueError(f"polymer {k} is empty")

    def polymers_at(self, site) -> list[int]:
        return [k for k, p in enumerate(self.polymers) if site in p]


def build_family_graph(f: SubsetPolymerFamily) -> InteractionGraph:
    pairs = [(i, j) for i in range(len(f.polymers)) for j in range(i + 1, len(f.polymers))
             if f.polymers[i] & f.polymers[j]]
    labels = {k: "+".join(map(str, sorted(p))) for k, p in enumerate(f.polymers)}
    return build_graph(len(f.polymers), pairs, labels)


def family_from_json(obj: Mapping) -> SubsetPolymerFamily:
    def key(s):
        return tuple(s) if isinstance(s, list) else s

    sites = tuple(key(s) for s in obj.get("sites", []))
    polymers = tuple(frozenset(key(s) for s in p) for p in obj["polymers"])
    if not sites:
        sites = tuple(sorted(set().union(*polymers), key=repr))
    return SubsetPolymerFamily(sites, polymers)


def family_to_json(f: SubsetPolymerFamily) -> dict:
    def out(s):
        return list(s) if isinstance(s, tuple) else s

    return {"sites": [out(s) for s in f.sites],
            "polymers": [[out(s) for s in sorted(p, key=repr)] for p in f.polymers]}


def load_family(path: str | Path) -> SubsetPolymerFamily:
    return family_from_json(json.loads(Path(path).read_text()))


# --- lattices ---------------------------------------------------------------

def domino_family(width: int, height: int) -> SubsetPolymerFamily:
    """All horizontal and vertical dominoes inside a ``width x height`` window."""
    if width < 1 or height < 1 or width * height < 2:
        raise ValueError(f"window {width}x{height} holds no domino")
    sites = tuple((x, y) for y in range(height) for x in range(width))
    polys = []
    for y in range(height):
        for x in range(width):
            if x + 1 < width:
                polys.append(frozenset({(x, y), (x + 1, y)}))
            if y + 1 < height:
                polys.append(frozenset({(x, y), (x, y + 1)}))
    return SubsetPolymerFamily(sites, tuple(polys))


def triangular_sites(radius: int) -> list[tuple[int, int]]:
    """Axial coordinates of a hexagonal patch of the triangular lattice."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    return [(q, r) for q in range(-radius, radius + 1) for r in range(-radius, radius + 1)
            if max(abs(q), abs(r), abs(q + r)) <= radius]


def triangular_lattice_graph(radius: int) -> InteractionGraph:
    """Sites of a patch, incompatible when equal or lattice neighbours."""
    sites = triangular_sites(radius)
    index = {s: k for k, s in enumerate(sites)}
    pairs = set()
    for (q, r), k in index.items():
        for dq, dr in TRIANGULAR_STEPS:
            j = index.get((q + dq, r + dr))
            if j is not None:
                pairs.add((min(k, j), max(k, j)))
    return build_graph(len(sites), sorted(pairs), {k: f"{q},{r}" for (q, r), k in index.items()})


def triangular_site_family(radius: int) -> SubsetPolymerFamily:
    """Site polymers as subset polymers: each site becomes the set of its lattice bonds,
    so two polymers overlap exactly when the sites are neighbours."""
    sites = triangular_sites(radius)
    present = set(sites)
    bonds = []
    polys = []
    for q, r in sites:
        star = set()
        for dq, dr in TRIANGULAR_STEPS:
            other = (q + dq, r + dr)
            if other in present:
                star.add(tuple(sorted([(q, r), other])))
        polys.append(frozenset(star))
        bonds.extend(star)
    return SubsetPolymerFamily(tuple(sorted(set(bonds))), tuple(polys))


def complete_graph(n: int) -> InteractionGraph:
    return build_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def self_exclusion(n: int) -> InteractionGraph:
    return build_graph(n)


def regular_tree_graph(delta: int, depth: int = 2) -> InteractionGraph:
    """Finite tree whose non-leaf vertices all have degree ``delta``; vertex 0 is the root."""
    if delta < 1 or depth < 1:
        raise ValueError("regular_tree_graph needs delta >= 1 and depth >= 1")
    edges = []
    frontier = [0]
    n = 1
    for level in range(depth):
        nxt = []
        for v in frontier:
            for _ in range(delta if level == 0 else delta - 1):
                edges.append((v, n))
                nxt.append(n)
                n += 1
        frontier = nxt
    return build_graph(n, edges)


def central_polymer(f: SubsetPolymerFamily) -> int:
    """Polymer nearest the window centroid, required to sit far enough from the edge
    that its overlap neighbourhood matches the infinite lattice."""
    pts = np.array([s for s in f.sites], dtype=float)
    centre = pts.mean(axis=0)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    extent = max(len(p) for p in f.polymers)
    best = None
    for k, p in enumerate(f.polymers):
        cells = np.array(sorted(p), dtype=float)
        margin = float(np.min(np.minimum(cells - lo, hi - cells)))
        if margin < extent - 1:
            continue
        d = float(np.linalg.norm(cells.mean(axis=0) - centre))
        if best is None or d < best[0] - 1e-12:
            best = (d, k)
    if best is None:
        raise ValueError("window too small: no polymer clears the boundary guard")
    return best[1]


def neighborhood_polynomial(g: InteractionGraph, gamma0: int) -> IndependencePolynomial:
    """Independence polynomial of the closed neighbourhood of ``gamma0``."""
    g._check(gamma0)
    members = [v for v in range(g.n_polymers) if g.closed_mask(gamma0) >> v & 1]
    return independence_polynomial(g, members)


# --- homogeneous criterion functions ---------------------------------------

def bounded_degree_phi(kind, delta: int, mu: float) -> float:
    """Criterion function for a maximum-degree-``delta`` graph at constant ``mu``.

    The Fernandez-Procacci kind uses its worst case, the regular tree, where it
    equals the improved Dobrushin form.
    """
    kind = CriterionKind.parse(kind)
    if delta < 0 or mu < 0:
        raise ValueError("need delta >= 0 and mu >= 0")
    if kind is KP:
        return math.exp((delta + 1) * mu)
    if kind is DOB:
        return (1.0 + mu) ** (delta + 1)
    return mu + (1.0 + mu) ** delta


PhiSpec = Union[Sequence[float], Callable[[float], float]]


def homogeneous_phi(kind, g: InteractionGraph, gamma0: int) -> PhiSpec:
    """Univariate criterion function at ``gamma0`` when every polymer carries the same mu.

    Polynomial kinds return ascending coefficients, Kotecky-Preiss a callable.
    """
    kind = CriterionKind.parse(kind)
    size = bin(g.closed_mask(gamma0)).count("1")
    if kind is KP:
        return lambda m: math.exp(size * m)
    if kind is DOB:
        return [math.comb(size, k) for k in range(size + 1)]
    if kind is IMPDOB:
        coeffs = [math.comb(size - 1, k) for k in range(size)] + [0]
        coeffs[1] += 1
        return coeffs
    return list(neighborhood_polynomial(g, gamma0).coefficients)


def bounded_degree_phi_spec(kind, delta: int) -> PhiSpec:
    kind = CriterionKind.parse(kind)
    if kind is KP:
        return lambda m: bounded_degree_phi(KP, delta, m)
    if kind is DOB:
        return [math.comb(delta + 1, k) for k in range(delta + 2)]
    coeffs = [math.comb(delta, k) for k in range(delta + 1)] + [0]
    coeffs[1] += 1
    return coeffs


# --- model descriptors ------------------------------------------------------

@dataclass(frozen=True)
class ModelDescriptor:
    variant: str
    params: tuple[int, ...]

    @property
    def name(self) -> str:
        if self.variant == "domino":
            return f"domino:{self.params[0]}x{self.params[1]}"
        if self.variant == "tri":
            return f"tri:r{self.params[0]}"
        return f"{self.variant}:{self.params[0]}"


_MODEL_RE = re.compile(r"^(degree|tree|complete|selfx):(\d+)$|^domino:(\d+)x(\d+)$|^tri:r?(\d+)$")


def parse_model(text: str) -> ModelDescriptor:
    m = _MODEL_RE.match(text.strip())
    if not m:
        raise ValueError(f"unknown model descriptor {text!r}")
    if m.group(1):
        desc = ModelDescriptor(m.group(1), (int(m.group(2)),))
    elif m.group(3):
        desc = ModelDescriptor("domino", (int(m.group(3)), int(m.group(4))))
    else:
        desc = ModelDescriptor("tri", (int(m.group(5)),))
    if desc.variant in ("complete", "selfx", "tree", "tri") and desc.params[0] < 1:
        raise ValueError(f"{text!r}: parameter must be positive")
    return desc


def model_graph(desc: ModelDescriptor) -> InteractionGraph:
    v, p = desc.variant, desc.params
    if v == "degree":
        raise ValueError("degree:D describes a class of graphs, not a single graph; use tree:D")
    if v == "tree":
        return regular_tree_graph(p[0])
    if v == "complete":
        return complete_graph(p[0])
    if v == "selfx":
        return self_exclusion(p[0])
    if v == "domino":
        return build_family_graph(domino_family(*p))
    return triangular_lattice_graph(p[0])


def model_center(desc: ModelDescriptor, g: InteractionGraph) -> int:
    """Representative polymer for homogeneous questions."""
    if desc.variant == "domino":
        return central_polymer(domino_family(*desc.params))
    if desc.variant == "tri":
        return triangular_sites(desc.params[0]).index((0, 0))
    return 0


def model_phi(desc: ModelDescriptor, kind) -> PhiSpec:
    if desc.variant == "degree":
        return bounded_degree_phi_spec(kind, desc.params[0])
    g = model_graph(desc)
    return homogeneous_phi(kind, g, model_center(desc, g))


# --- general subset polymers ------------------------------------------------

@dataclass
class GruberKunzReport:
    holds: bool
    worst_polymer: int
    margin: float
    pi_bounds: list[float] | None = None


def _weights(f: SubsetPolymerFamily, a) -> np.ndarray:
    if callable(a):
        vals = [float(a(p)) for p in f.polymers]
    elif np.isscalar(a):
        vals = [float(a) * len(p) for p in f.polymers]
    else:
        vals = [float(x) for x in a]
        if len(vals) != len(f.polymers):
            raise ValueError("need one exponent per polymer")
    arr = np.asarray(vals)
    if np.any(arr < 0):
        raise ValueError("exponents a(gamma) must be nonnegative")
    return arr


def _site_loads(f: SubsetPolymerFamily, mu: np.ndarray) -> dict:
    load: dict = {s: 0.0 for s in f.sites}
    for k, p in enumerate(f.polymers):
        for s in p:
            load[s] = load.get(s, 0.0) + mu[k]
    return load


def gruber_kunz_condition(f: SubsetPolymerFamily, rho, a=1.0,
                          global_sup: bool = False) -> GruberKunzReport:
    """Check ``sup_{x in g0} sum_{g ∋ x} rho_g e^{a(g)} <= e^{a(g0)/|g0|} - 1`` for every g0.

    ``a`` is a scalar (meaning ``a*|g|``), one value per polymer, or a callable
    on the polymer's site set.  ``global_sup`` takes the supremum over all
    sites instead of the sites of ``g0``.
    """
    rho = np.asarray(rho, dtype=float)
    if rho.shape != (len(f.polymers),) or np.any(rho < 0):
        raise ValueError("rho must be a nonnegative vector, one entry per polymer")
    av = _weights(f, a)
    mu = rho * np.exp(av)
    load = _site_loads(f, mu)
    top = max(load.values(), default=0.0)
    margins = []
    for k, p in enumerate(f.polymers):
        lhs = top if global_sup else max(load[s] for s in p)
        margins.append(math.expm1(av[k] / len(p)) - lhs)
    worst = int(np.argmin(margins))
    holds = bool(margins[worst] >= 0)
    return GruberKunzReport(holds, worst, float(margins[worst]),
                            [float(math.exp(x)) for x in av] if holds else None)


def subset_criteria_table3(f: SubsetPolymerFamily, rho, a: float) -> dict[str, bool]:
    """Site-supremum forms of the Kotecky-Preiss, Dobrushin and Gruber-Kunz conditions
    with ``a(g) = a|g|``."""
    rho = np.asarray(rho, dtype=float)
    mu = rho * np.exp(a * np.array([len(p) for p in f.polymers], dtype=float))
    load = _site_loads(f, mu)
    prod = {s: 1.0 for s in load}
    for k, p in enumerate(f.polymers):
        for s in p:
            prod[s] *= 1.0 + mu[k]
    top = max(load.values(), default=0.0)
    return {
        "kp": bool(top <= a),
        "dob": bool(max(prod.values(), default=1.0) <= math.exp(a)),
        "gk": bool(top <= math.expm1(a)),
    }
