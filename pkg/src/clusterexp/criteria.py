"""Cluster-expansion convergence conditions as monotone maps.

Every condition has the form ``rho[g] * phi_g(mu) <= mu[g]`` for all polymers
``g``; the map ``T(mu) = rho * phi(mu)`` is monotone, and iterating it from
``rho`` increases to the smallest fixed point whenever some ``mu`` satisfies
the condition.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np
from scipy import optimize

from .exact import as_activities, xi_mask
from .graph import InteractionGraph, mask_to_set


class CriterionKind(str, enum.Enum):
    KOTECKY_PREISS = "kp"
    DOBRUSHIN = "dob"
    IMPROVED_DOBRUSHIN = "impdob"
    FERNANDEZ_PROCACCI = "fp"

    @classmethod
    def parse(cls, value: Union[str, "CriterionKind"]) -> "CriterionKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown criterion {value!r}; expected one of "
                             f"{[k.value for k in cls]}") from None


KP = CriterionKind.KOTECKY_PREISS
DOB = CriterionKind.DOBRUSHIN
IMPDOB = CriterionKind.IMPROVED_DOBRUSHIN
FP = CriterionKind.FERNANDEZ_PROCACCI
ALL_KINDS = (KP, DOB, IMPDOB, FP)


@dataclass
class FixedPointResult:
    rho_star: np.ndarray
    iterations: int
    converged: bool
    diverged: bool = False
    offending: int | None = None
    last_increment: float = math.nan
    chain: list[np.ndarray] | None = field(default=None, repr=False)


@dataclass(frozen=True)
class RadiusResult:
    radius: float
    maximizer: float
    attained: bool


def _vec(g: InteractionGraph, x) -> np.ndarray:
    arr = np.asarray(as_activities(g, x), dtype=float)
    if np.any(arr < 0):
        raise ValueError("criteria work with nonnegative vectors")
    return arr


def phi(kind, g: InteractionGraph, gamma0: int, mu, exact: bool = True) -> float:
    """Value of the criterion function at polymer ``gamma0``.

    Sums and products run over the closed neighbourhood, i.e. include ``gamma0``.
    With ``exact`` the polynomial kinds are evaluated in rational arithmetic on
    the binary value of ``mu`` and rounded once, so kinds that agree as real
    numbers return identical floats.
    """
    kind = CriterionKind.parse(kind)
    g._check(gamma0)
    mu = _vec(g, mu)
    if not exact:
        return _phi(kind, g, gamma0, mu)
    if kind is KP:
        return math.exp(math.fsum(mu[v] for v in mask_to_set(g.closed_mask(gamma0))))
    q = [Fraction(float(x)) for x in mu]
    if kind is FP:
        return float(xi_mask(g, q, g.closed_mask(gamma0)))
    prod = math.prod((1 + q[v] for v in mask_to_set(g.adj[gamma0])), start=Fraction(1))
    return float((1 + q[gamma0]) * prod if kind is DOB else q[gamma0] + prod)


def _phi(kind: CriterionKind, g: InteractionGraph, gamma0: int, mu: np.ndarray) -> float:
    if kind is FP:
        return float(xi_mask(g, mu.tolist(), g.closed_mask(gamma0)))
    nbrs = mask_to_set(g.adj[gamma0])
    if kind is KP:
        return math.exp(mu[gamma0] + sum(mu[v] for v in nbrs))
    prod = math.prod(1.0 + mu[v] for v in nbrs)
    if kind is DOB:
        return (1.0 + mu[gamma0]) * prod
    return mu[gamma0] + prod


def t_map(kind, g: InteractionGraph, rho, mu) -> np.ndarray:
    kind = CriterionKind.parse(kind)
    rho, mu = _vec(g, rho), _vec(g, mu)
    return _t(kind, g, rho, mu)


def _t(kind: CriterionKind, g: InteractionGraph, rho: np.ndarray, mu: np.ndarray) -> np.ndarray:
    out = np.zeros_like(rho)
    with np.errstate(over="ignore"):
        for v in range(g.n_polymers):
            if rho[v] > 0:
                try:
                    out[v] = rho[v] * _phi(kind, g, v, mu)
                except OverflowError:
                    out[v] = math.inf
    return out


def condition_holds(kind, g: InteractionGraph, rho, mu, rtol: float = 0.0) -> bool:
    """Whether ``rho * phi(mu) <= mu`` componentwise (up to relative slack ``rtol``)."""
    mu_v = _vec(g, mu)
    return bool(np.all(t_map(kind, g, rho, mu_v) <= mu_v * (1.0 + rtol)))


def fixed_point(kind, g: InteractionGraph, rho, tol: float = 1e-12,
                max_iter: int = 100_000, cap: float = 1e12,
                keep_chain: bool = False) -> FixedPointResult:
    """Iterate ``T`` from ``rho`` until the relative sup-norm step drops below ``tol``.

    Growth of any coordinate past ``cap`` is reported as divergence: the
    condition then admits no certificate reachable from ``rho``.
    """
    kind = CriterionKind.parse(kind)
    rho = _vec(g, rho)
    mu = rho.copy()
    chain = [mu.copy()] if keep_chain else None
    step = math.nan
    for it in range(1, max_iter + 1):
        new = _t(kind, g, rho, mu)
        if not np.all(np.isfinite(new)) or np.any(new > cap):
            bad = int(np.argmax(np.where(np.isfinite(new), new, np.inf)))
            return FixedPointResult(new, it, False, True, bad, step, chain)
        step = float(np.max(np.abs(new - mu), initial=0.0))
        mu = new
        if chain is not None:
            chain.append(mu.copy())
        if step <= tol * (1.0 + float(np.max(mu, initial=0.0))):
            return FixedPointResult(mu, it, True, False, None, step, chain)
    return FixedPointResult(mu, max_iter, False, False, None, step, chain)


def bound_chain(kind, g: InteractionGraph, rho, mu, n_steps: int,
                rtol: float = 1e-12) -> list[np.ndarray]:
    """Iterates ``T(mu), T^2(mu), ...``; nonincreasing when ``mu`` satisfies the condition.

    ``rtol`` lets a numerically computed fixed point serve as ``mu``.
    """
    kind = CriterionKind.parse(kind)
    rho, mu = _vec(g, rho), _vec(g, mu)
    if not np.all(_t(kind, g, rho, mu) <= mu * (1.0 + rtol)):
        raise ValueError("mu does not satisfy the condition for this rho")
    out = []
    for _ in range(n_steps):
        mu = _t(kind, g, rho, mu)
        out.append(mu)
    return out


def geometric_interpolation_check(kind, g: InteractionGraph, pair, other_pair,
                                  lam: float, rtol: float = 1e-12) -> bool:
    """Condition at the geometric interpolation of two pairs that both satisfy it."""
    (rho, mu), (rho2, mu2) = pair, other_pair
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lam must lie in [0, 1]")
    for r, m in ((rho, mu), (rho2, mu2)):
        if not condition_holds(kind, g, r, m, rtol):
            raise ValueError("input pair does not satisfy the condition")
    r = _vec(g, rho) ** lam * _vec(g, rho2) ** (1.0 - lam)
    m = _vec(g, mu) ** lam * _vec(g, mu2) ** (1.0 - lam)
    return condition_holds(kind, g, r, m, rtol)


# --- homogeneous radii ------------------------------------------------------

PhiSpec = Union[Sequence[float], Callable[[float], float]]


def _validate_poly(coeffs: np.ndarray) -> np.polynomial.Polynomial:
    p = np.polynomial.Polynomial(coeffs).trim()
    if not math.isclose(p(0.0), 1.0, rel_tol=0, abs_tol=1e-12):
        raise ValueError("phi(0) must equal 1")
    dp = p.deriv()
    roots = sorted(r.real for r in dp.roots() if abs(r.imag) < 1e-12 and r.real > 0)
    probes = [0.0] + [(a + b) / 2 for a, b in zip([0.0] + roots, roots)]
    probes.append(2 * roots[-1] + 1 if roots else 1.0)
    if any(dp(x) < 0 for x in probes):
        raise ValueError("phi must be nondecreasing on [0, inf)")
    return p


def homogeneous_radius(phi_spec: PhiSpec, mu_limit: float = 1e12) -> RadiusResult:
    """``sup_{mu > 0} mu / phi(mu)`` for a univariate criterion function.

    ``phi_spec`` is either ascending polynomial coefficients or a callable.
    For polynomials of degree >= 2 the maximiser is the root of
    ``phi - mu phi'``; for ``phi = 1 + c mu`` the supremum ``1/c`` is only
    approached (``attained=False``).
    """
    if callable(phi_spec):
        return _numeric_radius(phi_spec, mu_limit)
    p = _validate_poly(np.asarray(phi_spec, dtype=float))
    if p.degree() == 0:
        return RadiusResult(math.inf, math.inf, False)
    if p.degree() == 1:
        return RadiusResult(float(1.0 / p.coef[1]), math.inf, False)
    x = np.polynomial.Polynomial([0.0, 1.0])
    stationary = p - x * p.deriv()
    hi = 1.0
    while stationary(hi) > 0:
        hi *= 2.0
    mu = optimize.brentq(stationary, 0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return RadiusResult(float(mu / p(mu)), float(mu), True)


def _numeric_radius(f: Callable[[float], float], mu_limit: float) -> RadiusResult:
    if not math.isclose(f(0.0), 1.0, rel_tol=0, abs_tol=1e-12):
        raise ValueError("phi(0) must equal 1")

    def ratio(m):
        return m / f(m)

    hi = 1.0
    while ratio(hi) <= ratio(2.0 * hi):
        hi *= 2.0
        if hi > mu_limit:
            return RadiusResult(ratio(hi), math.inf, False)
    res = optimize.minimize_scalar(lambda m: -ratio(m), bounds=(0.0, 2.0 * hi),
                                   method="bounded", options={"xatol": 1e-12})
    return RadiusResult(-float(res.fun), float(res.x), True)


def bounded_degree_radius(kind, delta: int) -> RadiusResult:
    """Closed-form radius for graphs of maximum degree ``delta``.

    The Fernandez-Procacci value is the worst case over such graphs, which is
    the regular tree, where it coincides with the improved Dobrushin value.
    """
    kind = CriterionKind.parse(kind)
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    d = delta
    if kind is KP:
        return RadiusResult(1.0 / ((d + 1) * math.e), 1.0 / (d + 1), True)
    if kind is DOB:
        if d == 0:
            return RadiusResult(1.0, math.inf, False)
        return RadiusResult(d ** d / (d + 1) ** (d + 1), 1.0 / d, True)
    if d <= 1:
        return RadiusResult(1.0 / (d + 1), math.inf, False)
    return RadiusResult(1.0 / (1.0 + d ** d / (d - 1) ** (d - 1)), 1.0 / (d - 1), True)


def scott_sokal_reference(delta: int) -> float:
    """External reference radius for the ``(delta-1)``-regular tree."""
    if delta < 2:
        raise ValueError("scott_sokal_reference needs delta >= 2")
    return (delta - 1) ** (delta - 1) / delta ** delta
