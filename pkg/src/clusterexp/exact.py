"""Exact finite-volume quantities of a hard-core polymer gas.

The partition function is evaluated as a sum over compatible (independent)
subsets of the volume, using the deletion/contraction recursion

    Xi(S) = Xi(S - {v}) + z_v * Xi(S - N*(v))

over bitmasks with memoisation.  Arithmetic is generic: integer or
``Fraction`` activities give exact results, floats give floating point ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .graph import CapExceeded, InteractionGraph, mask_to_set, set_to_mask

DEFAULT_CAP = 30

Activities = Union[Sequence, Mapping[int, object]]


class OutsideRegionError(ValueError):
    """A quantity is undefined because a partition function vanished or changed sign."""


@dataclass(frozen=True)
class IndependencePolynomial:
    coefficients: tuple[int, ...]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


def as_activities(g: InteractionGraph, z: Activities) -> list:
    if isinstance(z, Mapping):
        vals = [0] * g.n_polymers
        for k, v in z.items():
            g._check(int(k))
            vals[int(k)] = v
    else:
        vals = list(z)
        if len(vals) != g.n_polymers:
            raise ValueError(f"expected {g.n_polymers} activities, got {len(vals)}")
    for v in vals:
        if isinstance(v, float) and not math.isfinite(v):
            raise ValueError("activities must be finite")
    return vals


def volume_mask(g: InteractionGraph, lam: Iterable[int] | None) -> int:
    if lam is None:
        return g.full_mask
    lam = list(lam)
    for v in lam:
        g._check(v)
    return set_to_mask(lam)


def _check_cap(mask: int, cap: int) -> None:
    size = bin(mask).count("1")
    if size > cap:
        raise CapExceeded(f"volume of {size} polymers exceeds enumeration cap {cap}")


def _xi_mask(g: InteractionGraph, z: list, mask: int, cache: dict):
    if mask == 0:
        return 1
    hit = cache.get(mask)
    if hit is not None:
        return hit
    low = mask & -mask
    v = low.bit_length() - 1
    val = _xi_mask(g, z, mask ^ low, cache)
    if z[v] != 0:
        val = val + z[v] * _xi_mask(g, z, mask & ~g.closed_mask(v), cache)
    cache[mask] = val
    return val


def xi_mask(g: InteractionGraph, z: list, mask: int, cap: int = DEFAULT_CAP):
    """Partition function on the volume given as a bitmask; ``z`` already validated."""
    _check_cap(mask, cap)
    return _xi_mask(g, z, mask, {})


def partition_function(g: InteractionGraph, lam: Iterable[int] | None, z: Activities,
                       cap: int = DEFAULT_CAP):
    """Grand-canonical partition function of the volume ``lam`` (all polymers if None)."""
    return xi_mask(g, as_activities(g, z), volume_mask(g, lam), cap)


def _poly_add(a: list[int], b: list[int], shift: int = 0) -> list[int]:
    out = list(a) + [0] * max(0, len(b) + shift - len(a))
    for k, c in enumerate(b):
        out[k + shift] += c
    return out


def _indep_poly(g: InteractionGraph, mask: int, cache: dict) -> list[int]:
    if mask == 0:
        return [1]
    hit = cache.get(mask)
    if hit is not None:
        return hit
    low = mask & -mask
    v = low.bit_length() - 1
    val = _poly_add(_indep_poly(g, mask ^ low, cache),
                    _indep_poly(g, mask & ~g.closed_mask(v), cache), shift=1)
    cache[mask] = val
    return val


def independence_polynomial(g: InteractionGraph, lam: Iterable[int] | None = None,
                            cap: int = DEFAULT_CAP) -> IndependencePolynomial:
    mask = volume_mask(g, lam)
    _check_cap(mask, cap)
    return IndependencePolynomial(tuple(_indep_poly(g, mask, {})))


def independent_sets(g: InteractionGraph, lam: Iterable[int] | None = None,
                     cap: int = DEFAULT_CAP) -> Iterator[frozenset[int]]:
    """Yield every compatible subset of the volume, including the empty set."""
    mask = volume_mask(g, lam)
    _check_cap(mask, cap)

    def rec(avail: int, chosen: int):
        if avail == 0:
            yield frozenset(mask_to_set(chosen))
            return
        low = avail & -avail
        v = low.bit_length() - 1
        yield from rec(avail ^ low, chosen)
        yield from rec(avail & ~g.closed_mask(v), chosen | low)

    yield from rec(mask, 0)


def neighborhood_xi(g: InteractionGraph, gamma0: int, mu: Activities,
                    cap: int = DEFAULT_CAP):
    """Partition function of the closed neighbourhood of ``gamma0``."""
    mu = as_activities(g, mu)
    if any(m < 0 for m in mu):
        raise ValueError("neighborhood_xi needs nonnegative activities")
    g._check(gamma0)
    return xi_mask(g, mu, g.closed_mask(gamma0), cap)


def pinned_log_ratio(g: InteractionGraph, lam: Iterable[int] | None, gamma0: int,
                     z: Activities, cap: int = DEFAULT_CAP) -> float:
    """``log(Xi_lam / Xi_{lam - gamma0})``."""
    z = as_activities(g, z)
    mask = volume_mask(g, lam)
    if not mask >> gamma0 & 1:
        raise ValueError(f"polymer {gamma0} not in the volume")
    num = xi_mask(g, z, mask, cap)
    den = xi_mask(g, z, mask & ~(1 << gamma0), cap)
    if num == 0 or den == 0 or (num > 0) != (den > 0):
        raise OutsideRegionError(f"partition functions {num} and {den} do not share a sign")
    return math.log(num / den)


def pinned_derivative(g: InteractionGraph, lam: Iterable[int] | None, gamma0: int,
                      z: Activities, cap: int = DEFAULT_CAP):
    """``d/dz_gamma0 log Xi_lam``, computed as ``Xi_{lam - N*(gamma0)} / Xi_lam``."""
    z = as_activities(g, z)
    mask = volume_mask(g, lam)
    if not mask >> gamma0 & 1:
        raise ValueError(f"polymer {gamma0} not in the volume")
    den = xi_mask(g, z, mask, cap)
    if den == 0:
        raise OutsideRegionError("partition function vanishes")
    return xi_mask(g, z, mask & ~g.closed_mask(gamma0), cap) / den


def pi_volume(g: InteractionGraph, lam: Iterable[int] | None, gamma0: int,
              rho: Activities, cap: int = DEFAULT_CAP):
    """Finite-volume pinned series, the pinned derivative evaluated at ``-rho``.

    Requires ``Xi_lam(-rho) > 0``.  Only the sign of the final value is
    checked; no path from 0 to ``rho`` is tracked.
    """
    rho = as_activities(g, rho)
    if any(r < 0 for r in rho):
        raise ValueError("pi_volume needs nonnegative rho")
    neg = [-r for r in rho]
    mask = volume_mask(g, lam)
    if not mask >> gamma0 & 1:
        raise ValueError(f"polymer {gamma0} not in the volume")
    den = xi_mask(g, neg, mask, cap)
    if den <= 0:
        raise OutsideRegionError(f"Xi(-rho) = {den} <= 0: rho outside the convergence region")
    return xi_mask(g, neg, mask & ~g.closed_mask(gamma0), cap) / den


def configuration_weight(g: InteractionGraph, lam: Iterable[int] | None, z: Activities,
                         subset: Iterable[int], cap: int = DEFAULT_CAP):
    """Gibbs probability of the polymer configuration ``subset``."""
    z = as_activities(g, z)
    mask = volume_mask(g, lam)
    s = set_to_mask(subset)
    if s & ~mask:
        raise ValueError("configuration not contained in the volume")
    xi = xi_mask(g, z, mask, cap)
    if not xi > 0:
        raise OutsideRegionError("configuration weights need Xi > 0")
    for v in mask_to_set(s):
        if g.adj[v] & s:
            return 0
    w = 1
    for v in mask_to_set(s):
        w = w * z[v]
    return w / xi
