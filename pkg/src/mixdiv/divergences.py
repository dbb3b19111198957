"""Divergence functionals: classical, mixed, order-changed, i-th mixed, and
the named families (total variation, KL, Hellinger, Renyi, Bhattacharyya).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateExponent,
    IndexOutOfRange,
    LengthMismatch,
    LogOfZero,
    NotProbabilitySpace,
    RenyiUndefined,
    SpaceMismatch,
)
from .ffunctions import FFunction, FVector, adjoint, make_builtin, weighted_terms
from .measures import TOL_NORM, Density, DensityBundle, MeasureSpace

# Below this, a factor is treated as an exact zero instead of going through
# log-space (which would underflow).
_LOG_FLOOR = 1e-300


@dataclass(frozen=True)
class DivergenceReport:
    """Value plus the per-atom integrand it was summed from."""

    value: float
    integrand: np.ndarray
    convention_hits: int = 0


def _report(space: MeasureSpace, integrand: np.ndarray, hits: int = 0) -> DivergenceReport:
    return DivergenceReport(
        value=float(np.dot(integrand, space.weights)),
        integrand=integrand,
        convention_hits=hits,
    )


def _geometric_product(factors: list, n: int) -> np.ndarray:
    """prod_i factors[i]^(1/n) per atom, in log-space when safe."""
    stack = np.stack([np.asarray(f, dtype=float) for f in factors])
    if np.all(stack > _LOG_FLOOR):
        return np.exp(np.log(stack).sum(axis=0) / n)
    return np.prod(stack ** (1.0 / n), axis=0)


def classical_f_divergence(
    f: FFunction, p: Density, q: Density, s: MeasureSpace
) -> DivergenceReport:
    """D_f(P, Q) = sum_j f(p_j/q_j) q_j mu_j."""
    if len(p) != s.size or len(q) != s.size:
        raise SpaceMismatch("densities do not match the space size")
    terms, hits = weighted_terms(f, p.values, q.values)
    return _report(s, terms, hits)


def mixed_f_divergence(
    fv: FVector, P: DensityBundle, Q: DensityBundle
) -> DivergenceReport:
    """Geometric mean of the n weighted integrands, summed against mu."""
    n = len(fv)
    if len(P) != n or len(Q) != n:
        raise LengthMismatch("generator vector and bundles must share one length")
    if P.space.size != Q.space.size:
        raise SpaceMismatch("bundles live on different spaces")
    hits = 0
    factors = []
    for i in range(n):
        w, h = weighted_terms(fv[i], P[i].values, Q[i].values)
        factors.append(w)
        hits += h
    return _report(P.space, _geometric_product(factors, n), hits)


def mixed_k_form(
    fv: FVector, P: DensityBundle, Q: DensityBundle, k: int
) -> DivergenceReport:
    """First k slots use (f_i, p_i, q_i); the rest use (f_i*, q_i, p_i)."""
    n = len(fv)
    if not (0 <= k <= n):
        raise IndexOutOfRange(f"k must be in 0..{n}, got {k}")
    if len(P) != n or len(Q) != n:
        raise LengthMismatch("generator vector and bundles must share one length")
    hits = 0
    factors = []
    for i in range(n):
        if i < k:
            w, h = weighted_terms(fv[i], P[i].values, Q[i].values)
        else:
            w, h = weighted_terms(adjoint(fv[i]), Q[i].values, P[i].values)
        factors.append(w)
        hits += h
    return _report(P.space, _geometric_product(factors, n), hits)


def _powered_factor(w: np.ndarray, exponent: float) -> np.ndarray:
    if exponent == 0.0:
        return np.ones_like(w)
    if exponent < 0.0 and np.any(w == 0.0):
        raise DegenerateExponent("zero integrand factor raised to a negative power")
    return w ** exponent


def ith_mixed(
    f1: FFunction,
    f2: FFunction,
    P1: Density,
    Q1: Density,
    P2: Density,
    Q2: Density,
    i: float,
    n: int,
    s: MeasureSpace,
) -> DivergenceReport:
    """Two-pair interpolation with exponents i/n and (n-i)/n."""
    if n < 1:
        raise IndexOutOfRange("n must be >= 1")
    w1, h1 = weighted_terms(f1, P1.values, Q1.values)
    w2, h2 = weighted_terms(f2, P2.values, Q2.values)
    integrand = _powered_factor(w1, i / n) * _powered_factor(w2, (n - i) / n)
    return _report(s, integrand, h1 + h2)


def ith_mixed_reference(
    f1: FFunction,
    P1: Density,
    Q1: Density,
    i: float,
    f2: FFunction,
    s: MeasureSpace,
    n: int,
) -> DivergenceReport:
    """Reference form f2(1)^(1-i/n) * sum_j [f1(p_j/q_j) q_j]^(i/n) mu_j.

    Requires mu itself to be a probability measure.
    """
    if abs(s.total_mass - 1.0) > TOL_NORM * max(1.0, s.total_mass):
        raise NotProbabilitySpace(f"total mass {s.total_mass} != 1")
    w1, hits = weighted_terms(f1, P1.values, Q1.values)
    scale = f2.value_at_one ** (1.0 - i / n)
    integrand = scale * _powered_factor(w1, i / n)
    return _report(s, integrand, hits)


def named_divergence(
    family: str, P: DensityBundle, Q: DensityBundle, *, alphas=None, alpha=None,
    kl_orientation: str = "pq",
) -> DivergenceReport | float:
    """Evaluate one of the named mixed families.

    family: "mixed_tv" | "mixed_kl" | "mixed_hellinger" | "mixed_renyi"
            | "bhattacharyya"
    kl_orientation: "pq" uses the generator form [p ln(p/q)]_+; "qp" uses
    the flipped integrand [p ln(q/p)]_+.
    """
    n = len(P)
    if family == "mixed_tv":
        fv = FVector([make_builtin("tv")] * n)
        return mixed_f_divergence(fv, P, Q)
    if family == "mixed_kl":
        if kl_orientation not in ("pq", "qp"):
            raise ValueError(f"bad kl_orientation {kl_orientation!r}")
        fv = FVector([make_builtin("klplus")] * n)
        if kl_orientation == "pq":
            return mixed_f_divergence(fv, P, Q)
        factors = [
            np.maximum(P[i].values * np.log(Q[i].values / P[i].values), 0.0)
            for i in range(n)
        ]
        return _report(P.space, _geometric_product(factors, n))
    if family == "mixed_hellinger":
        if alphas is None:
            raise ValueError("mixed_hellinger needs alphas")
        fv = FVector([make_builtin("power", alpha=a) for a in alphas])
        return mixed_f_divergence(fv, P, Q)
    if family == "bhattacharyya":
        return named_divergence("mixed_hellinger", P, Q, alphas=[0.5] * n)
    if family == "mixed_renyi":
        if alpha is None:
            raise ValueError("mixed_renyi needs alpha")
        if alpha == 1.0:
            raise RenyiUndefined("alpha = 1 is outside the Renyi family")
        hell = named_divergence("mixed_hellinger", P, Q, alphas=[alpha] * n)
        if hell.value <= 0.0:
            raise LogOfZero("Hellinger integral vanished; log undefined")
        return math.log(hell.value) / (alpha - 1.0)
    raise ValueError(f"unknown divergence family {family!r}")
