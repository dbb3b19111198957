"""Inequality checks for the mixed-divergence functionals.

Each check returns an InequalityVerdict with both sides, the signed slack
(nonnegative means satisfied), and an equality flag with an optional
effective-proportionality diagnosis. A seeded random falsifier drives all
checks over random instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    BadOrdering,
    LengthMismatch,
    MixedConvexityTags,
    NonConcaveTag,
    RangeMismatch,
    TagMismatch,
)
from .divergences import (
    classical_f_divergence,
    ith_mixed,
    ith_mixed_reference,
    mixed_f_divergence,
)
from .ffunctions import FFunction, FVector, make_builtin, weighted_terms
from .measures import Density, DensityBundle, MeasureSpace, make_bundle, make_space

TOL_INEQ = 1e-10
TOL_EQ = 1e-8
PROP_TOL = 1e-10


@dataclass(frozen=True)
class InequalityVerdict:
    lhs: float
    rhs: float
    slack: float  # rhs - lhs for "<=" claims, lhs - rhs for ">=" claims
    satisfied: bool
    equality: bool
    diagnosis: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "satisfied": self.satisfied,
            "equality": self.equality,
            "diagnosis": self.diagnosis,
        }


def _verdict(lhs: float, rhs: float, relation: str, diagnosis=None) -> InequalityVerdict:
    slack = (rhs - lhs) if relation == "le" else (lhs - rhs)
    scale = 1.0 + abs(rhs)
    return InequalityVerdict(
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        satisfied=slack >= -TOL_INEQ * scale,
        equality=abs(slack) <= TOL_EQ * scale,
        diagnosis=diagnosis,
    )


def effective_proportionality(g, h, s: MeasureSpace) -> dict:
    """Are g and h effectively proportional (a g = b h, (a,b) != (0,0))?

    A null vector is proportional to anything. Otherwise the ratio is read
    off the largest entry of g and checked atom by atom.
    """
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    if g.size != s.size or h.size != s.size:
        raise LengthMismatch("vectors do not match the space size")
    if np.all(np.abs(g) <= PROP_TOL) or np.all(np.abs(h) <= PROP_TOL):
        return {"proportional": True, "ratio": None}
    j = int(np.argmax(np.abs(g)))
    if g[j] == 0.0:
        return {"proportional": False, "ratio": None}
    ratio = float(h[j] / g[j])
    ok = bool(np.all(np.abs(h - ratio * g) <= PROP_TOL * (1.0 + np.abs(h))))
    return {"proportional": ok, "ratio": ratio if ok else None}


@dataclass(frozen=True)
class FactorDecomposition:
    """Per-atom factors g0, g1..gm whose product is the mixed integrand."""

    g0: np.ndarray
    g: tuple = field(default_factory=tuple)

    def integrand(self) -> np.ndarray:
        out = self.g0.copy()
        for gj in self.g:
            out = out * gj
        return out


def factor_decomposition(
    fv: FVector, P: DensityBundle, Q: DensityBundle, m: int
) -> FactorDecomposition:
    n = len(fv)
    factors = []
    for i in range(n):
        w, _ = weighted_terms(fv[i], P[i].values, Q[i].values)
        factors.append(w ** (1.0 / n))
    g0 = np.prod(np.stack(factors[: n - m]), axis=0) if m < n else np.ones(P.space.size)
    return FactorDecomposition(g0=g0, g=tuple(factors[n - m:]))


def _check_tags_uniform(fv: FVector) -> None:
    has_convex = any(f.convexity_tag in ("convex", "strictly_convex") for f in fv)
    has_concave = any(f.convexity_tag in ("concave", "strictly_concave") for f in fv)
    if has_convex and has_concave:
        raise MixedConvexityTags("generator vector mixes convex and concave entries")


def af_check(
    fv: FVector, P: DensityBundle, Q: DensityBundle, m: int
) -> InequalityVerdict:
    """Alexandrov-Fenchel type bound: D^m <= prod over the m substituted
    mixed divergences obtained by repeating the k-th tail slot."""
    n = len(fv)
    if not (1 <= m <= n):
        raise RangeMismatch(f"m must be in 1..{n}")
    _check_tags_uniform(fv)
    lhs = mixed_f_divergence(fv, P, Q).value ** m
    rhs = 1.0
    for k in range(n - m, n):
        fv_k = FVector(list(fv[: n - m]) + [fv[k]] * m)
        P_k = DensityBundle(P.space, tuple(P.densities[: n - m]) + (P[k],) * m)
        Q_k = DensityBundle(Q.space, tuple(Q.densities[: n - m]) + (Q[k],) * m)
        rhs *= mixed_f_divergence(fv_k, P_k, Q_k).value
    v = _verdict(lhs, rhs, "le")
    if v.equality:
        dec = factor_decomposition(fv, P, Q, m)
        root = dec.g0 ** (1.0 / m)
        hs = [root * gj for gj in dec.g]
        pairwise = all(
            effective_proportionality(hs[i], hs[j], P.space)["proportional"]
            for i in range(m)
            for j in range(i + 1, m)
        )
        null = any(np.all(np.abs(h) <= PROP_TOL) for h in hs)
        v = InequalityVerdict(
            v.lhs, v.rhs, v.slack, v.satisfied, v.equality,
            diagnosis={"effectively_proportional": bool(pairwise or null or m == 1)},
        )
    return v


def jensen_bound_check(
    f: FFunction, p: Density, q: Density, s: MeasureSpace
) -> InequalityVerdict:
    """D_f(P, Q) >= f(1) for convex f; <= f(1) for concave f."""
    value = classical_f_divergence(f, p, q, s).value
    relation = "ge" if f.convexity_tag in ("convex", "strictly_convex", "linear") else "le"
    if relation == "ge":
        v = _verdict(value, f.value_at_one, "ge")
    else:
        v = _verdict(value, f.value_at_one, "le")
        v = InequalityVerdict(value, f.value_at_one, v.slack, v.satisfied, v.equality)
    if f.is_strict:
        same = bool(np.all(np.abs(p.values - q.values) <= PROP_TOL * (1 + np.abs(q.values))))
        v = InequalityVerdict(
            v.lhs, v.rhs, v.slack, v.satisfied, v.equality,
            diagnosis={"densities_equal": same},
        )
    return v


def concave_chain_check(
    fv: FVector, P: DensityBundle, Q: DensityBundle
) -> tuple[InequalityVerdict, InequalityVerdict]:
    """D^n <= prod_i D_{f_i}(P_i, Q_i) <= prod_i f_i(1) for concave f_i."""
    n = len(fv)
    for f in fv:
        if not f.is_concave:
            raise NonConcaveTag("concave chain needs concave generators")
    d_mixed = mixed_f_divergence(fv, P, Q).value
    prod_classical = 1.0
    for i in range(n):
        prod_classical *= classical_f_divergence(fv[i], P[i], Q[i], P.space).value
    prod_ones = math.prod(f.value_at_one for f in fv)
    left = _verdict(d_mixed ** n, prod_classical, "le")
    right = _verdict(prod_classical, prod_ones, "le")
    if all(f.convexity_tag == "linear" for f in fv):
        combos = []
        for i in range(n):
            a, b = fv[i].a, fv[i].b
            combos.append((a * P[i].values + b * Q[i].values) / (a + b))
        match = all(
            np.all(np.abs(combos[0] - c) <= 1e-12 * (1 + np.abs(combos[0])))
            for c in combos[1:]
        )
        right = InequalityVerdict(
            right.lhs, right.rhs, right.slack, right.satisfied, right.equality,
            diagnosis={"convex_combinations_equal": bool(match)},
        )
    return left, right


def interpolation_check(
    f1: FFunction,
    f2: FFunction,
    P1: Density,
    Q1: Density,
    P2: Density,
    Q2: Density,
    i: float,
    j: float,
    k: float,
    n: int,
    s: MeasureSpace,
) -> InequalityVerdict:
    """Log-convexity of i -> D(P, Q; i): D(i) <= D(j)^((k-i)/(k-j)) D(k)^((i-j)/(k-j))."""
    lo, hi = min(j, k), max(j, k)
    if not (lo <= i <= hi):
        raise BadOrdering(f"i={i} is outside [{lo}, {hi}]")
    d_i = ith_mixed(f1, f2, P1, Q1, P2, Q2, i, n, s).value
    if i == j or i == k:
        return _verdict(d_i, d_i, "le")
    d_j = ith_mixed(f1, f2, P1, Q1, P2, Q2, j, n, s).value
    d_k = ith_mixed(f1, f2, P1, Q1, P2, Q2, k, n, s).value
    rhs = d_j ** ((k - i) / (k - j)) * d_k ** ((i - j) / (k - j))
    v = _verdict(d_i, rhs, "le")
    if v.equality:
        w1, _ = weighted_terms(f1, P1.values, Q1.values)
        w2, _ = weighted_terms(f2, P2.values, Q2.values)
        v = InequalityVerdict(
            v.lhs, v.rhs, v.slack, v.satisfied, v.equality,
            diagnosis=effective_proportionality(w1, w2, s),
        )
    return v


_COROLLARY_CASES = (
    "concave_band",
    "convex_concave_high",
    "concave_convex_low",
    "reference_concave",
    "reference_convex_high",
    "reference_concave_low",
)


def corollary_bound_check(
    case: str,
    f1: FFunction,
    f2: FFunction,
    P1: Density,
    Q1: Density,
    i: float,
    n: int,
    s: MeasureSpace,
    P2: Optional[Density] = None,
    Q2: Optional[Density] = None,
) -> InequalityVerdict:
    """The six endpoint corollaries of the interpolation bound.

    Pair cases (concave_band, convex_concave_high, concave_convex_low)
    need the second pair (P2, Q2); reference cases integrate against mu
    itself and need a probability space.
    """
    if case not in _COROLLARY_CASES:
        raise RangeMismatch(f"unknown corollary case {case!r}")
    bound = f1.value_at_one ** i * f2.value_at_one ** (n - i)

    if case in ("concave_band", "convex_concave_high", "concave_convex_low"):
        if P2 is None or Q2 is None:
            raise RangeMismatch("pair corollaries need the second density pair")
        if case == "concave_band":
            if not (f1.is_concave and f2.is_concave):
                raise TagMismatch("concave_band needs two concave generators")
            if not (0 <= i <= n):
                raise RangeMismatch("concave_band needs 0 <= i <= n")
            relation = "le"
        elif case == "convex_concave_high":
            if not (f1.is_convex and f2.is_concave):
                raise TagMismatch("needs f1 convex and f2 concave")
            if i < n:
                raise RangeMismatch("needs k >= n")
            relation = "ge"
        else:
            if not (f1.is_concave and f2.is_convex):
                raise TagMismatch("needs f1 concave and f2 convex")
            if i > 0:
                raise RangeMismatch("needs k <= 0")
            relation = "ge"
        value = ith_mixed(f1, f2, P1, Q1, P2, Q2, i, n, s).value
        v = _verdict(value ** n, bound, relation)
        if v.equality and f1.is_strict and f2.is_strict:
            stacks = np.stack([P1.values, Q1.values, P2.values, Q2.values])
            all_equal = bool(
                np.all(np.abs(stacks - stacks[0]) <= PROP_TOL * (1 + np.abs(stacks[0])))
            )
            v = InequalityVerdict(
                v.lhs, v.rhs, v.slack, v.satisfied, v.equality,
                diagnosis={"all_densities_equal": all_equal},
            )
        return v

    # reference cases: P2 = Q2 = mu with mu a probability measure
    if case == "reference_concave":
        if not f1.is_concave:
            raise TagMismatch("reference_concave needs f1 concave")
        if not (0 <= i <= n):
            raise RangeMismatch("reference_concave needs 0 <= i <= n")
        relation = "le"
    elif case == "reference_convex_high":
        if not f1.is_convex:
            raise TagMismatch("reference_convex_high needs f1 convex")
        if i < n:
            raise RangeMismatch("needs k >= n")
        relation = "ge"
    else:
        if not f1.is_concave:
            raise TagMismatch("reference_concave_low needs f1 concave")
        if i > 0:
            raise RangeMismatch("needs k <= 0")
        relation = "ge"
    value = ith_mixed_reference(f1, P1, Q1, i, f2, s, n).value
    v = _verdict(value ** n, bound, relation)
    if v.equality:
        if f1.is_strict:
            unit = np.ones(s.size)
            eq_mu = bool(
                np.all(np.abs(P1.values - unit) <= PROP_TOL)
                and np.all(np.abs(Q1.values - unit) <= PROP_TOL)
            )
            v = InequalityVerdict(
                v.lhs, v.rhs, v.slack, v.satisfied, v.equality,
                diagnosis={"pair_equals_reference": eq_mu},
            )
        elif f1.convexity_tag == "linear":
            a, b = f1.a, f1.b
            combo = a * P1.values + b * Q1.values
            ok = bool(np.all(np.abs(combo - (a + b)) <= PROP_TOL * (1 + a + b)))
            v = InequalityVerdict(
                v.lhs, v.rhs, v.slack, v.satisfied, v.equality,
                diagnosis={"linear_combination_constant": ok},
            )
    return v
