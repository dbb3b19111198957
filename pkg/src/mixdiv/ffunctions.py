"""Divergence generators f: (0, inf) -> [0, inf).

Each generator is a closed parametric variant so that the *-adjoint
f*(t) = t f(1/t), the value f(1), and the endpoint limits are exact.
Supported variants: total variation |t-1|, [t ln t]_+, powers t^alpha,
nonnegative linear a t + b, nonnegative scalings, and a generic adjoint
wrapper for variants without a closed-form adjoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, IndeterminateValue, InvalidParameter

CONVEX = "convex"
STRICTLY_CONVEX = "strictly_convex"
CONCAVE = "concave"
STRICTLY_CONCAVE = "strictly_concave"
LINEAR = "linear"

_CONVEX_TAGS = {CONVEX, STRICTLY_CONVEX, LINEAR}
_CONCAVE_TAGS = {CONCAVE, STRICTLY_CONCAVE, LINEAR}


@dataclass(frozen=True)
class FFunction:
    """A tagged generator with exact adjoint bookkeeping.

    kind is one of "tv", "klplus", "power", "linear", "scaled", "adjoint".
    """

    kind: str
    alpha: float = 0.0
    a: float = 0.0
    b: float = 0.0
    lam: float = 1.0
    inner: Optional["FFunction"] = None

    # -- evaluation ---------------------------------------------------------

    def __call__(self, t):
        """Evaluate on a positive scalar or array; no domain checks."""
        t = np.asarray(t, dtype=float)
        if self.kind == "tv":
            out = np.abs(t - 1.0)
        elif self.kind == "klplus":
            out = np.maximum(t * np.log(t), 0.0)
        elif self.kind == "power":
            out = t ** self.alpha
        elif self.kind == "linear":
            out = self.a * t + self.b
        elif self.kind == "scaled":
            out = self.lam * self.inner(t)
        elif self.kind == "adjoint":
            out = t * self.inner(1.0 / t)
        else:  # pragma: no cover
            raise InvalidParameter(f"unknown kind {self.kind!r}")
        return out if out.ndim else float(out)

    # -- derived attributes -------------------------------------------------

    @property
    def convexity_tag(self) -> str:
        if self.kind in ("tv", "klplus"):
            return CONVEX
        if self.kind == "power":
            if self.alpha in (0.0, 1.0):
                return LINEAR
            if 0.0 < self.alpha < 1.0:
                return STRICTLY_CONCAVE
            return STRICTLY_CONVEX
        if self.kind == "linear":
            return LINEAR
        if self.kind == "scaled":
            return LINEAR if self.lam == 0.0 else self.inner.convexity_tag
        if self.kind == "adjoint":
            return self.inner.convexity_tag
        raise InvalidParameter(self.kind)

    @property
    def is_convex(self) -> bool:
        return self.convexity_tag in _CONVEX_TAGS

    @property
    def is_concave(self) -> bool:
        return self.convexity_tag in _CONCAVE_TAGS

    @property
    def is_strict(self) -> bool:
        return self.convexity_tag in (STRICTLY_CONVEX, STRICTLY_CONCAVE)

    @property
    def value_at_one(self) -> float:
        if self.kind == "tv":
            return 0.0
        if self.kind == "klplus":
            return 0.0
        if self.kind == "power":
            return 1.0
        if self.kind == "linear":
            return self.a + self.b
        if self.kind == "scaled":
            return self.lam * self.inner.value_at_one
        if self.kind == "adjoint":
            return self.inner.value_at_one
        raise InvalidParameter(self.kind)

    @property
    def limit_at_zero(self) -> float:
        """lim_{t->0+} f(t); may be math.inf."""
        if self.kind == "tv":
            return 1.0
        if self.kind == "klplus":
            return 0.0
        if self.kind == "power":
            if self.alpha > 0:
                return 0.0
            if self.alpha == 0:
                return 1.0
            return math.inf
        if self.kind == "linear":
            return self.b
        if self.kind == "scaled":
            lim = self.inner.limit_at_zero
            return 0.0 if self.lam == 0.0 else self.lam * lim
        if self.kind == "adjoint":
            return self.inner.slope_at_infinity
        raise InvalidParameter(self.kind)

    @property
    def slope_at_infinity(self) -> float:
        """lim_{t->inf} f(t)/t; may be math.inf."""
        if self.kind == "tv":
            return 1.0
        if self.kind == "klplus":
            return math.inf
        if self.kind == "power":
            if self.alpha > 1:
                return math.inf
            if self.alpha == 1:
                return 1.0
            return 0.0
        if self.kind == "linear":
            return self.a
        if self.kind == "scaled":
            s = self.inner.slope_at_infinity
            return 0.0 if self.lam == 0.0 else self.lam * s
        if self.kind == "adjoint":
            return self.inner.limit_at_zero
        raise InvalidParameter(self.kind)

    def describe(self) -> dict:
        """JSON-serializable spec of this generator."""
        if self.kind == "tv":
            return {"kind": "tv"}
        if self.kind == "klplus":
            return {"kind": "klplus"}
        if self.kind == "power":
            return {"kind": "power", "alpha": self.alpha}
        if self.kind == "linear":
            return {"kind": "linear", "a": self.a, "b": self.b}
        if self.kind == "scaled":
            return {"kind": "scaled", "lambda": self.lam, "inner": self.inner.describe()}
        if self.kind == "adjoint":
            return {"kind": "adjoint", "inner": self.inner.describe()}
        raise InvalidParameter(self.kind)


def make_builtin(kind: str, **params) -> FFunction:
    """Construct a validated builtin generator.

    kind: "tv" | "klplus" | "power" (alpha) | "linear" (a, b)
          | "scaled" (lam, inner) | "adjoint" (inner)
    """
    if kind == "tv":
        return FFunction("tv")
    if kind == "klplus":
        return FFunction("klplus")
    if kind == "power":
        alpha = float(params["alpha"])
        if not math.isfinite(alpha):
            raise InvalidParameter("power exponent must be finite")
        return FFunction("power", alpha=alpha)
    if kind == "linear":
        a = float(params.get("a", 0.0))
        b = float(params.get("b", 0.0))
        if a < 0 or b < 0 or not (math.isfinite(a) and math.isfinite(b)):
            raise InvalidParameter(
                "linear generator needs a >= 0 and b >= 0 to stay nonnegative on (0, inf)"
            )
        return FFunction("linear", a=a, b=b)
    if kind == "scaled":
        lam = float(params["lam"])
        inner = params["inner"]
        if lam < 0 or not math.isfinite(lam):
            raise InvalidParameter("scale factor must be a finite nonnegative real")
        return FFunction("scaled", lam=lam, inner=inner)
    if kind == "adjoint":
        return adjoint(params["inner"])
    raise InvalidParameter(f"unknown generator kind {kind!r}")


def eval_f(f: FFunction, t: float) -> float:
    """Evaluate f at a strictly positive finite point."""
    if not (isinstance(t, (int, float)) and math.isfinite(t) and t > 0):
        raise DomainError(f"generator argument must be a finite positive real, got {t!r}")
    return float(f(float(t)))


def adjoint(f: FFunction) -> FFunction:
    """The *-adjoint f*(t) = t f(1/t), in closed form where available."""
    if f.kind == "tv":
        return f
    if f.kind == "power":
        return FFunction("power", alpha=1.0 - f.alpha)
    if f.kind == "linear":
        return FFunction("linear", a=f.b, b=f.a)
    if f.kind == "scaled":
        return FFunction("scaled", lam=f.lam, inner=adjoint(f.inner))
    if f.kind == "adjoint":
        return f.inner
    return FFunction("adjoint", inner=f)


def weighted_term(f: FFunction, p: float, q: float) -> float:
    """q * f(p/q) under the 0*inf = 0 convention.

    q = 0: value is p * slope_at_infinity (0 if p = 0);
    p = 0, q > 0: value is q * limit_at_zero.
    A nonzero cofactor against an infinite limit is an error.
    """
    if p < 0 or q < 0:
        raise DomainError("weighted_term needs nonnegative arguments")
    if q == 0.0:
        if p == 0.0:
            return 0.0
        s = f.slope_at_infinity
        if not math.isfinite(s):
            raise IndeterminateValue("p * f'(inf) with infinite slope and p > 0")
        return p * s
    if p == 0.0:
        lim = f.limit_at_zero
        if not math.isfinite(lim):
            raise IndeterminateValue("q * f(0+) with infinite limit and q > 0")
        return q * lim
    return q * float(f(p / q))


def weighted_terms(f: FFunction, p: np.ndarray, q: np.ndarray):
    """Vectorized weighted_term for strictly positive arrays.

    Falls back to the scalar path (with its conventions) when any entry
    is zero. Returns (values, convention_hits).
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.all(p > 0) and np.all(q > 0):
        return q * np.asarray(f(p / q), dtype=float), 0
    vals = np.empty(p.shape)
    hits = 0
    for j in range(p.size):
        vals[j] = weighted_term(f, float(p[j]), float(q[j]))
        if p[j] == 0.0 or q[j] == 0.0:
            hits += 1
    return vals, hits


def from_spec(spec: dict) -> FFunction:
    """Parse the JSON generator spec."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InvalidParameter(f"bad generator spec: {spec!r}")
    kind = spec["kind"]
    if kind == "power":
        return make_builtin("power", alpha=spec["alpha"])
    if kind == "linear":
        return make_builtin("linear", a=spec.get("a", 0.0), b=spec.get("b", 0.0))
    if kind == "scaled":
        return make_builtin("scaled", lam=spec["lambda"], inner=from_spec(spec["inner"]))
    if kind == "adjoint":
        return make_builtin("adjoint", inner=from_spec(spec["inner"]))
    return make_builtin(kind)


class FVector(tuple):
    """Ordered vector of generators."""

    def __new__(cls, entries):
        entries = tuple(entries)
        if len(entries) < 1:
            raise InvalidParameter("an FVector needs at least one entry")
        return super().__new__(cls, entries)

    def adjoint(self) -> "FVector":
        return FVector(adjoint(f) for f in self)
