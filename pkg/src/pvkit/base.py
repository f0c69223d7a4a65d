"""The base difference field k = C(x) with its substitution endomorphism.

C is a cyclotomic field Q(zeta_N), optionally extended by transcendental
constants t1, t2, ... (a rational-function tower). The endomorphism is either
the unit shift x -> x+1 or a q-dilation x -> q*x with q not a root of unity;
both fix C pointwise and are invertible.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import lcm

from .arith.cyclo import CycloField, CycloNum, bounded_multiplicative_order
from .arith.poly import Poly, RatFunc, RatFuncField, format_ratfunc
from .errors import RootOfUnityScale, ZeroScale


@dataclass(frozen=True)
class SigmaSpec:
    """Which endomorphism acts on k: the shift or a q-dilation."""

    kind: str  # "shift" | "qshift"
    q: CycloNum | None = None

    @classmethod
    def shift(cls) -> "SigmaSpec":
        return cls("shift", None)

    @classmethod
    def qshift(cls, q: CycloNum) -> "SigmaSpec":
        if not isinstance(q, CycloNum):
            q = CycloNum.from_rational(q)
        if q.is_zero():
            raise ZeroScale("q-dilation with q = 0 is not invertible")
        # every root of unity in Q(zeta_N) has order dividing lcm(2, N),
        # so one exact power decides the question
        order_cap = lcm(2, q.conductor)
        if bounded_multiplicative_order(q, order_cap) is not None:
            raise RootOfUnityScale(
                "q-dilation with a root of unity collapses to finitely many translates")
        return cls("qshift", q)

    def __post_init__(self):
        if self.kind not in ("shift", "qshift"):
            raise ValueError(f"unknown sigma kind {self.kind!r}")

    def describe(self) -> dict:
        if self.kind == "shift":
            return {"variant": "shift"}
        return {"variant": "qshift", "q": str(self.q)}


@dataclass(frozen=True, eq=False)
class DiffField:
    """k = C(x) together with a SigmaSpec; the workhorse context object."""

    sigma: SigmaSpec
    constants: object = dc_field(default_factory=lambda: CycloField(1))
    var: str = "x"

    @property
    def constants_conductor(self) -> int:
        inner = self.constants
        while isinstance(inner, RatFuncField):
            inner = inner.inner
        return inner.conductor

    @property
    def k_field(self) -> RatFuncField:
        return RatFuncField(self.constants, self.var)

    def x(self) -> RatFunc:
        return RatFunc.x(self.constants)

    def coerce(self, value) -> RatFunc:
        return self.k_field.coerce(value)

    def one(self) -> RatFunc:
        return self.k_field.one

    def zero(self) -> RatFunc:
        return self.k_field.zero

    def q_in_constants(self) -> CycloNum:
        q = self.sigma.q
        if isinstance(self.constants, CycloField):
            return self.constants.coerce(q)
        return q

    def format(self, f: RatFunc) -> str:
        return format_ratfunc(f, self.var)

    def __eq__(self, other):
        return (isinstance(other, DiffField)
                and self.sigma == other.sigma
                and self.constants == other.constants
                and self.var == other.var)

    __hash__ = None


def apply_sigma(k: DiffField, f: RatFunc) -> RatFunc:
    """sigma(f), in reduced canonical form."""
    return apply_sigma_power(k, f, 1)


def apply_sigma_power(k: DiffField, f: RatFunc, j: int) -> RatFunc:
    """sigma^j(f); j may be negative since sigma is invertible."""
    if j == 0:
        return f
    if k.sigma.kind == "shift":
        c = f.field.coerce(j)
        return RatFunc(f.num.shift_arg(c), f.den.shift_arg(c))
    q = k.q_in_constants()
    scale = q ** j
    return RatFunc(f.num.scale_arg(scale), f.den.scale_arg(scale))


def is_constant(k: DiffField, f: RatFunc) -> bool:
    """True iff sigma(f) = f; in reduced form that is zero x-degree."""
    return f.num.degree() <= 0 and f.den.degree() == 0


def lift_ratfunc(f: RatFunc, target_inner) -> RatFunc:
    """Rebuild a rational function coefficient-wise over a larger constants
    field (conductor growth or a transcendental tower)."""
    num = Poly(target_inner, [target_inner.coerce(c) for c in f.num.coeffs])
    den = Poly(target_inner, [target_inner.coerce(c) for c in f.den.coeffs])
    return RatFunc(num, den)
