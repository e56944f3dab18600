"""Variation of parameters on the exp-poly algebra and the iterative schemes built on it.

The linear operator is ``P0 * y'''' + P2 * y''`` with constant coefficients.  Exponential
mode (``a2 < 0``) uses the fundamental set ``{e^-lam xi, e^lam xi, xi, 1}`` with
``lam**2 = -a2/a1**2``; polynomial mode is the bare ``D^4`` with ``{xi^3, xi^2, xi, 1}``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .adomian import (NonlinearitySpec, adomian_via_convolution,
                      shifted_polynomial_nonlinearity, thermophoretic_nonlinearity)
from .exprcore import ExpPoly, QuadCoeff, as_fraction, determinant

EXPONENTIAL = "exponential"
POLYNOMIAL = "polynomial"
P_HALF = "p-half"
P_ONE = "p-one"
ORDER = 4


class ResonanceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ProblemSpec:
    a1: Fraction
    a2: Fraction
    nonlinearity: NonlinearitySpec
    mode: str = EXPONENTIAL
    shift: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a1", as_fraction(self.a1))
        object.__setattr__(self, "a2", as_fraction(self.a2))
        object.__setattr__(self, "shift", as_fraction(self.shift))
        if self.a1 <= 0:
            raise ValueError("a1 must be positive")
        if self.mode == EXPONENTIAL:
            if self.a2 > 0:
                raise ValueError("a2 > 0 gives a trigonometric fundamental set; "
                                 "use the closed-form families instead")
            if self.a2 == 0:
                raise ValueError("a2 = 0 degenerates the exponential fundamental set; "
                                 "use polynomial mode")
        elif self.mode != POLYNOMIAL:
            raise ValueError(f"unknown mode {self.mode!r}")

    @classmethod
    def thermophoretic(cls, a1, a2) -> ProblemSpec:
        return cls(a1, a2, thermophoretic_nonlinearity(a1), EXPONENTIAL)

    @classmethod
    def shifted_polynomial(cls, a1, a2, shift=0) -> ProblemSpec:
        """V'''' = N[V] for V = U - shift, with the a2 term moved into N."""
        return cls(a1, a2, shifted_polynomial_nonlinearity(a1, a2, shift), POLYNOMIAL, shift)

    @property
    def s(self) -> Fraction:
        return -self.a2 / self.a1 ** 2 if self.mode == EXPONENTIAL else Fraction(0)

    @property
    def P0(self) -> QuadCoeff:
        return QuadCoeff(self.a1 ** 2 if self.mode == EXPONENTIAL else 1, 0, self.s)

    @property
    def P2(self) -> QuadCoeff:
        return QuadCoeff(self.a2 if self.mode == EXPONENTIAL else 0, 0, self.s)

    def to_dict(self) -> dict:
        return {"a1": str(self.a1), "a2": str(self.a2), "mode": self.mode,
                "shift": str(self.shift), "nonlinearity": str(self.nonlinearity)}


@dataclass(frozen=True)
class FundamentalSet:
    solutions: tuple[ExpPoly, ...]
    wronskian: ExpPoly
    minors: tuple[ExpPoly, ...]

    @property
    def n(self) -> int:
        return len(self.solutions)


@dataclass
class SeriesSolution:
    iterates: list[ExpPoly]
    scheme: str
    seed: dict
    spec: ProblemSpec | None = None
    resonances: dict[int, ExpPoly] = field(default_factory=dict)

    @property
    def offset(self) -> int:
        return 1 if self.scheme == P_HALF else 2

    def partial_sum(self, n: int | None = None) -> ExpPoly:
        its = self.iterates if n is None else self.iterates[:n + 1]
        return sum(its[1:], its[0])

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "seed": self.seed,
            "spec": self.spec.to_dict() if self.spec else None,
            "iterates": [u.to_dict() for u in self.iterates],
            "resonances": {str(k): v.to_dict() for k, v in sorted(self.resonances.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> SeriesSolution:
        spec = None
        sd = d.get("spec")
        if sd:
            a1, a2, shift = Fraction(sd["a1"]), Fraction(sd["a2"]), Fraction(sd["shift"])
            spec = (ProblemSpec.thermophoretic(a1, a2) if sd["mode"] == EXPONENTIAL
                    else ProblemSpec.shifted_polynomial(a1, a2, shift))
        return cls([ExpPoly.from_dict(u) for u in d["iterates"]], d["scheme"], d["seed"], spec,
                   {int(k): ExpPoly.from_dict(v) for k, v in d.get("resonances", {}).items()})


def apply_operator(spec: ProblemSpec, f: ExpPoly) -> ExpPoly:
    if spec.mode == POLYNOMIAL:
        return f.differentiate(4)
    return f.differentiate(4).scale(spec.P0) + f.differentiate(2).scale(spec.P2)


def fundamental_set(spec: ProblemSpec) -> FundamentalSet:
    s = spec.s
    if spec.mode == EXPONENTIAL:
        sols = (ExpPoly.monomial(1, 0, -1, s), ExpPoly.monomial(1, 0, 1, s),
                ExpPoly.xi(s), ExpPoly.const(1, s))
    else:
        sols = tuple(ExpPoly.monomial(1, m, 0, s) for m in (3, 2, 1, 0))
    rows = [[y.differentiate(r) for y in sols] for r in range(ORDER)]
    w = determinant(rows)
    if w.is_zero():
        raise ValueError("fundamental set is linearly dependent")
    minors = tuple(determinant([row[:j] + row[j + 1:] for row in rows[:-1]])
                   for j in range(ORDER))
    return FundamentalSet(sols, w, minors)


def particular_solution(fs: FundamentalSet, forcing: ExpPoly, P0: QuadCoeff) -> ExpPoly:
    """sum_j (-1)^(n-j) y_j * int F W_j / (P0 W), integration constants zero."""
    if not fs.wronskian.is_monomial():
        raise ValueError("Wronskian must be a single term to divide exactly")
    denom = fs.wronskian.scale(P0)
    n = fs.n
    out = ExpPoly.zero(forcing.s)
    if forcing.is_zero():
        return out
    for j, (y, wj) in enumerate(zip(fs.solutions, fs.minors), start=1):
        u = (forcing * wj).divide_monomial(denom).antiderivative()
        term = y * u
        out = out + (term if (n - j) % 2 == 0 else -term)
    return out


def fundamental_content(fs: FundamentalSet, f: ExpPoly) -> ExpPoly:
    """Part of f made of terms that are themselves fundamental solutions."""
    keys = {next(iter(y.terms)) for y in fs.solutions}
    return ExpPoly({k: c for k, c in f.terms.items() if k in keys}, f.s)


def seed_from_constants(fs: FundamentalSet, constants: Sequence) -> ExpPoly:
    if len(constants) != fs.n:
        raise ValueError(f"need {fs.n} constants")
    s = fs.wronskian.s
    out = ExpPoly.zero(s)
    for c, y in zip(constants, fs.solutions):
        out = out + y.scale(QuadCoeff(as_fraction(c), 0, s))
    return out


def decaying_seed(spec: ProblemSpec, c, toward: str = "+inf") -> ExpPoly:
    """Seed vanishing at +inf (keeps e^-lam xi) or -inf (keeps e^lam xi)."""
    if toward not in ("+inf", "-inf"):
        raise ValueError("toward must be '+inf' or '-inf'")
    fs = fundamental_set(spec)
    consts = [c, 0, 0, 0] if toward == "+inf" else [0, c, 0, 0]
    return seed_from_constants(fs, consts)


def initial_value_seed(v0, v1) -> ExpPoly:
    """V0 = v1 xi^2 + v0."""
    return ExpPoly.poly([as_fraction(v0), 0, as_fraction(v1)])


def run_recursion(spec: ProblemSpec, seed: Sequence[ExpPoly], k_max: int = 8,
                  seed_info: dict | None = None) -> SeriesSolution:
    if len(seed) not in (1, 2):
        raise ValueError("seed must hold U0 (p-half scheme) or U0, U1 (p-one scheme)")
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    offset = len(seed)
    scheme = P_HALF if offset == 1 else P_ONE
    fs = fundamental_set(spec)
    for i, u in enumerate(seed):
        if u.s != spec.s:
            raise ValueError(f"seed[{i}] built over lam^2={u.s}, problem needs {spec.s}")
        if not apply_operator(spec, u).is_zero():
            raise ValueError(f"seed[{i}] is not annihilated by the linear operator")

    iterates = list(seed[:k_max + 1])
    resonances: dict[int, ExpPoly] = {}
    for k in range(offset, k_max + 1):
        j = k - offset
        forcing = adomian_via_convolution(spec.nonlinearity, iterates, j).polys[j]
        u = particular_solution(fs, forcing, spec.P0)
        res = fundamental_content(fs, u)
        if res:
            # kept in the iterate, not discarded; flagged so callers can decide
            resonances[k] = res
            warnings.warn(f"iterate {k} contains fundamental-set terms", ResonanceWarning,
                          stacklevel=2)
        iterates.append(u)
    info = {"scheme": scheme}
    info.update(seed_info or {})
    return SeriesSolution(iterates, scheme, info, spec, resonances)
