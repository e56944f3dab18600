"""Adomian polynomials for polynomial nonlinearities in U and its derivatives."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .exprcore import ExpPoly, QuadCoeff, as_fraction


@dataclass(frozen=True)
class Monomial:
    scalar: Fraction | QuadCoeff
    factors: tuple[int, ...]  # derivative orders, sorted

    def __post_init__(self):
        if not self.factors:
            raise ValueError("a monomial needs at least one factor")
        if any(o < 0 for o in self.factors):
            raise ValueError("derivative orders must be nonnegative")
        object.__setattr__(self, "factors", tuple(sorted(self.factors)))

    @property
    def degree(self) -> int:
        return len(self.factors)


@dataclass(frozen=True)
class NonlinearitySpec:
    """N[U] = sum of scalar * prod U^(d) over monomials."""

    monomials: tuple[Monomial, ...]
    max_order: int = 4

    def __post_init__(self):
        merged: dict[tuple[int, ...], object] = {}
        for mono in self.monomials:
            if not isinstance(mono, Monomial):
                mono = Monomial(mono[0], tuple(mono[1]))
            if max(mono.factors) > self.max_order:
                raise ValueError(
                    f"derivative order {max(mono.factors)} exceeds operator order {self.max_order}")
            prev = merged.get(mono.factors)
            merged[mono.factors] = mono.scalar if prev is None else prev + mono.scalar
        monos = tuple(Monomial(c, f) for f, c in sorted(merged.items()) if c != 0)
        object.__setattr__(self, "monomials", monos)

    @classmethod
    def from_terms(cls, terms, max_order: int = 4) -> NonlinearitySpec:
        return cls(tuple(Monomial(c if isinstance(c, QuadCoeff) else as_fraction(c), tuple(f))
                         for c, f in terms), max_order)

    @classmethod
    def parse(cls, text: str, params: Mapping[str, object] | None = None,
              max_order: int = 4) -> NonlinearitySpec:
        return cls.from_terms(_Parser(text, params or {}).parse(), max_order)

    @property
    def orders(self) -> set[int]:
        return {o for m in self.monomials for o in m.factors}

    def apply(self, u: ExpPoly) -> ExpPoly:
        """N[u] computed directly."""
        derivs = {o: u.differentiate(o) for o in self.orders}
        out = ExpPoly.zero(u.s)
        for mono in self.monomials:
            term = ExpPoly.const(1, u.s)
            for o in mono.factors:
                term = term * derivs[o]
            out = out + term.scale(_scalar(mono.scalar, u.s))
        return out

    def __str__(self) -> str:
        parts = []
        for mono in self.monomials:
            parts.append(f"{mono.scalar}*" + "*".join(f"U{o}" for o in mono.factors))
        return " + ".join(parts) if parts else "0"


def _scalar(c, s) -> QuadCoeff:
    if isinstance(c, QuadCoeff):
        return c
    return QuadCoeff(c, 0, s)


# ---------------------------------------------------------------------------
# text form: sums/products of Ud (d-th derivative), numbers and named params.
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?(?:[eE][-+]?\d+)?|\.\d+)|([A-Za-z_]\w*)|(\S))")


class _Parser:
    def __init__(self, text: str, params: Mapping[str, object]):
        self.tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                break
            num, name, op = m.groups()
            if num is not None:
                self.tokens.append(("num", num))
            elif name is not None:
                self.tokens.append(("name", name))
            elif op is not None:
                self.tokens.append(("op", op))
            pos = m.end()
        self.i = 0
        self.params = {k: as_fraction(v) for k, v in params.items()}

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if (kind, val) != ("op", op):
            raise ValueError(f"expected {op!r}, got {val!r}")

    def parse(self):
        poly = self.expr()
        if self.i != len(self.tokens):
            raise ValueError(f"unexpected token {self.peek()[1]!r}")
        if () in poly:
            raise ValueError("nonlinearity must not contain a constant term")
        return [(c, f) for f, c in poly.items()]

    # polynomials are dicts: sorted tuple of derivative orders -> Fraction
    def expr(self):
        acc = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            sign = self.take()[1]
            rhs = self.term()
            acc = _padd(acc, rhs if sign == "+" else _pscale(rhs, -1))
        return acc

    def term(self):
        acc = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                acc = _pmul(acc, rhs)
            else:
                if set(rhs) - {()}:
                    raise ValueError("division is only allowed by constants")
                acc = _pscale(acc, 1 / rhs[()])
        return acc

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return _pscale(self.unary(), -1)
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num" or not val.isdigit():
                raise ValueError("exponent must be a nonnegative integer")
            out = {(): Fraction(1)}
            for _ in range(int(val)):
                out = _pmul(out, base)
            return out
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return {(): Fraction(val)}
        if kind == "name":
            m = re.fullmatch(r"U(\d+)", val)
            if m:
                return {(int(m.group(1)),): Fraction(1)}
            if val not in self.params:
                raise ValueError(f"unknown parameter {val!r}")
            return {(): self.params[val]}
        if (kind, val) == ("op", "("):
            inner = self.expr()
            self.expect(")")
            return inner
        raise ValueError(f"unexpected token {val!r}")


def _padd(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v != 0}


def _pscale(a, c):
    return {k: v * c for k, v in a.items() if v * c != 0}


def _pmul(a, b):
    out: dict = {}
    for (k1, v1), (k2, v2) in product(a.items(), b.items()):
        k = tuple(sorted(k1 + k2))
        out[k] = out.get(k, 0) + v1 * v2
    return {k: v for k, v in out.items() if v != 0}


# ---------------------------------------------------------------------------


@dataclass
class AdomianSeries:
    polys: list[ExpPoly]
    source: str = "definition"

    def __getitem__(self, k: int) -> ExpPoly:
        return self.polys[k]

    def __len__(self) -> int:
        return len(self.polys)


def _check(partials: Sequence[ExpPoly], k_max: int):
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    if len(partials) < k_max + 1:
        raise ValueError(f"need {k_max + 1} partial solutions, got {len(partials)}")
    ss = {p.s for p in partials[:k_max + 1]}
    if len(ss) > 1:
        raise ValueError("partials live in different coefficient fields")
    return partials[0].s


def _derivative_table(spec, partials, k_max):
    orders = spec.orders
    return [{o: partials[l].differentiate(o) for o in orders} for l in range(k_max + 1)]


def adomian_via_definition(spec: NonlinearitySpec, partials: Sequence[ExpPoly],
                           k_max: int) -> AdomianSeries:
    """A_k = (1/k!) d^k/de^k N(sum_l U_l e^l) at e = 0, by formal series in e."""
    s = _check(partials, k_max)
    table = _derivative_table(spec, partials, k_max)
    # N(sum U_l e^l) truncated beyond e^k_max, as a list of ExpPoly coefficients
    total = [ExpPoly.zero(s) for _ in range(k_max + 1)]
    for mono in spec.monomials:
        series = [ExpPoly.const(1, s)] + [ExpPoly.zero(s)] * k_max
        for o in mono.factors:
            factor = [table[l][o] for l in range(k_max + 1)]
            series = [sum((series[i] * factor[d - i] for i in range(d + 1)), ExpPoly.zero(s))
                      for d in range(k_max + 1)]
        c = _scalar(mono.scalar, s)
        total = [t + x.scale(c) for t, x in zip(total, series)]

    polys = []
    for k in range(k_max + 1):
        # k-fold formal derivative in e, then evaluate at e = 0
        coeffs = total
        for _ in range(k):
            coeffs = [coeffs[d].scale(d) for d in range(1, len(coeffs))]
        polys.append(coeffs[0].scale(Fraction(1, math.factorial(k))))
    return AdomianSeries(polys, "definition")


def adomian_via_convolution(spec: NonlinearitySpec, partials: Sequence[ExpPoly],
                            k_max: int) -> AdomianSeries:
    """Cauchy-sum form: A_k = sum over index tuples adding to k of products of factors."""
    s = _check(partials, k_max)
    for mono in spec.monomials:
        if mono.degree > 3:
            raise NotImplementedError(f"monomial of degree {mono.degree} is not supported")
    table = _derivative_table(spec, partials, k_max)
    polys = []
    for k in range(k_max + 1):
        acc = ExpPoly.zero(s)
        for mono in spec.monomials:
            f = mono.factors
            if len(f) == 1:
                term = table[k][f[0]]
            elif len(f) == 2:
                term = ExpPoly.zero(s)
                for i in range(k + 1):
                    term = term + table[i][f[0]] * table[k - i][f[1]]
            else:
                term = ExpPoly.zero(s)
                for i in range(k + 1):
                    for j in range(k + 1 - i):
                        term = term + table[i][f[0]] * table[j][f[1]] * table[k - i - j][f[2]]
            acc = acc + term.scale(_scalar(mono.scalar, s))
        polys.append(acc)
    return AdomianSeries(polys, "convolution")


def verify_adomian_sum(spec: NonlinearitySpec, partials: Sequence[ExpPoly], k_max: int,
                       xi_samples: Sequence[float]) -> float:
    """max |sum_{k<=k_max} A_k - N[sum_{k<=k_max} U_k]| over the samples."""
    s = _check(partials, k_max)
    series = adomian_via_definition(spec, partials, k_max)
    u = sum(partials[:k_max + 1], ExpPoly.zero(s))
    diff = spec.apply(u) - sum(series.polys, ExpPoly.zero(s))
    if diff.is_zero():
        return 0.0
    return max(abs(diff.evaluate(x)) for x in xi_samples)


def thermophoretic_nonlinearity(a1) -> NonlinearitySpec:
    """-a1 * (U'^2 + U U'') for the reduced thermophoretic ODE."""
    a1 = as_fraction(a1)
    return NonlinearitySpec.from_terms([(-a1, (1, 1)), (-a1, (0, 2))])


def shifted_polynomial_nonlinearity(a1, a2, shift) -> NonlinearitySpec:
    """-(a2/a1^2) V'' - (1/a1) (V'^2 + (shift + V) V'') for the D^4 splitting."""
    a1, a2, shift = as_fraction(a1), as_fraction(a2), as_fraction(shift)
    return NonlinearitySpec.from_terms([
        (-a2 / a1 ** 2 - shift / a1, (2,)),
        (-1 / a1, (1, 1)),
        (-1 / a1, (0, 2)),
    ])
