"""Exact exponential-polynomial algebra.

Every object here is a finite sum of terms ``c * xi**m * exp(n*lam*xi)`` where
``m >= 0`` and ``n`` are integers and ``c`` lives in the quadratic extension
Q(lam), ``lam**2 = s`` with ``s`` a nonnegative rational.  ``s == 0`` selects
the pure polynomial mode (no exponentials, no irrational part).
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]


class ContextError(ValueError):
    """Operands built over different extensions lam**2 = s."""


def as_fraction(x) -> Fraction:
    """Exact conversion. Floats go through their shortest repr, so 0.3 -> 3/10."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"cannot represent {x!r} exactly")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class QuadCoeff:
    """Element p + q*lam of Q(lam) with lam**2 = s."""

    __slots__ = ("p", "q", "s")

    def __init__(self, p: Scalar = 0, q: Scalar = 0, s: Scalar = 0) -> None:
        p, q, s = as_fraction(p), as_fraction(q), as_fraction(s)
        if s < 0:
            raise ValueError("lam**2 must be nonnegative")
        if s == 0 and q != 0:
            raise ValueError("irrational part requires s > 0")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "s", s)

    def __setattr__(self, name, value):
        raise AttributeError("QuadCoeff is immutable")

    @classmethod
    def lam(cls, s: Scalar) -> QuadCoeff:
        return cls(0, 1, s)

    def _coerce(self, other) -> QuadCoeff:
        if isinstance(other, QuadCoeff):
            if other.s != self.s:
                raise ContextError(f"lam**2 mismatch: {self.s} vs {other.s}")
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return QuadCoeff(other, 0, self.s)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadCoeff(self.p + o.p, self.q + o.q, self.s)

    __radd__ = __add__

    def __neg__(self) -> QuadCoeff:
        return QuadCoeff(-self.p, -self.q, self.s)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadCoeff(self.p - o.p, self.q - o.q, self.s)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadCoeff(self.p * o.p + self.q * o.q * self.s,
                         self.p * o.q + self.q * o.p, self.s)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.p * self.p - self.q * self.q * self.s

    def is_invertible(self) -> bool:
        return self.norm() != 0

    def inverse(self) -> QuadCoeff:
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError(f"{self} is not invertible in Q(sqrt({self.s}))")
        return QuadCoeff(self.p / nrm, -self.q / nrm, self.s)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return QuadCoeff(as_fraction(other), 0, self.s) * self.inverse()

    def __pow__(self, k: int) -> QuadCoeff:
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadCoeff(1, 0, self.s)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self) -> bool:
        return self.p != 0 or self.q != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadCoeff):
            return (self.p, self.q, self.s) == (other.p, other.q, other.s)
        if isinstance(other, (int, Fraction, Rational)):
            return self.q == 0 and self.p == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.p, self.q, self.s))

    def is_rational(self) -> bool:
        return self.q == 0

    def value(self, lam_value: float) -> float:
        return float(self.p) + float(self.q) * lam_value

    def __float__(self) -> float:
        return self.value(math.sqrt(self.s))

    def __repr__(self) -> str:
        if self.q == 0:
            return f"QuadCoeff({self.p})"
        return f"QuadCoeff({self.p} + {self.q}*lam; lam^2={self.s})"

    def __str__(self) -> str:
        if self.q == 0:
            return str(self.p)
        if self.p == 0:
            return f"{self.q}*lam"
        return f"({self.p} + {self.q}*lam)"


Key = tuple  # (m, n)


class ExpPoly:
    """Immutable sum of ``coeff * xi**m * exp(n*lam*xi)`` terms in normal form."""

    __slots__ = ("_terms", "s")

    def __init__(self, terms: Mapping[Key, object] | None = None, s: Scalar = 0) -> None:
        s = as_fraction(s)
        if s < 0:
            raise ValueError("lam**2 must be nonnegative")
        clean: dict[Key, QuadCoeff] = {}
        for (m, n), c in (terms or {}).items():
            if int(m) != m or m < 0 or int(n) != n:
                raise ValueError(f"bad term key {(m, n)!r}")
            if s == 0 and n != 0:
                raise ValueError("exponential terms need lam**2 = s > 0")
            c = c if isinstance(c, QuadCoeff) else QuadCoeff(as_fraction(c), 0, s)
            if c.s != s:
                raise ContextError(f"coefficient over lam^2={c.s} in context {s}")
            key = (int(m), int(n))
            acc = clean.get(key)
            c = c if acc is None else acc + c
            if c:
                clean[key] = c
            else:
                clean.pop(key, None)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "s", s)

    def __setattr__(self, name, value):
        raise AttributeError("ExpPoly is immutable")

    # -- constructors --------------------------------------------------
    @classmethod
    def zero(cls, s: Scalar = 0) -> ExpPoly:
        return cls({}, s)

    @classmethod
    def const(cls, c, s: Scalar = 0) -> ExpPoly:
        return cls({(0, 0): c}, s)

    @classmethod
    def monomial(cls, c=1, m: int = 0, n: int = 0, s: Scalar = 0) -> ExpPoly:
        return cls({(m, n): c}, s)

    @classmethod
    def xi(cls, s: Scalar = 0) -> ExpPoly:
        return cls({(1, 0): 1}, s)

    @classmethod
    def poly(cls, coeffs: Iterable, s: Scalar = 0) -> ExpPoly:
        """Polynomial from ascending coefficients."""
        return cls({(m, 0): c for m, c in enumerate(coeffs)}, s)

    # -- inspection ----------------------------------------------------
    @property
    def terms(self) -> dict[Key, QuadCoeff]:
        return dict(self._terms)

    def keys(self) -> list[Key]:
        return sorted(self._terms, key=lambda k: (k[1], k[0]))

    def coeff(self, m: int = 0, n: int = 0) -> QuadCoeff:
        return self._terms.get((m, n), QuadCoeff(0, 0, self.s))

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, ExpPoly):
            return self.s == other.s and self._terms == other._terms
        if isinstance(other, (int, Fraction, QuadCoeff)):
            return self == ExpPoly.const(other, self.s) if other else self.is_zero()
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.s, frozenset(self._terms.items())))

    # -- ring operations -----------------------------------------------
    def _coerce(self, other) -> ExpPoly:
        if isinstance(other, ExpPoly):
            if other.s != self.s:
                raise ContextError(f"lam**2 mismatch: {self.s} vs {other.s}")
            return other
        if isinstance(other, (int, Fraction, Rational, QuadCoeff)):
            return ExpPoly.const(other, self.s)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out = dict(self._terms)
        for k, c in o._terms.items():
            out[k] = out[k] + c if k in out else c
        return ExpPoly(out, self.s)

    __radd__ = __add__

    def __neg__(self) -> ExpPoly:
        return ExpPoly({k: -c for k, c in self._terms.items()}, self.s)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Rational, QuadCoeff)):
            return self.scale(other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out: dict[Key, QuadCoeff] = {}
        for (m1, n1), c1 in self._terms.items():
            for (m2, n2), c2 in o._terms.items():
                k = (m1 + m2, n1 + n2)
                prod = c1 * c2
                out[k] = out[k] + prod if k in out else prod
        return ExpPoly(out, self.s)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> ExpPoly:
        if k < 0:
            raise ValueError("negative powers are not in the algebra")
        out = ExpPoly.const(1, self.s)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> ExpPoly:
        c = c if isinstance(c, QuadCoeff) else QuadCoeff(as_fraction(c), 0, self.s)
        if c.s != self.s:
            raise ContextError(f"lam**2 mismatch: {self.s} vs {c.s}")
        return ExpPoly({k: v * c for k, v in self._terms.items()}, self.s)

    def divide_monomial(self, divisor: ExpPoly) -> ExpPoly:
        """Exact division by a single term ``c * exp(n*lam*xi)`` (power of xi must be 0)."""
        divisor = self._coerce(divisor)
        if divisor is NotImplemented or not divisor.is_monomial():
            raise ValueError("divisor must be a single nonzero term")
        ((m, n), c), = divisor._terms.items()
        if m != 0:
            raise ValueError("division by a power of xi leaves the algebra")
        inv = c.inverse()
        return ExpPoly({(mm, nn - n): v * inv for (mm, nn), v in self._terms.items()}, self.s)

    __truediv__ = divide_monomial

    # -- calculus ------------------------------------------------------
    def differentiate(self, order: int = 1) -> ExpPoly:
        if order < 0:
            raise ValueError("order must be nonnegative")
        f = self
        lam = QuadCoeff.lam(self.s) if self.s else None
        for _ in range(order):
            out: dict[Key, QuadCoeff] = {}
            for (m, n), c in f._terms.items():
                if m:
                    k = (m - 1, n)
                    v = c * m
                    out[k] = out[k] + v if k in out else v
                if n:
                    k = (m, n)
                    v = c * lam * n
                    out[k] = out[k] + v if k in out else v
            f = ExpPoly(out, self.s)
        return f

    def antiderivative(self) -> ExpPoly:
        """Antiderivative with zero integration constant."""
        out: dict[Key, QuadCoeff] = {}

        def put(k, v):
            out[k] = out[k] + v if k in out else v

        for (m, n), c in self._terms.items():
            if n == 0:
                put((m + 1, 0), c / (m + 1))
                continue
            # int xi^m e^{a xi} = sum_j (-1)^j m!/(m-j)! xi^(m-j) e^{a xi} / a^(j+1)
            inv_rate = (QuadCoeff.lam(self.s) * n).inverse()
            falling = 1
            power = inv_rate
            for j in range(m + 1):
                put((m - j, n), c * power * ((-1) ** j * falling))
                falling *= m - j
                power = power * inv_rate
        return ExpPoly(out, self.s)

    # -- numerics ------------------------------------------------------
    def evaluate(self, xi: float, lam_value: float | None = None) -> float:
        """Numeric value at ``xi`` given the real number standing for lam."""
        if lam_value is None:
            lam_value = math.sqrt(self.s)
        sf = float(self.s)
        if self.s == 0:
            if lam_value != 0:
                raise ValueError("polynomial mode requires lam_value = 0")
        elif abs(lam_value * lam_value - sf) > 1e-12 * sf:
            raise ValueError(f"lam_value={lam_value!r} inconsistent with lam^2={self.s}")
        parts = []
        for (m, n), c in self._terms.items():
            parts.append(c.value(lam_value) * xi ** m * math.exp(n * lam_value * xi))
        return math.fsum(parts)

    def __call__(self, xi: float) -> float:
        return self.evaluate(xi)

    # -- serialization -------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "context": {"s_num": self.s.numerator, "s_den": self.s.denominator},
            "terms": [
                {"m": m, "n": n,
                 "p_num": c.p.numerator, "p_den": c.p.denominator,
                 "q_num": c.q.numerator, "q_den": c.q.denominator}
                for (m, n), c in ((k, self._terms[k]) for k in self.keys())
            ],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> ExpPoly:
        ctx = d["context"]
        s = Fraction(ctx["s_num"], ctx["s_den"])
        terms = {}
        for t in d["terms"]:
            terms[(t["m"], t["n"])] = QuadCoeff(Fraction(t["p_num"], t["p_den"]),
                                                Fraction(t["q_num"], t["q_den"]), s)
        return cls(terms, s)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> ExpPoly:
        return cls.from_dict(json.loads(text))

    def __repr__(self) -> str:
        return f"ExpPoly({self}, lam^2={self.s})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, n in self.keys():
            c = self._terms[(m, n)]
            factors = [str(c)]
            if m:
                factors.append("xi" if m == 1 else f"xi^{m}")
            if n:
                factors.append(f"e^({n}*lam*xi)")
            parts.append("*".join(factors))
        return " + ".join(parts)


def determinant(matrix: list[list[ExpPoly]]) -> ExpPoly:
    """Laplace expansion along the first row; fine for the 4x4 systems used here."""
    size = len(matrix)
    if size == 0:
        raise ValueError("empty matrix")
    if any(len(row) != size for row in matrix):
        raise ValueError("matrix must be square")
    if size == 1:
        return matrix[0][0]
    total = None
    for j, entry in enumerate(matrix[0]):
        if entry.is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = entry * determinant(minor)
        term = term if j % 2 == 0 else -term
        total = term if total is None else total + term
    return total if total is not None else ExpPoly.zero(matrix[0][0].s)
