"""Closed-form solution families of a1^2 U'''' + a2 U'' + a1 (U'^2 + U U'') = 0.

Each family is a formula object with analytic xi-derivatives.  Values are computed
in complex arithmetic when the formula passes through complex intermediates (the
csch^2 form with c > 0, the csc^2/sec^2 forms) and the real part is returned after
checking the imaginary part is negligible.

Elliptic families (SN2, CN2, DN2) describe V, the solution of the equation shifted
by ``shift``; the solution of the unshifted equation is ``shift + V``.  ``solution``
always returns that unshifted value.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from types import SimpleNamespace
from typing import Sequence

from . import elliptic
from .exprcore import ExpPoly, QuadCoeff
from .vop import POLYNOMIAL, SeriesSolution

EXP_RATIONAL = "EXP_RATIONAL"
SECH2 = "SECH2"
CSCH2 = "CSCH2"
CSC2 = "CSC2"
SEC2 = "SEC2"
ALGEBRAIC = "ALGEBRAIC"
SN2 = "SN2"
CN2 = "CN2"
DN2 = "DN2"
SHIFTED = "SHIFTED"
ZERO = "ZERO"

FAMILIES = (EXP_RATIONAL, SECH2, CSCH2, CSC2, SEC2, ALGEBRAIC, SN2, CN2, DN2, SHIFTED, ZERO)
ELLIPTIC = (SN2, CN2, DN2)

IMAG_TOL = 1e-12


class PoleError(ArithmeticError):
    pass


class PatternMismatch(ValueError):
    pass


class ValidityError(ValueError):
    pass


def _float_num(x):
    return float(x)


FLOAT = SimpleNamespace(
    exp=cmath.exp, log=cmath.log, sqrt=cmath.sqrt, tanh=cmath.tanh, tan=cmath.tan,
    num=_float_num, elliptic=elliptic.FLOAT, one=1.0, j=1j,
)


def mp_context(mp=None):
    if mp is None:
        import mpmath
        mp = mpmath.mp

    def num(x):
        if isinstance(x, Fraction):
            return mp.mpf(x.numerator) / x.denominator
        return mp.mpf(x)

    ectx = elliptic.mp_context(mp)
    ectx.convert = num
    return SimpleNamespace(
        exp=mp.exp, log=mp.log, sqrt=mp.sqrt, tanh=mp.tanh, tan=mp.tan,
        num=num, elliptic=ectx, one=mp.mpf(1), j=mp.mpc(0, 1),
    )


# ---------------------------------------------------------------------------
# derivative helpers
# ---------------------------------------------------------------------------

def _pdiff(p: list[int], rule: list[int]) -> list[int]:
    """d/dx of polynomial p(T) given dT/dx = rule(T); ascending integer coefficients."""
    dp = [i * c for i, c in enumerate(p)][1:] or [0]
    out = [0] * (len(dp) + len(rule) - 1)
    for i, a in enumerate(dp):
        for j, b in enumerate(rule):
            out[i + j] += a * b
    return out


def _peval(p, t):
    acc = 0
    for c in reversed(p):
        acc = acc * t + c
    return acc


# base function as polynomial in T, and dT/dx
_TRIG_TABLE = {
    "sech2": ([1, 0, -1], [1, 0, -1]),   # T = tanh
    "csch2": ([-1, 0, 1], [1, 0, -1]),   # T = coth
    "sec2": ([1, 0, 1], [1, 0, 1]),      # T = tan
    "csc2": ([1, 0, 1], [-1, 0, -1]),    # T = cot
}


def _trig_poly(kind: str, order: int) -> list[int]:
    p, rule = _TRIG_TABLE[kind]
    for _ in range(order):
        p = _pdiff(p, rule)
    return p


def _eulerian(n: int) -> list[int]:
    """Coefficients of the Eulerian polynomial A_n(y), sum_m m^n y^m = y A_n(y)/(1-y)^(n+1)."""
    row = [1]
    for i in range(2, n + 1):
        new = [0] * i
        for m in range(i):
            if m < len(row):
                new[m] += (m + 1) * row[m]
            if 0 < m <= len(row):
                new[m] += (i - m) * row[m - 1]
        row = new
    return row


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClosedForm:
    family: str
    params: dict = field(default_factory=dict)
    direction: int = 1
    inner: ClosedForm | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")
        _validate(self)

    # parameters -------------------------------------------------------
    @property
    def a1(self):
        return self.params["a1"]

    @property
    def a2(self):
        return self.params["a2"]

    @property
    def offset(self):
        """Constant added to the family formula to get the unshifted solution."""
        if self.family in ELLIPTIC:
            return self.params.get("shift", 0)
        return 0

    def with_a2(self, a2) -> ClosedForm:
        if self.family == SHIFTED:
            lam = self.params["shift"]
            inner = self.inner.with_a2(self.a1 * lam + a2)
            return ClosedForm(SHIFTED, {**self.params, "a2": a2}, self.direction, inner)
        return replace(self, params={**self.params, "a2": a2})

    def real_valid(self) -> bool:
        try:
            _validate(self)
        except ValidityError:
            return False
        return True

    # evaluation -------------------------------------------------------
    def value(self, xi, order: int = 0, ctx=FLOAT):
        """Family formula (V for elliptic families) or its derivative."""
        if order < 0:
            raise ValueError("order must be nonnegative")
        z = _EVAL[self.family](self, ctx.num(xi) if not isinstance(xi, complex) else xi, order, ctx)
        return _realize(z, ctx)

    def solution(self, xi, order: int = 0, ctx=FLOAT):
        v = self.value(xi, order, ctx)
        if order == 0 and self.offset:
            v = v + ctx.num(self.offset)
        return v

    # serialization ----------------------------------------------------
    def to_dict(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return str(v)
            return v
        d = {"family": self.family, "direction": self.direction,
             "params": {k: enc(v) for k, v in sorted(self.params.items())}}
        if self.inner is not None:
            d["inner"] = self.inner.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ClosedForm:
        def dec(v):
            if isinstance(v, str):
                return Fraction(v)
            return v
        inner = cls.from_dict(d["inner"]) if d.get("inner") else None
        return cls(d["family"], {k: dec(v) for k, v in d.get("params", {}).items()},
                   d.get("direction", 1), inner)


def _realize(z, ctx):
    if isinstance(z, (int, float)):
        return z
    im = getattr(z, "imag", 0)
    re = getattr(z, "real", z)
    if abs(im) > IMAG_TOL * max(1.0, abs(re)):
        raise ValidityError(f"formula is complex here (imaginary part {float(im):.3e})")
    return re


def _validate(cf: ClosedForm) -> None:
    fam, p = cf.family, cf.params
    if fam == ZERO:
        return
    if fam == SHIFTED:
        if cf.inner is None or "shift" not in p:
            raise ValidityError("shifted form needs an inner form and a shift")
        return
    a1 = p.get("a1")
    if a1 is None or a1 <= 0:
        raise ValidityError(f"{fam} needs a1 > 0")
    a2 = p.get("a2")
    if a2 is None:
        raise ValidityError(f"{fam} needs a2")
    if fam in (EXP_RATIONAL, SECH2, CSCH2):
        if a2 >= 0:
            raise ValidityError(f"{fam} needs a2 < 0 (got a2 = {a2})")
        if p.get("c", 0) == 0:
            raise ValidityError(f"{fam} needs c != 0")
        if fam == SECH2 and p["c"] < 0:
            raise ValidityError("SECH2 needs c > 0")
    elif fam in (CSC2, SEC2):
        if a2 <= 0:
            raise ValidityError(f"{fam} needs a2 > 0")
        if p.get("c", 0) == 0:
            raise ValidityError(f"{fam} needs c != 0")
    elif fam == ALGEBRAIC:
        if a2 != 0:
            raise ValidityError("ALGEBRAIC form is the a2 = 0 limit")
    elif fam in ELLIPTIC:
        for key in ("theta", "k"):
            if key not in p:
                raise ValidityError(f"{fam} needs {key}")


# ---------------------------------------------------------------------------
# family evaluators: (cf, xi, order, ctx) -> number (maybe complex)
# ---------------------------------------------------------------------------

def _lam(cf, ctx, a2=None):
    a2 = cf.a2 if a2 is None else a2
    return ctx.sqrt(ctx.num(-a2)) / ctx.num(cf.a1)


def _eval_exp_rational(cf, xi, order, ctx):
    # U = c E / (1 - qE)^2,  E = exp(sigma xi),  q = a1 c / (12 a2)
    a1, a2, c = ctx.num(cf.a1), ctx.num(cf.a2), ctx.num(cf.params["c"])
    sigma = -cf.direction * _lam(cf, ctx)
    q = a1 * c / (12 * a2)
    e = ctx.exp(sigma * xi)
    y = q * e
    den = 1 - y
    if abs(den) < 1e-300 or abs(den) <= 1e-14 * abs(y):
        raise PoleError(f"EXP_RATIONAL pole at xi={xi}")
    eul = _eulerian(order + 1)
    return c * sigma ** order * e * _peval(eul, y) / den ** (order + 2)


def _trig_family(kind, cf, xi, order, ctx, amp, rate, phase):
    x = rate * xi + phase
    if kind == "sech2":
        t = ctx.tanh(x)
    elif kind == "csch2":
        th = ctx.tanh(x)
        if abs(th) < 1e-300:
            raise PoleError(f"{cf.family} pole at xi={xi}")
        t = 1 / th
    elif kind == "sec2":
        t = ctx.tan(x)
    else:
        tn = ctx.tan(x)
        if abs(tn) < 1e-300:
            raise PoleError(f"{cf.family} pole at xi={xi}")
        t = 1 / tn
    return amp * rate ** order * _peval(_trig_poly(kind, order), t)


def _eval_sech2(cf, xi, order, ctx):
    a1, a2, c = ctx.num(cf.a1), ctx.num(cf.a2), ctx.num(cf.params["c"])
    rate = cf.direction * _lam(cf, ctx) / 2
    phase = ctx.log(-12 * a2 / (a1 * c)) / 2
    return _trig_family("sech2", cf, xi, order, ctx, -3 * a2 / a1, rate, phase)


def _eval_csch2(cf, xi, order, ctx):
    a1, a2, c = ctx.num(cf.a1), ctx.num(cf.a2), ctx.num(cf.params["c"])
    rate = cf.direction * _lam(cf, ctx) / 2
    # log of a negative number for c > 0: principal branch, makes csch^2 -> -sech^2
    phase = ctx.log(12 * a2 / (a1 * c) + 0 * ctx.j) / 2
    return _trig_family("csch2", cf, xi, order, ctx, 3 * a2 / a1, rate, phase)


def _eval_csc2(cf, xi, order, ctx):
    a1, a2, c = ctx.num(cf.a1), ctx.num(cf.a2), ctx.num(cf.params["c"])
    rate = cf.direction * ctx.sqrt(a2) / (2 * a1)
    phase = -ctx.j / 2 * ctx.log(12 * a2 / (a1 * c) + 0 * ctx.j)
    return _trig_family("csc2", cf, xi, order, ctx, -3 * a2 / a1, rate, phase)


def _eval_sec2(cf, xi, order, ctx):
    a1, a2, c = ctx.num(cf.a1), ctx.num(cf.a2), ctx.num(cf.params["c"])
    rate = cf.direction * ctx.sqrt(a2) / (2 * a1)
    phase = -ctx.j / 2 * ctx.log(-12 * a2 / (a1 * c) + 0 * ctx.j)
    return _trig_family("sec2", cf, xi, order, ctx, -3 * a2 / a1, rate, phase)


def _eval_algebraic(cf, xi, order, ctx):
    if xi == 0:
        raise PoleError("ALGEBRAIC pole at xi=0")
    a1 = ctx.num(cf.a1)
    return -12 * a1 * (-1) ** order * math.factorial(order + 1) / xi ** (order + 2)


def _sn2_derivative(u, k, order, ctx):
    """d^r/du^r sn(u, k)^2."""
    e = ctx.elliptic
    s, c, d = elliptic.jacobi_sn_cn_dn(u, k, e)
    k2 = k * k
    w = s * s
    if order == 0:
        return w
    w1 = 2 * s * c * d
    w2 = 2 - 4 * (1 + k2) * w + 6 * k2 * w * w
    if order == 1:
        return w1
    if order == 2:
        return w2
    if order == 3:
        return (-4 * (1 + k2) + 12 * k2 * w) * w1
    if order == 4:
        return 12 * k2 * w1 * w1 + (-4 * (1 + k2) + 12 * k2 * w) * w2
    raise ValueError("elliptic families provide derivatives up to order 4")


def _elliptic_parts(cf, ctx):
    p = cf.params
    a1, a2 = ctx.num(p["a1"]), ctx.num(p["a2"])
    lam, theta, k = ctx.num(p.get("shift", 0)), ctx.num(p["theta"]), ctx.num(p["k"])
    return a1, a2, lam, theta, k


def elliptic_coefficients(cf: ClosedForm, num=lambda x: x):
    """(constant, amplitude, base) with V = constant + amplitude * base^2(theta xi, k)."""
    p = cf.params
    a1, a2, lam = num(p["a1"]), num(p["a2"]), num(p.get("shift", 0))
    th, k = num(p["theta"]), num(p["k"])
    th2, k2 = th * th, k * k
    if cf.family == SN2:
        return (4 * th2 * (k2 + 1) * a1 * a1 - a1 * lam - a2) / a1, -12 * k2 * th2 * a1, "sn"
    if cf.family == CN2:
        return ((4 - 8 * k2) * th2 * a1 * a1 - a1 * lam - a2) / a1, 12 * k2 * th2 * a1, "cn"
    if cf.family == DN2:
        return (4 * th2 * (k2 - 2) * a1 * a1 - a1 * lam - a2) / a1, 12 * th2 * a1, "dn"
    raise ValueError(f"{cf.family} is not an elliptic family")


def _eval_elliptic(cf, xi, order, ctx):
    a1, a2, lam, theta, k = _elliptic_parts(cf, ctx)
    const, amp, base = elliptic_coefficients(cf, ctx.num)
    u = theta * xi
    dw = _sn2_derivative(u, k, order, ctx) * theta ** order
    if base == "sn":
        base_val = dw
    elif base == "cn":
        base_val = (1 - dw) if order == 0 else -dw
    else:
        base_val = (1 - k * k * dw) if order == 0 else -k * k * dw
    return (const if order == 0 else 0) + amp * base_val


def _eval_shifted(cf, xi, order, ctx):
    inner = cf.inner.solution(xi, order, ctx)
    return inner + ctx.num(cf.params["shift"]) if order == 0 else inner


def _eval_zero(cf, xi, order, ctx):
    return 0 * ctx.one


_EVAL = {
    EXP_RATIONAL: _eval_exp_rational, SECH2: _eval_sech2, CSCH2: _eval_csch2,
    CSC2: _eval_csc2, SEC2: _eval_sec2, ALGEBRAIC: _eval_algebraic,
    SN2: _eval_elliptic, CN2: _eval_elliptic, DN2: _eval_elliptic,
    SHIFTED: _eval_shifted, ZERO: _eval_zero,
}


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def exp_rational(a1, a2, c, direction=1) -> ClosedForm:
    return ClosedForm(EXP_RATIONAL, {"a1": a1, "a2": a2, "c": c}, direction)


def sech2(a1, a2, c, direction=1) -> ClosedForm:
    return ClosedForm(SECH2, {"a1": a1, "a2": a2, "c": c}, direction)


def csch2(a1, a2, c, direction=1) -> ClosedForm:
    return ClosedForm(CSCH2, {"a1": a1, "a2": a2, "c": c}, direction)


def csc2(a1, a2, c=None, direction=1) -> ClosedForm:
    """Real for c = 12 a2 / a1 (the default)."""
    return ClosedForm(CSC2, {"a1": a1, "a2": a2, "c": 12 * a2 / a1 if c is None else c}, direction)


def sec2(a1, a2, c=None, direction=1) -> ClosedForm:
    """Real for c = -12 a2 / a1 (the default)."""
    return ClosedForm(SEC2, {"a1": a1, "a2": a2, "c": -12 * a2 / a1 if c is None else c}, direction)


def algebraic(a1) -> ClosedForm:
    return ClosedForm(ALGEBRAIC, {"a1": a1, "a2": 0})


def zero_solution(a1=1, a2=-1) -> ClosedForm:
    return ClosedForm(ZERO, {"a1": a1, "a2": a2})


def elliptic_form(family, a1, a2, theta, k, shift=0) -> ClosedForm:
    return ClosedForm(family, {"a1": a1, "a2": a2, "shift": shift, "theta": theta, "k": k})


def sn2_from_initial_data(a1, a2, shift, v0, v1, tol: float = 1e-9) -> ClosedForm:
    """sn^2 solution with V(0) = v0, V''(0) = 2 v1 via chi and kappa of the sum formula.

    Only real moduli are supported; kappa^2 < 0 raises ValidityError.
    """
    a1f, a2f, lf, v0f, v1f = (float(x) for x in (a1, a2, shift, v0, v1))
    if v1f == 0:
        raise ValidityError("v1 = 0 gives the constant solution, not an sn^2 form")
    q = a1f * (lf + v0f) + a2f
    root = math.sqrt(9 * q * q + 48 * a1f ** 3 * v1f) if 9 * q * q + 48 * a1f ** 3 * v1f >= 0 \
        else None
    if root is None:
        raise ValidityError("discriminant 9q^2 + 48 a1^3 v1 is negative")
    chi2 = (3 * a1f * lf + root + 3 * a1f * v0f + 3 * a2f) / (24 * a1f ** 2)
    kappa2 = (q * root - 3 * q * q) / (8 * a1f ** 3 * v1f) - 1
    if chi2 <= 0:
        raise ValidityError("chi^2 <= 0: branch not supported")
    if kappa2 < 0:
        raise ValidityError("kappa is imaginary for these data: branch not supported")
    amp = (-3 * a1f * (lf + v0f) + root - 3 * a2f) / (2 * a1f)
    cf = elliptic_form(SN2, a1, a2, math.sqrt(chi2), math.sqrt(kappa2), shift)
    const, amp_cf, _ = elliptic_coefficients(cf, float)
    if abs(const - v0f) > tol * max(1, abs(v0f)) or abs(amp - amp_cf) > tol * max(1, abs(amp)):
        raise ValidityError("initial data are not consistent with a single sn^2 wave")
    return cf


def case3_parameter_map(a1, a2, shift, theta, k):
    """(v0, v1) that make the chi/kappa form collapse to theta, k."""
    v0 = -(-4 * k ** 2 * theta ** 2 * a1 ** 2 - 4 * theta ** 2 * a1 ** 2 + a1 * shift + a2) / a1
    v1 = -12 * theta ** 4 * k ** 2 * a1
    return v0, v1


# ---------------------------------------------------------------------------
# general term and generating function
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneralTerm:
    """U_k = A (k+1) q^k E^(k+1) with E = exp(base_rate * lam * xi)."""

    A: QuadCoeff
    q: QuadCoeff
    base_rate: int
    s: Fraction
    a1: Fraction | None = None
    a2: Fraction | None = None

    def term(self, k: int) -> ExpPoly:
        return ExpPoly.monomial(self.A * self.q ** k * (k + 1), 0, self.base_rate * (k + 1), self.s)

    @property
    def amplitude(self) -> float:
        return float(self.A)

    @property
    def ratio(self) -> float:
        return float(self.q)

    def converges_at(self, xi: float) -> bool:
        return abs(self.ratio * math.exp(self.base_rate * math.sqrt(self.s) * xi)) < 1


def detect_general_term(series: SeriesSolution) -> GeneralTerm:
    its = series.iterates
    if len(its) < 2:
        raise ValueError("insufficient data: need at least two iterates")
    if series.spec is not None and series.spec.mode == POLYNOMIAL:
        raise PatternMismatch("polynomial iterates do not follow the exponential law")
    coeffs = []
    base = None
    for k, u in enumerate(its):
        if not u.is_monomial():
            raise PatternMismatch(f"iterate {k} is not a single exponential term")
        (m, n), c = next(iter(u.terms.items()))
        if m != 0 or n == 0:
            raise PatternMismatch(f"iterate {k} is not a pure exponential")
        if base is None:
            base = n
        if n != base * (k + 1):
            raise PatternMismatch(f"iterate {k} has rate {n}, expected {base * (k + 1)}")
        coeffs.append(c)
    q = None
    for k in range(len(coeffs) - 1):
        qk = coeffs[k + 1] / coeffs[k] * Fraction(k + 1, k + 2)
        if q is None:
            q = qk
        elif qk != q:
            raise PatternMismatch(f"ratio test fails at k={k}: {qk} != {q}")
    spec = series.spec
    return GeneralTerm(coeffs[0], q, base, its[0].s,
                       spec.a1 if spec else None, spec.a2 if spec else None)


def sum_generating_function(gt: GeneralTerm) -> ClosedForm:
    """A E / (1 - q E)^2 as the EXP_RATIONAL family."""
    if gt.a1 is None or gt.a2 is None:
        raise ValueError("general term carries no equation parameters")
    if abs(gt.base_rate) != 1:
        raise PatternMismatch("base rate must be +-lam")
    if not gt.A.is_rational():
        raise PatternMismatch("amplitude must be rational")
    c = gt.A.p
    if gt.q != QuadCoeff(gt.a1 * c / (12 * gt.a2), 0, gt.s):
        raise PatternMismatch("ratio does not match a1 c / (12 a2)")
    return exp_rational(gt.a1, gt.a2, c, direction=-gt.base_rate)


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def ode_residual_at(cf: ClosedForm, xi, ctx=FLOAT, a1=None, a2=None):
    a1 = ctx.num(cf.a1 if a1 is None else a1)
    a2 = ctx.num(_equation_a2(cf) if a2 is None else a2)
    u = cf.solution(xi, 0, ctx)
    u1 = cf.solution(xi, 1, ctx)
    u2 = cf.solution(xi, 2, ctx)
    u4 = cf.solution(xi, 4, ctx)
    return a1 * a1 * u4 + a2 * u2 + a1 * (u1 * u1 + u * u2)


def _equation_a2(cf: ClosedForm):
    return cf.a2


def ode_residual(cf: ClosedForm, xi_samples: Sequence[float], ctx=FLOAT) -> float:
    worst = 0.0
    for xi in xi_samples:
        worst = max(worst, abs(float(ode_residual_at(cf, xi, ctx))))
    return worst


def lambda_shift(cf: ClosedForm, shift) -> ClosedForm:
    """shift + U(xi, a1, a1*shift + a2), again a solution of the unshifted equation."""
    if shift == 0:
        return cf
    if cf.family == SHIFTED:
        total = cf.params["shift"] + shift
        base = cf.inner.with_a2(cf.inner.a2 - cf.a1 * cf.params["shift"])
        return lambda_shift(base, total)
    a1, a2 = cf.a1, cf.a2
    try:
        inner = cf.with_a2(a1 * shift + a2)
    except ValidityError as exc:
        raise ValidityError(f"shift {shift} breaks validity: {exc}") from exc
    return ClosedForm(SHIFTED, {"a1": a1, "a2": a2, "shift": shift}, cf.direction, inner)


def equivalence_check(a: ClosedForm, b: ClosedForm, xi_samples: Sequence[float],
                      ctx=FLOAT) -> float:
    worst = 0.0
    for xi in xi_samples:
        worst = max(worst, abs(float(a.solution(xi, 0, ctx) - b.solution(xi, 0, ctx))))
    return worst


def jacobi_taylor(k2, degree: int, one=1):
    """Maclaurin coefficients of sn, cn, dn in u up to ``degree`` (exact for Fraction k2)."""
    zero = one - one
    s = [zero] * (degree + 1)
    c = [zero] * (degree + 1)
    d = [zero] * (degree + 1)
    c[0] = d[0] = one

    def conv(a, b, n):
        return sum((a[i] * b[n - i] for i in range(n + 1)), zero)

    for n in range(degree):
        s[n + 1] = conv(c, d, n) / (n + 1)
        c[n + 1] = -conv(s, d, n) / (n + 1)
        d[n + 1] = -k2 * conv(s, c, n) / (n + 1)
    return s, c, d


def closed_form_maclaurin(cf: ClosedForm, degree: int) -> list:
    """Maclaurin coefficients of the elliptic family formula V(xi)."""
    exact = all(isinstance(v, (int, Fraction)) for v in cf.params.values())
    num = Fraction if exact else float
    const, amp, base = elliptic_coefficients(cf, num)
    theta, k = num(cf.params["theta"]), num(cf.params["k"])
    s, c, d = jacobi_taylor(k * k, degree, num(1))
    f = {"sn": s, "cn": c, "dn": d}[base]
    sq = [sum((f[i] * f[n - i] for i in range(n + 1)), num(0)) for n in range(degree + 1)]
    out = [amp * sq[n] * theta ** n for n in range(degree + 1)]
    out[0] += const
    return out


def maclaurin_match(series: SeriesSolution, cf: ClosedForm, max_degree: int) -> float:
    if series.spec is not None and series.spec.mode != POLYNOMIAL:
        raise ValueError("maclaurin_match needs polynomial-mode iterates")
    if cf.family not in ELLIPTIC:
        raise ValueError("maclaurin_match needs an elliptic family")
    k_max = len(series.iterates) - 1
    if max_degree > 2 * k_max + 2:
        raise ValueError(f"degrees above {2 * k_max + 2} are not fixed by {k_max + 1} iterates")
    total = series.partial_sum()
    ref = closed_form_maclaurin(cf, max_degree)
    worst = 0.0
    for deg in range(max_degree + 1):
        c = total.coeff(deg, 0)
        worst = max(worst, abs(float(c.p) - float(ref[deg])))
    return worst


def partial_sum_value(series: SeriesSolution, n: int, xi: float) -> float:
    return math.fsum(u.evaluate(xi) for u in series.iterates[:n + 1])
