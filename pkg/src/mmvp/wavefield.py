"""Traveling-wave lift of ODE solutions to u(x, y, t) and finite-difference PDE checks.

The phase is xi = -I(t)/sqrt(a1) + sqrt(a1) x + c2 y - c1 with
I(t) = int_0^t a1 (alpha + b) + c2^2 delta - a2, so I(0) = 0 and any other
integration constant is absorbed into c1.
"""
from __future__ import annotations

import math
import warnings
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from types import SimpleNamespace
from typing import Sequence

import numpy as np
from scipy import integrate, special

from . import closedform as cfm
from .closedform import ClosedForm, PoleError

COS, SECH, POWER, CONST, CHIRP = "cos", "sech", "power", "const", "chirp"


def _float_fresnel(z):
    s, c = special.fresnel(z)
    return float(s), float(c)


FLOAT = SimpleNamespace(
    cos=math.cos, sin=math.sin, cosh=math.cosh, tanh=math.tanh, atan=math.atan,
    sqrt=math.sqrt, pi=math.pi, fresnel=_float_fresnel, num=float,
    closed=cfm.FLOAT,
)


def mp_context(mp=None):
    if mp is None:
        import mpmath
        mp = mpmath.mp
    closed = cfm.mp_context(mp)
    return SimpleNamespace(
        cos=mp.cos, sin=mp.sin, cosh=mp.cosh, tanh=mp.tanh, atan=mp.atan, sqrt=mp.sqrt,
        pi=+mp.pi, fresnel=lambda z: (mp.fresnels(z), mp.fresnelc(z)), num=closed.num,
        closed=closed,
    )


@dataclass(frozen=True)
class Term:
    """One basis shape of a time coefficient.

    cos:   A cos(omega t + phi)       sech: A sech(beta t)
    power: A t^p                       const: A
    chirp: A cos(omega t^2 + phi)
    """

    kind: str
    A: float
    omega: float = 0.0
    phi: float = 0.0
    beta: float = 0.0
    p: int = 0

    def __post_init__(self):
        if self.kind not in (COS, SECH, POWER, CONST, CHIRP):
            raise ValueError(f"unknown term kind {self.kind!r}")
        if self.kind == POWER and (int(self.p) != self.p or self.p < 0):
            raise ValueError("power terms need an integer p >= 0")

    def value(self, t, ctx=FLOAT):
        n = ctx.num
        A = n(self.A)
        if self.kind == COS:
            return A * ctx.cos(n(self.omega) * t + n(self.phi))
        if self.kind == SECH:
            return A / ctx.cosh(n(self.beta) * t)
        if self.kind == POWER:
            return A * t ** int(self.p)
        if self.kind == CONST:
            return A + 0 * t
        return A * ctx.cos(n(self.omega) * t * t + n(self.phi))

    def integral(self, t, ctx=FLOAT):
        """int_0^t of the term."""
        n = ctx.num
        A = n(self.A)
        if self.kind == COS:
            w, ph = n(self.omega), n(self.phi)
            if self.omega == 0:
                return A * ctx.cos(ph) * t
            return A * (ctx.sin(w * t + ph) - ctx.sin(ph)) / w
        if self.kind == SECH:
            b = n(self.beta)
            if self.beta == 0:
                return A * t
            return 2 * A / b * ctx.atan(ctx.tanh(b * t / 2))
        if self.kind == POWER:
            return A * t ** (int(self.p) + 1) / (int(self.p) + 1)
        if self.kind == CONST:
            return A * t
        # chirp via Fresnel integrals C, S with kernel cos/sin(pi z^2 / 2)
        w, ph = n(self.omega), n(self.phi)
        if self.omega == 0:
            return A * ctx.cos(ph) * t
        aw = abs(w)
        scale = ctx.sqrt(ctx.pi / (2 * aw))
        s_int, c_int = ctx.fresnel(t * ctx.sqrt(2 * aw / ctx.pi))
        sgn = 1 if self.omega > 0 else -1
        return A * scale * (ctx.cos(ph) * c_int - ctx.sin(ph) * sgn * s_int)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "A": self.A}
        if self.kind in (COS, CHIRP):
            d.update(omega=self.omega, phi=self.phi)
        elif self.kind == SECH:
            d["beta"] = self.beta
        elif self.kind == POWER:
            d["p"] = self.p
        return d


@dataclass(frozen=True)
class FunctionSpec:
    terms: tuple[Term, ...] = ()

    @classmethod
    def from_list(cls, items) -> FunctionSpec:
        return cls(tuple(t if isinstance(t, Term) else Term(**t) for t in items))

    def __add__(self, other: FunctionSpec) -> FunctionSpec:
        return FunctionSpec(self.terms + other.terms)

    def __call__(self, t, ctx=FLOAT):
        return sum((term.value(t, ctx) for term in self.terms), 0 * t)

    def integral(self, t, ctx=FLOAT):
        return sum((term.integral(t, ctx) for term in self.terms), 0 * t)

    def to_list(self) -> list:
        return [t.to_dict() for t in self.terms]


def cos_term(A, omega, phi=0.0):
    return FunctionSpec((Term(COS, A, omega=omega, phi=phi),))


def sech_term(A, beta):
    return FunctionSpec((Term(SECH, A, beta=beta),))


def power_term(A, p):
    return FunctionSpec((Term(POWER, A, p=p),))


def const_term(A):
    return FunctionSpec((Term(CONST, A),))


def chirp_term(A, omega, phi=0.0):
    return FunctionSpec((Term(CHIRP, A, omega=omega, phi=phi),))


@dataclass(frozen=True)
class Grid:
    """(axis, t) plane; ``axis`` is 'x' (at fixed y) or 'y' (at fixed x)."""

    axis: str = "x"
    fixed: float = 1.0
    axis_range: tuple[float, float, int] = (-20.0, 20.0, 201)
    t_range: tuple[float, float, int] = (-10.0, 10.0, 201)

    def __post_init__(self):
        if self.axis not in ("x", "y"):
            raise ValueError("grid axis must be 'x' or 'y'")
        for lo, hi, n in (self.axis_range, self.t_range):
            if int(n) != n or n < 1:
                raise ValueError("grid step counts must be positive integers")
            if n > 1 and not hi > lo:
                raise ValueError("grid ranges need hi > lo")

    @property
    def column(self) -> str:
        return f"{self.axis}t"

    def axis_values(self) -> np.ndarray:
        lo, hi, n = self.axis_range
        return np.linspace(lo, hi, int(n))

    def t_values(self) -> np.ndarray:
        lo, hi, n = self.t_range
        return np.linspace(lo, hi, int(n))

    def to_dict(self) -> dict:
        return {"axis": self.axis, "fixed": self.fixed,
                "axis_range": list(self.axis_range), "t_range": list(self.t_range)}


@dataclass(frozen=True)
class FieldConfig:
    alpha: FunctionSpec
    delta: FunctionSpec
    b: float
    a1: float
    a2: float
    c1: float
    c2: float
    closed_form: ClosedForm
    grid: Grid = field(default_factory=Grid)
    name: str = "custom"

    def __post_init__(self):
        if self.a1 <= 0:
            raise ValueError("a1 must be positive")

    def to_dict(self) -> dict:
        return {
            "name": self.name, "alpha": self.alpha.to_list(), "delta": self.delta.to_list(),
            "b": self.b, "a1": self.a1, "a2": self.a2, "c1": self.c1, "c2": self.c2,
            "closed_form": self.closed_form.to_dict(), "grid": self.grid.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> FieldConfig:
        g = d.get("grid", {})
        grid = Grid(g.get("axis", "x"), g.get("fixed", 1.0),
                    tuple(g.get("axis_range", (-20.0, 20.0, 201))),
                    tuple(g.get("t_range", (-10.0, 10.0, 201))))
        return cls(FunctionSpec.from_list(d.get("alpha", [])),
                   FunctionSpec.from_list(d.get("delta", [])),
                   d.get("b", 0.0), d["a1"], d["a2"], d.get("c1", 0.0), d.get("c2", 0.0),
                   ClosedForm.from_dict(d["closed_form"]), grid, d.get("name", "custom"))


def phase_integral(cfg: FieldConfig, t, ctx=FLOAT):
    n = ctx.num
    return (n(cfg.a1) * (cfg.alpha.integral(t, ctx) + n(cfg.b) * t)
            + n(cfg.c2) ** 2 * cfg.delta.integral(t, ctx) - n(cfg.a2) * t)


def phase_integral_quad(cfg: FieldConfig, t: float) -> float:
    """Adaptive-quadrature value of the phase integral, used as a cross-check."""
    def integrand(tau):
        return cfg.a1 * (cfg.alpha(tau) + cfg.b) + cfg.c2 ** 2 * cfg.delta(tau) - cfg.a2
    with warnings.catch_warnings():
        # the chirp integrand oscillates fast; quad may flag roundoff while still converging
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(integrand, 0.0, t, epsabs=1e-13, epsrel=1e-13, limit=1000)
    return val


def xi_phase(cfg: FieldConfig, x, y, t, ctx=FLOAT):
    n = ctx.num
    ra = ctx.sqrt(n(cfg.a1))
    return -phase_integral(cfg, t, ctx) / ra + ra * x + n(cfg.c2) * y - n(cfg.c1)


def field_value(cfg: FieldConfig, x, y, t, ctx=FLOAT):
    return cfg.closed_form.solution(xi_phase(cfg, x, y, t, ctx), 0, ctx.closed)


@dataclass
class FieldGrid:
    axis: str
    fixed: float
    axis_values: np.ndarray
    t_values: np.ndarray
    u: np.ndarray  # shape (len(axis_values), len(t_values))

    def rows(self):
        for i, a in enumerate(self.axis_values):
            for j, t in enumerate(self.t_values):
                yield float(a), float(t), float(self.u[i, j])


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("MMVP_THREADS", "0")) or (os.cpu_count() or 1))
    except ValueError:
        return 1


def field_sample(cfg: FieldConfig) -> FieldGrid:
    g = cfg.grid
    av, tv = g.axis_values(), g.t_values()
    ra = math.sqrt(cfg.a1)
    shift = np.array([-phase_integral(cfg, float(t)) / ra for t in tv])
    if g.axis == "x":
        base = ra * av + cfg.c2 * g.fixed - cfg.c1
    else:
        base = ra * g.fixed + cfg.c2 * av - cfg.c1
    cf = cfg.closed_form

    def row(i):
        out = np.empty(len(tv))
        for j in range(len(tv)):
            xi = float(base[i] + shift[j])
            try:
                out[j] = cf.solution(xi)
            except PoleError as exc:
                raise PoleError(f"pole at {g.axis}={av[i]!r}, t={tv[j]!r} (xi={xi!r})") from exc
        return out

    n_threads = min(_threads(), len(av))
    if n_threads > 1:
        with ThreadPoolExecutor(n_threads) as pool:
            rows = list(pool.map(row, range(len(av))))
    else:
        rows = [row(i) for i in range(len(av))]
    return FieldGrid(g.axis, g.fixed, av, tv, np.vstack(rows))


def pde_residual(cfg: FieldConfig, point: Sequence[float], h: float, dps: int = 50) -> float:
    """Central-difference residual of u_tx + u_x^2 + u u_xx + u_xxxx + (alpha+b) u_xx + delta u_yy.

    Evaluated in ``dps``-digit arithmetic so rounding stays far below the O(h^2) truncation
    error of the h^-4 stencil.
    """
    import mpmath
    with mpmath.workdps(dps):
        ctx = mp_context(mpmath.mp)
        n = ctx.num
        x, y, t = (n(v) for v in point)
        hh = n(h)

        def u(dx=0, dy=0, dt=0):
            return field_value(cfg, x + dx * hh, y + dy * hh, t + dt * hh, ctx)

        u0 = u()
        up1, um1, up2, um2 = u(1), u(-1), u(2), u(-2)
        u_x = (up1 - um1) / (2 * hh)
        u_xx = (up1 - 2 * u0 + um1) / hh ** 2
        u_xxxx = (up2 - 4 * up1 + 6 * u0 - 4 * um1 + um2) / hh ** 4
        u_tx = (u(1, 0, 1) - u(1, 0, -1) - u(-1, 0, 1) + u(-1, 0, -1)) / (4 * hh ** 2)
        u_yy = (u(0, 1) - 2 * u0 + u(0, -1)) / hh ** 2
        res = (u_tx + u_x ** 2 + u0 * u_xx + u_xxxx
               + (cfg.alpha(t, ctx) + n(cfg.b)) * u_xx + cfg.delta(t, ctx) * u_yy)
        return float(abs(res))


def observed_orders(residuals: Sequence[float], hs: Sequence[float]) -> list[float]:
    out = []
    for (r0, h0), (r1, h1) in zip(zip(residuals, hs), zip(residuals[1:], hs[1:])):
        if r0 == 0 or r1 == 0:
            out.append(math.inf)
        else:
            out.append(math.log(r0 / r1) / math.log(h0 / h1))
    return out


def interior_points(cfg: FieldConfig, count: int = 10, seed: int = 0,
                    margin: float = 0.1) -> list[tuple[float, float, float]]:
    """Seeded random points inside the grid window, kept off the edges."""
    rng = np.random.default_rng(seed)
    g = cfg.grid
    lo, hi, _ = g.axis_range
    tlo, thi, _ = g.t_range
    pad, tpad = margin * (hi - lo), margin * (thi - tlo)
    pts = []
    for _ in range(count):
        a = float(rng.uniform(lo + pad, hi - pad))
        t = float(rng.uniform(tlo + tpad, thi - tpad))
        pts.append((a, g.fixed, t) if g.axis == "x" else (g.fixed, a, t))
    return pts


def residual_study(cfg: FieldConfig, points=None, hs=(1e-2, 5e-3, 2.5e-3)) -> dict:
    points = interior_points(cfg) if points is None else points
    rows = []
    for p in points:
        res = [pde_residual(cfg, p, h) for h in hs]
        rows.append({"point": list(p), "residuals": res, "orders": observed_orders(res, hs)})
    worst = min(min(r["orders"]) for r in rows) if rows else math.inf
    return {"h": list(hs), "points": rows, "min_order": worst}


# ---------------------------------------------------------------------------
# figure presets (caption parameters; window chosen since captions give none)
# ---------------------------------------------------------------------------

def _grid(axis):
    return Grid(axis, 1.0, (-20.0, 20.0, 201), (-10.0, 10.0, 201))


def preset(name: str) -> FieldConfig:
    if name == "fig1a":
        return FieldConfig(cos_term(-5, 0.6, 12), sech_term(2, 0.1) + const_term(-0.1),
                           0.8, 0.3, -0.04, 0.5, 0.3, cfm.exp_rational(0.3, -0.04, 4),
                           _grid("x"), name)
    if name == "fig1b":
        return FieldConfig(cos_term(-5, 5, 12),
                           sech_term(-5, 0.4) + power_term(2.5, 1) + const_term(5),
                           0.8, 0.8, -0.5, 0.5, 0.3, cfm.exp_rational(0.8, -0.5, 8),
                           _grid("y"), name)
    if name == "fig2a":
        cf = cfm.lambda_shift(cfm.exp_rational(0.203, -0.1, 1), -0.5)
        return FieldConfig(chirp_term(-25, 0.5), sech_term(32, -0.5),
                           0.8, 0.203, -0.1, 0.5, 0.1, cf, _grid("x"), name)
    if name == "fig2b":
        cf = cfm.lambda_shift(cfm.exp_rational(0.34, -0.12, 1), -0.5)
        return FieldConfig(cos_term(-8, 1.5, 12),
                           sech_term(-10, 1.4) + power_term(2.5, 1) + const_term(1),
                           0.8, 0.34, -0.12, 0.5, 0.06, cf, _grid("y"), name)
    if name == "fig3a":
        cf = cfm.elliptic_form(cfm.SN2, 0.3, -0.04, 0.25, 0.8, 0.6)
        return FieldConfig(cos_term(-5, 0.6, 12), sech_term(2, 0.1) + const_term(-0.1),
                           0.8, 0.3, -0.04, 0.5, 0.3, cf, _grid("x"), name)
    if name == "fig3b":
        cf = cfm.elliptic_form(cfm.SN2, 0.8, -0.5, 0.3, 0.8, 0.6)
        return FieldConfig(cos_term(-5, 5, 12),
                           sech_term(-5, 0.4) + power_term(7, 1) + const_term(5),
                           0.8, 0.8, -0.5, 0.5, 0.3, cf, _grid("y"), name)
    raise KeyError(f"unknown preset {name!r}")


PRESETS = ("fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b")
