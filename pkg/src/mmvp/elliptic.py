"""Real Jacobi elliptic functions sn, cn, dn by the AGM / descending Landen scheme.

Functions accept an optional ``ctx`` so the same code runs in double precision
(default) or under ``mpmath.mp`` when higher precision is needed.
"""
from __future__ import annotations

import math
from types import SimpleNamespace

FLOAT = SimpleNamespace(
    sqrt=math.sqrt, sin=math.sin, cos=math.cos, asin=math.asin, tanh=math.tanh,
    cosh=math.cosh, pi=math.pi, eps=2.0 ** -52, floor=math.floor, convert=float,
)


def mp_context(mp=None):
    """Adapter around an mpmath context (default ``mpmath.mp``)."""
    if mp is None:
        import mpmath
        mp = mpmath.mp
    return SimpleNamespace(
        sqrt=mp.sqrt, sin=mp.sin, cos=mp.cos, asin=mp.asin, tanh=mp.tanh, cosh=mp.cosh,
        pi=+mp.pi, eps=mp.eps, floor=mp.floor, convert=mp.mpf,
    )


def _agm_ladder(k, ctx):
    one = ctx.convert(1)
    a, b, c = [one], [ctx.sqrt(one - k * k)], [k]
    tol = 8 * ctx.eps
    while abs(c[-1]) > tol * a[-1]:
        an, bn = a[-1], b[-1]
        a.append((an + bn) / 2)
        b.append(ctx.sqrt(an * bn))
        c.append((an - bn) / 2)
        if len(a) > 64:
            raise RuntimeError("AGM failed to converge")
    return a, c


def quarter_period(k, ctx=FLOAT):
    """K(k) = pi / (2 AGM(1, k'))."""
    k = abs(ctx.convert(k))
    if k >= 1:
        raise ValueError("K(k) diverges for k >= 1")
    a, _ = _agm_ladder(k, ctx)
    return ctx.pi / (2 * a[-1])


def jacobi_sn_cn_dn(u, k, ctx=FLOAT):
    """Return (sn, cn, dn) of real argument u and real modulus k."""
    u = ctx.convert(u)
    k = abs(ctx.convert(k))
    if k > 1:
        return _reciprocal(u, k, ctx)
    if k == 0:
        return ctx.sin(u), ctx.cos(u), ctx.convert(1)
    if k == 1:
        sech = 1 / ctx.cosh(u)
        return ctx.tanh(u), sech, sech

    a, c = _agm_ladder(k, ctx)
    n = len(a) - 1
    big_k = ctx.pi / (2 * a[-1])
    # sn, cn have period 4K: reduce into [-2K, 2K)
    period = 4 * big_k
    if abs(u) > 2 * big_k:
        u = u - period * ctx.floor(u / period + ctx.convert(0.5))

    phi = (2 ** n) * a[-1] * u
    phis = [phi]
    for j in range(n, 0, -1):
        phi = (phi + ctx.asin(c[j] / a[j] * ctx.sin(phi))) / 2
        phis.append(phi)
    phi0 = phis[-1]
    phi1 = phis[-2] if n >= 1 else phi0
    sn = ctx.sin(phi0)
    cn = ctx.cos(phi0)
    dn = cn / ctx.cos(phi1 - phi0) if n >= 1 else ctx.sqrt(1 - k * k * sn * sn)
    return sn, cn, dn


def _reciprocal(u, big_m, ctx):
    m = 1 / big_m
    sn, cn, dn = jacobi_sn_cn_dn(big_m * u, m, ctx)
    return m * sn, dn, cn


def reciprocal_modulus(u, k, ctx=FLOAT):
    """sn(u; k) for k > 1 from sn(z; 1/k) = k sn(z/k; k), i.e. sn(u; M) = sn(M u; 1/M) / M."""
    k = ctx.convert(k)
    if k <= 1:
        raise ValueError("reciprocal_modulus needs k > 1")
    return _reciprocal(ctx.convert(u), k, ctx)[0]


def sn(u, k, ctx=FLOAT):
    return jacobi_sn_cn_dn(u, k, ctx)[0]


def cn(u, k, ctx=FLOAT):
    return jacobi_sn_cn_dn(u, k, ctx)[1]


def dn(u, k, ctx=FLOAT):
    return jacobi_sn_cn_dn(u, k, ctx)[2]
