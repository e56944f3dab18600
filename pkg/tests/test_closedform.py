import math
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest

from mmvp import closedform as cfm
from mmvp.exprcore import QuadCoeff
from mmvp.vop import ProblemSpec, decaying_seed, initial_value_seed, run_recursion


def case1(k_max=8, toward="+inf", a1=1, a2=-1, c=1):
    spec = ProblemSpec.thermophoretic(a1, a2)
    return run_recursion(spec, [decaying_seed(spec, c, toward)], k_max)


# -- general term ----------------------------------------------------------

def test_detect_general_term_case1():
    gt = cfm.detect_general_term(case1())
    # U_k = A (k+1) q^k E^(k+1) with the exact coefficients 1, -1/6, 1/48 forces A = 1
    assert gt.A == 1 and gt.q == QuadCoeff(F(-1, 12), 0, 1) and gt.base_rate == -1
    assert gt.amplitude == 1.0 and gt.ratio == pytest.approx(-1 / 12)
    assert gt.converges_at(0.0) and not gt.converges_at(-3.0)


def test_detect_general_term_errors():
    with pytest.raises(ValueError, match="insufficient"):
        cfm.detect_general_term(case1(k_max=0))
    spec = ProblemSpec.shifted_polynomial(1, 0, 0)
    poly = run_recursion(spec, [initial_value_seed(0, 1)], 3)
    with pytest.raises(cfm.PatternMismatch):
        cfm.detect_general_term(poly)
    # corrupt one iterate so the ratio test breaks
    sol = case1(k_max=4)
    sol.iterates[3] = sol.iterates[3].scale(2)
    with pytest.raises(cfm.PatternMismatch):
        cfm.detect_general_term(sol)


def test_generating_function_values():
    cf = cfm.sum_generating_function(cfm.detect_general_term(case1()))
    assert cf.family == cfm.EXP_RATIONAL
    assert cf.solution(0.0) == pytest.approx(144 / 169, abs=1e-15)
    sol = case1(k_max=20)
    assert abs(cfm.partial_sum_value(sol, 20, 1.0) - cf.solution(1.0)) < 1e-15
    mirror = cfm.sum_generating_function(cfm.detect_general_term(case1(toward="-inf")))
    assert mirror.direction == -1
    for xi in (-2.0, 0.5, 3.0):
        assert mirror.solution(xi) == pytest.approx(cf.solution(-xi), abs=1e-15)


def test_partial_sum_tail_bound():
    sol = case1(k_max=20)
    cf = cfm.exp_rational(1, -1, 1)
    for xi in (-1.5, -0.5, 0.0, 2.0):
        e = math.exp(-xi)
        r = e / 12
        tail = abs(cfm.partial_sum_value(sol, 20, xi) - cf.solution(xi))
        assert tail <= 2 * e * 22 * r ** 21 / (1 - r) ** 2 + 1e-15


# -- evaluation ------------------------------------------------------------

def test_evaluation_examples():
    assert cfm.sech2(1, -1, 1).solution(0.0) == pytest.approx(144 / 169, abs=1e-15)
    assert 3 / math.cosh(0.5 * math.log(12)) ** 2 == pytest.approx(144 / 169, abs=1e-15)
    assert cfm.algebraic(1).solution(1.0) == -12
    th, k, a1, a2, lam = 0.3, 0.6, 1.0, 0.25, 0.1
    cf = cfm.elliptic_form(cfm.SN2, a1, a2, th, k, lam)
    v0 = 4 * th ** 2 * (k ** 2 + 1) * a1 - lam - a2 / a1
    assert cf.value(0.0) == pytest.approx(v0, abs=1e-15)
    assert cf.solution(0.0) == pytest.approx(v0 + lam, abs=1e-15)


def test_validity_rules():
    with pytest.raises(cfm.ValidityError):
        cfm.exp_rational(1, 1, 1)
    with pytest.raises(cfm.ValidityError):
        cfm.exp_rational(-1, -1, 1)
    with pytest.raises(cfm.ValidityError):
        cfm.sech2(1, -1, -1)
    with pytest.raises(cfm.ValidityError):
        cfm.csc2(1, -1)
    with pytest.raises(cfm.ValidityError):
        cfm.algebraic(1).with_a2(-1)
    with pytest.raises(ValueError):
        cfm.ClosedForm("NOPE", {})
    with pytest.raises(cfm.PoleError):
        cfm.algebraic(1).solution(0.0)


def test_pole_detection():
    cf = cfm.exp_rational(1, -1, -1)
    # 1 - q E = 0 with q = 1/12 and E = e^{-xi}
    with pytest.raises(cfm.PoleError):
        cf.solution(-math.log(12))


@pytest.mark.parametrize("make", [lambda: cfm.csc2(1, 0.5), lambda: cfm.sec2(1, 0.5),
                                  lambda: cfm.csc2(0.8, 2.0, direction=-1), lambda: cfm.sec2(2.0, 0.3)])
def test_trig_reality_and_residual(make):
    cf = make()
    xs = np.linspace(0.3, 2.5, 23)
    for x in xs:
        z = cf.value(x)
        assert isinstance(z, float)
    assert cfm.ode_residual(cf, xs) < 1e-9 * max(1.0, max(abs(cf.solution(x)) for x in xs)) ** 2


def test_trig_complex_choice_is_rejected():
    cf = cfm.csc2(1, 0.5, c=1.0)
    with pytest.raises(cfm.ValidityError):
        cf.value(0.7)


def test_algebraic_residual():
    assert cfm.ode_residual(cfm.algebraic(0.7), [0.5, 1.0, 2.0, -3.0]) < 1e-9


def test_zero_solution():
    z = cfm.zero_solution()
    assert cfm.ode_residual(z, [-1.0, 0.0, 1.0]) == 0.0
    assert cfm.lambda_shift(z, 0.7).solution(3.0) == pytest.approx(0.7)


# -- derivatives against a sixth-order stencil in 40-digit arithmetic ----------

STENCIL = [(-3, -1 / 60), (-2, 3 / 20), (-1, -3 / 4), (1, 3 / 4), (2, -3 / 20), (3, 1 / 60)]

FAMILIES = [
    (lambda: cfm.exp_rational(1, -1, 1), 0.4),
    (lambda: cfm.exp_rational(F(3, 10), F(-1, 25), 4, -1), -1.0),
    (lambda: cfm.sech2(0.8, -0.5, 8), 0.3),
    (lambda: cfm.csch2(1, -1, -1), 4.0),
    (lambda: cfm.csc2(1, 0.5), 0.9),
    (lambda: cfm.sec2(1, 0.5), 0.9),
    (lambda: cfm.algebraic(1), 1.3),
    (lambda: cfm.elliptic_form(cfm.SN2, 1, 0, 0.3, 0.6), 1.7),
    (lambda: cfm.elliptic_form(cfm.CN2, 0.3, -0.04, 0.25, 0.8, 0.6), 2.2),
    (lambda: cfm.elliptic_form(cfm.DN2, 2, 1.5, 0.7, 0.95, -0.2), -0.8),
    (lambda: cfm.lambda_shift(cfm.exp_rational(1, -1, 1), -0.5), 0.1),
]


@pytest.mark.parametrize("make,x0", FAMILIES)
def test_analytic_derivatives_order(make, x0):
    cf = make()
    with mpmath.workdps(40):
        ctx = cfm.mp_context()
        x = mpmath.mpf(x0)
        for order in (0, 1, 3):
            exact = cf.value(x, order + 1, ctx)
            errs = []
            hs = [mpmath.mpf("0.02"), mpmath.mpf("0.01")]
            for h in hs:
                fd = sum(w * cf.value(x + j * h, order, ctx) for j, w in STENCIL) / h
                errs.append(abs(fd - exact))
            observed = mpmath.log(errs[0] / errs[1]) / mpmath.log(2)
            assert observed >= 4, (cf.family, order, float(observed))
        # second derivative link, used by every residual
        h = mpmath.mpf("0.01")
        fd2 = sum(w * cf.value(x + j * h, 1, ctx) for j, w in STENCIL) / h
        assert abs(fd2 - cf.value(x, 2, ctx)) < 1e-8 * max(1, abs(cf.value(x, 2, ctx)))


# -- lambda shift ----------------------------------------------------------

def test_lambda_shift_examples():
    base = cfm.exp_rational(1, -1, 1)
    assert cfm.lambda_shift(base, 0) is base
    shifted = cfm.lambda_shift(base, -0.5)
    assert shifted.inner.a2 == pytest.approx(-1.5)
    xs = np.linspace(-3, 3, 25)
    assert cfm.ode_residual(shifted, xs) < 1e-10
    back = cfm.lambda_shift(shifted, 0.5)
    for x in xs:
        assert back.solution(x) == pytest.approx(base.solution(x), abs=1e-12)
    with pytest.raises(cfm.ValidityError):
        cfm.lambda_shift(base, 1.5)


def test_lambda_shift_preserves_elliptic_residual():
    cf = cfm.elliptic_form(cfm.SN2, 0.3, -0.04, 0.25, 0.8, 0.6)
    xs = np.linspace(-10, 10, 25)
    assert cfm.ode_residual(cf, xs) < 1e-8
    for lam in (-0.3, 0.4, 1.2):
        assert cfm.ode_residual(cfm.lambda_shift(cf, lam), xs) < 1e-8


# -- elliptic parametrizations -------------------------------------------------

def test_initial_data_form_matches_theta_form():
    for a1, a2, lam, th, k in [(1, 0, 0, 0.3, 0.6), (0.3, -0.04, 0.6, 0.25, 0.8)]:
        v0, v1 = cfm.case3_parameter_map(a1, a2, lam, th, k)
        direct = cfm.elliptic_form(cfm.SN2, a1, a2, th, k, lam)
        from_data = cfm.sn2_from_initial_data(a1, a2, lam, v0, v1)
        for x in np.linspace(-5, 5, 11):
            assert from_data.solution(x) == pytest.approx(direct.solution(x), abs=1e-12)


def test_imaginary_kappa_unsupported():
    # v0 = shift = a2 = 0, a1 = 1, v1 = 1: kappa^2 = -2 - 1 < 0
    with pytest.raises(cfm.ValidityError):
        cfm.sn2_from_initial_data(1, 0, 0, 0, 1)


def test_maclaurin_degree_guard():
    spec = ProblemSpec.shifted_polynomial(1, 0, 0)
    th, k = F(3, 10), F(3, 5)
    v0, v1 = cfm.case3_parameter_map(1, 0, 0, th, k)
    sol = run_recursion(spec, [initial_value_seed(v0, v1)], 2)
    cf = cfm.elliptic_form(cfm.SN2, 1, 0, th, k)
    assert cfm.maclaurin_match(sol, cf, 6) == 0.0
    with pytest.raises(ValueError):
        cfm.maclaurin_match(sol, cf, 8)
    with pytest.raises(ValueError):
        cfm.maclaurin_match(case1(), cf, 4)


def test_maclaurin_of_cn_dn_forms_agree():
    th, k = F(1, 4), F(4, 5)
    coeffs = [cfm.closed_form_maclaurin(cfm.elliptic_form(f, 1, 0, th, k), 12) for f in cfm.ELLIPTIC]
    assert coeffs[0] == coeffs[1] == coeffs[2]


def test_jacobi_taylor_against_mpmath():
    s, c, d = cfm.jacobi_taylor(0.36, 9, 1.0)
    ref = mpmath.taylor(lambda u: mpmath.ellipfun("sn", u, m=0.36), 0, 9)
    assert np.allclose(s, [float(v) for v in ref], atol=1e-14)


# -- serialization ---------------------------------------------------------------

@pytest.mark.parametrize("cf", [
    cfm.exp_rational(F(3, 10), F(-1, 25), 4), cfm.csc2(1, 0.5),
    cfm.lambda_shift(cfm.lambda_shift(cfm.exp_rational(1, -1, 1), -0.5), -0.25),
    cfm.elliptic_form(cfm.DN2, 1, 0, F(1, 4), F(4, 5), F(3, 5)),
])
def test_closed_form_roundtrip(cf):
    back = cfm.ClosedForm.from_dict(cf.to_dict())
    assert back == cf
    for x in (0.5, 1.0):
        assert back.solution(x) == cf.solution(x)
