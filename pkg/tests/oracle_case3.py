"""Case-3 correction terms V0..V4 as reference sympy expressions (independent oracle)."""
import sympy as sp

xi, a1, a2, L, v0, v1 = sp.symbols("xi a1 a2 Lambda v0 v1")

V = [
    v1 * xi**2 + v0,
    -((v1 * xi**2 + 5 * L + 5 * v0) * a1 + 5 * a2) * v1 * xi**4 / (60 * a1**2),
    xi**6 * v1 * (a1**2 * (210 * L**2 + 135 * L * xi**2 * v1 + 15 * v0 * (28 * L + 9 * xi**2 * v1)
                           + 14 * xi**4 * v1**2 + 210 * v0**2)
                  + 15 * a2 * a1 * (28 * L + 9 * xi**2 * v1 + 28 * v0) + 210 * a2**2)
    / (75600 * a1**4),
    -xi**8 * v1 * (13 * a2 * a1**2 * (1485 * L**2 + 1782 * L * xi**2 * v1
                                      + 594 * v0 * (5 * L + 3 * xi**2 * v1)
                                      + 254 * xi**4 * v1**2 + 1485 * v0**2)
                   + a1**3 * (6435 * L**3 + 11583 * L**2 * xi**2 * v1
                              + 13 * v0 * (1485 * L**2 + 1782 * L * xi**2 * v1 + 254 * xi**4 * v1**2)
                              + 3302 * L * xi**4 * v1**2 + 3861 * v0**2 * (5 * L + 3 * xi**2 * v1)
                              + 231 * xi**6 * v1**3 + 6435 * v0**3)
                   + 3861 * a2**2 * a1 * (5 * L + 3 * xi**2 * v1 + 5 * v0) + 6435 * a2**3)
    / (129729600 * a1**6),
    xi**10 * v1 * (3060 * a2**2 * a1**2 * (3003 * L**2 + 7644 * L * xi**2 * v1
                                           + 546 * v0 * (11 * L + 14 * xi**2 * v1)
                                           + 1546 * xi**4 * v1**2 + 3003 * v0**2)
                   + 153 * a2 * a1**3 * (40040 * L**3 + 152880 * L**2 * xi**2 * v1
                                         + 40 * v0 * (3003 * L**2 + 7644 * L * xi**2 * v1
                                                      + 1546 * xi**4 * v1**2)
                                         + 61840 * L * xi**4 * v1**2
                                         + 10920 * v0**2 * (11 * L + 14 * xi**2 * v1)
                                         + 5481 * xi**6 * v1**3 + 40040 * v0**3)
                   + a1**4 * (1531530 * L**4 + 7796880 * L**3 * xi**2 * v1
                              + 4730760 * L**2 * xi**4 * v1**2
                              + 3060 * v0**2 * (3003 * L**2 + 7644 * L * xi**2 * v1
                                                + 1546 * xi**4 * v1**2)
                              + 153 * v0 * (40040 * L**3 + 152880 * L**2 * xi**2 * v1
                                            + 61840 * L * xi**4 * v1**2 + 5481 * xi**6 * v1**3)
                              + 838593 * L * xi**6 * v1**3
                              + 556920 * v0**3 * (11 * L + 14 * xi**2 * v1)
                              + 44198 * xi**8 * v1**4 + 1531530 * v0**4)
                   + 556920 * a2**3 * a1 * (11 * L + 14 * xi**2 * v1 + 11 * v0) + 1531530 * a2**4)
    / (2778808032000 * a1**8),
]


def substituted(k, **vals):
    """Coefficient list (index = power of xi) of V_k after substitution, as sympy Rationals."""
    sub = {a1: vals["a1"], a2: vals["a2"], L: vals["shift"], v0: vals["v0"], v1: vals["v1"]}
    expr = sp.expand(V[k].subs({s: sp.Rational(str(v)) for s, v in sub.items()}))
    poly = sp.Poly(expr, xi)
    return {m[0]: c for m, c in zip(poly.monoms(), poly.coeffs())}
