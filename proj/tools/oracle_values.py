"""Reference values for tests/test_oracles.cpp, by direct index expansion in sympy.

Run: python3 tools/oracle_values.py
"""

import itertools

import sympy as sp

x1, x2 = sp.symbols("x1 x2")
KEYS = ["111", "112", "121", "122", "211", "212", "221", "222"]


def gammas(d):
    g = {}
    for k in KEYS:
        g[tuple(int(c) - 1 for c in k)] = sp.sympify(d.get(k, 0))
    return g


def curvature(g):
    X = (x1, x2)
    r = {}
    for i, j, k, l in itertools.product(range(2), repeat=4):
        v = sp.diff(g[j, k, l], X[i]) - sp.diff(g[i, k, l], X[j])
        for m in range(2):
            v += g[i, m, l] * g[j, k, m] - g[j, m, l] * g[i, k, m]
        r[i, j, k, l] = sp.simplify(v)
    return r


def ricci(g):
    r = curvature(g)
    return {(j, k): sp.simplify(sum(r[i, j, k, i] for i in range(2))) for j in range(2) for k in range(2)}


def nabla_ricci(g):
    X = (x1, x2)
    rho = ricci(g)
    out = {}
    for i, j, k in itertools.product(range(2), repeat=3):
        v = sp.diff(rho[j, k], X[i])
        for m in range(2):
            v -= g[i, j, m] * rho[m, k] + g[i, k, m] * rho[j, m]
        out[i, j, k] = sp.simplify(v)
    return out


def residuals(g, a):
    X = (x1, x2)
    out = {}
    for i, j, k in itertools.product(range(2), repeat=3):
        v = sp.diff(a[k], X[i], X[j])
        for l in range(2):
            v += (a[l] * sp.diff(g[i, j, k], X[l]) - g[i, j, l] * sp.diff(a[k], X[l])
                  + g[i, l, k] * sp.diff(a[l], X[j]) + g[l, j, k] * sp.diff(a[l], X[i]))
        out[i, j, k] = sp.simplify(v)
    return out


def show(name, d):
    print(name)
    for key, v in d.items():
        print("  ", key, v)


if __name__ == "__main__":
    ta = gammas({"112": 1, "221": 1})
    show("ricci type_a(112=1, 221=1)", ricci(ta))
    show("nabla_ricci type_a(112=1, 221=1)", nabla_ricci(ta))

    tb_a = {"111": 1, "121": sp.Rational(-1, 2), "122": 2, "212": 1, "221": 3, "222": -1}
    tb = {k: v / x1 for k, v in tb_a.items()}
    show("ricci type_b(A) times x1^2", {k: sp.simplify(v * x1**2) for k, v in ricci(gammas(tb)).items()})
    show("torsion type_b(A) times x1",
         {(i, j, k): sp.simplify((gammas(tb)[i, j, k] - gammas(tb)[j, i, k]) * x1)
          for i, j, k in itertools.product(range(2), repeat=3)})

    sph = gammas({"122": -sp.tan(x1), "212": -sp.tan(x1), "221": sp.sin(x1) * sp.cos(x1)})
    show("sphere curvature at (3/10, 0)",
         {k: sp.N(v.subs(x1, sp.Rational(3, 10)), 17) for k, v in curvature(sph).items() if v != 0})
    show("sphere residuals of x1 d1 at (3/10, 1/10)",
         {k: sp.N(v.subs({x1: sp.Rational(3, 10), x2: sp.Rational(1, 10)}), 17)
          for k, v in residuals(sph, (x1, 0)).items()})
