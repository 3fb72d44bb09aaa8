"""Independent sympy recomputation of frame geometry, used only as a test oracle.

Works from raw structure constants in the standard curvature convention
R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y], so agreement with the engine
also exercises the convention bookkeeping.
"""

from __future__ import annotations

import sympy as sp

from pclab.scalar import Polynomial

def symbols_for(params):
    return {p: sp.Symbol(p, real=True) for p in params}


def to_sympy(p: Polynomial, syms=None):
    syms = syms or symbols_for(p.variables)
    out = sp.Integer(0)
    for exps, c in p.terms.items():
        term = sp.Rational(c.numerator, c.denominator)
        for name, e in zip(p.variables, exps):
            term *= syms[name] ** e
        out += term
    return sp.expand(out)


def to_sym(x, syms):
    """Fraction, int or Polynomial to a sympy expression."""
    if isinstance(x, Polynomial):
        return to_sympy(x, syms)
    return sp.Rational(x.numerator, x.denominator)


def reduce_eps(expr, syms):
    """Apply eps^2 = 1."""
    expr = sp.expand(expr)
    if "eps" not in syms:
        return expr
    e = syms["eps"]
    return sp.expand(sp.rem(expr, e**2 - 1, e))


class SympyFrame:
    def __init__(self, spec):
        self.spec = spec
        self.n = spec.dim
        self.syms = symbols_for(spec.params)
        n = self.n
        self.C = [[[to_sympy(spec.brackets[i][j][k], self.syms) for k in range(n)]
                   for j in range(n)] for i in range(n)]
        self.g = sp.Matrix(n, n, lambda i, j: to_sym(spec.metric[i][j], self.syms))
        self.ginv = self.g.inv()
        self.E = [sp.eye(n)[:, k] for k in range(n)]
        # Koszul: 2 g(nabla_i E_j, E_k) = c_ijk - c_jki + c_kij with c_ijk = g([E_i,E_j],E_k)
        c = lambda i, j, k: sum(self.C[i][j][m] * self.g[m, k] for m in range(n))  # noqa: E731
        self.Gamma = [[self.ginv * sp.Matrix([sp.Rational(1, 2) * (c(i, j, k) - c(j, k, i) + c(k, i, j))
                                              for k in range(n)])
                       for j in range(n)] for i in range(n)]

    def bracket(self, u, v):
        n = self.n
        return sp.Matrix([sum(u[i] * v[j] * self.C[i][j][k] for i in range(n) for j in range(n))
                          for k in range(n)])

    def nabla(self, x, v):
        n = self.n
        out = sp.zeros(n, 1)
        for i in range(n):
            for j in range(n):
                if x[i] != 0 and v[j] != 0:
                    out += x[i] * v[j] * self.Gamma[i][j]
        return out

    def R_std(self, x, y, z):
        return (self.nabla(x, self.nabla(y, z)) - self.nabla(y, self.nabla(x, z))
                - self.nabla(self.bracket(x, y), z)).applyfunc(sp.expand)

    def ricci(self):
        n = self.n
        rho = sp.zeros(n, n)
        for b in range(n):
            for c in range(n):
                acc = 0
                for a in range(n):
                    for d in range(n):
                        if self.ginv[a, d] != 0:
                            acc += self.ginv[a, d] * (self.g * self.R_std(self.E[a], self.E[b], self.E[c]))[d]
                rho[b, c] = sp.expand(acc)
        return rho

    def ricci_operator(self):
        return (self.ginv * self.ricci()).applyfunc(lambda e: reduce_eps(e, self.syms))

    def h(self, phi):
        n = self.n
        P = sp.Matrix(n, n, lambda i, j: to_sym(phi[i][j], self.syms))
        ad = sp.Matrix.hstack(*[self.bracket(self.E[self.spec.xi_index], self.E[j]) for j in range(n)])
        return ((ad * P - P * ad) / 2).applyfunc(lambda e: reduce_eps(e, self.syms))


def same(engine_poly: Polynomial, expr, syms) -> bool:
    return sp.expand(reduce_eps(to_sympy(engine_poly, syms) - expr, syms)) == 0
