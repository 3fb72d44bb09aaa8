"""Levi-Civita connection, curvature and derived vector fields of a frame.

Curvature follows R(X,Y) = nabla_[X,Y] - [nabla_X, nabla_Y].  Every trace
over the frame is a g-trace with the inverse metric, so null frames work
the same way as pseudo-orthonormal ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import tensors as T
from .frame import ParacontactFrame
from .scalar import Polynomial


@dataclass(frozen=True)
class Connection:
    """``gamma[i][j]`` holds the components of nabla_{E_i} E_j."""

    gamma: tuple

    @cached_property
    def matrices(self) -> tuple:
        """``matrices[i]`` is the endomorphism V -> nabla_{E_i} V."""
        n = len(self.gamma)
        return tuple(T.from_columns([self.gamma[i][j] for j in range(n)]) for i in range(n))


@dataclass(frozen=True)
class CurvaturePackage:
    riemann: tuple  # riemann[i][j][k] = R(E_i, E_j) E_k
    ricci: tuple  # rho_ij
    ricci_operator: tuple  # Q, column j = Q E_j
    scalar: Polynomial


def levi_civita(frame: ParacontactFrame) -> Connection:
    """Koszul formula for left-invariant fields:
    2 g(nabla_X Y, Z) = g([X,Y],Z) - g([X,Z],Y) - g([Y,Z],X).
    """
    spec = frame.spec
    n, g = spec.dim, spec.metric
    ginv = frame.inverse_metric()
    low = [[T.lower(g, spec.brackets[i][j]) for j in range(n)] for i in range(n)]
    half = Fraction(1, 2)
    gamma = []
    for i in range(n):
        row = []
        for j in range(n):
            cov = tuple((low[i][j][k] - low[i][k][j] - low[j][k][i]) * half for k in range(n))
            row.append(T.mat_vec(ginv, cov))
        gamma.append(tuple(row))
    return Connection(tuple(gamma))


def nabla(conn: Connection, x, v) -> tuple:
    """nabla_X V for constant-component X, V."""
    out = None
    for i, xi in enumerate(x):
        if not xi:
            continue
        term = T.vscale(xi, T.mat_vec(conn.matrices[i], v))
        out = term if out is None else T.vadd(out, term)
    return out if out is not None else tuple(c * 0 for c in v)


def nabla_operator(conn: Connection, x) -> tuple:
    """Matrix of V -> nabla_X V."""
    n = len(x)
    out = None
    for i, xi in enumerate(x):
        if xi:
            term = T.mat_scale(xi, conn.matrices[i])
            out = term if out is None else T.mat_add(out, term)
    if out is None:
        z = x[0] * 0
        out = tuple((z,) * n for _ in range(n))
    return out


def nabla_endo(conn: Connection, x, a) -> tuple:
    """(nabla_X A) as a matrix: Y -> nabla_X(AY) - A nabla_X Y."""
    N = nabla_operator(conn, x)
    return T.mat_sub(T.mat_mul(N, a), T.mat_mul(a, N))


def riemann(conn: Connection, frame: ParacontactFrame) -> CurvaturePackage:
    spec = frame.spec
    n = spec.dim
    N = conn.matrices
    R = []
    for i in range(n):
        row = []
        for j in range(n):
            ops = nabla_operator(conn, spec.brackets[i][j])
            comm = T.mat_sub(T.mat_mul(N[i], N[j]), T.mat_mul(N[j], N[i]))
            row.append(tuple(T.columns(T.mat_sub(ops, comm))))
        R.append(tuple(row))
    R = tuple(R)
    rho, Q, r = ricci_from_riemann(R, frame)
    return CurvaturePackage(riemann=R, ricci=rho, ricci_operator=Q, scalar=r)


def ricci_from_riemann(R, frame: ParacontactFrame):
    """rho(X,Y) = tr(Z -> R(X,Z)Y);  Q = g^-1 rho;  r = tr Q."""
    n = frame.dim
    rho = tuple(
        tuple(sum((R[b][a][c][a] for a in range(1, n)), R[b][0][c][0]) for c in range(n))
        for b in range(n)
    )
    Q = T.mat_mul(T.poly_matrix(frame.params, frame.inverse_metric()), rho)
    return rho, Q, T.trace(Q)


def ricci(pkg: CurvaturePackage, frame: ParacontactFrame):
    return pkg.ricci, pkg.ricci_operator, pkg.scalar


def apply_riemann(pkg: CurvaturePackage, x, y, z) -> tuple:
    """R(X,Y)Z for arbitrary constant-component vectors."""
    n = len(x)
    out = tuple(x[0] * 0 for _ in range(n))
    for a in range(n):
        if not x[a]:
            continue
        for b in range(n):
            if not y[b] or a == b:
                continue
            for c in range(n):
                if not z[c]:
                    continue
                out = T.vadd(out, T.vscale(x[a] * y[b] * z[c], pkg.riemann[a][b][c]))
    return out


def standard_ricci(conn: Connection, frame: ParacontactFrame) -> tuple:
    """Ricci from R_std(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z,
    rho(Y,Z) = tr(X -> R_std(X,Y)Z), computed vector by vector."""
    spec = frame.spec
    n = spec.dim
    E = [T.basis_vec(spec.params, n, k) for k in range(n)]
    rho = []
    for b in range(n):
        row = []
        for c in range(n):
            acc = Polynomial.zero(spec.params)
            for a in range(n):
                v = T.vsub(
                    T.vsub(nabla(conn, E[a], nabla(conn, E[b], E[c])),
                           nabla(conn, E[b], nabla(conn, E[a], E[c]))),
                    nabla(conn, spec.brackets[a][b], E[c]),
                )
                acc = acc + v[a]
            row.append(acc)
        rho.append(tuple(row))
    return tuple(rho)


def _gtrace_pairs(frame: ParacontactFrame):
    ginv = frame.inverse_metric()
    n = frame.dim
    return [(i, j, ginv[i][j]) for i in range(n) for j in range(n) if ginv[i][j]]


def rough_laplacian(frame: ParacontactFrame, conn: Connection, v) -> tuple:
    """sum g^ij (nabla_{nabla_{E_i} E_j} V - nabla_{E_i} nabla_{E_j} V)."""
    n = frame.dim
    E = [T.basis_vec(frame.params, n, k) for k in range(n)]
    out = T.zero_vec(frame.params, n)
    for i, j, w in _gtrace_pairs(frame):
        term = T.vsub(nabla(conn, conn.gamma[i][j], v), nabla(conn, E[i], nabla(conn, E[j], v)))
        out = T.vadd(out, T.vscale(w, term))
    return out


def divergence_endo(frame: ParacontactFrame, conn: Connection, a) -> tuple:
    """div A = sum g^ij (nabla_{E_i} A) E_j."""
    n = frame.dim
    E = [T.basis_vec(frame.params, n, k) for k in range(n)]
    out = T.zero_vec(frame.params, n)
    for i, j, w in _gtrace_pairs(frame):
        out = T.vadd(out, T.vscale(w, T.mat_vec(nabla_endo(conn, E[i], a), E[j])))
    return out


def trace_nabla_phi(frame: ParacontactFrame, conn: Connection) -> tuple:
    return divergence_endo(frame, conn, frame.phi)


def nabla_xi(frame: ParacontactFrame, conn: Connection) -> tuple:
    """Matrix of X -> nabla_X xi."""
    n = frame.dim
    E = [T.basis_vec(frame.params, n, k) for k in range(n)]
    return T.from_columns([nabla(conn, E[i], frame.xi) for i in range(n)])


def harmonic_map_trace(frame: ParacontactFrame, conn: Connection, pkg: CurvaturePackage) -> tuple:
    """sum g^ij R(nabla_{E_i} xi, xi) E_j."""
    n = frame.dim
    E = [T.basis_vec(frame.params, n, k) for k in range(n)]
    xi = frame.xi
    out = T.zero_vec(frame.params, n)
    for i, j, w in _gtrace_pairs(frame):
        out = T.vadd(out, T.vscale(w, apply_riemann(pkg, nabla(conn, E[i], xi), xi, E[j])))
    return out


def norm_nabla_xi_sq(frame: ParacontactFrame, conn: Connection):
    """||nabla xi||^2 = sum g^ij g(nabla_{E_i} xi, nabla_{E_j} xi)."""
    n = frame.dim
    E = [T.basis_vec(frame.params, n, k) for k in range(n)]
    cols = [nabla(conn, E[i], frame.xi) for i in range(n)]
    acc = Polynomial.zero(frame.params)
    for i, j, w in _gtrace_pairs(frame):
        acc = acc + T.gdot(frame.metric, cols[i], cols[j]) * w
    return acc


# -- structural residuals ---------------------------------------------------------


def connection_residuals(frame: ParacontactFrame, conn: Connection) -> list:
    """Nonzero torsion and metric-compatibility residuals as (kind, indices, value)."""
    spec = frame.spec
    n, g = spec.dim, spec.metric
    E = [T.basis_vec(spec.params, n, k) for k in range(n)]
    out = []
    for i in range(n):
        for j in range(n):
            tors = T.vsub(T.vsub(conn.gamma[i][j], conn.gamma[j][i]), spec.brackets[i][j])
            if not T.is_zero_vec(tors):
                out.append(("torsion", (i, j), tors))
            for k in range(n):
                m = T.gdot(g, conn.gamma[i][j], E[k]) + T.gdot(g, E[j], conn.gamma[i][k])
                if m:
                    out.append(("metric", (i, j, k), m))
    return out


def curvature_residuals(frame: ParacontactFrame, pkg: CurvaturePackage) -> list:
    """Nonzero residuals of the algebraic curvature identities."""
    n, g = frame.dim, frame.metric
    E = [T.basis_vec(frame.params, n, k) for k in range(n)]
    R = pkg.riemann
    out = []

    def R4(a, b, c, d):
        return T.gdot(g, R[a][b][c], E[d])

    for a in range(n):
        for b in range(n):
            for c in range(n):
                r = T.vadd(R[a][b][c], R[b][a][c])
                if not T.is_zero_vec(r):
                    out.append(("antisymmetry", (a, b, c), r))
                bian = T.vadd(R[a][b][c], R[b][c][a], R[c][a][b])
                if not T.is_zero_vec(bian):
                    out.append(("bianchi", (a, b, c), bian))
                for d in range(n):
                    s = R4(a, b, c, d) + R4(a, b, d, c)
                    if s:
                        out.append(("skew", (a, b, c, d), s))
                    p = R4(a, b, c, d) - R4(c, d, a, b)
                    if p:
                        out.append(("pair", (a, b, c, d), p))
    for a in range(n):
        for b in range(n):
            r = pkg.ricci[a][b] - pkg.ricci[b][a]
            if r:
                out.append(("ricci-symmetry", (a, b), r))
    return out


class Geometry:
    """Lazily computed connection, curvature and derived objects of a frame."""

    def __init__(self, frame: ParacontactFrame):
        self.frame = frame

    @cached_property
    def conn(self) -> Connection:
        return levi_civita(self.frame)

    @cached_property
    def curv(self) -> CurvaturePackage:
        return riemann(self.conn, self.frame)

    @property
    def Q(self) -> tuple:
        return self.curv.ricci_operator

    @property
    def rho(self) -> tuple:
        return self.curv.ricci

    @cached_property
    def basis(self) -> list:
        return [T.basis_vec(self.frame.params, self.frame.dim, k) for k in range(self.frame.dim)]

    @cached_property
    def nabla_xi(self) -> tuple:
        return nabla_xi(self.frame, self.conn)

    @cached_property
    def Q_xi(self) -> tuple:
        return T.mat_vec(self.Q, self.frame.xi)

    @cached_property
    def laplacian_xi(self) -> tuple:
        return rough_laplacian(self.frame, self.conn, self.frame.xi)

    @cached_property
    def nabla_phi(self) -> tuple:
        """``nabla_phi[i]`` is the matrix of nabla_{E_i} phi."""
        return tuple(nabla_endo(self.conn, e, self.frame.phi) for e in self.basis)

    @cached_property
    def phi_h(self) -> tuple:
        return T.mat_mul(self.frame.phi, self.frame.h)

    @cached_property
    def nabla_phi_h(self) -> tuple:
        return tuple(nabla_endo(self.conn, e, self.phi_h) for e in self.basis)

    @cached_property
    def trace_h2(self):
        return T.trace(T.mat_mul(self.frame.h, self.frame.h))

    def nabla_phi_at(self, x) -> tuple:
        return nabla_endo(self.conn, x, self.frame.phi)

    def R(self, x, y, z) -> tuple:
        return apply_riemann(self.curv, x, y, z)
