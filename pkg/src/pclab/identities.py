"""Residuals of the structural identities every paracontact metric frame satisfies.

Each check returns an :class:`IdentityResult` whose residuals are the
nonzero components of ``lhs - rhs``; an identity passes when there are none.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import tensors as T
from .curvature import Geometry, connection_residuals, curvature_residuals, standard_ricci


@dataclass
class IdentityResult:
    id: str
    description: str
    residuals: list = field(default_factory=list)  # (location, str) pairs

    @property
    def passed(self) -> bool:
        return not self.residuals

    def add_vec(self, where, vec):
        for k, c in enumerate(vec):
            if c:
                self.residuals.append((f"{where}[{k}]", str(c)))

    def add(self, where, value):
        if value:
            self.residuals.append((where, str(value)))

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "description": self.description,
            "residuals": [{"at": w, "value": v} for w, v in self.residuals[:20]],
        }


def _eta(geo: Geometry, v):
    return T.gdot(geo.frame.metric, v, geo.frame.xi)


def check_eq1(geo: Geometry) -> IdentityResult:
    """nabla xi = -phi + phi h, nabla_xi phi = 0, h phi = -phi h, h xi = 0, tr h = tr h phi = 0."""
    f = geo.frame
    res = IdentityResult("eq1", "nabla xi = -phi + phi h; nabla_xi phi = 0; h phi = -phi h; "
                                "h xi = 0; tr h = tr h phi = 0")
    target = T.mat_add(T.mat_neg(f.phi), geo.phi_h)
    for j, col in enumerate(T.columns(T.mat_sub(geo.nabla_xi, target))):
        res.add_vec(f"nabla_E{j} xi", col)
    for j, col in enumerate(T.columns(geo.nabla_phi_at(f.xi))):
        res.add_vec(f"(nabla_xi phi)E{j}", col)
    for j, col in enumerate(T.columns(T.mat_add(T.mat_mul(f.h, f.phi), geo.phi_h))):
        res.add_vec(f"(h phi + phi h)E{j}", col)
    res.add_vec("h xi", T.mat_vec(f.h, f.xi))
    res.add("tr h", T.trace(f.h))
    res.add("tr h phi", T.trace(T.mat_mul(f.h, f.phi)))
    return res


def check_eq2(geo: Geometry) -> IdentityResult:
    """(nabla_{phi X} phi) phi Y - (nabla_X phi) Y = 2 g(X,Y) xi - eta(Y)(X - hX + eta(X) xi)."""
    f = geo.frame
    g = f.metric
    res = IdentityResult("eq2", "(nabla_phiX phi)phiY - (nabla_X phi)Y = "
                                "2g(X,Y)xi - eta(Y)(X - hX + eta(X)xi)")
    E = geo.basis
    phi_cols = T.columns(f.phi)
    h_cols = T.columns(f.h)
    for i, X in enumerate(E):
        A = geo.nabla_phi_at(phi_cols[i])
        B = geo.nabla_phi[i]
        for j, Y in enumerate(E):
            lhs = T.vsub(T.mat_vec(A, phi_cols[j]), T.mat_vec(B, Y))
            inner = T.vadd(T.vsub(X, h_cols[i]), T.vscale(_eta(geo, X), f.xi))
            rhs = T.vsub(T.vscale(2 * g[i][j], f.xi) if g[i][j] else T.vscale(0, f.xi),
                         T.vscale(_eta(geo, Y), inner))
            res.add_vec(f"X=E{i},Y=E{j}", T.vsub(lhs, rhs))
    return res


def check_eq3(geo: Geometry) -> IdentityResult:
    """rho(xi, xi) = -2n + tr h^2."""
    f = geo.frame
    x = f.spec.xi_index
    res = IdentityResult("eq3", "rho(xi,xi) = -2n + tr h^2")
    res.add("rho(xi,xi)+2n-tr h^2", geo.rho[x][x] + 2 * f.n - geo.trace_h2)
    return res


def check_eq31p(geo: Geometry) -> IdentityResult:
    """tr nabla phi = -2n xi."""
    f = geo.frame
    res = IdentityResult("eq3.1p", "tr nabla phi = -2n xi")
    from .curvature import trace_nabla_phi

    res.add_vec("tr nabla phi + 2n xi",
                T.vadd(trace_nabla_phi(f, geo.conn), T.vscale(2 * f.n, f.xi)))
    return res


def check_eq33(geo: Geometry) -> IdentityResult:
    """R(X,Y)xi = (nabla_X phi)Y - (nabla_Y phi)X - (nabla_X phi h)Y + (nabla_Y phi h)X."""
    f = geo.frame
    E = geo.basis
    res = IdentityResult("eq3.3", "R(X,Y)xi = (nabla_X phi)Y - (nabla_Y phi)X "
                                  "- (nabla_X phi h)Y + (nabla_Y phi h)X")
    x = f.spec.xi_index
    for i in range(f.dim):
        for j in range(f.dim):
            rhs = T.vsub(
                T.vsub(T.mat_vec(geo.nabla_phi[i], E[j]), T.mat_vec(geo.nabla_phi[j], E[i])),
                T.vsub(T.mat_vec(geo.nabla_phi_h[i], E[j]), T.mat_vec(geo.nabla_phi_h[j], E[i])),
            )
            res.add_vec(f"X=E{i},Y=E{j}", T.vsub(geo.curv.riemann[i][j][x], rhs))
    return res


def check_eq35(geo: Geometry) -> IdentityResult:
    """rho(X, xi) = -2n eta(X) + g(div(phi h), X)."""
    from .curvature import divergence_endo

    f = geo.frame
    x = f.spec.xi_index
    res = IdentityResult("eq3.5", "rho(X,xi) = -2n eta(X) + g(div(phi h), X)")
    div = divergence_endo(f, geo.conn, geo.phi_h)
    for i, X in enumerate(geo.basis):
        rhs = -2 * f.n * _eta(geo, X) + T.gdot(f.metric, div, X)
        res.add(f"X=E{i}", geo.rho[i][x] - rhs)
    return res


def _gtrace_pairs(geo):
    ginv = geo.frame.inverse_metric()
    n = geo.frame.dim
    return [(a, b, ginv[a][b]) for a in range(n) for b in range(n) if ginv[a][b]]


def check_tr0(geo: Geometry) -> IdentityResult:
    """sum g^ab g((nabla_X phi) E_a, E_b) = 0 for every frame X."""
    f = geo.frame
    E = geo.basis
    res = IdentityResult("tr0", "tr (nabla_X phi) = 0")
    for i in range(f.dim):
        acc = 0 * f.eta[0]
        for a, b, w in _gtrace_pairs(geo):
            acc = acc + T.gdot(f.metric, T.mat_vec(geo.nabla_phi[i], E[a]), E[b]) * w
        res.add(f"X=E{i}", acc)
    return res


def check_trace(geo: Geometry) -> IdentityResult:
    """sum g^ab g((nabla_{E_a} phi) X, E_b) = 2n eta(X)."""
    f = geo.frame
    E = geo.basis
    res = IdentityResult("trace", "sum g((nabla_Ei phi)X, Ei) = 2n eta(X)")
    for i, X in enumerate(E):
        acc = 0 * f.eta[0]
        for a, b, w in _gtrace_pairs(geo):
            acc = acc + T.gdot(f.metric, T.mat_vec(geo.nabla_phi[a], X), E[b]) * w
        res.add(f"X=E{i}", acc - 2 * f.n * _eta(geo, X))
    return res


def check_main2(geo: Geometry) -> IdentityResult:
    """Laplacian of xi = -4n xi - Q xi = |nabla xi|^2 xi - pr_ker_eta Q xi, |nabla xi|^2 = -(2n + tr h^2)."""
    from .curvature import norm_nabla_xi_sq

    f = geo.frame
    res = IdentityResult("main2", "Lap xi = -4n xi - Q xi = |nabla xi|^2 xi - pr Q xi; "
                                  "|nabla xi|^2 = -(2n + tr h^2)")
    lap, qxi = geo.laplacian_xi, geo.Q_xi
    res.add_vec("Lap xi + 4n xi + Q xi", T.vadd(lap, T.vscale(4 * f.n, f.xi), qxi))
    norm = norm_nabla_xi_sq(f, geo.conn)
    res.add("|nabla xi|^2 + 2n + tr h^2", norm + 2 * f.n + geo.trace_h2)
    pr = T.vsub(qxi, T.vscale(_eta(geo, qxi), f.xi))
    res.add_vec("Lap xi - |nabla xi|^2 xi + pr Q xi",
                T.vadd(T.vsub(lap, T.vscale(norm, f.xi)), pr))
    return res


def check_cd1(geo: Geometry) -> IdentityResult:
    """tr[R(nabla. xi, xi).] = 0 (harmonic map condition; not an identity in general)."""
    from .curvature import harmonic_map_trace

    res = IdentityResult("cd1", "tr[R(nabla. xi, xi).] = 0")
    res.add_vec("trace", harmonic_map_trace(geo.frame, geo.conn, geo.curv))
    return res


def check_structure(geo: Geometry) -> IdentityResult:
    """Torsion, metric compatibility, curvature symmetries, Bianchi, and the
    cross-check of Ricci against the standard-convention computation."""
    res = IdentityResult("structure", "torsion-free, metric, curvature symmetries, Bianchi, "
                                      "standard-convention Ricci agreement")
    for kind, idx, val in connection_residuals(geo.frame, geo.conn) + \
            curvature_residuals(geo.frame, geo.curv):
        res.residuals.append((f"{kind}{idx}", str(val)))
    std = standard_ricci(geo.conn, geo.frame)
    for a in range(geo.frame.dim):
        for b in range(geo.frame.dim):
            res.add(f"rho-rho_std[{a}][{b}]", geo.rho[a][b] - std[a][b])
    return res


IDENTITY_CHECKS = {
    "eq1": check_eq1,
    "eq2": check_eq2,
    "eq3": check_eq3,
    "eq3.1p": check_eq31p,
    "eq3.3": check_eq33,
    "eq3.5": check_eq35,
    "tr0": check_tr0,
    "trace": check_trace,
    "main2": check_main2,
}


def identity_suite(geo: Geometry, include_structure: bool = False) -> dict:
    """Run every identity; keys are the identity ids."""
    out = {key: fn(geo) for key, fn in IDENTITY_CHECKS.items()}
    if include_structure:
        out["structure"] = check_structure(geo)
    return out


__all__ = ["IdentityResult", "IDENTITY_CHECKS", "identity_suite", "check_cd1",
           "check_structure"]
