"""Structural predicates and curvature checks on a validated frame.

Every predicate returns a :class:`Verdict`: a :class:`ConditionSet` over the
frame's parameters (``holds`` / ``fails`` / ``holds_iff``) plus a short list
of residual witnesses.  Family side constraints such as ``gamma != 0`` are
passed in as ``nonzero`` polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import tensors as T
from .conditions import ConditionSet, vanishing
from .curvature import Geometry, harmonic_map_trace
from .scalar import Polynomial


class InternalInconsistency(RuntimeError):
    """Two independent computations of the same condition disagree."""


class PreconditionError(ValueError):
    """A check was asked for on a frame outside its hypotheses."""


@dataclass
class Verdict:
    name: str
    conditions: ConditionSet
    witnesses: list = field(default_factory=list)

    @property
    def status(self) -> str:
        return self.conditions.verdict

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    def holds_at(self, assignment) -> bool:
        return self.conditions.holds_at(assignment)

    def as_dict(self) -> dict:
        out = self.conditions.as_dict()
        if self.witnesses:
            out["witnesses"] = [{"at": w, "value": v} for w, v in self.witnesses[:8]]
        return out


def _witnesses(named) -> list:
    return [(where, str(p)) for where, p in named if not p.is_zero()]


def _verdict(name, geo, named, nonzero) -> Verdict:
    polys = [p for _, p in named]
    return Verdict(name, vanishing(geo.frame.params, polys, nonzero=nonzero), _witnesses(named))


def _eta(geo, v):
    return T.gdot(geo.frame.metric, v, geo.frame.xi)


def _off_xi(geo, v) -> tuple:
    """Projection onto ker eta: v - eta(v) xi."""
    return T.vsub(v, T.vscale(_eta(geo, v), geo.frame.xi))


def _mat_named(prefix, m):
    return [(f"{prefix}[{i}][{j}]", x) for i, row in enumerate(m) for j, x in enumerate(row)]


def _vec_named(prefix, v):
    return [(f"{prefix}[{k}]", x) for k, x in enumerate(v)]


def lie_derivative_metric(geo: Geometry) -> tuple:
    """(L_xi g)(E_i, E_j) = g(nabla_{E_i} xi, E_j) + g(E_i, nabla_{E_j} xi)."""
    g = geo.frame.metric
    cols = T.columns(geo.nabla_xi)
    E = geo.basis
    n = geo.frame.dim
    return tuple(
        tuple(T.gdot(g, cols[i], E[j]) + T.gdot(g, E[i], cols[j]) for j in range(n))
        for i in range(n)
    )


# -- K-paracontact, paraSasakian, R(X,Y)xi = -(eta(X)Y - eta(Y)X) --------------


def is_K_paracontact(geo: Geometry, nonzero: Sequence[Polynomial] = ()) -> Verdict:
    """h = 0, cross-checked against the Killing equation L_xi g = 0."""
    v = _verdict("K_paracontact", geo, _mat_named("h", geo.frame.h), nonzero)
    killing = vanishing(geo.frame.params, lie_derivative_metric(geo), nonzero=nonzero)
    if not v.conditions.equivalent(killing):
        raise InternalInconsistency(
            f"h = 0 gives [{v.conditions}] but L_xi g = 0 gives [{killing}]"
        )
    return v


def is_paraSasakian(geo: Geometry, nonzero: Sequence[Polynomial] = ()) -> Verdict:
    """(nabla_X phi)Y = -g(X,Y) xi + eta(Y) X on all frame pairs."""
    f = geo.frame
    E = geo.basis
    named = []
    for i in range(f.dim):
        for j in range(f.dim):
            r = T.mat_vec(geo.nabla_phi[i], E[j])
            if f.metric[i][j]:
                r = T.vadd(r, T.vscale(f.metric[i][j], f.xi))
            r = T.vsub(r, T.vscale(_eta(geo, E[j]), E[i]))
            named += _vec_named(f"(nabla_E{i} phi)E{j}", r)
    return _verdict("paraSasakian", geo, named, nonzero)


def eq4_residual(geo: Geometry) -> list:
    """Named components of R(E_i,E_j)xi + eta(E_i)E_j - eta(E_j)E_i."""
    f = geo.frame
    E = geo.basis
    x = f.spec.xi_index
    named = []
    for i in range(f.dim):
        for j in range(i + 1, f.dim):
            r = geo.curv.riemann[i][j][x]
            r = T.vadd(r, T.vscale(_eta(geo, E[i]), E[j]))
            r = T.vsub(r, T.vscale(_eta(geo, E[j]), E[i]))
            named += _vec_named(f"R(E{i},E{j})xi", r)
    return named


def check_eq4(geo: Geometry, nonzero: Sequence[Polynomial] = ()) -> Verdict:
    """R(X,Y)xi = -(eta(X)Y - eta(Y)X): necessary, not sufficient, for paraSasakian."""
    return _verdict("eq4_holds", geo, eq4_residual(geo), nonzero)


# -- eta-Einstein ----------------------------------------------------------------


@dataclass
class EtaEinsteinFit:
    verdict: Verdict
    a: Polynomial
    b: Polynomial

    def as_dict(self) -> dict:
        out = self.verdict.as_dict()
        out["a"], out["b"] = str(self.a), str(self.b)
        return out


def eta_einstein_fit(geo: Geometry, nonzero: Sequence[Polynomial] = ()) -> EtaEinsteinFit:
    """Fit Q = a I + b eta (x) xi.

    a and b come from two diagonal entries with independent coefficients;
    the verdict says where every entry of the residual vanishes, so ``a`` and
    ``b`` are meaningful exactly on that locus.
    """
    f = geo.frame
    Q = geo.Q
    xi = f.xi
    eta = [_eta(geo, e) for e in geo.basis]
    diag = [(k, xi[k] * eta[k]) for k in range(f.dim)]
    plain = next(k for k, c in diag if c.is_zero())
    mixed = next(k for k, c in diag if not c.is_zero())
    a = Q[plain][plain]
    b = (Q[mixed][mixed] - a).divide_exact(diag[mixed][1])
    if b is None:  # pragma: no cover - xi/eta components are rational
        raise InternalInconsistency("non-rational xi component")
    fitted = T.mat_add(
        T.mat_scale(a, T.identity(f.params, f.dim)),
        tuple(tuple(b * xi[i] * eta[j] for j in range(f.dim)) for i in range(f.dim)),
    )
    named = _mat_named("Q-aI-b eta(x)xi", T.mat_sub(Q, fitted))
    return EtaEinsteinFit(_verdict("eta_einstein", geo, named, nonzero), a, b)


# -- (kappa, mu) nullity ------------------------------------------------------------


@dataclass
class KMFit:
    verdict: Verdict
    kappa: Polynomial | None
    mu: Polynomial | None  # None with mu_unconstrained: h = 0 so mu is free
    mu_unconstrained: bool = False
    crosschecks: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = self.verdict.as_dict()
        out["kappa"] = None if self.kappa is None else str(self.kappa)
        out["mu"] = "unconstrained" if self.mu_unconstrained else (
            None if self.mu is None else str(self.mu))
        out["crosschecks"] = {k: v for k, v in sorted(self.crosschecks.items())}
        return out


def _km_equations(geo: Geometry):
    """(c, A, B) triples: R(E_i,E_j)xi[k] = kappa*A + mu*B componentwise."""
    f = geo.frame
    E = geo.basis
    x = f.spec.xi_index
    hcols = T.columns(f.h)
    out = []
    for i in range(f.dim):
        for j in range(i + 1, f.dim):
            ei, ej = _eta(geo, E[i]), _eta(geo, E[j])
            A = T.vsub(T.vscale(ei, E[j]), T.vscale(ej, E[i]))
            B = T.vsub(T.vscale(ei, hcols[j]), T.vscale(ej, hcols[i]))
            for k, c in enumerate(geo.curv.riemann[i][j][x]):
                out.append((f"R(E{i},E{j})xi[{k}]", c, A[k], B[k]))
    return out


def _km_pair_solve(eqs):
    """Cramer's rule on two equations with a nonzero determinant, exact division only."""
    for a in range(len(eqs)):
        _, c1, A1, B1 = eqs[a]
        if A1.is_zero() and B1.is_zero():
            continue
        for b in range(a + 1, len(eqs)):
            _, c2, A2, B2 = eqs[b]
            det = A1 * B2 - A2 * B1
            if det.is_zero():
                continue
            kappa = (c1 * B2 - c2 * B1).divide_exact(det)
            mu = (A1 * c2 - A2 * c1).divide_exact(det)
            if kappa is not None and mu is not None:
                return kappa, mu
    return None, None


def km_fit(geo: Geometry, nonzero: Sequence[Polynomial] = ()) -> KMFit:
    """Fit R(X,Y)xi = kappa(eta(X)Y - eta(Y)X) + mu(eta(X)hY - eta(Y)hX).

    kappa is read from an equation free of mu; mu is then taken from the
    first equation where it divides exactly.  When h = 0, mu is reported as
    unconstrained.
    """
    f = geo.frame
    params = f.params
    zero = Polynomial.zero(params)
    eqs = _km_equations(geo)
    kappa = mu = None
    for _, c, A, B in eqs:
        if B.is_zero() and not A.is_zero():
            kappa = c.divide_exact(A)
            if kappa is not None:
                break
    h_zero = T.is_zero_mat(f.h)
    if kappa is None and not h_zero:
        kappa, mu = _km_pair_solve(eqs)
    if kappa is not None and mu is None and not h_zero:
        for _, c, A, B in eqs:
            if not B.is_zero():
                mu = (c - kappa * A).divide_exact(B)
                if mu is not None:
                    break
    if kappa is None:
        return KMFit(Verdict("km_space", ConditionSet.never(params, nonzero),
                             [("kappa", "no mu-free equation determines kappa")]), None, None)
    if mu is None and not h_zero:
        return KMFit(Verdict("km_space", ConditionSet.never(params, nonzero),
                             [("mu", "not a polynomial in the parameters")]), kappa, None)
    m = zero if h_zero else mu
    named = [(where, c - kappa * A - m * B) for where, c, A, B in eqs]
    verdict = _verdict("km_space", geo, named, nonzero)
    fit = KMFit(verdict, kappa, None if h_zero else mu, mu_unconstrained=h_zero)
    # Q xi = 2n kappa xi and h^2 = (kappa + 1) phi^2, on the fitted locus
    qxi = T.vsub(geo.Q_xi, T.vscale(2 * f.n * kappa, f.xi))
    h2 = T.mat_sub(T.mat_mul(f.h, f.h), T.mat_scale(kappa + 1, T.mat_mul(f.phi, f.phi)))
    locus = verdict.conditions
    fit.crosschecks = {
        "Q_xi_eq_2n_kappa_xi": all(locus.reduce(p).is_zero() for p in qxi),
        "h2_eq_kappa_plus_1_phi2": all(locus.reduce(p).is_zero() for row in h2 for p in row),
    }
    return fit


def kno1_residual(geo: Geometry, kappa, mu, literal: bool = False) -> list:
    """Named components of R(X,Y)hZ - hR(X,Y)Z minus the closed form for (kappa,mu)-spaces.

    The closed form's eta(Z)(eta(Y)hX - eta(X)hY) term carries a factor kappa;
    ``literal=True`` drops it, which contradicts the nullity condition at Z = xi.
    """
    f = geo.frame
    g = f.metric
    E = geo.basis
    h, phi = f.h, f.phi
    phih = geo.phi_h
    dot = lambda u, v: T.gdot(g, u, v)  # noqa: E731
    hcols, phicols, phihcols = T.columns(h), T.columns(phi), T.columns(phih)
    eta = [_eta(geo, e) for e in E]
    c_hh = Polynomial.constant(f.params, 1) if literal else kappa
    named = []
    for i in range(f.dim):
        for j in range(f.dim):
            if i == j:
                continue
            for k in range(f.dim):
                X, Y, Z = E[i], E[j], E[k]
                lhs = T.vsub(geo.R(X, Y, hcols[k]), T.mat_vec(h, geo.curv.riemann[i][j][k]))
                coef_xi = (kappa * (eta[j] * dot(hcols[i], Z) - eta[i] * dot(hcols[j], Z))
                           + mu * (kappa + 1) * (eta[j] * g[i][k] - eta[i] * g[j][k]))
                rhs = T.vscale(coef_xi, f.xi)
                rhs = T.vadd(rhs, T.vscale(kappa, T.vadd(
                    T.vscale(dot(Y, phicols[k]), phihcols[i]),
                    T.vscale(-dot(X, phicols[k]), phihcols[j]),
                    T.vscale(dot(Z, phihcols[j]), phicols[i]),
                    T.vscale(-dot(Z, phihcols[i]), phicols[j]),
                )))
                rhs = T.vadd(rhs, T.vscale(c_hh * eta[k],
                                           T.vsub(T.vscale(eta[j], hcols[i]), T.vscale(eta[i], hcols[j]))))
                rhs = T.vadd(rhs, T.vscale(mu * (kappa + 1) * eta[k],
                                           T.vsub(T.vscale(eta[j], X), T.vscale(eta[i], Y))))
                rhs = T.vadd(rhs, T.vscale(2 * mu * dot(X, phicols[j]), phihcols[k]))
                named += _vec_named(f"X=E{i},Y=E{j},Z=E{k}", T.vsub(lhs, rhs))
    return named


def check_kno1(geo: Geometry, fit: KMFit, nonzero: Sequence[Polynomial] = (),
               literal: bool = False) -> Verdict:
    """Commutator identity for (kappa, mu)-spaces with kappa != -1, on the fitted locus."""
    if fit.kappa is None or fit.verdict.status == "fails":
        raise PreconditionError("frame is not a (kappa, mu)-space")
    if (fit.kappa + 1).is_zero():
        raise PreconditionError("kappa = -1 identically; the identity needs kappa != -1")
    mu = fit.mu if fit.mu is not None else Polynomial.zero(geo.frame.params)
    locus = fit.verdict.conditions
    named = [(w, locus.reduce(p)) for w, p in kno1_residual(geo, fit.kappa, mu, literal)]
    nz = tuple(nonzero) + (fit.kappa + 1,)
    extra = vanishing(geo.frame.params, [p for _, p in named], nonzero=nz)
    return Verdict("kno1", extra.conjoin(locus) if not locus.is_always else extra,
                   _witnesses(named))


# -- harmonicity ------------------------------------------------------------------


def is_H_paracontact(geo: Geometry, nonzero: Sequence[Polynomial] = ()) -> Verdict:
    """xi is a Ricci eigenvector; checked against Lap xi being collinear to xi."""
    v = _verdict("H_paracontact", geo, _vec_named("pr Q xi", _off_xi(geo, geo.Q_xi)), nonzero)
    lap = vanishing(geo.frame.params, _off_xi(geo, geo.laplacian_xi), nonzero=nonzero)
    if not v.conditions.equivalent(lap):
        raise InternalInconsistency(
            f"Ricci eigenvector locus [{v.conditions}] differs from Laplacian locus [{lap}]"
        )
    return v


def is_harmonic_map(geo: Geometry, nonzero: Sequence[Polynomial] = ()) -> Verdict:
    """H-paracontact and tr[R(nabla. xi, xi).] = 0."""
    hp = is_H_paracontact(geo, nonzero)
    tr = harmonic_map_trace(geo.frame, geo.conn, geo.curv)
    named = _vec_named("pr Q xi", _off_xi(geo, geo.Q_xi)) + _vec_named("trace", tr)
    out = _verdict("harmonic_map", geo, named, nonzero)
    assert out.conditions.implies(hp.conditions)
    return out


def is_iht(geo: Geometry, nonzero: Sequence[Polynomial] = ()) -> Verdict:
    """Infinitesimal harmonic transformation, computed three independent ways.

    Q xi = -2n xi; Lap xi = Q xi; H-paracontact with tr h^2 = 0.  The three
    loci must coincide.
    """
    f = geo.frame
    params = f.params
    qxi = T.vadd(geo.Q_xi, T.vscale(2 * f.n, f.xi))
    v = _verdict("iht", geo, _vec_named("Q xi + 2n xi", qxi), nonzero)
    lap = vanishing(params, T.vsub(geo.laplacian_xi, geo.Q_xi), nonzero=nonzero)
    hp = is_H_paracontact(geo, nonzero).conditions
    third = hp.conjoin(vanishing(params, [geo.trace_h2], nonzero=nonzero))
    for label, other in (("Lap xi = Q xi", lap), ("H-paracontact and tr h^2 = 0", third)):
        if not v.conditions.equivalent(other):
            raise InternalInconsistency(
                f"Q xi = -2n xi gives [{v.conditions}] but {label} gives [{other}]"
            )
    return v


# -- Ricci solitons -----------------------------------------------------------------


@dataclass
class SolitonResult:
    verdict: Verdict
    lam: Polynomial | None
    trivial: bool | None

    def as_dict(self) -> dict:
        out = self.verdict.as_dict()
        out["lambda"] = None if self.lam is None else str(self.lam)
        out["trivial"] = self.trivial
        return out


def einstein_conditions(geo: Geometry, nonzero: Sequence[Polynomial] = ()) -> ConditionSet:
    """rho = (r / dim) g, written without division: dim * rho - r g = 0."""
    f = geo.frame
    r = geo.curv.scalar
    resid = [f.dim * geo.rho[i][j] - r * f.metric[i][j]
             for i in range(f.dim) for j in range(f.dim)]
    return vanishing(f.params, resid, nonzero=nonzero)


def soliton_solve(geo: Geometry, nonzero: Sequence[Polynomial] = ()) -> SolitonResult:
    """Solve rho + 1/2 L_xi g = lambda g for a constant lambda.

    lambda is read off the xi slot (g(xi, xi) = 1).  On the solvable locus
    lambda + 2n must vanish; anything else is reported as an inconsistency.
    """
    f = geo.frame
    x = f.spec.xi_index
    L = lie_derivative_metric(geo)
    M = tuple(tuple(geo.rho[i][j] + L[i][j] * Fraction(1, 2) for j in range(f.dim))
              for i in range(f.dim))
    lam = M[x][x]
    resid = tuple(tuple(M[i][j] - lam * f.metric[i][j] for j in range(f.dim))
                  for i in range(f.dim))
    v = _verdict("soliton", geo, _mat_named("rho+1/2 L g-lambda g", resid), nonzero)
    if v.status == "fails":
        return SolitonResult(v, None, None)
    if not v.conditions.reduce(lam + 2 * f.n).is_zero():
        raise InternalInconsistency(f"soliton with lambda = {lam} != -2n on [{v.conditions}]")
    lam_on_locus = lam.substitute(v.conditions.substitution())
    killing_einstein = einstein_conditions(geo, nonzero).conjoin(
        vanishing(f.params, f.h, nonzero=nonzero))
    trivial = v.conditions.implies(killing_einstein)
    return SolitonResult(v, lam_on_locus, trivial)


# -- K-paracontact curvature identities ----------------------------------------------


def check_kparacontact_identities(geo: Geometry, locus: ConditionSet | None = None) -> Verdict:
    """R(Y,Z,xi,X) = g((nabla_Y phi)Z, X) - g((nabla_Z phi)Y, X) and
    R(xi,X,Y,Z) = g((nabla_X phi)Z, Y), with R(X,Y,Z,W) = g(R(X,Y)Z, W).

    Requires h = 0, identically or on the given locus.
    """
    f = geo.frame
    params = f.params
    red = (lambda p: p) if locus is None else locus.reduce
    if not all(red(p).is_zero() for row in f.h for p in row):
        raise PreconditionError("h does not vanish; identities apply to K-paracontact frames")
    g = f.metric
    E = geo.basis
    x = f.spec.xi_index
    named = []
    for a in range(f.dim):
        for b in range(f.dim):
            for c in range(f.dim):
                X, Y, Z = E[a], E[b], E[c]
                lhs = T.gdot(g, geo.curv.riemann[b][c][x], X)
                rhs = (T.gdot(g, T.mat_vec(geo.nabla_phi[b], Z), X)
                       - T.gdot(g, T.mat_vec(geo.nabla_phi[c], Y), X))
                named.append((f"first Y=E{b},Z=E{c},X=E{a}", red(lhs - rhs)))
                lhs2 = T.gdot(g, geo.curv.riemann[x][a][b], Z)
                rhs2 = T.gdot(g, T.mat_vec(geo.nabla_phi[a], Z), Y)
                named.append((f"second X=E{a},Y=E{b},Z=E{c}", red(lhs2 - rhs2)))
    out = _verdict("kparacontact_identities", geo, named, locus.nonzero if locus else ())
    return out


# -- full classification -----------------------------------------------------------------


FLAG_ORDER = ("K_paracontact", "paraSasakian", "eq4_holds", "eta_einstein", "km_space",
              "H_paracontact", "harmonic_map", "iht", "soliton")


@dataclass
class Classification:
    flags: dict
    fitted: dict
    km: KMFit
    eta_einstein: EtaEinsteinFit
    soliton: SolitonResult

    def as_dict(self) -> dict:
        return {
            "flags": {k: self.flags[k].as_dict() for k in FLAG_ORDER},
            "fitted": {k: (None if v is None else str(v)) for k, v in sorted(self.fitted.items())},
            "km_fit": self.km.as_dict(),
            "soliton": self.soliton.as_dict(),
        }


def classify(geo: Geometry, nonzero: Sequence[Polynomial] = ()) -> Classification:
    k = is_K_paracontact(geo, nonzero)
    ps = is_paraSasakian(geo, nonzero)
    if not ps.conditions.implies(k.conditions):
        raise InternalInconsistency("paraSasakian locus is not contained in the K-paracontact locus")
    ee = eta_einstein_fit(geo, nonzero)
    km = km_fit(geo, nonzero)
    sol = soliton_solve(geo, nonzero)
    iht = is_iht(geo, nonzero)
    if not sol.verdict.conditions.implies(iht.conditions):
        raise InternalInconsistency("soliton locus is not contained in the IHT locus")
    flags = {
        "K_paracontact": k,
        "paraSasakian": ps,
        "eq4_holds": check_eq4(geo, nonzero),
        "eta_einstein": ee.verdict,
        "km_space": km.verdict,
        "H_paracontact": is_H_paracontact(geo, nonzero),
        "harmonic_map": is_harmonic_map(geo, nonzero),
        "iht": iht,
        "soliton": sol.verdict,
    }
    fitted = {
        "a": ee.a if ee.verdict.status != "fails" else None,
        "b": ee.b if ee.verdict.status != "fails" else None,
        "kappa": km.kappa if km.verdict.status != "fails" else None,
        "mu": km.mu if km.verdict.status != "fails" else None,
        "lambda": sol.lam,
    }
    return Classification(flags, fitted, km, ee, sol)


__all__ = [
    "Classification", "EtaEinsteinFit", "InternalInconsistency", "KMFit", "PreconditionError",
    "SolitonResult", "Verdict", "FLAG_ORDER", "check_eq4", "check_kno1",
    "check_kparacontact_identities", "classify", "einstein_conditions", "eq4_residual",
    "eta_einstein_fit", "is_H_paracontact", "is_K_paracontact", "is_harmonic_map", "is_iht",
    "is_paraSasakian", "km_fit", "kno1_residual", "lie_derivative_metric", "soliton_solve",
]
