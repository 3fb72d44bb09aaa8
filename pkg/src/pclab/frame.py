"""Left-invariant almost paracontact candidates and their validation.

A :class:`FrameSpec` is raw Lie-algebra data on a frame ``E_0 .. E_{2n}``:
structure constants, a constant metric, the slot of the Reeb field and the
matrix of ``phi``.  :func:`validate` checks every paracontact axiom
identically in the parameters and returns a :class:`ParacontactFrame`
carrying ``eta`` and ``h``.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from . import tensors as T
from .scalar import Polynomial, as_fraction, determinant, inverse, parse_expr

CURVATURE_CONVENTION = "R(X,Y) = nabla_[X,Y] - [nabla_X, nabla_Y]"


@dataclass(frozen=True)
class SignConvention:
    """Sign ``d_eta_sign`` in d eta(X,Y) = s * 1/2 (X eta(Y) - Y eta(X) - eta([X,Y]))."""

    d_eta_sign: int = 1
    curvature: str = CURVATURE_CONVENTION

    def __post_init__(self):
        if self.d_eta_sign not in (1, -1):
            raise ValueError("d_eta_sign must be +1 or -1")

    def as_dict(self) -> dict:
        return {"d_eta_sign": self.d_eta_sign, "curvature": self.curvature}


def default_convention() -> SignConvention:
    """Calibrated convention, overridable with PCLAB_DETA_SIGN=+1|-1."""
    raw = os.environ.get("PCLAB_DETA_SIGN", "").strip()
    if not raw:
        return SignConvention()
    return SignConvention(d_eta_sign=int(raw))


# -- violations -----------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    axiom: str
    indices: tuple
    residual: str

    def as_dict(self) -> dict:
        return {"axiom": self.axiom, "indices": list(self.indices), "residual": self.residual}

    def __str__(self):
        return f"{self.axiom}{self.indices}: {self.residual}"


@dataclass(frozen=True)
class JacobiViolation(Violation):
    def __init__(self, i, j, k, residual):
        super().__init__("jacobi", (i, j, k), residual)


@dataclass(frozen=True)
class AxiomViolation(Violation):
    pass


class ValidationError(Exception):
    def __init__(self, violations: Sequence[Violation], label: str = ""):
        self.violations = list(violations)
        self.label = label
        head = f"{label}: " if label else ""
        super().__init__(head + "; ".join(str(v) for v in self.violations[:5]))


class DegenerateMetric(ValidationError):
    def __init__(self, label: str = "", reason: str = "metric is degenerate"):
        super().__init__([AxiomViolation("metric", (), reason)], label)


class NoConsistentPhi(ValidationError):
    def __init__(self, label: str = ""):
        super().__init__([AxiomViolation("phi", (), "no sign pattern satisfies the axioms")], label)


# -- data types -------------------------------------------------------------------


@dataclass(frozen=True)
class FrameSpec:
    """Raw frame data.  ``brackets[i][j]`` is the component vector of [E_i, E_j]."""

    dim: int
    params: tuple
    brackets: tuple
    metric: tuple
    xi_index: int = 0
    phi: tuple | None = None
    label: str = ""
    pairing: tuple | None = None

    @classmethod
    def build(
        cls,
        dim: int,
        params: Sequence[str],
        brackets: Mapping[tuple, Mapping[int, object]],
        metric,
        xi_index: int = 0,
        phi=None,
        label: str = "",
        pairing=None,
    ) -> "FrameSpec":
        """Build from sparse brackets ``{(i, j): {k: coeff}}`` with i < j.

        Coefficients may be polynomials, rationals or expression strings.
        """
        params = tuple(params)
        zero = Polynomial.zero(params)
        table = [[[zero] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), coeffs in brackets.items():
            if i == j:
                raise ValueError(f"bracket [E{i},E{j}] must vanish")
            for k, c in coeffs.items():
                p = _to_poly(c, params)
                table[i][j][k] = table[i][j][k] + p
                table[j][i][k] = table[j][i][k] - p
        return cls(
            dim=dim,
            params=params,
            brackets=tuple(tuple(tuple(v) for v in row) for row in table),
            metric=tuple(tuple(as_fraction(x) for x in row) for row in metric),
            xi_index=xi_index,
            phi=None if phi is None else tuple(tuple(as_fraction(x) for x in row) for row in phi),
            label=label,
            pairing=None if pairing is None else tuple(tuple(p) for p in pairing),
        )

    def bracket(self, u, v) -> tuple:
        """[u, v] for component vectors u, v."""
        n = self.dim
        out = [Polynomial.zero(self.params)] * n
        for i in range(n):
            if not u[i]:
                continue
            for j in range(n):
                if i == j or not v[j]:
                    continue
                c = u[i] * v[j]
                for k, ck in enumerate(self.brackets[i][j]):
                    if ck:
                        out[k] = out[k] + c * ck
        return tuple(out)

    def ad(self, k: int) -> tuple:
        """Matrix of X -> [E_k, X]."""
        return T.from_columns([self.brackets[k][j] for j in range(self.dim)])

    def substitute(self, assignment: Mapping[str, object], label: str | None = None) -> "FrameSpec":
        """Specialize parameters; assigned names stay in the variable list."""
        br = tuple(
            tuple(tuple(c.substitute(assignment) for c in vec) for vec in row) for row in self.brackets
        )
        return FrameSpec(
            self.dim, self.params, br, self.metric, self.xi_index, self.phi,
            self.label if label is None else label, self.pairing,
        )

    def with_phi(self, phi) -> "FrameSpec":
        phi = tuple(tuple(as_fraction(x) for x in row) for row in phi)
        return FrameSpec(self.dim, self.params, self.brackets, self.metric, self.xi_index,
                         phi, self.label, self.pairing)

    @property
    def n(self) -> int:
        return (self.dim - 1) // 2


@dataclass(frozen=True)
class ParacontactFrame:
    spec: FrameSpec
    eta: tuple
    h: tuple
    convention: SignConvention = field(default_factory=SignConvention)

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def dim(self) -> int:
        return self.spec.dim

    @property
    def params(self) -> tuple:
        return self.spec.params

    @property
    def label(self) -> str:
        return self.spec.label

    @property
    def metric(self) -> tuple:
        return self.spec.metric

    @property
    def xi(self) -> tuple:
        return T.basis_vec(self.params, self.dim, self.spec.xi_index)

    @property
    def phi(self) -> tuple:
        return T.poly_matrix(self.params, self.spec.phi)

    def inverse_metric(self) -> tuple:
        return inverse(self.spec.metric)


def _to_poly(c, params) -> Polynomial:
    if isinstance(c, Polynomial):
        if c.variables != tuple(params):
            raise ValueError(f"polynomial over {c.variables}, expected {tuple(params)}")
        return c
    if isinstance(c, str):
        return parse_expr(c, params)
    return Polynomial.constant(params, c)


# -- checks -------------------------------------------------------------------------


def jacobi_check(spec: FrameSpec) -> list:
    """Residual triples (i, j, k, vector) with nonzero cyclic sum, i < j < k."""
    n = spec.dim
    E = [T.basis_vec(spec.params, n, k) for k in range(n)]
    out = []
    for i, j, k in itertools.combinations(range(n), 3):
        s = T.vadd(
            spec.bracket(spec.brackets[i][j], E[k]),
            spec.bracket(spec.brackets[j][k], E[i]),
            spec.bracket(spec.brackets[k][i], E[j]),
        )
        if not T.is_zero_vec(s):
            out.append((i, j, k, s))
    return out


def compute_h(spec: FrameSpec, phi=None) -> tuple:
    """h = 1/2 L_xi phi, i.e. hX = 1/2([xi, phi X] - phi [xi, X])."""
    phi = spec.phi if phi is None else phi
    P = T.poly_matrix(spec.params, phi)
    ad = spec.ad(spec.xi_index)
    return T.mat_scale(Fraction(1, 2), T.mat_sub(T.mat_mul(ad, P), T.mat_mul(P, ad)))


def _vec_str(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def _structure_violations(spec: FrameSpec, conv: SignConvention, phi) -> list:
    """Axioms involving phi, eta and the metric (Jacobi excluded)."""
    n, params, g = spec.dim, spec.params, spec.metric
    x = spec.xi_index
    out: list[Violation] = []
    P = T.poly_matrix(params, phi)
    E = [T.basis_vec(params, n, k) for k in range(n)]
    xi = E[x]
    eta = tuple(Polynomial.constant(params, g[k][x]) for k in range(n))

    if g[x][x] != 1:
        out.append(AxiomViolation("eta(xi)=1", (x,), str(g[x][x] - 1)))
    phixi = T.mat_vec(P, xi)
    if not T.is_zero_vec(phixi):
        out.append(AxiomViolation("phi(xi)=0", (x,), _vec_str(phixi)))
    # phi^2 = I - eta (x) xi
    P2 = T.mat_mul(P, P)
    for j in range(n):
        target = T.vsub(E[j], T.vscale(eta[j], xi))
        r = T.vsub(T.mat_vec(P2, E[j]), target)
        if not T.is_zero_vec(r):
            out.append(AxiomViolation("phi^2=I-eta*xi", (j,), _vec_str(r)))
    cols = T.columns(P)
    half = Fraction(conv.d_eta_sign, 2)
    for i in range(n):
        for j in range(n):
            # g(phi X, phi Y) = -g(X, Y) + eta(X) eta(Y)
            r = T.gdot(g, cols[i], cols[j]) + g[i][j] - eta[i] * eta[j]
            if r:
                out.append(AxiomViolation("g(phiX,phiY)=-g(X,Y)+eta(X)eta(Y)", (i, j), str(r)))
            # d eta(E_i, E_j) = -s/2 eta([E_i, E_j]) for left-invariant eta
            deta = -half * T.gdot(g, spec.brackets[i][j], xi)
            r = deta - T.gdot(g, E[i], cols[j])
            if r:
                axiom = "deta(xi,.)=0" if x in (i, j) and deta else "deta=g(.,phi.)"
                out.append(AxiomViolation(axiom, (i, j), str(r)))
    return out


def _h_violations(spec: FrameSpec, phi, h) -> list:
    n, params, g = spec.dim, spec.params, spec.metric
    x = spec.xi_index
    P = T.poly_matrix(params, phi)
    out: list[Violation] = []
    anti = T.mat_add(T.mat_mul(h, P), T.mat_mul(P, h))
    if not T.is_zero_mat(anti):
        out.append(AxiomViolation("h*phi=-phi*h", (), str([[str(c) for c in r] for r in anti])))
    hxi = T.columns(h)[x]
    if not T.is_zero_vec(hxi):
        out.append(AxiomViolation("h(xi)=0", (x,), _vec_str(hxi)))
    tr = T.trace(h)
    if tr:
        out.append(AxiomViolation("tr h=0", (), str(tr)))
    trhp = T.trace(T.mat_mul(h, P))
    if trhp:
        out.append(AxiomViolation("tr h*phi=0", (), str(trhp)))
    cols = T.columns(h)
    E = [T.basis_vec(params, n, k) for k in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            r = T.gdot(g, cols[i], E[j]) - T.gdot(g, E[i], cols[j])
            if r:
                out.append(AxiomViolation("h self-adjoint", (i, j), str(r)))
    return out


def _precheck(spec: FrameSpec) -> None:
    n = spec.dim
    if n < 3 or n % 2 == 0:
        raise ValidationError([AxiomViolation("dimension", (n,), "dimension must be odd and >= 3")],
                              spec.label)
    g = spec.metric
    if len(g) != n or any(len(r) != n for r in g):
        raise DegenerateMetric(spec.label, "metric has wrong shape")
    if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
        raise DegenerateMetric(spec.label, "metric is not symmetric")
    if determinant(g) == 0:
        raise DegenerateMetric(spec.label)
    if not 0 <= spec.xi_index < n:
        raise ValidationError([AxiomViolation("xi_index", (spec.xi_index,), "out of range")],
                              spec.label)


def validate(spec: FrameSpec, conv: SignConvention | None = None) -> ParacontactFrame:
    """Check every paracontact axiom identically in the parameters.

    When ``spec.phi`` is missing, the pairing hint is resolved with
    :func:`infer_phi` and the first candidate is used.
    """
    conv = default_convention() if conv is None else conv
    _precheck(spec)
    violations: list[Violation] = [JacobiViolation(i, j, k, _vec_str(r))
                                   for i, j, k, r in jacobi_check(spec)]
    for i in range(spec.dim):
        for j in range(spec.dim):
            r = T.vadd(spec.brackets[i][j], spec.brackets[j][i])
            if not T.is_zero_vec(r):
                violations.append(AxiomViolation("antisymmetry", (i, j), _vec_str(r)))
    if violations:
        raise ValidationError(violations, spec.label)
    if spec.phi is None:
        if spec.pairing is None:
            raise ValidationError([AxiomViolation("phi", (), "neither phi nor pairing given")],
                                  spec.label)
        spec = spec.with_phi(infer_phi(spec, spec.pairing, conv)[0])
    violations = _structure_violations(spec, conv, spec.phi)
    h = compute_h(spec)
    violations += _h_violations(spec, spec.phi, h)
    if violations:
        raise ValidationError(violations, spec.label)
    g = spec.metric
    eta = tuple(Polynomial.constant(spec.params, g[k][spec.xi_index]) for k in range(spec.dim))
    return ParacontactFrame(spec=spec, eta=eta, h=h, convention=conv)


def infer_phi(spec: FrameSpec, pairing, conv: SignConvention | None = None) -> list:
    """Enumerate sign patterns of phi on the paired slots; keep those passing all axioms.

    A pair (a, b) of non-null slots gets phi E_a = s E_b, phi E_b = s E_a; a
    null pair (g_aa = g_bb = 0) gets phi E_a = s E_a, phi E_b = -s E_b.
    """
    conv = default_convention() if conv is None else conv
    n = spec.dim
    pairing = [tuple(p) for p in pairing]
    slots = sorted(s for p in pairing for s in p)
    expected = sorted(k for k in range(n) if k != spec.xi_index)
    if slots != expected:
        raise ValueError(f"pairing {pairing} does not partition the non-xi slots")
    g = spec.metric
    candidates = []
    for signs in itertools.product((1, -1), repeat=len(pairing)):
        phi = [[Fraction(0)] * n for _ in range(n)]
        for (a, b), s in zip(pairing, signs):
            if g[a][a] == 0 and g[b][b] == 0:
                phi[a][a], phi[b][b] = Fraction(s), Fraction(-s)
            else:
                phi[b][a], phi[a][b] = Fraction(s), Fraction(s)
        phi = tuple(tuple(r) for r in phi)
        if _structure_violations(spec, conv, phi):
            continue
        if _h_violations(spec, phi, compute_h(spec, phi)):
            continue
        candidates.append(phi)
    if not candidates:
        raise NoConsistentPhi(spec.label)
    return candidates


# -- frame files ------------------------------------------------------------------


def spec_from_dict(data: Mapping) -> FrameSpec:
    params = tuple(data.get("params", []))
    dim = int(data["dim"])
    brackets: dict[tuple, dict] = {}
    for entry in data.get("brackets", []):
        i, j = int(entry["i"]), int(entry["j"])
        coeffs = {int(k): parse_expr(v, params) for k, v in entry["coeffs"].items()}
        if i > j:
            i, j = j, i
            coeffs = {k: -v for k, v in coeffs.items()}
        slot = brackets.setdefault((i, j), {})
        for k, v in coeffs.items():
            slot[k] = slot.get(k, Polynomial.zero(params)) + v
    phi = data.get("phi")
    return FrameSpec.build(
        dim=dim,
        params=params,
        brackets=brackets,
        metric=[[as_fraction(x) for x in row] for row in data["metric"]],
        xi_index=int(data.get("xi_index", 0)),
        phi=None if phi is None else [[as_fraction(x) for x in row] for row in phi],
        label=str(data.get("label", "")),
        pairing=data.get("pairing"),
    )


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def spec_to_dict(spec: FrameSpec) -> dict:
    brackets = []
    for i in range(spec.dim):
        for j in range(i + 1, spec.dim):
            coeffs = {str(k): str(c) for k, c in enumerate(spec.brackets[i][j]) if c}
            if coeffs:
                brackets.append({"i": i, "j": j, "coeffs": coeffs})
    out = {
        "label": spec.label,
        "dim": spec.dim,
        "params": list(spec.params),
        "brackets": brackets,
        "metric": [[_frac_str(x) for x in row] for row in spec.metric],
        "xi_index": spec.xi_index,
    }
    if spec.phi is not None:
        out["phi"] = [[_frac_str(x) for x in row] for row in spec.phi]
    if spec.pairing is not None:
        out["pairing"] = [list(p) for p in spec.pairing]
    return out


def load_spec(path) -> FrameSpec:
    with open(path, encoding="utf-8") as fh:
        return spec_from_dict(json.load(fh))


def dump_spec(spec: FrameSpec, path) -> None:
    Path(path).write_text(json.dumps(spec_to_dict(spec), indent=2) + "\n", encoding="utf-8")
