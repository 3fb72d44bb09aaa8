"""D-homothetic deformations: eta_t = t eta, xi_t = xi / t, phi_t = phi,
g_t = t g + eps t (t - 1) eta (x) eta, for a rational t != 0.

The deformed frame is {xi / t} plus the untouched non-xi slots; nothing is
normalized, so no square roots appear.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import tensors as T
from .curvature import Geometry
from .frame import (
    AxiomViolation,
    DegenerateMetric,
    FrameSpec,
    ParacontactFrame,
    SignConvention,
    validate,
)
from .scalar import Polynomial, as_fraction


class DegenerateDeformedMetric(DegenerateMetric):
    def __init__(self, label: str, t, eps):
        super().__init__(label, f"g_t(xi_t, xi_t) = 0 for t = {t}, eps = {eps}")
        self.t, self.eps = t, eps


@dataclass(frozen=True)
class DeformationParams:
    t: Fraction
    eps: int = 1

    def __post_init__(self):
        object.__setattr__(self, "t", as_fraction(self.t))
        if self.t == 0:
            raise ValueError("deformation parameter t must be nonzero")
        if self.eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")

    def as_dict(self) -> dict:
        return {"t": str(self.t), "eps": self.eps}


def deformed_spec(spec: FrameSpec, p: DeformationParams) -> FrameSpec:
    """Structure data of the deformed frame (not yet validated)."""
    t, eps = p.t, p.eps
    x, n = spec.xi_index, spec.dim
    g = spec.metric
    eta = [g[x][k] for k in range(n)]
    zero = Polynomial.zero(spec.params)

    def rescale(vec, factor):
        # components on the new frame: E_x = t * xi_t
        return tuple(c * (factor * t) if k == x else c * factor for k, c in enumerate(vec))

    br = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            factor = Fraction(1, 1)
            if i == x:
                factor /= t
            if j == x:
                factor /= t
            br[i][j] = tuple(zero for _ in range(n)) if i == j else rescale(spec.brackets[i][j], factor)

    def scale(i):
        return Fraction(1) / t if i == x else Fraction(1)

    metric = tuple(
        tuple(scale(i) * scale(j) * (t * g[i][j] + eps * t * (t - 1) * eta[i] * eta[j])
              for j in range(n))
        for i in range(n)
    )
    phi = None
    if spec.phi is not None:
        # phi(xi_t) = phi(xi)/t; the xi-row of phi rescales by t
        phi = tuple(
            tuple(spec.phi[i][j] * (t if i == x else 1) * (scale(j)) for j in range(n))
            for i in range(n)
        )
    label = f"{spec.label} (t={t}, eps={eps})" if spec.label else f"t={t}, eps={eps}"
    return FrameSpec(n, spec.params, tuple(tuple(r) for r in br), metric, x, phi, label, spec.pairing)


def d_homothety(frame: ParacontactFrame, p: DeformationParams,
                conv: SignConvention | None = None) -> ParacontactFrame:
    """Deform and re-validate.

    Raises DegenerateDeformedMetric when g_t(xi_t, xi_t) vanishes, and the
    usual ValidationError when the deformed data break an axiom (eps = -1
    gives g_t(xi_t, xi_t) = 2/t - 1, which is 1 only for t = 1).
    """
    spec = deformed_spec(frame.spec, p)
    x = spec.xi_index
    if spec.metric[x][x] == 0:
        raise DegenerateDeformedMetric(spec.label, p.t, p.eps)
    return validate(spec, conv or frame.convention)


def _ker_eta_pairs(original: ParacontactFrame, t: Fraction):
    """Frame slots a != xi with eta(E_a) = 0: the same vectors in both frames."""
    x = original.spec.xi_index
    slots = [a for a in range(original.dim) if a != x and original.metric[a][x] == 0]
    if len(slots) != original.dim - 1:
        raise ValueError("non-xi frame slots must span ker eta")
    return slots


def check_deformed_ricci_relation(original: Geometry, deformed: Geometry, t) -> list:
    """Residuals of rho_t(X, xi_t) - rho(X, xi) / t over ker-eta frame slots."""
    t = as_fraction(t)
    x = original.frame.spec.xi_index
    out = []
    for a in _ker_eta_pairs(original.frame, t):
        r = deformed.rho[a][x] - original.rho[a][x] / t
        if not r.is_zero():
            out.append((f"E{a}", r))
    return out


def check_restricted_curvature_relation(original: Geometry, deformed: Geometry, t) -> list:
    """Residuals of t R_t(X,Y) xi_t - R(X,Y) xi - (t-1)((nabla_X phi)Y - (nabla_Y phi)X).

    X, Y run over ker-eta frame slots; the deformed vector is converted back
    to the original frame (xi_t = xi / t) before comparing.
    """
    t = as_fraction(t)
    f = original.frame
    x = f.spec.xi_index
    E = original.basis
    slots = _ker_eta_pairs(f, t)
    out = []
    for i in slots:
        for j in slots:
            if i >= j:
                continue
            lhs = deformed.curv.riemann[i][j][x]
            lhs = tuple(c * t * (Fraction(1) / t if k == x else 1) for k, c in enumerate(lhs))
            rhs = T.vadd(
                original.curv.riemann[i][j][x],
                T.vscale(t - 1, T.vsub(T.mat_vec(original.nabla_phi[i], E[j]),
                                       T.mat_vec(original.nabla_phi[j], E[i]))),
            )
            for k, c in enumerate(T.vsub(lhs, rhs)):
                if not c.is_zero():
                    out.append((f"X=E{i},Y=E{j}[{k}]", c))
    return out


def compose_matches(frame: ParacontactFrame, t1, t2, eps: int = 1) -> bool:
    """Deforming by t1 then t2 gives the same structure data as deforming by t1*t2."""
    a = deformed_spec(deformed_spec(frame.spec, DeformationParams(t1, eps)), DeformationParams(t2, eps))
    b = deformed_spec(frame.spec, DeformationParams(as_fraction(t1) * as_fraction(t2), eps))
    return a.brackets == b.brackets and a.metric == b.metric and a.phi == b.phi


__all__ = [
    "AxiomViolation", "DegenerateDeformedMetric", "DeformationParams", "check_deformed_ricci_relation",
    "check_restricted_curvature_relation", "compose_matches", "d_homothety", "deformed_spec",
]
