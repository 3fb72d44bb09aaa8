"""Assembly of the structured analysis report shared by the CLI and the tests."""

from __future__ import annotations

from .classify import PreconditionError, check_kno1, classify, soliton_solve
from .curvature import Geometry, harmonic_map_trace
from .frame import ParacontactFrame
from .identities import IdentityResult, check_cd1, identity_suite

SCHEMA = 1
IDENTITY_IDS = ("eq1", "eq2", "eq3", "eq3.1p", "eq3.3", "eq3.5", "tr0", "trace", "main2", "cd1", "sol")


def slot_names(frame: ParacontactFrame) -> list:
    """Display names of the frame slots, xi first, in the order {xi, e_i, phi e_i}."""
    if frame.dim == 3:
        return ["xi", "e", "phi_e"]
    return [f"E{k}" if k != frame.spec.xi_index else "xi" for k in range(frame.dim)]


def matrix_strings(m) -> list:
    return [[str(x) for x in row] for row in m]


def check_soliton_necessity(geo: Geometry, nonzero=()) -> IdentityResult:
    """Whenever the soliton equation is solvable, lambda = -2n there."""
    res = IdentityResult("sol", "rho + 1/2 L_xi g = lambda g solvable  =>  lambda = -2n")
    sol = soliton_solve(geo, nonzero)
    if sol.lam is not None:
        res.add("lambda + 2n", sol.verdict.conditions.reduce(sol.lam + 2 * geo.frame.n))
    return res


def analyze(frame: ParacontactFrame, nonzero=(), substitution=None) -> dict:
    """Full deterministic report for a validated frame."""
    geo = Geometry(frame)
    ids = identity_suite(geo)
    ids["cd1"] = check_cd1(geo)
    ids["sol"] = check_soliton_necessity(geo, nonzero)
    cls = classify(geo, nonzero)
    kno1 = None
    if cls.km.verdict.status != "fails":
        try:
            kno1 = check_kno1(geo, cls.km, nonzero).as_dict()
        except PreconditionError as exc:
            kno1 = {"not_applicable": str(exc)}
    return {
        "schema": SCHEMA,
        "label": frame.label,
        "convention": frame.convention.as_dict(),
        "params": list(frame.params),
        "nonzero": [str(q) for q in nonzero],
        "substitution": {k: str(v) for k, v in sorted((substitution or {}).items())},
        "frame": {
            "dim": frame.dim,
            "slots": slot_names(frame),
            "phi": matrix_strings(frame.phi),
            "h": matrix_strings(frame.h),
            "trace_h2": str(geo.trace_h2),
        },
        "curvature": {
            "Q": matrix_strings(geo.Q),
            "ricci": matrix_strings(geo.rho),
            "scalar": str(geo.curv.scalar),
            "laplacian_xi": [str(c) for c in geo.laplacian_xi],
            "Q_xi": [str(c) for c in geo.Q_xi],
            "harmonic_map_trace": [str(c) for c in harmonic_map_trace(frame, geo.conn, geo.curv)],
        },
        "identities": {k: ids[k].as_dict() for k in IDENTITY_IDS},
        "classification": cls.as_dict(),
        "kno1": kno1,
    }


def _matrix_text(names, m) -> list:
    width = max(len(x) for row in m for x in row)
    lines = []
    for name, row in zip(names, m):
        lines.append(f"  {name:>6} | " + "  ".join(x.rjust(width) for x in row))
    return lines


def render_text(report: dict) -> str:
    names = report["frame"]["slots"]
    out = [f"frame: {report['label'] or '(unnamed)'}  dim={report['frame']['dim']}  "
           f"params={','.join(report['params']) or '-'}"]
    if report["substitution"]:
        out.append("substitution: " + ", ".join(f"{k}={v}" for k, v in report["substitution"].items()))
    conv = report["convention"]
    out.append(f"convention: d_eta sign {conv['d_eta_sign']:+d}; {conv['curvature']}")
    out.append("h (columns are images of " + ", ".join(names) + "):")
    out += _matrix_text(names, report["frame"]["h"])
    out.append("Q:")
    out += _matrix_text(names, report["curvature"]["Q"])
    out.append(f"scalar curvature: {report['curvature']['scalar']}")
    out.append("identities:")
    for k, v in report["identities"].items():
        status = "ok" if v["passed"] else "FAIL " + "; ".join(f"{r['at']}={r['value']}" for r in v["residuals"][:3])
        out.append(f"  {k:<8} {status}")
    out.append("classification:")
    for k, v in report["classification"]["flags"].items():
        cond = "" if v["verdict"] != "holds_iff" else " iff " + " and ".join(v["conditions"])
        out.append(f"  {k:<14} {v['verdict']}{cond}")
    fitted = {k: v for k, v in report["classification"]["fitted"].items() if v is not None}
    if report["classification"]["km_fit"].get("mu") == "unconstrained":
        fitted["mu"] = "unconstrained"
    if fitted:
        out.append("fitted: " + ", ".join(f"{k} = {v}" for k, v in sorted(fitted.items())))
    sol = report["classification"]["soliton"]
    if sol["lambda"] is not None:
        out.append(f"soliton: lambda = {sol['lambda']}, trivial = {sol['trivial']}")
    return "\n".join(out) + "\n"
