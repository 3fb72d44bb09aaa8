"""Command-line interface: ``pclab validate|analyze|catalog|deform``.

Exit codes: 0 success, 1 input error, 2 validation or degenerate metric,
3 golden mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import catalog
from .curvature import Geometry
from .deform import (
    DeformationParams,
    check_deformed_ricci_relation,
    check_restricted_curvature_relation,
    d_homothety,
)
from .classify import is_H_paracontact
from .frame import ValidationError, spec_from_dict, spec_to_dict, validate
from .report import SCHEMA, analyze, render_text, slot_names
from .scalar import ParseError, parse_expr

EXIT_OK, EXIT_INPUT, EXIT_INVALID, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        raise UsageError(message)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def _parse_subst(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--subst expects name=value, got {item!r}")
        name, value = item.split("=", 1)
        out[name.strip()] = _parse_rational(value)
    return out


def _load(path: str):
    """(spec, nonzero constraints) from a frame file."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc
    try:
        spec = spec_from_dict(data)
    except ParseError as exc:
        raise UsageError(f"{path}: {exc} in {exc.text!r}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: malformed frame file ({exc})") from exc
    nonzero = tuple(parse_expr(q, spec.params)
                    for q in data.get("constraints", {}).get("nonzero", []))
    return spec, nonzero


def _specialize(spec, nonzero, subst):
    unknown = sorted(set(subst) - set(spec.params))
    if unknown:
        raise UsageError(f"unknown parameter(s) in --subst: {', '.join(unknown)}")
    for q in nonzero:
        if q.substitute(subst).is_zero():
            raise UsageError(f"substitution violates constraint {q} != 0")
    if not subst:
        return spec, nonzero
    nonzero = tuple(q.substitute(subst) for q in nonzero if not q.substitute(subst).is_constant())
    return spec.substitute(subst), nonzero


def _violation_report(exc: ValidationError) -> dict:
    return {
        "schema": SCHEMA,
        "valid": False,
        "error": type(exc).__name__,
        "violations": [v.as_dict() for v in exc.violations],
    }


def _emit(out, fmt, report, text):
    out.write(dumps(report) if fmt == "json" else text)


# -- commands ---------------------------------------------------------------------


def cmd_validate(args, out) -> int:
    spec, _ = _load(args.file)
    try:
        frame = validate(spec)
    except ValidationError as exc:
        rep = _violation_report(exc)
        lines = [f"invalid: {exc.label or args.file} ({rep['error']})"]
        lines += [f"  {v['axiom']} {tuple(v['indices'])}: {v['residual']}" for v in rep["violations"]]
        _emit(out, args.format, rep, "\n".join(lines) + "\n")
        return EXIT_INVALID
    rep = {
        "schema": SCHEMA,
        "valid": True,
        "label": frame.label,
        "convention": frame.convention.as_dict(),
        "phi": [[str(x) for x in row] for row in frame.phi],
        "h": [[str(x) for x in row] for row in frame.h],
    }
    _emit(out, args.format, rep, f"valid: {frame.label or args.file} (dim {frame.dim})\n")
    return EXIT_OK


def cmd_analyze(args, out) -> int:
    spec, nonzero = _load(args.file)
    subst = _parse_subst(args.subst)
    spec, nonzero = _specialize(spec, nonzero, subst)
    try:
        frame = validate(spec)
    except ValidationError as exc:
        rep = _violation_report(exc)
        _emit(out, args.format, rep, f"invalid: {exc}\n")
        return EXIT_INVALID
    rep = analyze(frame, nonzero, subst)
    _emit(out, args.format, rep, render_text(rep))
    return EXIT_OK


def _bracket_text(spec, names) -> list:
    lines = []
    for i in range(spec.dim):
        for j in range(i + 1, spec.dim):
            vec = spec.brackets[i][j]
            terms = []
            for k, c in enumerate(vec):
                if c.is_zero():
                    continue
                s = str(c)
                coeff = "" if s == "1" else "-" if s == "-1" else (s if len(c.terms) == 1 else f"({s})")
                terms.append(f"{coeff}{'' if coeff in ('', '-') else '*'}{names[k]}")
            if terms:
                rhs = " + ".join(terms).replace("+ -", "- ")
                lines.append(f"[{names[i]},{names[j]}] = {rhs}")
    return lines


def cmd_catalog(args, out) -> int:
    if args.action == "list":
        entries = catalog.list_entries()
        rep = {"schema": SCHEMA, "entries": [{"id": i, "description": d} for i, d in entries]}
        _emit(out, args.format, rep, "".join(f"{i:<16} {d}\n" for i, d in entries))
        return EXIT_OK
    if args.action == "show":
        if not args.id:
            raise UsageError("catalog show needs an entry id")
        entry = _entry(args.id)
        frame = validate(entry.spec)
        names = slot_names(frame)
        data = spec_to_dict(entry.spec)
        data.update(description=entry.description,
                    constraints={"nonzero": [str(q) for q in entry.nonzero]},
                    goldens=entry.goldens, schema=SCHEMA)
        if entry.base:
            data.update(base=entry.base, assign=dict(entry.assignment))
        text = [f"{entry.id}: {entry.description}"] + [f"  {b}" for b in _bracket_text(entry.spec, names)]
        if entry.nonzero:
            text.append("  constraints: " + ", ".join(f"{q} != 0" for q in entry.nonzero))
        _emit(out, args.format, data, "\n".join(text) + "\n")
        return EXIT_OK
    ids = [e for e, _ in catalog.list_entries()] if args.id in (None, "all") else [_entry(args.id).id]
    reports = [catalog.verify_goldens(e) for e in ids]
    ok = all(r.ok for r in reports)
    rep = {"schema": SCHEMA, "ok": ok, "entries": [r.as_dict() for r in reports]}
    lines = []
    for r in reports:
        passed = sum(c.ok for c in r.checks)
        lines.append(f"{r.entry_id:<16} {'ok' if r.ok else 'MISMATCH'}  {passed}/{len(r.checks)} checks")
        for c in r.mismatches:
            cex = "" if c.counterexample is None else f"  counterexample {c.counterexample}"
            lines.append(f"    {c.name}: expected {c.expected}, computed {c.computed}{cex}")
        for c in r.errata:
            lines.append(f"    known erratum {c.name}: reference {c.expected}, computed {c.computed}")
    _emit(out, args.format, rep, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_MISMATCH


def _entry(entry_id):
    try:
        return catalog.get_entry(entry_id)
    except catalog.UnknownEntry as exc:
        raise UsageError(f"unknown catalog entry {entry_id!r}") from exc


def cmd_deform(args, out) -> int:
    t = _parse_rational(args.t)
    if t == 0:
        raise UsageError("--t must be nonzero")
    if args.eps not in (1, -1):
        raise UsageError("--eps must be 1 or -1")
    spec, nonzero = _load(args.file)
    spec, nonzero = _specialize(spec, nonzero, _parse_subst(args.subst))
    try:
        frame = validate(spec)
        deformed = d_homothety(frame, DeformationParams(t, args.eps))
    except ValidationError as exc:
        rep = _violation_report(exc)
        _emit(out, args.format, rep, f"invalid: {exc}\n")
        return EXIT_INVALID
    g0, g1 = Geometry(frame), Geometry(deformed)
    before = is_H_paracontact(g0, nonzero).conditions
    after = is_H_paracontact(g1, nonzero).conditions
    ricci = check_deformed_ricci_relation(g0, g1, t)
    curv = check_restricted_curvature_relation(g0, g1, t)
    deformed_dict = spec_to_dict(deformed.spec)
    rep = {
        "schema": SCHEMA,
        "params": DeformationParams(t, args.eps).as_dict(),
        "deformed_frame": deformed_dict,
        "H_paracontact": {"before": before.as_dict(), "after": after.as_dict(),
                          "unchanged": before.equivalent(after)},
        "ricci_relation": {"holds": not ricci, "residuals": [{"at": w, "value": str(v)} for w, v in ricci]},
        "curvature_relation": {"holds": not curv, "residuals": [{"at": w, "value": str(v)} for w, v in curv]},
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps(deformed_dict))
    text = (f"deformed {frame.label or args.file} with t={t}, eps={args.eps}: valid\n"
            f"  H-paracontact before: {before}; after: {after}; unchanged: {before.equivalent(after)}\n"
            f"  rho_t(X, xi_t) = rho(X, xi)/t: {'holds' if not ricci else 'FAILS'}\n"
            f"  t R_t(X,Y) xi_t relation: {'holds' if not curv else 'FAILS'}\n")
    _emit(out, args.format, rep, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pclab", description="Exact analysis of left-invariant paracontact metric frames.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(sp, default="text"):
        sp.add_argument("--format", choices=("json", "text"), default=default)

    v = sub.add_parser("validate", help="check the paracontact axioms of a frame file")
    v.add_argument("file")
    fmt(v)
    a = sub.add_parser("analyze", help="full curvature, identity and classification report")
    a.add_argument("file")
    a.add_argument("--subst", action="append", metavar="NAME=RATIONAL")
    fmt(a)
    c = sub.add_parser("catalog", help="list, show or verify shipped examples")
    c.add_argument("action", choices=("list", "show", "verify"))
    c.add_argument("id", nargs="?")
    fmt(c)
    d = sub.add_parser("deform", help="apply a D-homothetic deformation")
    d.add_argument("file")
    d.add_argument("--t", required=True)
    d.add_argument("--eps", type=int, default=1)
    d.add_argument("--out")
    d.add_argument("--subst", action="append", metavar="NAME=RATIONAL")
    fmt(d)
    return p


COMMANDS = {"validate": cmd_validate, "analyze": cmd_analyze, "catalog": cmd_catalog, "deform": cmd_deform}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"pclab: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
