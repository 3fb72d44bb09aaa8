"""Shipped example frames with reference data, and their verification.

Entries are JSON files in ``catalog_data``.  A family file is a frame file
plus ``description``, ``constraints`` and ``goldens``; a specialization file
names a ``base`` family and a parameter ``assign``ment.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Mapping

from . import tensors as T
from .classify import classify
from .conditions import ConditionSet, vanishing
from .curvature import Geometry
from .frame import FrameSpec, ParacontactFrame, spec_from_dict, validate
from .scalar import SIGN_VARIABLES, Polynomial, as_fraction, parse_expr

R_TABLE_SLOTS = {
    "R(xi,e)e": (1, 1),
    "R(xi,e)phi_e": (1, 2),
    "R(xi,phi_e)phi_e": (2, 2),
    "R(xi,phi_e)e": (2, 1),
}


class UnknownEntry(KeyError):
    pass


class ConstraintViolation(ValueError):
    def __init__(self, entry_id: str, constraint: str, assignment: Mapping):
        self.entry_id, self.constraint = entry_id, constraint
        super().__init__(f"{entry_id}: assignment {dict(assignment)} violates {constraint} != 0")


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    description: str
    spec: FrameSpec
    nonzero: tuple
    goldens: dict
    base: str | None = None
    assignment: tuple = ()

    @property
    def params(self) -> tuple:
        return self.spec.params

    @property
    def free_params(self) -> tuple:
        fixed = {k for k, _ in self.assignment}
        return tuple(p for p in self.params if p not in fixed)

    def constraints(self) -> ConditionSet:
        return ConditionSet.always(self.params, self.nonzero)


def _load_json(name: str) -> dict:
    return json.loads(resources.files("pclab").joinpath("catalog_data", name).read_text())


@lru_cache(maxsize=None)
def _index() -> tuple:
    return tuple(_load_json("index.json")["entries"])


@lru_cache(maxsize=None)
def get_entry(entry_id: str) -> CatalogEntry:
    if entry_id not in _index():
        raise UnknownEntry(entry_id)
    data = _load_json(f"{entry_id}.json")
    if "base" in data:
        base = get_entry(data["base"])
        assign = {k: parse_expr(v, base.params) for k, v in data["assign"].items()}
        spec = base.spec.substitute(assign, label=entry_id)
        nonzero = tuple(q.substitute(assign) for q in base.nonzero)
        return CatalogEntry(entry_id, data["description"], spec, nonzero, data.get("goldens", {}),
                            data["base"], tuple(sorted((k, str(v)) for k, v in assign.items())))
    spec = spec_from_dict(data)
    nonzero = tuple(parse_expr(q, spec.params) for q in data.get("constraints", {}).get("nonzero", []))
    return CatalogEntry(entry_id, data["description"], spec, nonzero, data.get("goldens", {}))


def list_entries() -> list:
    """(id, description) pairs in catalog order."""
    return [(e, get_entry(e).description) for e in _index()]


def instantiate(entry_id: str, assignment: Mapping[str, object] | None = None) -> ParacontactFrame:
    """Validated frame of an entry, optionally specialized to rational parameter values."""
    entry = get_entry(entry_id)
    assignment = dict(assignment or {})
    unknown = set(assignment) - set(entry.params)
    if unknown:
        raise ValueError(f"{entry_id}: unknown parameters {sorted(unknown)}")
    values = {k: as_fraction(v) for k, v in assignment.items()}
    for name, v in values.items():
        if name in SIGN_VARIABLES and v not in (1, -1):
            raise ConstraintViolation(entry_id, f"{name}^2 - 1 = 0 fails;", assignment)
    for q in entry.nonzero:
        if q.substitute(values).is_zero():
            raise ConstraintViolation(entry_id, str(q), assignment)
    spec = entry.spec if not values else entry.spec.substitute(values)
    return validate(spec)


def random_assignment(entry_id: str, rng: random.Random, span: int = 6) -> dict:
    """Random rational values for the free parameters, respecting the constraints."""
    entry = get_entry(entry_id)
    while True:
        values = {}
        for p in entry.free_params:
            if p in SIGN_VARIABLES:
                values[p] = Fraction(rng.choice((1, -1)))
            else:
                values[p] = Fraction(rng.randint(-span * 4, span * 4), rng.randint(1, 4))
        if all(not q.substitute(values).is_zero() for q in entry.nonzero):
            return values


# -- golden verification ------------------------------------------------------------


@dataclass
class GoldenCheck:
    name: str
    ok: bool
    expected: str = ""
    computed: str = ""
    counterexample: dict | None = None
    erratum: str | None = None

    def as_dict(self) -> dict:
        out = {"name": self.name, "ok": self.ok}
        if not self.ok:
            out.update(expected=self.expected, computed=self.computed)
            if self.counterexample is not None:
                out["counterexample"] = {k: str(v) for k, v in sorted(self.counterexample.items())}
            if self.erratum:
                out["known_erratum"] = self.erratum
        return out


@dataclass
class GoldenReport:
    entry_id: str
    checks: list = field(default_factory=list)

    @property
    def mismatches(self) -> list:
        return [c for c in self.checks if not c.ok and not c.erratum]

    @property
    def errata(self) -> list:
        return [c for c in self.checks if not c.ok and c.erratum]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def as_dict(self) -> dict:
        return {
            "id": self.entry_id,
            "ok": self.ok,
            "checks": [c.as_dict() for c in self.checks],
        }


def counterexample(diff: Polynomial, entry: CatalogEntry, search: int = 4) -> dict | None:
    """Smallest-integer assignment (within the constraints) where ``diff`` is nonzero."""
    used = set(diff.free_variables())
    for q in entry.nonzero:
        used |= set(q.free_variables())
    names = [p for p in diff.variables if p in used]
    if not names:
        return {}
    small_first = sorted(range(-search, search + 1), key=lambda v: (abs(v), v < 0))
    ranges = [(1, -1) if n in SIGN_VARIABLES else small_first for n in names]
    for combo in sorted(itertools.product(*ranges), key=lambda c: sum(abs(x) for x in c)):
        values = {n: Fraction(v) for n, v in zip(names, combo)}
        if any(q.substitute(values).is_zero() for q in entry.nonzero):
            continue
        if not diff.substitute(values).is_zero():
            return values
    return None  # pragma: no cover


def _compare(name, expected: Polynomial, computed: Polynomial, entry, erratum=None) -> GoldenCheck:
    diff = computed - expected
    if diff.is_zero():
        return GoldenCheck(name, True)
    return GoldenCheck(name, False, str(expected), str(computed), counterexample(diff, entry), erratum)


def _poly(text: str, params) -> Polynomial:
    return parse_expr(text, params)


def _flag_expected(value, params, nonzero) -> ConditionSet:
    if value == "holds":
        return ConditionSet.always(params, nonzero)
    if value == "fails":
        return ConditionSet.never(params, nonzero)
    return vanishing(params, [_poly(v, params) for v in value], nonzero=nonzero)


def verify_goldens(entry_id: str) -> GoldenReport:
    """Compare engine output for an entry with its stored reference data."""
    entry = get_entry(entry_id)
    gold = entry.goldens
    params = entry.params
    frame = validate(entry.spec)
    geo = Geometry(frame)
    report = GoldenReport(entry_id)
    add = report.checks.append
    errata = gold.get("errata", {})

    if "h" in gold:
        for i, row in enumerate(gold["h"]):
            for j, text in enumerate(row):
                add(_compare(f"h[{i}][{j}]", _poly(text, params), frame.h[i][j], entry))
    if "trace_h2" in gold:
        add(_compare("tr h^2", _poly(gold["trace_h2"], params), geo.trace_h2, entry))
    if "Q" in gold:
        for i, row in enumerate(gold["Q"]):
            for j, text in enumerate(row):
                add(_compare(f"Q[{i}][{j}]", _poly(text, params), geo.Q[i][j], entry))
    if "R_xi_table" in gold:
        table = dict(gold["R_xi_table"])
        pmap = {k: _poly(v, params) for k, v in table.pop("param_map", {}).items()}
        x = frame.spec.xi_index
        for key, text in table.items():
            a, b = R_TABLE_SLOTS[key]
            expected = _poly(text, params).substitute(pmap)
            # tabulated values use R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]
            computed = -geo.curv.riemann[x][a][b][x]
            add(_compare(key, expected, computed, entry, errata.get(key)))
            others = [c for k, c in enumerate(geo.curv.riemann[x][a][b]) if k != x and not c.is_zero()]
            add(GoldenCheck(f"{key} is a multiple of xi", not others, "0", ", ".join(map(str, others))))

    cls = None
    if "flags" in gold or "fitted" in gold:
        cls = classify(geo, entry.nonzero)
    for flag, value in gold.get("flags", {}).items():
        expected = _flag_expected(value, params, entry.nonzero)
        got = cls.flags[flag].conditions
        add(GoldenCheck(f"flag {flag}", expected.equivalent(got), str(expected), str(got)))
    for key, text in gold.get("fitted", {}).items():
        got = cls.fitted[key] if key in cls.fitted else None
        if text == "unconstrained":
            ok = key == "mu" and cls.km.mu_unconstrained
            add(GoldenCheck(f"fitted {key}", ok, text, "unconstrained" if ok else str(got)))
            continue
        if got is None:
            add(GoldenCheck(f"fitted {key}", False, text, "none"))
            continue
        add(_compare(f"fitted {key}", _poly(text, params), got, entry))
    if gold.get("fitted") and "kappa" in gold["fitted"]:
        for name, ok in sorted(cls.km.crosschecks.items()):
            add(GoldenCheck(f"km crosscheck {name}", ok))

    claims = gold.get("claims", {})
    h2 = T.mat_mul(frame.h, frame.h)
    checks = {
        "h_nonzero": lambda: not T.is_zero_mat(frame.h),
        "h2_zero": lambda: T.is_zero_mat(h2),
        "flat": lambda: all(T.is_zero_vec(v) for a in geo.curv.riemann for b in a for v in b),
        "soliton_trivial": lambda: cls is not None and cls.soliton.trivial is True,
    }
    for claim, expected in claims.items():
        add(GoldenCheck(f"claim {claim}", checks[claim]() == expected, str(expected)))
    return report


def verify_all() -> list:
    return [verify_goldens(e) for e in _index()]


__all__ = [
    "CatalogEntry", "ConstraintViolation", "GoldenCheck", "GoldenReport", "R_TABLE_SLOTS",
    "UnknownEntry", "counterexample", "get_entry", "instantiate", "list_entries",
    "random_assignment", "verify_all", "verify_goldens",
]
