"""Polynomial condition sets: conjunctions of ``p = 0`` under ``q != 0`` side constraints.

Reduction is deliberately small: exact division by the nonzero constraints,
real square roots of perfect squares, and elimination of variables that
occur linearly with a constant coefficient.  It is enough to decide every
parameter locus in the catalog; anything it cannot decide is kept as a
residual generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .scalar import SIGN_VARIABLES, Polynomial, as_fraction

_MAX_ROUNDS = 64


def _strip_units(p: Polynomial, nonzero: Sequence[Polynomial]) -> Polynomial:
    """Divide out factors known to be nonzero (constraints, sign variables)."""
    changed = True
    while changed and not p.is_zero() and not p.is_constant():
        changed = False
        for q in nonzero:
            if q.is_constant():
                continue
            quotient = p.divide_exact(q)
            if quotient is not None:
                p, changed = quotient, True
        for name in SIGN_VARIABLES:
            if name in p.variables and p.degree(name) >= 1:
                if p.coefficient_of(name, 0).is_zero():
                    # eps * r = 0 with eps^2 = 1  =>  r = 0
                    p, changed = p * Polynomial.variable(p.variables, name), True
    return p


def _root(p: Polynomial) -> Polynomial:
    """Real radical step: c * r^2 = 0  =>  r = 0."""
    while True:
        n = p.normalized()
        r = n.sqrt_exact()
        if r is None or r.is_constant():
            return n
        p = r


def _no_real_zero(p: Polynomial) -> bool:
    """True for a positive constant plus nonnegative even monomials (or the negation)."""
    if p.is_constant():
        return not p.is_zero()
    c0 = p.constant_term()
    if not c0:
        return False
    sign = 1 if c0 > 0 else -1
    signs = set(v for v in p.variables if v in SIGN_VARIABLES)
    for exps, c in p.terms.items():
        if not any(exps):
            continue
        if any(e % 2 for v, e in zip(p.variables, exps) if v not in signs):
            return False
        if any(e for v, e in zip(p.variables, exps) if v in signs):
            return False
        if c * sign < 0:
            return False
    return True


def _univariate(p: Polynomial):
    """(name, coefficient list low-to-high) when p depends on one variable only."""
    free = p.free_variables()
    if len(free) != 1:
        return None
    name = next(iter(free))
    return name, [p.coefficient_of(name, k).constant_value() for k in range(p.degree(name) + 1)]


def _poly_rem(a: list, b: list) -> list:
    a = list(a)
    while len(a) >= len(b) and any(a):
        q = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        while a and a[-1] == 0:
            a.pop()
    return a


def _gcd_degree(a: list, b: list) -> int:
    while b:
        a, b = b, _poly_rem(a, b)
    return len(a) - 1


def _univariate_infeasible(gens) -> bool:
    """Quadratics without real roots, or univariate equations without a common root."""
    by_name: dict = {}
    for g in gens:
        u = _univariate(g)
        if u is None:
            continue
        name, cs = u
        if name in SIGN_VARIABLES:
            continue
        if len(cs) == 3 and cs[1] * cs[1] - 4 * cs[0] * cs[2] < 0:
            return True
        by_name.setdefault(name, []).append(cs)
    for polys in by_name.values():
        for a in polys[1:]:
            if _gcd_degree(polys[0], a) == 0:
                return True
    return False


def _linear_pivot(p: Polynomial):
    """(name, coeff, rest) with p = coeff*name + rest, coeff rational, name absent from rest."""
    best = None
    for name in p.free_variables():
        if p.degree(name) != 1:
            continue
        coeff = p.coefficient_of(name, 1)
        if not coeff.is_constant():
            continue
        rest = p.coefficient_of(name, 0)
        key = (name in SIGN_VARIABLES, len(rest.terms), p.variables.index(name))
        if best is None or key < best[0]:
            best = (key, name, coeff.constant_value(), rest)
    return None if best is None else best[1:]


@dataclass(frozen=True)
class ConditionSet:
    """Canonical conjunction of polynomial equations.

    ``solved`` maps eliminated variables to polynomials in the remaining
    ones; ``equations`` are the leftover normalized generators; ``nonzero``
    are the side inequations.  An unsatisfiable set has ``unsatisfiable``
    set and no equations.
    """

    variables: tuple
    solved: tuple = ()  # ((name, Polynomial), ...) sorted by name
    equations: tuple = ()
    nonzero: tuple = ()
    unsatisfiable: bool = False

    # -- construction -------------------------------------------------------

    @classmethod
    def always(cls, variables, nonzero: Iterable[Polynomial] = ()) -> "ConditionSet":
        return cls(tuple(variables), nonzero=tuple(nonzero))

    @classmethod
    def never(cls, variables, nonzero: Iterable[Polynomial] = ()) -> "ConditionSet":
        return cls(tuple(variables), nonzero=tuple(nonzero), unsatisfiable=True)

    @classmethod
    def from_residuals(
        cls, variables, residuals: Iterable[Polynomial], nonzero: Iterable[Polynomial] = ()
    ) -> "ConditionSet":
        variables = tuple(variables)
        nonzero = tuple(q for q in nonzero if not q.is_constant())
        gens = [p for p in residuals if not p.is_zero()]
        solved: dict[str, Polynomial] = {}
        for _ in range(_MAX_ROUNDS):
            active_nonzero = [q.substitute(solved) for q in nonzero]
            if any(q.is_zero() for q in active_nonzero):
                return cls.never(variables, nonzero)
            seen = {}
            for g in gens:
                g = g.substitute(solved)
                if g.is_zero():
                    continue
                g = _root(_strip_units(g, active_nonzero))
                if _no_real_zero(g):
                    return cls.never(variables, nonzero)
                seen[str(g)] = g
            gens = sorted(seen.values(), key=lambda p: (len(p.terms), p.degree(), str(p)))
            if _univariate_infeasible(gens):
                return cls.never(variables, nonzero)
            pivot = None
            for g in gens:
                pivot = _linear_pivot(g)
                if pivot:
                    break
            if pivot is None:
                break
            name, coeff, rest = pivot
            value = -rest / coeff
            solved = {k: v.substitute({name: value}) for k, v in solved.items()}
            solved[name] = value
            if name in SIGN_VARIABLES and not value.is_constant():
                gens.append(value * value - 1)
            gens = [x for x in gens if x is not g]
        else:
            raise RuntimeError("condition reduction did not converge")
        for name, value in solved.items():
            if name in SIGN_VARIABLES and value.is_constant() and value.constant_value() not in (1, -1):
                return cls.never(variables, nonzero)
        active_nonzero = tuple(q.substitute(solved).normalized() for q in nonzero)
        if any(q.is_zero() for q in active_nonzero):
            return cls.never(variables, nonzero)
        return cls(
            variables=variables,
            solved=tuple(sorted(solved.items())),
            equations=tuple(gens),
            nonzero=nonzero,
        )

    # -- queries ----------------------------------------------------------------

    @property
    def is_always(self) -> bool:
        return not self.unsatisfiable and not self.solved and not self.equations

    @property
    def verdict(self) -> str:
        if self.unsatisfiable:
            return "fails"
        if self.is_always:
            return "holds"
        return "holds_iff"

    def substitution(self) -> dict:
        return dict(self.solved)

    def generators(self) -> list:
        """Equations as polynomials ``= 0``."""
        out = []
        for name, value in self.solved:
            out.append(Polynomial.variable(self.variables, name) - value)
        return out + list(self.equations)

    def reduce(self, p: Polynomial) -> Polynomial:
        """Normal form of ``p`` on this locus (zero means p vanishes there)."""
        q = p.substitute(self.substitution())
        if q.is_zero():
            return q
        nz = [x.substitute(self.substitution()) for x in self.nonzero]
        q = _root(_strip_units(q, nz))
        if str(q) in {str(e) for e in self.equations}:
            return Polynomial.zero(self.variables)
        return q

    def implies(self, other: "ConditionSet") -> bool:
        """Every point of self lies in other (self is at least as strong)."""
        if self.unsatisfiable:
            return True
        if other.unsatisfiable:
            return False
        return all(self.reduce(g).is_zero() for g in other.generators())

    def equivalent(self, other: "ConditionSet") -> bool:
        return self.implies(other) and other.implies(self)

    def conjoin(self, other: "ConditionSet") -> "ConditionSet":
        if self.unsatisfiable or other.unsatisfiable:
            return ConditionSet.never(self.variables, self.nonzero + other.nonzero)
        nonzero = tuple({str(q): q for q in self.nonzero + other.nonzero}.values())
        return ConditionSet.from_residuals(
            self.variables, self.generators() + other.generators(), nonzero
        )

    def holds_at(self, assignment: Mapping[str, object]) -> bool:
        """Evaluate at a (possibly partial) rational assignment.

        Raises ValueError when the answer still depends on unassigned variables.
        """
        if self.unsatisfiable:
            return False
        values = {k: as_fraction(v) for k, v in assignment.items() if k in self.variables}
        for q in self.nonzero:
            if q.substitute(values).is_zero():
                return False
        for g in self.generators():
            r = g.substitute(values)
            if not r.is_constant():
                raise ValueError(f"condition {g} depends on unassigned {r.free_variables()}")
            if r.constant_value() != 0:
                return False
        return True

    def describe(self) -> list:
        """Human-readable equations, e.g. ``['beta = gamma']``."""
        if self.unsatisfiable:
            return ["false"]
        out = [f"{name} = {value}" for name, value in self.solved]
        out += [f"{g} = 0" for g in self.equations]
        return out

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "conditions": self.describe(),
            "nonzero": [str(q) for q in self.nonzero],
        }

    def __str__(self):
        if self.unsatisfiable:
            return "false"
        if self.is_always:
            return "true"
        return " and ".join(self.describe())


def conditions(variables, residuals, nonzero=()) -> ConditionSet:
    return ConditionSet.from_residuals(variables, residuals, nonzero)


def vanishing(variables, *collections, nonzero=()) -> ConditionSet:
    """Condition set for every polynomial in the (nested) collections to vanish."""
    flat: list[Polynomial] = []

    def walk(x):
        if isinstance(x, Polynomial):
            flat.append(x)
        else:
            for y in x:
                walk(y)

    for c in collections:
        walk(c)
    return ConditionSet.from_residuals(variables, flat, nonzero)


__all__ = ["ConditionSet", "conditions", "vanishing"]
