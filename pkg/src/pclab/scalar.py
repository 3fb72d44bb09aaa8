"""Exact scalars: rationals, multivariate polynomials over named parameters,
an expression parser, and Gauss-Jordan linear algebra over rational matrices.

Coefficients are :class:`fractions.Fraction`.  A polynomial is a canonical map
from exponent tuples to nonzero coefficients; variables listed in
:data:`SIGN_VARIABLES` satisfy ``v**2 == 1`` and are reduced on construction.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "SIGN_VARIABLES",
    "Polynomial",
    "ParseError",
    "UnknownVariableError",
    "VariableMismatchError",
    "SingularMatrixError",
    "parse_expr",
    "poly_arith",
    "substitute",
    "as_fraction",
    "rational_matrix",
    "identity_matrix",
    "determinant",
    "inverse",
    "solve_linear",
]

#: Variables constrained by v^2 = 1 (the +-1 sign parameter of the catalog).
SIGN_VARIABLES = frozenset({"eps"})

Scalar = Union[int, Fraction, "Polynomial"]


class VariableMismatchError(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    pass


class ParseError(ValueError):
    """Syntax error in an expression string; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class UnknownVariableError(ParseError):
    def __init__(self, name: str, position: int, text: str = ""):
        self.name = name
        super().__init__(f"unknown variable {name!r}", position, text)


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and rational strings like ``"-3/4"``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, Polynomial) and value.is_constant():
        return value.constant_value()
    raise TypeError(f"cannot convert {value!r} to a rational")


class Polynomial:
    """Immutable polynomial with rational coefficients in an ordered list of
    named variables.

    >>> p = parse_expr("(beta-gamma)^2 * 1/2", ["beta", "gamma"])
    >>> str(p)
    '1/2*beta^2 - beta*gamma + 1/2*gamma^2'
    """

    __slots__ = ("_vars", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        signs = [i for i, v in enumerate(variables) if v in SIGN_VARIABLES]
        canon: dict[tuple, Fraction] = {}
        for exps, coef in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(variables):
                raise ValueError(f"exponent {exps} has wrong arity for {variables}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            if signs:
                exps = tuple(e % 2 if i in signs else e for i, e in enumerate(exps))
            c = canon.get(exps, Fraction(0)) + as_fraction(coef)
            if c:
                canon[exps] = c
            else:
                canon.pop(exps, None)
        self._vars = variables
        self._terms = canon
        self._hash = None

    @classmethod
    def _canonical(cls, variables: tuple, terms: dict) -> "Polynomial":
        """Trusted constructor: exponents already canonical, zero terms dropped here."""
        obj = object.__new__(cls)
        obj._vars = variables
        obj._terms = {e: c for e, c in terms.items() if c}
        obj._hash = None
        return obj

    # -- construction ---------------------------------------------------

    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "Polynomial":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): as_fraction(value)})

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls(variables)

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise KeyError(name)
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exps: Fraction(1)})

    # -- introspection ----------------------------------------------------

    @property
    def variables(self) -> tuple:
        return self._vars

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((0,) * len(self._vars), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * len(self._vars), Fraction(0))

    def free_variables(self) -> tuple:
        used = set()
        for exps in self._terms:
            used.update(i for i, e in enumerate(exps) if e)
        return tuple(v for i, v in enumerate(self._vars) if i in used)

    def degree(self, name: str | None = None) -> int:
        """Total degree, or the degree in ``name``.  The zero polynomial has degree -1."""
        if not self._terms:
            return -1
        if name is None:
            return max(sum(e) for e in self._terms)
        i = self._vars.index(name)
        return max(e[i] for e in self._terms)

    def coefficient_of(self, name: str, power: int) -> "Polynomial":
        """Coefficient of ``name**power`` viewed as a polynomial in ``name``."""
        i = self._vars.index(name)
        out = {}
        for exps, c in self._terms.items():
            if exps[i] == power:
                out[exps[:i] + (0,) + exps[i + 1:]] = c
        return Polynomial(self._vars, out)

    def leading_term(self) -> tuple:
        """(exponents, coefficient) of the lex-largest term."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        exps = max(self._terms)
        return exps, self._terms[exps]

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other._vars != self._vars:
                raise VariableMismatchError(f"variables {self._vars} != {other._vars}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(self._vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for exps, c in other._terms.items():
            terms[exps] = terms.get(exps, 0) + c
        return Polynomial._canonical(self._vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._canonical(self._vars, {e: -c for e, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial._canonical(self._vars, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        signs = [i for i, v in enumerate(self._vars) if v in SIGN_VARIABLES]
        terms: dict[tuple, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if signs:
                    e = tuple(x % 2 if i in signs else x for i, x in enumerate(e))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial._canonical(self._vars, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # only by nonzero rational constants; the ring has no general division
        if isinstance(other, Polynomial):
            other = other.constant_value()
        d = as_fraction(other)
        if not d:
            raise ZeroDivisionError("polynomial division by zero")
        return Polynomial(self._vars, {e: c / d for e, c in self._terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.constant(self._vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._vars == other._vars and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._vars, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- evaluation ---------------------------------------------------------

    def substitute(self, assignment: Mapping[str, object]) -> "Polynomial":
        """Replace variables by rationals or by polynomials over the same variables.

        Unassigned variables stay symbolic; the variable list is unchanged.
        """
        for name in assignment:
            if name not in self._vars:
                raise KeyError(f"unknown variable {name!r}")
        if not assignment:
            return self
        values = {}
        for name, value in assignment.items():
            if isinstance(value, Polynomial):
                values[self._vars.index(name)] = self._coerce(value)
            else:
                values[self._vars.index(name)] = as_fraction(value)
        result = Polynomial.zero(self._vars)
        for exps, c in self._terms.items():
            kept = tuple(0 if i in values else e for i, e in enumerate(exps))
            term = Polynomial(self._vars, {kept: c})
            for i, v in values.items():
                if exps[i]:
                    term = term * (v ** exps[i] if isinstance(v, Polynomial) else v ** exps[i])
            result = result + term
        return result

    def evaluate(self, assignment: Mapping[str, object]) -> Fraction:
        value = self.substitute(assignment)
        if not value.is_constant():
            raise ValueError(f"variables {value.free_variables()} left unassigned")
        return value.constant_value()

    # -- exact division and roots --------------------------------------------

    def divide_exact(self, other: "Polynomial") -> "Polynomial | None":
        """Quotient ``self / other`` if the division is exact, else None.

        Plain lex-order long division.  Sign-variable reduction makes the
        ring non-factorial in ``eps``, so a nonzero remainder means "not
        divisible by this method", which callers treat conservatively.
        """
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lt_exp, lt_coef = other.leading_term()
        remainder = self
        quotient = Polynomial.zero(self._vars)
        for _ in range(10_000):
            if remainder.is_zero():
                return quotient
            r_exp, r_coef = remainder.leading_term()
            shift = tuple(a - b for a, b in zip(r_exp, lt_exp))
            if any(s < 0 for s in shift):
                return None
            step = Polynomial(self._vars, {shift: r_coef / lt_coef})
            new_rem = remainder - step * other
            if not new_rem.is_zero() and new_rem.leading_term()[0] >= r_exp:
                return None  # sign reduction broke monotonicity
            quotient = quotient + step
            remainder = new_rem
        return None

    def sqrt_exact(self) -> "Polynomial | None":
        """Return ``p`` with ``p*p == self`` and positive leading coefficient, or None."""
        if self.is_zero():
            return self
        lt_exp, lt_coef = self.leading_term()
        if any(e % 2 for e in lt_exp) or lt_coef < 0:
            return None
        num, den = lt_coef.numerator, lt_coef.denominator
        rn, rd = _isqrt_exact(num), _isqrt_exact(den)
        if rn is None or rd is None:
            return None
        head = Polynomial(self._vars, {tuple(e // 2 for e in lt_exp): Fraction(rn, rd)})
        root = head
        for _ in range(len(self._terms) + 2):
            rem = self - root * root
            if rem.is_zero():
                return root
            r_exp, r_coef = rem.leading_term()
            shift = tuple(a - b for a, b in zip(r_exp, tuple(e // 2 for e in lt_exp)))
            if any(s < 0 for s in shift) or shift >= tuple(e // 2 for e in lt_exp):
                return None
            root = root + Polynomial(self._vars, {shift: r_coef / (2 * Fraction(rn, rd))})
        return root if (self - root * root).is_zero() else None

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive (integer coefficients, gcd 1)."""
        if not self._terms:
            return Fraction(1)
        from math import gcd, lcm

        den = 1
        for c in self._terms.values():
            den = lcm(den, c.denominator)
        g = 0
        for c in self._terms.values():
            g = gcd(g, int(c * den))
        return Fraction(g, den)

    def normalized(self) -> "Polynomial":
        """Primitive associate with positive lex-leading coefficient."""
        if not self._terms:
            return self
        p = self / self.content()
        return -p if p.leading_term()[1] < 0 else p

    # -- printing -------------------------------------------------------------

    def _sorted_terms(self):
        return sorted(self._terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, (exps, coef) in enumerate(self._sorted_terms()):
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(self._vars, exps) if e
            )
            mag = abs(coef)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{_fmt_rational(mag)}*{mono}"
            else:
                body = _fmt_rational(mag)
            if k == 0:
                parts.append(("-" if coef < 0 else "") + body)
            else:
                parts.append((" - " if coef < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({list(self._vars)!r}, {str(self)!r})"


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _isqrt_exact(n: int) -> int | None:
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


# -- parser -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class _Parser:
    """Recursive descent over

        expr   := ['-'] term (('+'|'-') term)*
        term   := factor ('*' factor)*
        factor := base ('^' uint)?
        base   := rational | name | '(' expr ')'
        rational := int ('/' uint)?
    """

    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.variables = tuple(variables)
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                break  # trailing whitespace
            start = m.start(m.lastindex)
            kind = ("int", "name", "op")[m.lastindex - 1]
            self.tokens.append((kind, m.group(m.lastindex), start))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if kind != "op" or val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos, self.text)

    def parse(self) -> Polynomial:
        p = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos, self.text)
        return p

    def expr(self) -> Polynomial:
        negate = False
        if self.peek()[:2] == ("op", "-"):
            self.take()
            negate = True
        p = self.term()
        if negate:
            p = -p
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            _, op, _ = self.take()
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        p = self.base()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise ParseError("exponent must be a nonnegative integer", pos, self.text)
            p = p ** int(val)
        return p

    def base(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "int":
            num = int(val)
            if self.peek()[:2] == ("op", "/"):
                self.take()
                k2, v2, p2 = self.take()
                if k2 != "int":
                    raise ParseError("expected denominator", p2, self.text)
                if int(v2) == 0:
                    raise ParseError("zero denominator", p2, self.text)
                return Polynomial.constant(self.variables, Fraction(num, int(v2)))
            return Polynomial.constant(self.variables, num)
        if kind == "name":
            if val not in self.variables:
                raise UnknownVariableError(val, pos, self.text)
            return Polynomial.variable(self.variables, val)
        if kind == "op" and val == "(":
            p = self.expr()
            self.expect(")")
            return p
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos, self.text)


def parse_expr(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse ``text`` into a canonical polynomial over ``variables``."""
    return _Parser(str(text), variables).parse()


def poly_arith(a: Polynomial, b: Polynomial | None, op: str) -> Polynomial:
    if op == "neg":
        return -a
    if a.variables != b.variables:
        raise VariableMismatchError(f"variables {a.variables} != {b.variables}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def substitute(p: Polynomial, assignment: Mapping[str, object]) -> Polynomial:
    return p.substitute(assignment)


# -- rational linear algebra --------------------------------------------------


def rational_matrix(rows: Iterable[Iterable]) -> tuple:
    m = tuple(tuple(as_fraction(x) for x in row) for row in rows)
    if any(len(row) != len(m) for row in m):
        raise ValueError("matrix must be square")
    return m


def identity_matrix(n: int) -> tuple:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def _eliminate(matrix, rhs_columns):
    """Gauss-Jordan on [matrix | rhs]; returns reduced rhs or raises if singular."""
    n = len(matrix)
    a = [list(row) for row in matrix]
    b = [list(col) for col in zip(*rhs_columns)] if rhs_columns else [[] for _ in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        b[col], b[pivot] = b[pivot], b[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        b[col] = [x * inv for x in b[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                b[r] = [x - f * y for x, y in zip(b[r], b[col])]
    return b


def determinant(matrix) -> Fraction:
    n = len(matrix)
    a = [list(map(as_fraction, row)) for row in matrix]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def inverse(matrix) -> tuple:
    n = len(matrix)
    cols = [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)]
    rows = _eliminate(rational_matrix(matrix), cols)
    return tuple(tuple(r) for r in rows)


def solve_linear(matrix, rhs: Sequence[Polynomial]) -> tuple:
    """Solve ``matrix @ x == rhs`` for a rational matrix and polynomial rhs."""
    inv = inverse(matrix)
    n = len(inv)
    if len(rhs) != n:
        raise ValueError("rhs length does not match matrix")
    variables = rhs[0].variables
    out = []
    for i in range(n):
        acc = Polynomial.zero(variables)
        for j in range(n):
            if inv[i][j]:
                acc = acc + rhs[j] * inv[i][j]
        out.append(acc)
    return tuple(out)
