"""Small helpers for frame-component vectors and endomorphism matrices.

A vector is a tuple of :class:`Polynomial` components in the frame.  An
endomorphism is a tuple of rows; column ``j`` holds the components of the
image of ``E_j``, so ``(M v)[i] = sum_j M[i][j] * v[j]``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .scalar import Polynomial


def zero_vec(variables, n: int) -> tuple:
    z = Polynomial.zero(variables)
    return (z,) * n


def basis_vec(variables, n: int, k: int) -> tuple:
    z, one = Polynomial.zero(variables), Polynomial.constant(variables, 1)
    return tuple(one if i == k else z for i in range(n))


def vadd(*vs) -> tuple:
    return tuple(sum(cs[1:], cs[0]) for cs in zip(*vs))


def vsub(a, b) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, v) -> tuple:
    return tuple(c * x for x in v)


def vneg(v) -> tuple:
    return tuple(-x for x in v)


def is_zero_vec(v) -> bool:
    return all(x.is_zero() for x in v)


def mat_vec(m, v) -> tuple:
    out = []
    for row in m:
        acc = None
        for a, x in zip(row, v):
            if not a or not x:
                continue
            t = x * a if isinstance(a, Fraction) else a * x
            acc = t if acc is None else acc + t
        out.append(acc if acc is not None else v[0] * 0)
    return tuple(out)


def mat_mul(a, b) -> tuple:
    cols = [mat_vec(a, col) for col in columns(b)]
    return from_columns(cols)


def columns(m) -> list:
    n = len(m)
    return [tuple(m[i][j] for i in range(n)) for j in range(n)]


def from_columns(cols: Sequence[Sequence]) -> tuple:
    n = len(cols)
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def mat_add(a, b) -> tuple:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a, b) -> tuple:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c, m) -> tuple:
    return tuple(tuple(c * x for x in row) for row in m)


def mat_neg(m) -> tuple:
    return tuple(tuple(-x for x in row) for row in m)


def poly_matrix(variables, m) -> tuple:
    """Lift a rational matrix to a polynomial matrix."""
    return tuple(tuple(Polynomial.constant(variables, x) for x in row) for row in m)


def identity(variables, n: int) -> tuple:
    return from_columns([basis_vec(variables, n, k) for k in range(n)])


def trace(m):
    return sum((m[i][i] for i in range(1, len(m))), m[0][0])


def is_zero_mat(m) -> bool:
    return all(x.is_zero() for row in m for x in row)


def gdot(metric, u, v):
    """g(u, v) for a rational metric matrix."""
    acc = u[0] * 0
    for i, ui in enumerate(u):
        if not ui:
            continue
        for j, vj in enumerate(v):
            gij = metric[i][j]
            if gij and vj:
                acc = acc + ui * vj * gij
    return acc


def lower(metric, v) -> tuple:
    """Covector components v_k = g(v, E_k)."""
    n = len(v)
    return tuple(
        sum((v[i] * metric[i][k] for i in range(n) if metric[i][k]), v[0] * 0) for k in range(n)
    )
