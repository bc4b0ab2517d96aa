"""Exact rational matrix families for the n-fold integrated Wiener process.

Every matrix in this module has `fractions.Fraction` entries and every
operation is exact: nothing here rounds, ever.  The families are

    gamma_matrix     unit lower-triangular, entries 1/(j-k)!
    b_matrix         lower-triangular, entries (j+k)!/(k!(j-k)!)
    a_matrix         the sign-alternating form of b_matrix
    a_inverse_matrix exact inverse of a_matrix, entries (2k+1)j!/((j+k+1)!(j-k)!)
    lambda_matrix    diag(1, 3, 5, ...)
    rho_inverse_matrix   the Hilbert-type matrix 1/(j+k+1)
    rho_matrix       its exact inverse

All of these except rho_matrix are *dimension-free*: the entry at (j, k)
does not depend on the size of the realization, so a realization at size N
is the upper-left block of any larger one.  rho_matrix is the deliberate
counterexample; its entries change whenever the realization grows.

Rows and columns are indexed from 0.  A realization "at dimension N" is an
(N+1) x (N+1) dense list-of-lists.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

Matrix = list[list[Fraction]]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@lru_cache(maxsize=None)
def _fact(n: int) -> int:
    return math.factorial(n)


def _check_dim(dim) -> int:
    try:
        dim = operator.index(dim)
    except TypeError:
        raise ValueError(
            f"matrix dimension must be a non-negative integer, got {dim!r}"
        ) from None
    if dim < 0:
        raise ValueError(f"matrix dimension must be a non-negative integer, got {dim!r}")
    return dim


def _lower_triangular_zero(j: int, k: int) -> bool:
    return j < k


def _off_diagonal_zero(j: int, k: int) -> bool:
    return j != k


def _never_zero(j: int, k: int) -> bool:
    return False


@dataclass(frozen=True)
class DimFreeMatrix:
    """A matrix family given by an entry rule that ignores realization size.

    The rule makes the dimension-free block property hold by construction:
    realizing at two sizes and comparing the shared upper-left block is the
    natural test, and it must always pass for instances of this class.
    """

    entry_rule: Callable[[int, int], Fraction]
    structural_zero: Callable[[int, int], bool] = _never_zero

    def entry(self, j: int, k: int) -> Fraction:
        if j < 0 or k < 0:
            raise ValueError("matrix indices must be non-negative")
        if self.structural_zero(j, k):
            return _ZERO
        return self.entry_rule(j, k)

    def realize(self, dim: int) -> Matrix:
        """Dense (dim+1) x (dim+1) realization."""
        dim = _check_dim(dim)
        rng = range(dim + 1)
        return [[self.entry(j, k) for k in rng] for j in rng]


GAMMA = DimFreeMatrix(
    lambda j, k: Fraction(1, _fact(j - k)),
    _lower_triangular_zero,
)

B = DimFreeMatrix(
    lambda j, k: Fraction(_fact(j + k), _fact(k) * _fact(j - k)),
    _lower_triangular_zero,
)

A = DimFreeMatrix(
    lambda j, k: Fraction((-1) ** (j + k) * _fact(j + k), _fact(k) * _fact(j - k)),
    _lower_triangular_zero,
)

A_INVERSE = DimFreeMatrix(
    lambda j, k: Fraction((2 * k + 1) * _fact(j), _fact(j + k + 1) * _fact(j - k)),
    _lower_triangular_zero,
)

LAMBDA = DimFreeMatrix(lambda j, k: Fraction(2 * j + 1), _off_diagonal_zero)

RHO_INVERSE = DimFreeMatrix(lambda j, k: Fraction(1, j + k + 1))


def identity(dim: int) -> Matrix:
    dim = _check_dim(dim)
    return [[_ONE if j == k else _ZERO for k in range(dim + 1)] for j in range(dim + 1)]


def star(m: Matrix) -> Matrix:
    """Entrywise sign flip on odd index sums: out[j][k] = (-1)^(j+k) m[j][k].

    An involution: applying it twice returns the original matrix.
    """
    size = len(m)
    if any(len(row) != size for row in m):
        raise ValueError("star is defined for square matrices only")
    return [
        [v if (j + k) % 2 == 0 else -v for k, v in enumerate(row)]
        for j, row in enumerate(m)
    ]


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)]


def mat_mul(x: Matrix, y: Matrix) -> Matrix:
    """Exact matrix product; zero entries are skipped, so triangular
    arguments cost roughly a sixth of the dense bound."""
    inner = len(y)
    if any(len(row) != inner for row in x):
        raise ValueError(f"shape mismatch: {len(x)}x{len(x[0])} times {inner}x{len(y[0])}")
    cols = len(y[0])
    out: Matrix = []
    for xi in x:
        row = [_ZERO] * cols
        for k, v in enumerate(xi):
            if v:
                yk = y[k]
                for j in range(cols):
                    w = yk[j]
                    if w:
                        row[j] += v * w
        out.append(row)
    return out


def gamma_matrix(dim: int) -> Matrix:
    """Unit lower-triangular matrix with entries 1/(j-k)! for j >= k."""
    return GAMMA.realize(dim)


def b_matrix(dim: int) -> Matrix:
    """Lower-triangular matrix with entries (j+k)!/(k!(j-k)!) for j >= k.

    The diagonal is (2j)!/j!.
    """
    return B.realize(dim)


def a_matrix(dim: int) -> Matrix:
    """Lower-triangular matrix with entries (-1)^(j+k) (j+k)!/(k!(j-k)!).

    Equal to star(b_matrix(dim)); the diagonal (2j)!/j! is positive.
    """
    return A.realize(dim)


def a_inverse_matrix(dim: int) -> Matrix:
    """Exact inverse of a_matrix: entries (2k+1) j!/((j+k+1)!(j-k)!) for j >= k.

    All entries are positive on and below the diagonal, so this is also the
    unit-normalized lower-triangular factor used by the samplers.
    """
    return A_INVERSE.realize(dim)


def lambda_matrix(dim: int) -> Matrix:
    """Diagonal matrix diag(1, 3, 5, ..., 2*dim+1)."""
    return LAMBDA.realize(dim)


def rho_inverse_matrix(dim: int) -> Matrix:
    """The Hilbert-type matrix with entries 1/(j+k+1); symmetric positive definite."""
    return RHO_INVERSE.realize(dim)


def rho_matrix(dim: int) -> Matrix:
    """Exact inverse of rho_inverse_matrix(dim).

    Closed form:

        out[j][k] = (-1)^(j+k) * sum over m from max(j,k) to dim of
                    (j+m)! (k+m)! (2m+1) / ((j!)^2 (k!)^2 (m-j)! (m-k)!)

    which is visibly symmetric in (j, k); the inverse of a symmetric matrix
    has to be.  Unlike the other families here the entries depend on the
    realization size, so rho_matrix(N) is not a block of rho_matrix(N+1).
    The same matrix equals D^-1 A' Lambda A D^-1 with D = diag(j!), which is
    how the floating-point layer factors it.
    """
    dim = _check_dim(dim)
    out: Matrix = []
    for j in range(dim + 1):
        row = []
        for k in range(dim + 1):
            den_jk = _fact(j) ** 2 * _fact(k) ** 2
            acc = Fraction(0)
            for m in range(max(j, k), dim + 1):
                acc += Fraction(
                    _fact(j + m) * _fact(k + m) * (2 * m + 1),
                    den_jk * _fact(m - j) * _fact(m - k),
                )
            row.append(acc if (j + k) % 2 == 0 else -acc)
        out.append(row)
    return out


def matrix_to_json(m: Matrix) -> dict:
    """JSON form {"dim": N, "entries": [["num/den", ...], ...]}.

    Entries are decimal fraction strings ("1/2", "-36"); never floats.
    """
    size = len(m)
    if size == 0 or any(len(row) != size for row in m):
        raise ValueError("expected a non-empty square matrix")
    return {
        "dim": size - 1,
        "entries": [[str(Fraction(v)) for v in row] for row in m],
    }


def matrix_from_json(obj: dict) -> Matrix:
    """Inverse of matrix_to_json; validates shape against the dim field."""
    dim = _check_dim(obj["dim"])
    entries = obj["entries"]
    if len(entries) != dim + 1 or any(len(row) != dim + 1 for row in entries):
        raise ValueError("entries shape does not match dim")
    return [[Fraction(v) for v in row] for row in entries]
