"""Faithful representation of the free class-2 nilpotent group of rank n in UT_{2n+1}(Z).

rho(x_i) = I + E_{i,n+1} + E_{n+1,n+1+i} (1-based). Image elements look like

    I + sum_i a_i (E_{i,n+1} + E_{n+1,n+1+i}) + sum_{i,j} c_ij E_{i,n+1+j}

so the generator exponents sit in column n+1 and the commutator exponents in
the antisymmetric part of the upper-right block.
"""

from __future__ import annotations

import logging
from typing import List

import numpy as np

from .errors import NilknapError, error_code
from .group import NormalForm, Word, spell

logger = logging.getLogger(__name__)


def int_matrix(rows, columns=None) -> np.ndarray:
    """numpy object array of Python ints, so products never overflow."""
    rows = [[int(x) for x in row] for row in rows]
    if columns is None:
        columns = len(rows[0]) if rows else 0
    out = np.empty((len(rows), columns), dtype=object)
    for i, row in enumerate(rows):
        out[i, :] = row
    return out


def int_identity(n) -> np.ndarray:
    return int_matrix([[int(i == j) for j in range(n)] for i in range(n)], n)


class UnitriangularMatrix:
    __slots__ = ("entries",)

    def __init__(self, entries):
        entries = entries if isinstance(entries, np.ndarray) and entries.dtype == object else int_matrix(entries)
        size, other = entries.shape
        if size != other or size % 2 == 0:
            raise NilknapError(error_code.INVALID_ARGUMENT, f"expected an odd square matrix, got {size}x{other}")
        for i in range(size):
            if entries[i, i] != 1 or any(entries[i, j] != 0 for j in range(i)):
                raise NilknapError(error_code.INVALID_ARGUMENT, f"row {i + 1} breaks the unitriangular pattern")
        entries = entries.copy()
        entries.flags.writeable = False
        self.entries = entries

    @classmethod
    def identity(cls, n):
        return cls(int_identity(2 * n + 1))

    @property
    def dimension(self):
        return self.entries.shape[0]

    @property
    def rank(self):
        return (self.dimension - 1) // 2

    def __matmul__(self, other):
        if self.dimension != other.dimension:
            raise NilknapError(error_code.RANK_MISMATCH, f"dimensions {self.dimension} and {other.dimension} differ")
        return UnitriangularMatrix(self.entries.dot(other.entries))

    def inverse(self):
        # (I + N)^-1 = sum_k (-N)^k, N strictly upper triangular hence nilpotent
        size = self.dimension
        nilpotent = self.entries - int_identity(size)
        result = int_identity(size)
        term = int_identity(size)
        for _ in range(size - 1):
            term = -term.dot(nilpotent)
            result = result + term
        return UnitriangularMatrix(result)

    def __pow__(self, e):
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = UnitriangularMatrix(int_identity(self.dimension))
        while e:
            if e & 1:
                result = result @ base
            e >>= 1
            if e:
                base = base @ base
        return result

    def is_identity(self):
        return bool(np.array_equal(self.entries, int_identity(self.dimension)))

    def __eq__(self, other):
        return isinstance(other, UnitriangularMatrix) and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(tuple(self.entries.flat))

    def rows(self) -> List[List[int]]:
        return [[int(x) for x in row] for row in self.entries]

    def __repr__(self):
        return f"UnitriangularMatrix({self.rows()})"


def rho_generator(i, n) -> UnitriangularMatrix:
    if not 1 <= i <= n:
        raise NilknapError(error_code.INDEX_OUT_OF_RANGE, f"generator x{i} outside rank {n}")
    entries = int_identity(2 * n + 1)
    entries[i - 1, n] = 1
    entries[n, n + i] = 1
    return UnitriangularMatrix(entries)


def rho_word(w: Word) -> UnitriangularMatrix:
    result = UnitriangularMatrix.identity(w.rank)
    for index, exponent in w.letters:
        result = result @ (rho_generator(index, w.rank) ** exponent)
    return result


def rho(nf: NormalForm) -> UnitriangularMatrix:
    return rho_word(spell(nf))


def matrix_commutator(a: UnitriangularMatrix, b: UnitriangularMatrix) -> UnitriangularMatrix:
    return a.inverse() @ b.inverse() @ a @ b


def matrix_to_normal_form(M: UnitriangularMatrix, n: int) -> NormalForm:
    """Decodes an image of rho back to its normal form; anything else is rejected."""
    if M.dimension != 2 * n + 1:
        raise NilknapError(error_code.DECODE_ERROR, f"dimension {M.dimension} does not match rank {n}")
    E = M.entries
    alpha = tuple(int(E[i, n]) for i in range(n))
    if [int(E[n, n + 1 + i]) for i in range(n)] != list(alpha):
        raise NilknapError(error_code.DECODE_ERROR, "row n+1 disagrees with column n+1")
    prefix = UnitriangularMatrix.identity(n)
    for i, a in enumerate(alpha, start=1):
        if a:
            prefix = prefix @ (rho_generator(i, n) ** a)
    R = (prefix.inverse() @ M).entries
    beta = {}
    size = 2 * n + 1
    for r in range(size):
        for c in range(r + 1, size):
            if r < n and c > n:
                i, j = r + 1, c - n
                if i == j and R[r, c] != 0:
                    raise NilknapError(error_code.DECODE_ERROR, f"diagonal central entry at ({r + 1}, {c + 1})")
                if i < j:
                    if R[r, c] != -R[j - 1, n + i]:
                        raise NilknapError(error_code.DECODE_ERROR, f"central block not antisymmetric at ({i}, {j})")
                    if R[r, c]:
                        beta[(i, j)] = int(R[r, c])
            elif R[r, c] != 0:
                raise NilknapError(error_code.DECODE_ERROR, f"entry ({r + 1}, {c + 1}) outside the image pattern")
    return NormalForm(n, alpha, beta)
