"""Exact integer solutions of A x = b by column Hermite reduction.

Matrices are ``sympy.Matrix`` objects over the integers, so no entry ever
overflows or passes through floating point.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import sympy
from sympy import Matrix
from sympy.core.intfunc import igcdex

logger = logging.getLogger(__name__)


@dataclass
class ColumnEchelon:
    """A * U == H with U unimodular, U_inv its integer inverse.

    H is lower echelon: row ``i`` is zero from column ``rank_before[i] + 1`` on,
    and ``pivot_of[i]`` is the column whose leading entry sits in row ``i``.
    """

    H: Matrix
    U: Matrix
    U_inv: Matrix
    rank: int
    pivot_of: List[Optional[int]]
    rank_before: List[int]


def column_echelon(A) -> ColumnEchelon:
    H = Matrix(A)
    m, k = H.shape
    U = sympy.eye(k)
    r = 0
    pivot_of: List[Optional[int]] = [None] * m
    rank_before = [0] * m
    for i in range(m):
        rank_before[i] = r
        if r == k:
            continue
        for j in range(r + 1, k):
            if H[i, j] == 0:
                continue
            a, b = H[i, r], H[i, j]
            s, t, g = igcdex(a, b)
            # determinant 1
            step = Matrix([[s, -b // g], [t, a // g]])
            for M in (H, U):
                pair = Matrix.hstack(M[:, r], M[:, j]) * step
                M[:, r] = pair[:, 0]
                M[:, j] = pair[:, 1]
        if H[i, r] != 0:
            pivot_of[i] = r
            r += 1
    U_inv = U.inv() if k else U.copy()
    return ColumnEchelon(H, U, U_inv, r, pivot_of, rank_before)


@dataclass(frozen=True)
class LatticeSolution:
    """Every integer solution is ``particular + basis @ t`` for a unique integer t,
    and ``t == coordinates @ x`` recovers it."""

    particular: Tuple[int, ...]
    basis: Tuple[Tuple[int, ...], ...]
    coordinates: Tuple[Tuple[int, ...], ...]

    @property
    def dimension(self):
        return len(self.coordinates)

    def point(self, t: Sequence[int]) -> Tuple[int, ...]:
        return tuple(
            p + sum(row[c] * t[c] for c in range(len(t))) for p, row in zip(self.particular, self.basis)
        )

    def parameters_of(self, x: Sequence[int]) -> Tuple[int, ...]:
        return tuple(sum(w * xi for w, xi in zip(row, x)) for row in self.coordinates)


def solve_integer_linear(A, b: Sequence[int]) -> Optional[LatticeSolution]:
    """All integer x with A x = b, or None when there is none."""
    echelon = column_echelon(A)
    H, r = echelon.H, echelon.rank
    m, k = H.shape
    y = [0] * k
    for i in range(m):
        known = echelon.rank_before[i]
        residual = int(b[i]) - sum(int(H[i, c]) * y[c] for c in range(known))
        c = echelon.pivot_of[i]
        if c is None:
            if residual != 0:
                logger.debug("row %d of the linear system is inconsistent", i + 1)
                return None
            continue
        pivot = int(H[i, c])
        if residual % pivot != 0:
            logger.debug("row %d has no integral pivot value", i + 1)
            return None
        y[c] = residual // pivot
    U, U_inv = echelon.U, echelon.U_inv
    particular = tuple(sum(int(U[row, c]) * y[c] for c in range(r)) for row in range(k))
    basis = tuple(tuple(int(U[row, c]) for c in range(r, k)) for row in range(k))
    coordinates = tuple(tuple(int(U_inv[c, col]) for col in range(k)) for c in range(r, k))
    return LatticeSolution(particular, basis, coordinates)
