"""
Exact integer lattice routines.

Lattices are given by integer row vectors. The canonical form is the
upper-triangular row Hermite normal form with positive pivots and every
entry above a pivot reduced into ``[0, pivot)``.
"""

import logging
from typing import Iterable, List, Sequence, Tuple

from .exceptions import IdealError

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[int, ...], ...]


def row_hnf(rows: Iterable[Sequence[int]], dimension: int) -> Matrix:
    """
    Compute the row Hermite normal form of the lattice spanned by ``rows``.

    Args:
        rows: Integer row vectors of length ``dimension``
        dimension: Ambient dimension; the lattice must have full rank

    Returns:
        Square upper-triangular HNF as a tuple of tuples
    """
    work: List[List[int]] = [list(row) for row in rows if any(row)]
    for row in work:
        if len(row) != dimension:
            raise IdealError("row has wrong length", {"expected": dimension, "got": len(row)})

    basis: List[List[int]] = []
    for col in range(dimension):
        # Euclid on the column: keep the smallest entry, reduce the others by it.
        while True:
            active = [i for i, row in enumerate(work) if row[col] != 0]
            if len(active) <= 1:
                break
            pivot_index = min(active, key=lambda i: abs(work[i][col]))
            pivot = work[pivot_index]
            for i in active:
                if i == pivot_index:
                    continue
                quotient = work[i][col] // pivot[col]
                work[i] = [a - quotient * b for a, b in zip(work[i], pivot)]
            work = [row for row in work if any(row)]

        active = [i for i, row in enumerate(work) if row[col] != 0]
        if not active:
            raise IdealError("lattice is not of full rank", {"column": col})
        pivot = work.pop(active[0])
        if pivot[col] < 0:
            pivot = [-a for a in pivot]
        basis.append(pivot)

    for i in range(dimension):
        pivot = basis[i][i]
        for j in range(i):
            quotient = basis[j][i] // pivot
            if quotient:
                basis[j] = [a - quotient * b for a, b in zip(basis[j], basis[i])]

    return tuple(tuple(row) for row in basis)


def is_canonical_hnf(matrix: Sequence[Sequence[int]]) -> bool:
    """
    Check that a square matrix is already in canonical row HNF.

    Args:
        matrix: Candidate HNF

    Returns:
        True if re-normalizing would be the identity
    """
    size = len(matrix)
    for i, row in enumerate(matrix):
        if len(row) != size:
            return False
        if row[i] <= 0:
            return False
        if any(row[j] != 0 for j in range(i)):
            return False
        for k in range(i):
            if not 0 <= matrix[k][i] < row[i]:
                return False
    return True


def determinant(hnf: Matrix) -> int:
    """Product of the pivots of an HNF."""
    result = 1
    for i, row in enumerate(hnf):
        result *= row[i]
    return result


def reduce_vector(hnf: Matrix, vector: Sequence[int]) -> Tuple[int, ...]:
    """
    Canonical representative of ``vector`` modulo the lattice.

    Each coordinate ``i`` of the result lies in ``[0, hnf[i][i])``.
    """
    current = list(vector)
    for i, row in enumerate(hnf):
        quotient = current[i] // row[i]
        if quotient:
            current = [a - quotient * b for a, b in zip(current, row)]
    return tuple(current)


def contains(hnf: Matrix, vector: Sequence[int]) -> bool:
    """Whether ``vector`` lies in the lattice."""
    return not any(reduce_vector(hnf, vector))


def lattice_sum(first: Matrix, second: Matrix) -> Matrix:
    """HNF of the sum of two full-rank lattices."""
    return row_hnf(list(first) + list(second), len(first))
