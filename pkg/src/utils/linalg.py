"""
DefCoh - Exact Sparse Linear Algebra

Every kernel in the workbench asks one of three questions about a sparse
matrix whose columns are images of basis vectors: its rank, its nullspace,
or whether A·v = t is solvable. All three run fraction-free Gauss-Jordan
elimination on a sparse sympy DomainMatrix.

Columns are given as dicts {row_key: nonzero entry}; row keys may be any
hashable (monomials, (slot, monomial) pairs, ...). Row order follows first
appearance, which keeps results deterministic for deterministic inputs.
"""

import logging
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

Column = Dict[Hashable, object]


def elimination_method(domain) -> str:
    """
    Choose the fraction-free elimination for a domain.

    Fields with an associated polynomial ring (QQ, QQ(q), QQ(q, h)) clear
    denominators and run Bareiss elimination in the ring ("CD"); algebraic
    fields eliminate fraction-free in place ("FF").
    """
    if domain.is_Field and domain.has_assoc_Ring:
        return "CD"
    return "FF"


def build_matrix(
    columns: Sequence[Column],
    domain,
    row_keys: Optional[List[Hashable]] = None,
) -> Tuple[DomainMatrix, List[Hashable]]:
    """
    Assemble a sparse DomainMatrix from column dicts.

    Args:
        columns: One dict per column, zero entries absent
        domain: sympy domain of the entries
        row_keys: Optional fixed row order; unseen keys are appended

    Returns:
        Tuple of (matrix, row keys in row order)
    """
    keys: List[Hashable] = list(row_keys or [])
    index = {key: i for i, key in enumerate(keys)}
    dod: Dict[int, Dict[int, object]] = {}

    for j, column in enumerate(columns):
        for key, value in column.items():
            if not value:
                continue
            if key not in index:
                index[key] = len(keys)
                keys.append(key)
            dod.setdefault(index[key], {})[j] = value

    shape = (len(keys), len(columns))
    return DomainMatrix.from_dod(dod, shape, domain), keys


def _rref(matrix: DomainMatrix):
    rows, cols = matrix.shape
    if rows == 0 or cols == 0:
        return matrix, matrix.domain.one, ()
    return matrix.rref_den(method=elimination_method(matrix.domain))


def matrix_rank(matrix: DomainMatrix) -> int:
    """Rank by fraction-free elimination."""
    _, _, pivots = _rref(matrix)
    return len(pivots)


def rank(columns: Sequence[Column], domain) -> int:
    matrix, _ = build_matrix(columns, domain)
    return matrix_rank(matrix)


def kernel(columns: Sequence[Column], domain) -> List[List[object]]:
    """
    Basis of {v : Σ v_j·column_j = 0}.

    Each basis vector has a 1 in exactly one free coordinate and zeros in
    the other free coordinates (reduced echelon normalization). Vectors are
    ordered by their free coordinate.
    """
    n = len(columns)
    matrix, _ = build_matrix(columns, domain)
    reduced, _, pivots = _rref(matrix)
    dod = reduced.to_dod()
    pivot_set = set(pivots)

    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        vector = [domain.zero] * n
        vector[free] = domain.one
        for row, pivot in enumerate(pivots):
            entry = dod.get(row, {}).get(free)
            if entry:
                vector[pivot] = -entry / dod[row][pivot]
        basis.append(vector)
    return basis


def solve(columns: Sequence[Column], target: Column, domain) -> Optional[List[object]]:
    """
    Solve Σ v_j·column_j = target.

    Returns:
        One solution (free coordinates set to zero), or None when the
        system is inconsistent
    """
    n = len(columns)
    if not any(target.values()):
        return [domain.zero] * n

    matrix, _ = build_matrix(list(columns) + [target], domain)
    reduced, _, pivots = _rref(matrix)
    if n in pivots:
        return None

    dod = reduced.to_dod()
    solution = [domain.zero] * n
    for row, pivot in enumerate(pivots):
        entry = dod.get(row, {}).get(n)
        if entry:
            solution[pivot] = entry / dod[row][pivot]
    return solution


def independent_columns(
    base: Sequence[Column], candidates: Sequence[Column], domain
) -> List[int]:
    """
    Indices of candidates that greedily extend the span of base.

    The pivot columns of the reduced matrix [base | candidates] are exactly
    the greedy choice, so one elimination suffices.
    """
    matrix, _ = build_matrix(list(base) + list(candidates), domain)
    _, _, pivots = _rref(matrix)
    offset = len(base)
    return [p - offset for p in pivots if p >= offset]


def combine(vector: Sequence[object], items: Sequence, zero):
    """Σ vector_j·items_j for items supporting scalar multiplication and +."""
    total = zero
    for coeff, item in zip(vector, items):
        if coeff:
            total = total + item.scale(coeff)
    return total


def echelon_rows(vectors: Sequence[Sequence[object]], domain) -> Tuple[List[List[object]], Tuple[int, ...]]:
    """
    Reduced row echelon form of a list of row vectors.

    Returns:
        Tuple of (nonzero rows scaled so each pivot is 1, pivot columns)
    """
    if not vectors:
        return [], ()
    width = len(vectors[0])
    dod = {}
    for i, row in enumerate(vectors):
        entries = {j: value for j, value in enumerate(row) if value}
        if entries:
            dod[i] = entries
    matrix = DomainMatrix.from_dod(dod, (len(vectors), width), domain)
    reduced, _, pivots = _rref(matrix)
    rows = reduced.to_dod()
    out = []
    for i, pivot in enumerate(pivots):
        lead = rows[i][pivot]
        out.append([rows[i].get(j, domain.zero) / lead for j in range(width)])
    return out, tuple(pivots)
