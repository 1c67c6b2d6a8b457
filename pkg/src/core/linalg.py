"""
Dense linear algebra over the prime field GF(p).

Matrices are int64 numpy arrays with every entry reduced to [0, p).
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, Field, field_validator

from src.core.config import MAX_PRIME, get_settings, is_prime

logger = logging.getLogger(__name__)

Mat = NDArray[np.int64]


class FieldPrime(BaseModel):
    """The characteristic of the ground field."""
    p: int = Field(..., description="Prime modulus")

    @field_validator("p")
    @classmethod
    def _check(cls, value: int) -> int:
        if not is_prime(value):
            raise ValueError(f"Modulus p={value} is not prime")
        if value >= MAX_PRIME:
            raise ValueError(f"Modulus p={value} must be below {MAX_PRIME}")
        return value


def resolve_prime(p: Optional[int] = None) -> int:
    """Return ``p`` after validation, or the configured default when ``p`` is None."""
    if p is None:
        return get_settings().prime
    return FieldPrime(p=p).p


def as_mat(data, p: int, shape: Optional[Tuple[int, int]] = None) -> Mat:
    """
    Convert nested lists or arrays into a reduced int64 matrix.

    Args:
        data: Matrix entries; may be empty.
        p: Prime modulus.
        shape: Expected shape, used to give empty inputs the right dimensions.

    Returns:
        A new matrix with entries in [0, p).
    """
    arr = np.array(data, dtype=np.int64)
    if shape is not None:
        if arr.size == 0:
            return np.zeros(shape, dtype=np.int64)
        arr = arr.reshape(shape)
    elif arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, 0)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-dimensional matrix, got shape {arr.shape}")
    return arr % p


def zeros(rows: int, cols: int) -> Mat:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> Mat:
    return np.eye(n, dtype=np.int64)


def mat_mul(a: Mat, b: Mat, p: int) -> Mat:
    """Product ``a @ b`` reduced mod p; handles empty inner dimensions."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return (a @ b) % p


def hstack(mats: Sequence[Mat], rows: int) -> Mat:
    """Concatenate horizontally; ``rows`` fixes the shape when ``mats`` is empty."""
    if not mats:
        return zeros(rows, 0)
    return np.hstack(list(mats)).astype(np.int64)


def vstack(mats: Sequence[Mat], cols: int) -> Mat:
    """Concatenate vertically; ``cols`` fixes the shape when ``mats`` is empty."""
    if not mats:
        return zeros(0, cols)
    return np.vstack(list(mats)).astype(np.int64)


def block_diag(mats: Sequence[Mat]) -> Mat:
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = zeros(rows, cols)
    r = c = 0
    for m in mats:
        out[r:r + m.shape[0], c:c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def _eliminate(mat: Mat, p: int) -> Tuple[Mat, List[int]]:
    """
    Gauss-Jordan elimination over GF(p).

    Each pivot is normalized to 1 and its column is cleared in every other row.

    Returns:
        The reduced row-echelon form and the list of pivot columns.
    """
    m = np.array(mat, dtype=np.int64) % p
    num_rows, num_cols = m.shape
    pivots: List[int] = []
    row = 0
    for col in range(num_cols):
        if row >= num_rows:
            break
        pivot_rows = np.nonzero(m[row:, col])[0]
        if pivot_rows.size == 0:
            continue
        pivot_row = int(pivot_rows[0]) + row
        if pivot_row != row:
            m[[row, pivot_row]] = m[[pivot_row, row]]
        inv_pivot = pow(int(m[row, col]), -1, p)
        m[row] = (m[row] * inv_pivot) % p
        factors = m[:, col].copy()
        factors[row] = 0
        # entries stay below p, so the outer product fits in int64
        if factors.any():
            m = (m - np.outer(factors, m[row])) % p
        pivots.append(col)
        row += 1
    return m, pivots


def rref(mat: Mat, p: int) -> Mat:
    """Return the reduced row-echelon form of ``mat`` over GF(p)."""
    return _eliminate(mat, p)[0]


def rank(mat: Mat, p: int) -> int:
    """Return the rank of ``mat`` over GF(p)."""
    if mat.size == 0:
        return 0
    return len(_eliminate(mat, p)[1])


def kernel_basis(mat: Mat, p: int) -> Mat:
    """
    Return a matrix whose columns form a basis of the null space of ``mat``.

    Args:
        mat: An r x c matrix.
        p: Prime modulus.

    Returns:
        A c x (c - rank) matrix.
    """
    num_cols = mat.shape[1]
    if mat.shape[0] == 0:
        return identity(num_cols)
    reduced, pivots = _eliminate(mat, p)
    pivot_set = set(pivots)
    free = [c for c in range(num_cols) if c not in pivot_set]
    basis = zeros(num_cols, len(free))
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-reduced[i, f]) % p
    return basis


def image_basis(mat: Mat, p: int) -> Mat:
    """Return the pivot columns of ``mat``, a basis of its column space."""
    if mat.size == 0:
        return zeros(mat.shape[0], 0)
    _, pivots = _eliminate(mat, p)
    return mat[:, pivots] % p


def solve(mat: Mat, b, p: int) -> Optional[NDArray[np.int64]]:
    """
    Solve ``mat @ x = b`` over GF(p).

    Returns:
        One solution vector, or None when the system is inconsistent.
    """
    vec = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    x = solve_matrix(mat, vec, p)
    if x is None:
        return None
    return x[:, 0]


def solve_matrix(a: Mat, b: Mat, p: int) -> Optional[Mat]:
    """
    Solve ``a @ X = b`` over GF(p) for a matrix of unknowns.

    Returns:
        One solution, or None when some column of ``b`` is outside the image of ``a``.
    """
    num_cols = a.shape[1]
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    out = zeros(num_cols, b.shape[1])
    if a.shape[0] == 0:
        return out
    reduced, pivots = _eliminate(np.hstack([a, b]), p)
    for i, pc in enumerate(pivots):
        if pc >= num_cols:
            return None
        out[pc, :] = reduced[i, num_cols:]
    return out


def in_span(basis: Mat, vec, p: int) -> bool:
    """True iff ``vec`` is a linear combination of the columns of ``basis``."""
    return solve(basis, vec, p) is not None


def left_inverse(mat: Mat, p: int) -> Mat:
    """Return L with L @ mat = I; ``mat`` must have full column rank."""
    sol = solve_matrix(mat.T % p, identity(mat.shape[1]), p)
    if sol is None:
        raise ValueError("matrix is not injective")
    return sol.T.copy()


def right_inverse(mat: Mat, p: int) -> Mat:
    """Return R with mat @ R = I; ``mat`` must have full row rank."""
    sol = solve_matrix(mat, identity(mat.shape[0]), p)
    if sol is None:
        raise ValueError("matrix is not surjective")
    return sol


def cokernel_projection(mat: Mat, p: int) -> Mat:
    """
    Return Q whose rows span the left null space of ``mat``.

    Q @ mat = 0 and Q induces an isomorphism from the cokernel of ``mat`` onto K^(rows(Q)).
    """
    return kernel_basis(mat.T % p, p).T.copy()
