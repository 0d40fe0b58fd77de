"""Responsibility: Exact rank, echelon form, kernels and products of matrices over a FieldSpec.

Matrices are int64 numpy arrays of canonical field elements (packed a + b*p in
extension mode). Products run through float64 BLAS in chunks small enough that every
partial sum is an exactly representable integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .config import ROW_BLOCK
from .field import FieldSpec

FLOAT_EXACT = 2**53
LIMB_BITS = 16


def as_matrix(M: Sequence[Sequence[int]] | np.ndarray, field: FieldSpec) -> np.ndarray:
    A = np.array(M, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(1, -1) if A.size else A.reshape(0, 0)
    return A % field.order if not field.ext_mode else A


# -- packed extension helpers ----------------------------------------------------------

def _split(A: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    return A % p, A // p


def _pack(re: np.ndarray, im: np.ndarray, p: int) -> np.ndarray:
    return re % p + (im % p) * p


def neg(A: np.ndarray, field: FieldSpec) -> np.ndarray:
    p = field.p
    if not field.ext_mode:
        return -A % p
    re, im = _split(A, p)
    return _pack(-re, -im, p)


def sub(A: np.ndarray, B: np.ndarray, field: FieldSpec) -> np.ndarray:
    p = field.p
    if not field.ext_mode:
        return (A - B) % p
    (ar, ai), (br, bi) = _split(A, p), _split(B, p)
    return _pack(ar - br, ai - bi, p)


def add(A: np.ndarray, B: np.ndarray, field: FieldSpec) -> np.ndarray:
    return sub(A, neg(B, field), field)


def scale(A: np.ndarray, c: int, field: FieldSpec) -> np.ndarray:
    p = field.p
    if not field.ext_mode:
        return A * (c % p) % p
    (ar, ai), (cr, ci) = _split(A, p), field.split(c)
    return _pack(ar * cr - ai * ci, ar * ci + ai * cr, p)


# -- exact products --------------------------------------------------------------------

def _chunked_float_dot(A: np.ndarray, B: np.ndarray, p: int, entry_bound: int) -> np.ndarray:
    step = max(1, FLOAT_EXACT // max(1, entry_bound))
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    Af = A.astype(np.float64)
    Bf = B.astype(np.float64)
    for s in range(0, A.shape[1], step):
        out += (Af[:, s:s + step] @ Bf[s:s + step]).astype(np.int64) % p
        out %= p
    return out


def _matmul_prime(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    if A.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    bound = (p - 1) ** 2
    if bound < FLOAT_EXACT:
        return _chunked_float_dot(A, B, p, bound)
    # Large p: split both factors into 16-bit limbs.
    base = 1 << LIMB_BITS
    a1, a0 = A >> LIMB_BITS, A & (base - 1)
    b1, b0 = B >> LIMB_BITS, B & (base - 1)
    limb_bound = (base - 1) ** 2
    hh = _chunked_float_dot(a1, b1, p, limb_bound)
    mid = (_chunked_float_dot(a1, b0, p, limb_bound) + _chunked_float_dot(a0, b1, p, limb_bound)) % p
    ll = _chunked_float_dot(a0, b0, p, limb_bound)
    s32, s16 = pow(2, 32, p), pow(2, 16, p)
    return (hh * s32 % p + mid * s16 % p + ll) % p


def matmul(A: np.ndarray, B: np.ndarray, field: FieldSpec) -> np.ndarray:
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"cannot multiply {A.shape} by {B.shape}")
    p = field.p
    if not field.ext_mode:
        return _matmul_prime(A, B, p)
    (ar, ai), (br, bi) = _split(A, p), _split(B, p)
    re = (_matmul_prime(ar, br, p) - _matmul_prime(ai, bi, p)) % p
    im = (_matmul_prime(ar, bi, p) + _matmul_prime(ai, br, p)) % p
    return _pack(re, im, p)


# -- dense elimination -----------------------------------------------------------------

def _rref_prime(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    A = A % p
    m, n = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r, c:] = A[r, c:] * pow(int(A[r, c]), -1, p) % p
        f = A[:, c].copy()
        f[r] = 0
        rows = np.flatnonzero(f)
        if rows.size:
            A[rows, c:] = (A[rows, c:] - f[rows, None] * A[r, c:]) % p
        pivots.append(c)
        r += 1
    return A[:r].copy(), pivots


def _rref_ext(A: np.ndarray, field: FieldSpec) -> tuple[np.ndarray, list[int]]:
    p = field.p
    re, im = _split(A, p)
    m, n = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(re[r:, c] | im[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            re[[r, k]] = re[[k, r]]
            im[[r, k]] = im[[k, r]]
        vr, vi = field.split(field.inv(field.pack(int(re[r, c]), int(im[r, c]))))
        rr, ri = re[r, c:].copy(), im[r, c:].copy()
        re[r, c:] = (rr * vr - ri * vi) % p
        im[r, c:] = (rr * vi + ri * vr) % p
        fr, fi = re[:, c].copy(), im[:, c].copy()
        fr[r] = fi[r] = 0
        rows = np.flatnonzero(fr | fi)
        if rows.size:
            pr, pi = re[r, c:], im[r, c:]
            a, b = fr[rows, None], fi[rows, None]
            re[rows, c:] = (re[rows, c:] - (a * pr - b * pi)) % p
            im[rows, c:] = (im[rows, c:] - (a * pi + b * pr)) % p
        pivots.append(c)
        r += 1
    return _pack(re[:r], im[:r], p), pivots


def _rref_dense(A: np.ndarray, field: FieldSpec) -> tuple[np.ndarray, list[int]]:
    A = np.array(A, dtype=np.int64, copy=True)
    if field.ext_mode:
        return _rref_ext(A, field)
    return _rref_prime(A, field.p)


@dataclass
class Echelon:
    """Reduced row echelon form: rows[k] has a unit at column pivots[k] and zeros at other pivots."""

    rows: np.ndarray
    pivots: list[int]
    ncols: int
    field: FieldSpec

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def nullity(self) -> int:
        return self.ncols - self.rank

    @property
    def free(self) -> list[int]:
        pivot_set = set(self.pivots)
        return [c for c in range(self.ncols) if c not in pivot_set]

    def kernel(self) -> np.ndarray:
        """Rows form a basis of {v : rows·v = 0}; row k is 1 at free column k.

        The same matrix is the projection of ambient coordinates onto the free
        coordinates of the quotient by the row space.
        """
        free = self.free
        K = np.zeros((len(free), self.ncols), dtype=np.int64)
        if free:
            K[np.arange(len(free)), free] = 1
            if self.pivots:
                K[:, self.pivots] = neg(self.rows[:, free].T, self.field)
        return K

    def reduce(self, V: np.ndarray) -> np.ndarray:
        """Remainders of the rows of V modulo the row space (zero at every pivot)."""
        if not self.pivots:
            return V % self.field.order if not self.field.ext_mode else V.copy()
        return sub(V, matmul(V[:, self.pivots], self.rows, self.field), self.field)


def rref_stream(
    blocks: Iterable[np.ndarray], ncols: int, field: FieldSpec, block_rows: int = ROW_BLOCK
) -> Echelon:
    """Echelon form of the vertical concatenation of `blocks`, never holding more than
    one block plus the current basis in memory."""
    R = np.zeros((0, ncols), dtype=np.int64)
    pivots: list[int] = []
    for block in blocks:
        block = np.asarray(block, dtype=np.int64)
        if block.ndim != 2 or block.shape[1] != ncols:
            raise ValueError(f"row block of shape {block.shape} does not have {ncols} columns")
        for start in range(0, block.shape[0], block_rows):
            X = block[start:start + block_rows]
            if pivots:
                X = sub(X, matmul(X[:, pivots], R, field), field)
            Xr, new = _rref_dense(X, field)
            if not new:
                continue
            if pivots:
                R = sub(R, matmul(R[:, new], Xr, field), field)
            R = np.vstack([R, Xr])
            pivots = pivots + new
            order = np.argsort(pivots, kind="stable")
            R = R[order]
            pivots = [pivots[k] for k in order]
            if len(pivots) == ncols:
                return Echelon(R, pivots, ncols, field)
    return Echelon(R, pivots, ncols, field)


def rref(M: Sequence[Sequence[int]] | np.ndarray, field: FieldSpec) -> Echelon:
    A = as_matrix(M, field)
    ncols = A.shape[1] if A.ndim == 2 else 0
    return rref_stream([A], ncols, field)


@dataclass(frozen=True)
class RankKernel:
    rank: int
    kernel: np.ndarray

    @property
    def nullity(self) -> int:
        return int(self.kernel.shape[0])


def rank_kernel(M: Sequence[Sequence[int]] | np.ndarray, field: FieldSpec) -> RankKernel:
    echelon = rref(M, field)
    return RankKernel(echelon.rank, echelon.kernel())


def rank(M: Sequence[Sequence[int]] | np.ndarray | sp.spmatrix, field: FieldSpec) -> int:
    if sp.issparse(M):
        return sparse_rank(M, field)
    return rref(M, field).rank


def sparse_rank(M: sp.spmatrix, field: FieldSpec, block_rows: int = ROW_BLOCK) -> int:
    """Rank with a singleton prepass: a column (row) with one nonzero contributes one to
    the rank and leaves with its row (column). The remaining core is eliminated densely."""
    A = sp.csr_matrix(M, dtype=np.int64)
    A.data %= field.order if not field.ext_mode else field.p * field.p
    A.eliminate_zeros()
    found = 0
    while A.nnz:
        col_counts = np.diff(A.tocsc().indptr)
        single_cols = np.flatnonzero(col_counts == 1)
        if single_cols.size:
            rows_hit = np.unique(A.tocsc()[:, single_cols].nonzero()[0])
            found += rows_hit.size
            keep_r = np.setdiff1d(np.arange(A.shape[0]), rows_hit)
            keep_c = np.setdiff1d(np.arange(A.shape[1]), single_cols)
            A = A[keep_r][:, keep_c].tocsr()
            A.eliminate_zeros()
            continue
        row_counts = np.diff(A.indptr)
        single_rows = np.flatnonzero(row_counts == 1)
        if single_rows.size:
            cols_hit = np.unique(A[single_rows].nonzero()[1])
            found += cols_hit.size
            keep_r = np.setdiff1d(np.arange(A.shape[0]), single_rows)
            keep_c = np.setdiff1d(np.arange(A.shape[1]), cols_hit)
            A = A[keep_r][:, keep_c].tocsr()
            A.eliminate_zeros()
            continue
        break
    if not A.nnz:
        return found
    live_r = np.flatnonzero(np.diff(A.indptr))
    live_c = np.flatnonzero(np.diff(A.tocsc().indptr))
    core = A[live_r][:, live_c].tocsr()

    def row_blocks() -> Iterable[np.ndarray]:
        for start in range(0, core.shape[0], block_rows):
            yield core[start:start + block_rows].toarray()

    return found + rref_stream(row_blocks(), core.shape[1], field, block_rows).rank


def det(M: Sequence[Sequence[int]] | np.ndarray, field: FieldSpec) -> int:
    """Determinant by Gaussian elimination with field operations (small matrices)."""
    A = [[int(v) for v in row] for row in as_matrix(M, field)]
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("determinant of a non-square matrix")
    result = 1
    for c in range(n):
        k = next((r for r in range(c, n) if A[r][c]), None)
        if k is None:
            return 0
        if k != c:
            A[c], A[k] = A[k], A[c]
            result = field.neg(result)
        pivot = A[c][c]
        result = field.mul(result, pivot)
        inv = field.inv(pivot)
        for r in range(c + 1, n):
            if A[r][c]:
                f = field.mul(A[r][c], inv)
                A[r] = [field.sub(a, field.mul(f, b)) for a, b in zip(A[r], A[c])]
    return result
