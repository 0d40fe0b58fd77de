"""Responsibility: Graded pieces of MF cokernels over A = R/W and their degree-0 Hom/Ext.

E = coker(D) for a factorization (D, D') of W. Its degree-d piece is

    E_d = R_d^n / (D·R_{d-deg D}^n + W·R_{d-deg W}^n).

Hom/Ext come from the 2-periodic resolution: Ext^i(E, F)_0 is the cohomology at
position i of F_{s_0}^{n_E} -> F_{s_1}^{n_E} -> ..., each map precomposition with D_E
or D'_E, where s_i is the running sum of their degrees. MF cokernels are maximal
Cohen-Macaulay, so for i below the dimension this equals sheaf Ext.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

import numpy as np
import scipy.sparse as sp

from .config import ROW_BLOCK
from .field import FieldSpec, Rng
from .linalg import Echelon, add, matmul, rank, rref_stream, scale
from .logging_utils import LOGGER, kv
from .matfact import MatrixFactorization
from .poly import Exponent, PolyMatrix, SparsePoly, WeightedRing, monomial_basis, monomial_index


@dataclass(frozen=True)
class GradedPresentation:
    """coker(D) over R/W with generators in degree 0; D·partner = W·I."""

    ring: WeightedRing
    field: FieldSpec
    W: SparsePoly
    D: PolyMatrix
    partner: PolyMatrix
    name: str = "E"

    @classmethod
    def from_mf(cls, mf: MatrixFactorization, name: str = "E") -> "GradedPresentation":
        return cls(mf.ring, mf.field, mf.W, mf.B, mf.C, name)

    @property
    def n(self) -> int:
        return self.D.rows

    @property
    def w_degree(self) -> int:
        return self.W.homogeneous_degree() or 0

    def step(self, i: int) -> PolyMatrix:
        """Differential used at position i of the precomposition complex."""
        return self.D if i % 2 == 0 else self.partner

    def shift(self, i: int) -> int:
        """s_i: internal degree of the Hom-source at position i."""
        return sum(self.step(k).degree or 0 for k in range(i))


def _sparse_relations(pres: GradedPresentation, d: int) -> sp.csr_matrix:
    """Rows span D·R_{d-deg D}^n + W·R_{d-deg W}^n inside R_d^n (index j*|R_d| + monomial)."""
    index = monomial_index(pres.ring, d)
    size = len(index)
    rows, cols, vals = [], [], []
    r = 0

    def emit(column: Sequence[tuple[int, SparsePoly]], mu: Exponent) -> None:
        nonlocal r
        for j, poly in column:
            for e, c in poly.terms.items():
                rows.append(r)
                cols.append(j * size + index[tuple(a + b for a, b in zip(e, mu))])
                vals.append(c)
        r += 1

    dD = pres.D.degree or 0
    for mu in monomial_basis(pres.ring, d - dD):
        for k in range(pres.n):
            emit([(j, pres.D.entries[j][k]) for j in range(pres.n) if pres.D.entries[j][k].terms], mu)
    for mu in monomial_basis(pres.ring, d - pres.w_degree):
        for j in range(pres.n):
            emit([(j, pres.W)], mu)
    return sp.csr_matrix((vals, (rows, cols)), shape=(r, pres.n * size), dtype=np.int64)


@dataclass
class ModulePiece:
    """E_d with free coordinates `free` (ambient positions) and projection rows = echelon.kernel()."""

    degree: int
    ambient: int
    echelon: Echelon
    projection: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.free)

    @property
    def free(self) -> list[int]:
        return self.echelon.free

    def basis(self) -> np.ndarray:
        """Ambient representatives: unit vectors at the free coordinates."""
        B = np.zeros((self.dim, self.ambient), dtype=np.int64)
        B[np.arange(self.dim), self.free] = 1
        return B


def module_piece(pres: GradedPresentation, d: int) -> ModulePiece:
    ambient = pres.n * len(monomial_basis(pres.ring, d))
    if d < 0:
        empty = Echelon(np.zeros((0, 0), dtype=np.int64), [], 0, pres.field)
        return ModulePiece(d, 0, empty, np.zeros((0, 0), dtype=np.int64))
    rel = _sparse_relations(pres, d)

    def blocks() -> Iterator[np.ndarray]:
        for start in range(0, rel.shape[0], ROW_BLOCK):
            yield rel[start:start + ROW_BLOCK].toarray()

    echelon = rref_stream(blocks(), ambient, pres.field)
    return ModulePiece(d, ambient, echelon, echelon.kernel())


def hilbert_function(pres: GradedPresentation, degrees: Sequence[int]) -> dict[int, int]:
    """dim E_d through the sparse rank path (no projection is formed)."""
    out = {}
    for d in degrees:
        if d < 0:
            out[d] = 0
            continue
        ambient = pres.n * len(monomial_basis(pres.ring, d))
        out[d] = ambient - rank(_sparse_relations(pres, d), pres.field)
    return out


class PieceCache:
    def __init__(self, pres: GradedPresentation) -> None:
        self.pres = pres
        self._pieces: dict[int, ModulePiece] = {}

    def __getitem__(self, d: int) -> ModulePiece:
        if d not in self._pieces:
            self._pieces[d] = module_piece(self.pres, d)
        return self._pieces[d]


def _multiplication_blocks(F: PieceCache, a: int, e: int) -> dict[Exponent, np.ndarray]:
    """For each monomial m of degree e, the matrix of v -> m·v from F_a to F_{a+e} in free coordinates."""
    ring = F.pres.ring
    src, dst = F[a], F[a + e]
    size_a = len(monomial_basis(ring, a))
    size_b = len(monomial_basis(ring, a + e))
    basis_a = monomial_basis(ring, a)
    index_b = monomial_index(ring, a + e)
    out = {}
    for m in monomial_basis(ring, e):
        cols = []
        for pos in src.free:
            j, k = divmod(pos, size_a)
            cols.append(j * size_b + index_b[tuple(x + y for x, y in zip(m, basis_a[k]))])
        out[m] = dst.projection[:, cols] if cols else np.zeros((dst.dim, 0), dtype=np.int64)
    return out


def precomposition_row_blocks(
    E: GradedPresentation, F: PieceCache, i: int
) -> tuple[Iterator[np.ndarray], int, int]:
    """Row blocks of phi -> phi ∘ D_i, (F_{s_i})^{n_E} -> (F_{s_{i+1}})^{n_E}; one block per target generator."""
    D = E.step(i)
    a = E.shift(i)
    e = D.degree or 0
    src_dim, dst_dim = F[a].dim, F[a + e].dim
    field = E.field
    mult = _multiplication_blocks(F, a, e) if src_dim and dst_dim else {}

    def blocks() -> Iterator[np.ndarray]:
        for k in range(E.n):
            row = np.zeros((dst_dim, E.n * src_dim), dtype=np.int64)
            if not mult:
                yield row
                continue
            for j in range(E.n):
                acc = np.zeros((dst_dim, src_dim), dtype=np.int64)
                for m, c in D.entries[j][k].terms.items():
                    acc = add(acc, scale(mult[m], c, field), field)
                row[:, j * src_dim:(j + 1) * src_dim] = acc
            yield row

    return blocks(), E.n * src_dim, E.n * dst_dim


def precomposition_matrix(E: GradedPresentation, F: PieceCache, i: int) -> np.ndarray:
    blocks, ncols, nrows = precomposition_row_blocks(E, F, i)
    stacked = list(blocks)
    return np.vstack(stacked) if stacked else np.zeros((nrows, ncols), dtype=np.int64)


@dataclass
class ExtReport:
    i: int
    dim_kernel: int
    dim_image: int
    dim_ext: int
    prime: int
    seed: int | None = None
    family: str | None = None
    internal_degree: int = 0
    elapsed_ms: int = 0
    status: str = "recorded"
    task: str = "ext"
    witness: list[list[int]] | None = dc_field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "task": self.task,
            "family": self.family,
            "prime": self.prime,
            "seed": self.seed,
            "i": self.i,
            "dim_kernel": self.dim_kernel,
            "dim_image": self.dim_image,
            "dim_ext": self.dim_ext,
            "elapsed_ms": self.elapsed_ms,
            "status": self.status,
        }


class DegreeZeroComplex:
    """Ranks of the precomposition maps d_0, d_1, ... computed once each."""

    def __init__(self, E: GradedPresentation, F: GradedPresentation) -> None:
        if E.ring != F.ring or E.field != F.field:
            raise ValueError(f"presentations {E.name} and {F.name} live over different rings")
        if E.W != F.W:
            raise ValueError(f"potential mismatch between {E.name} and {F.name}")
        self.E, self.F = E, F
        self.pieces = PieceCache(F)
        self._echelons: dict[int, Echelon] = {}

    def source_dim(self, i: int) -> int:
        return self.E.n * self.pieces[self.E.shift(i)].dim

    def echelon(self, i: int) -> Echelon:
        if i not in self._echelons:
            started = time.time()
            blocks, ncols, nrows = precomposition_row_blocks(self.E, self.pieces, i)
            if ncols and nrows:
                self._echelons[i] = rref_stream(blocks, ncols, self.E.field)
            else:
                self._echelons[i] = Echelon(np.zeros((0, ncols), dtype=np.int64), [], ncols, self.E.field)
            LOGGER.info("Precomposition map reduced %s", kv(
                pair=f"{self.E.name}->{self.F.name}", i=i, rows=nrows, cols=ncols,
                rank=self._echelons[i].rank, elapsed_ms=int((time.time() - started) * 1000),
            ))
        return self._echelons[i]

    def ext(self, i: int) -> tuple[int, int, int]:
        """(dim ker d_i, dim im d_{i-1}, their difference)."""
        if i < 0:
            raise ValueError(f"Ext index must be nonnegative, got {i}")
        kernel = self.echelon(i).nullity
        image = self.echelon(i - 1).rank if i else 0
        return kernel, image, kernel - image

    def composite_is_zero(self, i: int) -> bool:
        first = precomposition_matrix(self.E, self.pieces, i)
        second = precomposition_matrix(self.E, self.pieces, i + 1)
        if not first.size or not second.size:
            return True
        return not matmul(second, first, self.E.field).any()


def _report(cx: DegreeZeroComplex, i: int, started: float, seed: int | None, family: str | None) -> ExtReport:
    kernel, image, dim = cx.ext(i)
    report = ExtReport(
        i=i, dim_kernel=kernel, dim_image=image, dim_ext=dim, prime=cx.E.field.p,
        seed=seed, family=family, elapsed_ms=int((time.time() - started) * 1000),
    )
    LOGGER.info("Ext computed %s", kv(
        pair=f"{cx.E.name}->{cx.F.name}", i=i, dim_kernel=kernel, dim_image=image, dim_ext=dim,
        elapsed_ms=report.elapsed_ms,
    ))
    return report


def hom_sheaf(E: GradedPresentation, F: GradedPresentation, seed: int | None = None,
              family: str | None = None, with_witness: bool = False,
              complex_: DegreeZeroComplex | None = None) -> ExtReport:
    """Hom(E, F)_0 = ker(F_0^{n_E} -> F_{deg D}^{n_E}); the witness rows are a basis of it."""
    started = time.time()
    cx = complex_ or DegreeZeroComplex(E, F)
    report = _report(cx, 0, started, seed, family)
    if with_witness:
        report.witness = cx.echelon(0).kernel().tolist()
    return report


def ext_sheaf(E: GradedPresentation, F: GradedPresentation, i: int, seed: int | None = None,
              family: str | None = None, complex_: DegreeZeroComplex | None = None) -> ExtReport:
    if i < 1:
        raise ValueError(f"ext_sheaf needs i >= 1, got {i}; use hom_sheaf for i = 0")
    started = time.time()
    return _report(complex_ or DegreeZeroComplex(E, F), i, started, seed, family)


def spherical_profile(pres: GradedPresentation, top: int = 3) -> tuple[int, ...]:
    cx = DegreeZeroComplex(pres, pres)
    return tuple(cx.ext(i)[2] for i in range(top + 1))


def is_spherical(profile: Sequence[int]) -> bool:
    return tuple(profile) == (1, 0, 0, 1)


def complex_check(E: GradedPresentation, F: GradedPresentation, max_degree: int = 8) -> bool:
    """d_{i+1} ∘ d_i = 0 for every composite whose pieces stay within degrees 0..max_degree."""
    cx = DegreeZeroComplex(E, F)
    i = 0
    while E.shift(i + 2) <= max_degree:
        if not cx.composite_is_zero(i):
            LOGGER.warning("Precomposition complex broken %s", kv(i=i, pair=f"{E.name}->{F.name}"))
            return False
        i += 1
    return True


@dataclass(frozen=True)
class PointRank:
    point: tuple[int, ...]
    kernel_dim: int
    lines_tried: int


def rank3_at_point(S: PolyMatrix, W: SparsePoly, seed: int = 0, max_lines: int = 32) -> PointRank:
    """Kernel dimension of S at a random F_p-point of {W = 0}, found along random lines a + t·b."""
    field = S.field
    if W.ring != S.ring:
        raise ValueError("S and W must share a ring")
    rng = Rng(seed)
    nvars = S.ring.nvars
    search = min(field.p, 4096)
    for line in range(1, max_lines + 1):
        a = [rng.element(field) for _ in range(nvars)]
        b = [rng.element(field) for _ in range(nvars)]
        for t in range(search):
            point = [field.add(x, field.mul(t, y)) for x, y in zip(a, b)]
            if not any(point) or W.evaluate(point):
                continue
            value = S.evaluate(point)
            return PointRank(tuple(point), S.rows - rank(value, field), line)
    raise ArithmeticError(f"no F_{field.p} point of W = 0 found on {max_lines} random lines")
