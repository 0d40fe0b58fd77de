"""Responsibility: Rank of the pulled-back partial derivatives inside S^4 of a 6-dim section.

For a section m (N x 6) the quartics z_j·(dP/dx_i)(m·z) span S^4C^6 (dimension 126) exactly
when the differential of the quotient map is onto at m. Full rank mod p at one section
implies full rank at the generic section in characteristic 0.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .field import FieldSpec, Rng
from .invariants import igusa_quartic, partials
from .linalg import rank
from .logging_utils import LOGGER, kv
from .poly import SparsePoly, monomial_basis, section_ring, substitute_linear

SECTION_DIM = 6
FULL_RANK = len(monomial_basis(section_ring(SECTION_DIM), 4))
EVIDENCE_NOTE = "full rank mod p at one section implies full rank at the generic section over characteristic 0"


@dataclass
class DominanceReport:
    seed: int | None
    prime: int
    rank: int
    verdict: str
    matrix_hash: str
    rows: int

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "prime": self.prime,
            "rank": self.rank,
            "verdict": self.verdict,
            "matrix_hash": self.matrix_hash,
            "rows": self.rows,
        }


def matrix_hash(M: np.ndarray) -> str:
    data = np.ascontiguousarray(M, dtype="<i8")
    header = f"{data.shape[0]}x{data.shape[1]}:".encode()
    return hashlib.sha256(header + data.tobytes()).hexdigest()


def pullback_matrix(m: Sequence[Sequence[int]], field: FieldSpec, derivatives: Sequence[SparsePoly]) -> np.ndarray:
    ring = section_ring(SECTION_DIM)
    z = [SparsePoly.variable(ring, field, k) for k in range(SECTION_DIM)]
    rows = []
    for d in derivatives:
        pulled = substitute_linear(d, m, ring)
        for zj in z:
            rows.append((pulled * zj).coefficient_vector(4))
    return np.array(rows, dtype=np.int64).reshape(len(rows), FULL_RANK)


def pullback_span_rank(m: Sequence[Sequence[int]], field: FieldSpec, quartic: SparsePoly | None = None,
                       seed: int | None = None, derivatives: Sequence[SparsePoly] | None = None) -> DominanceReport:
    if derivatives is None:
        derivatives = partials(quartic if quartic is not None else igusa_quartic(field))
    if len(m) != len(derivatives) or any(len(row) != SECTION_DIM for row in m):
        raise ValueError(f"section must be {len(derivatives)}x{SECTION_DIM}")
    M = pullback_matrix(m, field, derivatives)
    r = rank(M, field)
    report = DominanceReport(seed, field.p, r, "full" if r == FULL_RANK else "deficient", matrix_hash(M), M.shape[0])
    LOGGER.info("Pullback span rank %s", kv(seed=seed, prime=field.p, rank=r, rows=M.shape[0]))
    return report


@dataclass
class DominanceVerdict:
    trials: int
    seed0: int
    prime: int
    reports: list[DominanceReport] = dc_field(default_factory=list)

    @property
    def ranks(self) -> list[int]:
        return [r.rank for r in self.reports]

    @property
    def verdict(self) -> str:
        return "dominant-evidence" if FULL_RANK in self.ranks else "deficient"

    def to_dict(self) -> dict:
        return {
            "task": "dominance",
            "trials": self.trials,
            "seed0": self.seed0,
            "prime": self.prime,
            "ranks": self.ranks,
            "verdict": self.verdict,
            "evidence": EVIDENCE_NOTE,
            "reports": [r.to_dict() for r in self.reports],
        }


def dominance_verdict(trials: int, seed0: int, field: FieldSpec, threads: int = 1,
                      quartic: SparsePoly | None = None, force_zero: bool = False) -> DominanceVerdict:
    """Trial t uses the section Rng(seed0 + t).matrix(N, 6); force_zero swaps in m = 0."""
    if trials < 1:
        raise ValueError(f"dominance needs at least one trial, got {trials}")
    derivatives = partials(quartic if quartic is not None else igusa_quartic(field))
    nvars = len(derivatives)

    def trial(t: int) -> DominanceReport:
        seed = seed0 + t
        m = [[0] * SECTION_DIM for _ in range(nvars)] if force_zero else Rng(seed).matrix(nvars, SECTION_DIM, field)
        return pullback_span_rank(m, field, seed=seed, derivatives=derivatives)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        reports = list(pool.map(trial, range(trials)))
    result = DominanceVerdict(trials, seed0, field.p, reports)
    if result.verdict != "dominant-evidence":
        LOGGER.warning("No full-rank dominance trial %s", kv(trials=trials, seed0=seed0, ranks=result.ranks))
    return result
