"""Responsibility: The four section families and their cokernel presentations.

  sl6-x5          E_L = coker(S_L + i·x·I6) on the double fivefold x^2 + lP|_L = 0
  sl6-q4          F_L = coker(S_L) on the quartic fourfold lP|_L = 0
  spin12-x5       Ẽ_L = coker(mu_even|_L + i·x·I12), W = c_even·P|_L + x^2
  spin12-odd      Ẽ_L = coker(mu_odd|_L + i·x·I12) at a generic section of the odd half-spin space
  spin12-special  Ẽ_L0 with L0 in the odd Lambda3 locus, plus
                  E_L0 = coker(B), B = S_L0 + i·x·I6, and G_L0 = coker(-B^t)
                  E_mu, G_mu: the two diagonal blocks of mu_odd|_L0 + i·x·I12
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .field import FieldSpec
from .homalg import GradedPresentation
from .invariants import TRIPLES
from .logging_utils import LOGGER, kv
from .matfact import MatrixFactorization, build_sy, double_cover_mf, random_section, restrict_to_section, single_cover_mf
from .poly import PolyMatrix
from .spinor import mask_of, moment_map, parity_masks

FAMILIES = ("sl6-x5", "sl6-q4", "spin12-x5", "spin12-odd", "spin12-special")
MAX_SECTION_ATTEMPTS = 16


@dataclass
class FamilyInstance:
    name: str
    field: FieldSpec
    seed: int
    seed_used: int
    section: list[list[int]]
    mfs: dict[str, MatrixFactorization]
    restricted: PolyMatrix
    retries: int = 0
    lambda3_section: list[list[int]] | None = None

    @property
    def main(self) -> str:
        return "Etilde" if self.name.startswith("spin12") else ("F" if self.name == "sl6-q4" else "E")

    def presentation(self, key: str | None = None) -> GradedPresentation:
        key = key or self.main
        return GradedPresentation.from_mf(self.mfs[key], f"{key}_L")


@lru_cache(maxsize=None)
def _moment(parity: str, field: FieldSpec):
    return moment_map(parity, field)


@lru_cache(maxsize=None)
def _sy(field: FieldSpec) -> PolyMatrix:
    return build_sy(field)


def _lambda3_section(field: FieldSpec, seed: int) -> list[list[int]]:
    """32x6 section of the odd spinor space supported on the Lambda3 coordinates."""
    inner = random_section(20, field, seed)
    row_of = {mask_of(t): k for k, t in enumerate(TRIPLES)}
    return [inner[row_of[m]] if m in row_of else [0] * 6 for m in parity_masks("odd")]


def _restricted(name: str, field: FieldSpec, seed: int) -> tuple[list[list[int]], PolyMatrix]:
    if name.startswith("sl6"):
        m = random_section(20, field, seed)
        return m, restrict_to_section(_sy(field), m)
    if name in ("spin12-x5", "spin12-odd"):
        parity = "even" if name == "spin12-x5" else "odd"
        m = random_section(32, field, seed)
        return m, restrict_to_section(_moment(parity, field).matrix, m)
    m = _lambda3_section(field, seed)
    return m, restrict_to_section(_moment("odd", field).matrix, m)


def _lambda3_blocks(field: FieldSpec, inner: list[list[int]], mu_restricted: PolyMatrix) -> dict[str, MatrixFactorization]:
    """E_L0, G_L0 from the Kimura-Sato factorization; E_mu, G_mu from the diagonal of mu_odd|_L0.

    coker(-B^t) = coker(S^t + i·x·I6), so G_L0 is the double cover of S_L0^t.
    """
    S = restrict_to_section(_sy(field), inner)
    return {
        "E": double_cover_mf(S),
        "G": double_cover_mf(S.transpose()),
        "E_mu": double_cover_mf(mu_restricted.block(0, 6, 0, 6)),
        "G_mu": double_cover_mf(mu_restricted.block(6, 12, 6, 12)),
    }


def build_family(name: str, field: FieldSpec, seed: int) -> FamilyInstance:
    """Draw sections from seed, seed+1, ... until one has rank 6 and a nonzero potential."""
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; expected one of {', '.join(FAMILIES)}")
    for attempt in range(MAX_SECTION_ATTEMPTS):
        current = seed + attempt
        m, S = _restricted(name, field, current)
        Q = (S @ S).scalar_value()
        if S.warnings or Q is None or Q.is_zero():
            LOGGER.warning("Section rejected %s", kv(family=name, seed=current, warnings=len(S.warnings), potential_zero=Q is None or Q.is_zero()))
            continue
        mfs = {}
        if name == "sl6-q4":
            mfs["F"] = single_cover_mf(S)
        elif name == "sl6-x5":
            mfs["E"] = double_cover_mf(S)
        else:
            mfs["Etilde"] = double_cover_mf(S)
        inner = None
        if name == "spin12-special":
            inner = random_section(20, field, current)
            mfs.update(_lambda3_blocks(field, inner, S))
        instance = FamilyInstance(name, field, seed, current, m, mfs, S, retries=attempt, lambda3_section=inner)
        LOGGER.info("Family built %s", kv(family=name, seed=seed, seed_used=current, retries=attempt, n=S.rows))
        return instance
    raise ArithmeticError(f"no usable section for {name} in {MAX_SECTION_ATTEMPTS} seeds from {seed}")
