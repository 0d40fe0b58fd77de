"""Responsibility: Clifford action on the exterior algebra of C^6 and the so12 moment maps.

Subsets of {1..6} are bitmasks (bit k-1 for index k). Generators 0..5 are e1..e6 (wedge),
6..11 are f1..f6 (contraction). The hyperbolic basis of C^12 is (e1..e6, f6..f1), so the
invariant form is the antidiagonal J12 and M[r][c] = beta(z, b_c b_{11-r} z).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Sequence

import numpy as np

from .field import FieldSpec, Rng
from .invariants import IGUSA_NAMES, LAMBDA3_RING, PAIRS, TRIPLES, sl6_quartic
from .linalg import matmul
from .logging_utils import LOGGER, kv
from .poly import PolyMatrix, SparsePoly, WeightedRing, to_text

FULL = 0b111111
PARITIES = ("even", "odd")


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(indices: Sequence[int]) -> int:
    mask = 0
    for k in indices:
        mask |= 1 << (k - 1)
    return mask


def indices_of(mask: int) -> tuple[int, ...]:
    return tuple(k + 1 for k in range(6) if mask >> k & 1)


def wedge_sign(S: int, T: int) -> int:
    """e_S ^ e_T = wedge_sign(S, T) e_{S|T} for disjoint S, T."""
    inversions = sum(1 for s in indices_of(S) for t in indices_of(T) if s > t)
    return -1 if inversions % 2 else 1


def reversal_sign(k: int) -> int:
    return -1 if (k * (k - 1) // 2) % 2 else 1


def parity_masks(parity: str) -> list[int]:
    if parity not in PARITIES:
        raise ValueError(f"parity must be even or odd, got {parity!r}")
    want = 0 if parity == "even" else 1
    masks = [m for m in range(64) if popcount(m) % 2 == want]
    return sorted(masks, key=lambda m: (popcount(m), indices_of(m)))


def spinor_name(mask: int) -> str:
    return "s" + ("".join(map(str, indices_of(mask))) or "0")


def spinor_ring(parity: str) -> WeightedRing:
    return WeightedRing.ordinary(spinor_name(m) for m in parity_masks(parity))


def generator_index(kind: str, i: int) -> int:
    if kind not in {"e", "f"} or not 1 <= i <= 6:
        raise ValueError(f"no generator {kind}{i}")
    return i - 1 if kind == "e" else 5 + i


def hyperbolic_generator(r: int) -> int:
    """Generator sitting at position r of (e1..e6, f6..f1)."""
    return r if r < 6 else 6 + (11 - r)


@dataclass
class SpinorElement:
    ring: WeightedRing
    field: FieldSpec
    coeffs: dict[int, SparsePoly]
    parity: str | None = None

    def __post_init__(self) -> None:
        self.coeffs = {m: c for m, c in self.coeffs.items() if not c.is_zero()}
        parities = {popcount(m) % 2 for m in self.coeffs}
        if len(parities) > 1:
            raise ValueError("spinor mixes even and odd subsets")
        derived = ("even", "odd")[parities.pop()] if parities else self.parity
        if self.parity is not None and derived != self.parity:
            raise ValueError(f"spinor declared {self.parity} carries {derived} subsets")
        self.parity = derived

    @classmethod
    def basis(cls, mask: int, ring: WeightedRing, field: FieldSpec) -> "SpinorElement":
        return cls(ring, field, {mask: SparsePoly.constant(ring, field, 1)})

    def coefficient(self, mask: int) -> SparsePoly:
        return self.coeffs.get(mask, SparsePoly(self.ring, self.field))

    def top(self) -> SparsePoly:
        return self.coefficient(FULL)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "SpinorElement") -> "SpinorElement":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out[m] + c if m in out else c
        return SpinorElement(self.ring, self.field, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpinorElement):
            return NotImplemented
        return self.coeffs == other.coeffs


def generic_spinor(parity: str, field: FieldSpec) -> SpinorElement:
    """The spinor whose coefficient on e_S is the coordinate variable s_S."""
    ring = spinor_ring(parity)
    return SpinorElement(ring, field, {
        m: SparsePoly.variable(ring, field, spinor_name(m)) for m in parity_masks(parity)
    }, parity)


def clifford_apply(g: int, s: SpinorElement) -> SpinorElement:
    """e_i wedges, f_i contracts, each with sign (-1)^{#elements of S below i}."""
    if not 0 <= g < 12:
        raise ValueError(f"generator index {g} outside 0..11")
    bit = 1 << (g % 6)
    wedging = g < 6
    out: dict[int, SparsePoly] = {}
    for mask, c in s.coeffs.items():
        present = bool(mask & bit)
        if present == wedging:
            continue
        sign = -1 if popcount(mask & (bit - 1)) % 2 else 1
        out[mask ^ bit] = c if sign > 0 else -c
    flipped = None if s.parity is None else ("odd" if s.parity == "even" else "even")
    return SpinorElement(s.ring, s.field, out, flipped if out else None)


def wedge(u: SpinorElement, v: SpinorElement) -> SpinorElement:
    out: dict[int, SparsePoly] = {}
    for S, a in u.coeffs.items():
        for T, b in v.coeffs.items():
            if S & T:
                continue
            term = a * b
            if wedge_sign(S, T) < 0:
                term = -term
            out[S | T] = out[S | T] + term if S | T in out else term
    return SpinorElement(u.ring, u.field, out)


def reverse(u: SpinorElement) -> SpinorElement:
    return SpinorElement(u.ring, u.field, {
        m: c if reversal_sign(popcount(m)) > 0 else -c for m, c in u.coeffs.items()
    }, u.parity)


def beta(u: SpinorElement, v: SpinorElement) -> SparsePoly:
    """Coefficient of e1^...^e6 in rev(u) ^ v."""
    total = SparsePoly(u.ring, u.field)
    for S, a in u.coeffs.items():
        T = FULL ^ S
        b = v.coeffs.get(T)
        if b is None:
            continue
        term = a * b
        if reversal_sign(popcount(S)) * wedge_sign(S, T) < 0:
            term = -term
        total = total + term
    return total


@dataclass
class MomentMatrix:
    parity: str
    matrix: PolyMatrix

    def so12_defect(self) -> tuple[int, int] | None:
        """First (a, b) with M[11-a][b] + M[11-b][a] != 0, i.e. a failure of M^T J + J M = 0."""
        M = self.matrix.entries
        for a in range(12):
            for b in range(12):
                if not (M[11 - a][b] + M[11 - b][a]).is_zero():
                    return (a, b)
        return None

    def trace(self) -> SparsePoly:
        total = SparsePoly(self.matrix.ring, self.matrix.field)
        for r in range(12):
            total = total + self.matrix.entries[r][r]
        return total


def moment_map(parity: str, field: FieldSpec) -> MomentMatrix:
    z = generic_spinor(parity, field)
    once = [clifford_apply(g, z) for g in range(12)]
    entries = []
    for r in range(12):
        inner = once[hyperbolic_generator(11 - r)]
        entries.append([beta(z, clifford_apply(hyperbolic_generator(c), inner)) for c in range(12)])
    LOGGER.info("Moment map built %s", kv(parity=parity, field=field.describe()))
    return MomentMatrix(parity, PolyMatrix(z.ring, field, entries, degree=2))


@dataclass
class Certificate:
    check: str
    passed: bool
    constants: dict[str, int] = dc_field(default_factory=dict)
    attempts: list[dict] = dc_field(default_factory=list)
    failure: str | None = None
    details: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "passed": self.passed,
            "constants": dict(self.constants),
            "attempts": list(self.attempts),
            "failure": self.failure,
            "details": dict(self.details),
        }


def proportionality(a: SparsePoly, b: SparsePoly) -> int | None:
    """c with a = c*b (c may be 0 only when a = 0), or None."""
    if b.is_zero():
        return 0 if a.is_zero() else None
    e, cb = next(iter(b.terms.items()))
    c = a.field.div(a.coefficient(e), cb)
    return c if a == b.scale(c) else None


def matrix_proportionality(A: PolyMatrix, B: PolyMatrix) -> int | None:
    for r in range(B.rows):
        for c in range(B.cols):
            if not B.entries[r][c].is_zero():
                s = proportionality(A.entries[r][c], B.entries[r][c])
                if s is None:
                    return None
                return s if (A - B.scale(s)).is_zero() else None
    return 0 if A.is_zero() else None


def _square_defect(M2: PolyMatrix) -> str:
    q = M2.entries[0][0]
    for r in range(M2.rows):
        for c in range(M2.cols):
            e = M2.entries[r][c]
            if (r == c and e != q) or (r != c and not e.is_zero()):
                return f"mu^2 entry ({r},{c}) = {e!r} breaks the scalar pattern"
    return "mu^2 is scalar"


# -- embeddings of Igusa coordinates into even spinor coordinates ----------------------

@dataclass(frozen=True)
class IgusaEmbedding:
    """images[k] = (mask, sign): Igusa variable k equals sign * s_mask."""

    name: str
    images: tuple[tuple[int, int], ...]


def _embedding(name: str, x0: tuple[int, int], y0: tuple[int, int], signed_duals: bool) -> IgusaEmbedding:
    images = [x0]
    images += [(mask_of(pair), 1) for pair in PAIRS]
    for pair in PAIRS:
        S = mask_of(pair)
        images.append((FULL ^ S, wedge_sign(S, FULL ^ S) if signed_duals else 1))
    images.append(y0)
    return IgusaEmbedding(name, tuple(images))


LITERAL_EMBEDDING = _embedding("literal x0<->empty, y0<->volume", (0, 1), (FULL, 1), signed_duals=False)
SWAPPED_EMBEDDING = _embedding("x0<->-volume, y0<->-empty, y_ij<->sign*complement", (FULL, -1), (0, -1), signed_duals=True)
EMBEDDINGS = (LITERAL_EMBEDDING, SWAPPED_EMBEDDING)


def quartic_in_spinor_coordinates(P: SparsePoly, embedding: IgusaEmbedding) -> SparsePoly:
    if P.ring.var_names != IGUSA_NAMES:
        raise ValueError("expected a polynomial in the Igusa coordinates")
    ring = spinor_ring("even")
    images = []
    for mask, sign in embedding.images:
        v = SparsePoly.variable(ring, P.field, spinor_name(mask))
        images.append(v if sign > 0 else -v)
    return P.substitute(images)


def verify_mf_even(field: FieldSpec, quartic: SparsePoly | None = None,
                   embeddings: Sequence[IgusaEmbedding] = EMBEDDINGS,
                   moment: MomentMatrix | None = None) -> Certificate:
    """Certify mu(z)^2 = c_even * P(z) * I12 symbolically, trying each embedding in order."""
    from .invariants import igusa_quartic

    P = quartic if quartic is not None else igusa_quartic(field)
    M = moment or moment_map("even", field)
    M2 = M.matrix @ M.matrix
    q = M2.scalar_value()
    cert = Certificate("mu_even^2 == c_even*P_Igusa*I12", False)
    defect = M.so12_defect()
    cert.details["so12"] = defect is None
    if q is None:
        cert.failure = _square_defect(M2)
        return cert
    cert.details["mu_square_terms"] = len(q)
    for emb in embeddings:
        Pz = quartic_in_spinor_coordinates(P, emb)
        c = proportionality(q, Pz)
        ok = c is not None and c != 0 and not Pz.is_zero()
        attempt = {"embedding": emb.name, "passed": ok}
        if ok:
            cert.passed = True
            cert.constants["c_even"] = c
            cert.details["embedding"] = emb.name
            cert.attempts.append(attempt)
            break
        diff = next(iter((q - Pz.scale(c or 1)).sorted_terms()), None)
        attempt["first_offending_term"] = None if diff is None else [list(diff[0]), diff[1]]
        cert.attempts.append(attempt)
        LOGGER.warning("Even embedding rejected %s", kv(embedding=emb.name))
    if not cert.passed:
        cert.failure = "mu^2 is not proportional to the quartic under any embedding"
    return cert


def precheck_mf_even(field: FieldSpec, seeds: int = 100, seed0: int = 0,
                     moment: MomentMatrix | None = None, embedding: IgusaEmbedding = SWAPPED_EMBEDDING) -> Certificate:
    """Numeric mu(z)^2 = c P(z) I at random points; one c must serve every point."""
    from .invariants import igusa_quartic

    M = moment or moment_map("even", field)
    Pz = quartic_in_spinor_coordinates(igusa_quartic(field), embedding)
    rng = Rng(seed0)
    constant = None
    cert = Certificate("mu_even^2 random points", True, details={"seeds": seeds})
    for trial in range(seeds):
        point = [rng.element(field) for _ in range(32)]
        Mv = M.matrix.evaluate(point)
        M2 = matmul(Mv, Mv, field)
        scalar = int(M2[0, 0])
        if not np.array_equal(M2, np.eye(12, dtype=np.int64) * scalar):
            cert.passed, cert.failure = False, f"trial {trial}: mu^2 not scalar"
            return cert
        pv = Pz.evaluate(point)
        if pv == 0:
            continue
        c = field.div(scalar, pv)
        if constant is None:
            constant = c
        elif c != constant:
            cert.passed, cert.failure = False, f"trial {trial}: constant {c} != {constant}"
            return cert
    if constant is None:
        cert.passed, cert.failure = False, "quartic vanished at every sampled point"
        return cert
    cert.constants["c_even"] = constant
    return cert


# -- odd parity ------------------------------------------------------------------------

def restrict_to_lambda3(f: SparsePoly) -> SparsePoly:
    """Set the Lambda1 and Lambda5 coordinates to zero and rename s_ijk to y_k."""
    triple_var = {mask_of(t): k for k, t in enumerate(TRIPLES)}
    images = []
    for name in f.ring.var_names:
        digits = tuple(int(ch) for ch in name[1:]) if name != "s0" else ()
        mask = mask_of(digits)
        if mask in triple_var:
            images.append(SparsePoly.variable(LAMBDA3_RING, f.field, triple_var[mask]))
        else:
            images.append(SparsePoly(LAMBDA3_RING, f.field))
    return f.substitute(images)


def verify_mf_odd(field: FieldSpec, moment: MomentMatrix | None = None, seed: int = 0) -> Certificate:
    """mu(z)^2 = q(z) I12 on odd spinors, and q restricted to Lambda3 = lambda * lP."""
    M = moment or moment_map("odd", field)
    M2 = M.matrix @ M.matrix
    q = M2.scalar_value()
    cert = Certificate("mu_odd^2 == q*I12, q|Lambda3 == lambda*lP", False)
    cert.details["so12"] = M.so12_defect() is None
    if q is None:
        cert.failure = _square_defect(M2)
        return cert
    cert.details["q_terms"] = len(q)
    lam = proportionality(restrict_to_lambda3(q), sl6_quartic(field))
    if lam is None or lam == 0:
        cert.failure = "q restricted to Lambda3 is not a nonzero multiple of lP"
        return cert
    cert.passed = True
    cert.constants["lambda"] = lam
    # Exploratory: q on the Lambda1 + Lambda5 summand at a seeded point.
    rng = Rng(seed)
    point = [rng.element(field) if popcount(m) != 3 else 0 for m in parity_masks("odd")]
    cert.details["q_on_lambda1_lambda5"] = q.evaluate(point)
    cert.details["q_at_zero"] = q.evaluate([0] * 32)
    return cert


def reversed_block(A: PolyMatrix) -> PolyMatrix:
    """Reverse row and column order: the block in the basis read backwards."""
    return PolyMatrix(A.ring, A.field, [list(reversed(row)) for row in reversed(A.entries)], A.degree)


def verify_block_structure(field: FieldSpec, sy: PolyMatrix, moment: MomentMatrix | None = None) -> Certificate:
    """On the Lambda3 locus mu(y) = diag(A_y, -A_y^tau) and A_y = s*S_y after at most one reindexing."""
    M = moment or moment_map("odd", field)
    mu = M.matrix.map_entries(restrict_to_lambda3, LAMBDA3_RING)
    cert = Certificate("mu(y) block-diagonal, A_y == s*S_y", False)
    for name, (r0, c0) in {"upper-right": (0, 6), "lower-left": (6, 0)}.items():
        block = mu.block(r0, r0 + 6, c0, c0 + 6)
        if not block.is_zero():
            cert.failure = f"{name} block nonzero at {block.first_difference(PolyMatrix.zeros(block.ring, field, 6, 6))}"
            return cert
    A = mu.block(0, 6, 0, 6)
    D = mu.block(6, 12, 6, 12)
    cert.details["lower_right_is_minus_antitranspose"] = (D + A.antitranspose()).is_zero()
    if not cert.details["lower_right_is_minus_antitranspose"]:
        cert.failure = "lower-right block differs from -A^tau"
        return cert
    alignments = (
        ("direct (e1..e6, f6..f1)", A),
        ("reindexed (f1..f6, e6..e1)", reversed_block(D)),
    )
    for name, block in alignments:
        s = matrix_proportionality(block, sy)
        ok = s is not None and s != 0
        cert.attempts.append({"alignment": name, "passed": ok})
        if ok:
            cert.passed = True
            cert.constants["s"] = s
            cert.details["alignment"] = name
            return cert
    cert.failure = "no alignment makes the diagonal block proportional to S_y"
    return cert


def export_moment_matrix(mm: MomentMatrix, directory: Path, constants: dict[str, int]) -> Path:
    """One term-per-line file per entry plus manifest.json with the certified constants."""
    directory.mkdir(parents=True, exist_ok=True)
    for r, row in enumerate(mm.matrix.entries):
        for c, entry in enumerate(row):
            (directory / f"entry_{r}_{c}.txt").write_text(to_text(entry))
    manifest = {
        "parity": mm.parity,
        "prime": mm.matrix.field.p,
        "basis": ["e1", "e2", "e3", "e4", "e5", "e6", "f6", "f5", "f4", "f3", "f2", "f1"],
        "variables": list(mm.matrix.ring.var_names),
        "constants": constants,
    }
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return directory
