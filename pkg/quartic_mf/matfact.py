"""Responsibility: S_y, linear sections and the double-cover matrix factorizations (B, C).

A factorization of W is a pair of square polynomial matrices with B·C = C·B = W·I. The
cokernel of B is the module whose Hom/Ext `homalg` computes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np
import sympy

from .field import FieldSpec, Rng
from .invariants import LAMBDA3_NAMES, LAMBDA3_RING, TRIPLES, sl6_quartic
from .linalg import rank
from .logging_utils import LOGGER, kv
from .poly import PolyMatrix, SparsePoly, WeightedRing, section_ring, substitute_linear, to_text
from .spinor import Certificate, SpinorElement, clifford_apply, generator_index, mask_of, matrix_proportionality, wedge

__all__ = [
    "MatrixFactorization",
    "PolyMatrix",
    "Resolution",
    "build_sy",
    "double_cover_mf",
    "kimura_sato_oracle",
    "periodic_resolution",
    "restrict_to_section",
    "single_cover_mf",
    "verify_sy",
]

# S_y in the basis u1..u6 in Macaulay2 syntax; y_k <-> u_i^u_j^u_k in lex order.
_SY_TRANSCRIPT = """
S_y = matrix{{y_10*y_11-y_9*y_12+y_8*y_13+y_7*y_14-y_6*y_15+y_5*y_16-y_4*y_17+
y_3*y_18-y_2*y_19+y_1*y_20,
2*(y_13*y_14-y_12*y_15+y_11*y_16),
2*(y_13*y_17-y_12*y_18+y_11*y_19),
2*(y_15*y_17-y_14*y_18+y_11*y_20),
2*(y_16*y_17-y_14*y_19+y_12*y_20),
2*(y_16*y_18-y_15*y_19+y_13*y_20)},

{2*(-y_7*y_8+y_6*y_9-y_5*y_10),
-y_10*y_11+y_9*y_12-y_8*y_13-y_7*y_14+y_6*y_15-y_5*y_16-y_4*y_17+
y_3*y_18-y_2*y_19+y_1*y_20,
2*(-y_7*y_17+y_6*y_18-y_5*y_19),
2*(-y_9*y_17+y_8*y_18-y_5*y_20),
2*(-y_10*y_17+y_8*y_19-y_6*y_20),
2*(-y_10*y_18+y_9*y_19-y_7*y_20)},

{2*(y_4*y_8-y_3*y_9+y_2*y_10),
2*(y_4*y_14-y_3*y_15+y_2*y_16),
-y_10*y_11+y_9*y_12-y_8*y_13+y_7*y_14-y_6*y_15+y_5*y_16+y_4*y_17-
y_3*y_18+y_2*y_19+y_1*y_20,
2*(y_9*y_14-y_8*y_15+y_2*y_20),
2*(y_10*y_14-y_8*y_16+y_3*y_20),
2*(y_10*y_15-y_9*y_16+y_4*y_20)},

{2*(-y_4*y_6+y_3*y_7-y_1*y_10),
2*(-y_4*y_12+y_3*y_13-y_1*y_16),
2*(-y_7*y_12+y_6*y_13-y_1*y_19),
-y_10*y_11-y_9*y_12+y_8*y_13-y_7*y_14+y_6*y_15+y_5*y_16+y_4*y_17-
y_3*y_18-y_2*y_19-y_1*y_20,
2*(-y_10*y_12+y_6*y_16-y_3*y_19),
2*(-y_10*y_13+y_7*y_16-y_4*y_19)},

{2*(y_4*y_5-y_2*y_7+y_1*y_9),
2*(y_4*y_11-y_2*y_13+y_1*y_15),
2*(y_7*y_11-y_5*y_13+y_1*y_18),
2*(y_9*y_11-y_5*y_15+y_2*y_18),
 y_10*y_11+y_9*y_12+y_8*y_13-y_7*y_14-y_6*y_15-y_5*y_16+y_4*y_17+
y_3*y_18+y_2*y_19-y_1*y_20,
2*(y_9*y_13-y_7*y_15+y_4*y_18)},

{2*(-y_3*y_5+y_2*y_6-y_1*y_8),
2*(-y_3*y_11+y_2*y_12-y_1*y_14),
2*(-y_6*y_11+y_5*y_12-y_1*y_17),
2*(-y_8*y_11+y_5*y_14-y_2*y_17),
2*(-y_8*y_12+y_6*y_14-y_3*y_17),
y_10*y_11-y_9*y_12-y_8*y_13+y_7*y_14+y_6*y_15-y_5*y_16-y_4*y_17-
y_3*y_18+y_2*y_19-y_1*y_20}}
"""


@lru_cache(maxsize=1)
def _sy_integer_terms() -> tuple[tuple[tuple[tuple[tuple[int, ...], int], ...], ...], ...]:
    """Integer (exponent, coefficient) lists of the 36 entries, parsed once with sympy."""
    body = _SY_TRANSCRIPT.split("=", 1)[1].strip()
    body = body.removeprefix("matrix").replace("{", "[").replace("}", "]")
    body = re.sub(r"y_(\d+)", r"y\1", " ".join(body.split()))
    symbols = sympy.symbols(LAMBDA3_NAMES)
    parsed = sympy.Matrix(sympy.sympify(body, locals=dict(zip(LAMBDA3_NAMES, symbols))))
    if parsed.shape != (6, 6):
        raise ValueError(f"S_y transcript parsed to shape {parsed.shape}")
    return tuple(
        tuple(
            tuple((tuple(exp), int(coef)) for exp, coef in sympy.Poly(parsed[r, c], *symbols).terms() if coef)
            for c in range(6)
        )
        for r in range(6)
    )


def build_sy(field: FieldSpec) -> PolyMatrix:
    entries = [
        [SparsePoly(LAMBDA3_RING, field, {e: field.from_int(c) for e, c in cell}) for cell in row]
        for row in _sy_integer_terms()
    ]
    return PolyMatrix(LAMBDA3_RING, field, entries, degree=2)


def _lambda3_spinor(field: FieldSpec, y: Sequence[int] | None) -> SpinorElement:
    if y is None:
        coeffs = {mask_of(t): SparsePoly.variable(LAMBDA3_RING, field, k) for k, t in enumerate(TRIPLES)}
    else:
        if len(y) != 20:
            raise ValueError(f"Lambda3 point needs 20 coordinates, got {len(y)}")
        coeffs = {mask_of(t): SparsePoly.constant(LAMBDA3_RING, field, field.canonical(v)) for t, v in zip(TRIPLES, y)}
    return SpinorElement(LAMBDA3_RING, field, coeffs, "odd")


def kimura_sato_oracle(field: FieldSpec, y: Sequence[int] | None = None) -> PolyMatrix | np.ndarray:
    """S'_y[a][j] = top(u_a ^ y ^ iota_j y), iota_j the contraction by f_j.

    Symbolic in y1..y20 when y is None; otherwise the evaluated 6x6 array.
    """
    z = _lambda3_spinor(field, y)
    contracted = [clifford_apply(generator_index("f", j), z) for j in range(1, 7)]
    entries = []
    for a in range(6):
        ua_y = wedge(SpinorElement.basis(1 << a, LAMBDA3_RING, field), z)
        entries.append([wedge(ua_y, w).top() for w in contracted])
    matrix = PolyMatrix(LAMBDA3_RING, field, entries)
    if y is None:
        return matrix
    return matrix.evaluate([0] * 20)


def verify_sy(field: FieldSpec) -> Certificate:
    """S_y^2 == lP*I6 (and the literal minor pairing's failure), plus the oracle scalar sigma."""
    sy = build_sy(field)
    square = sy @ sy
    lp = sl6_quartic(field)
    cert = Certificate("S_y^2 == lP*I6", False)
    cert.details["entries_quadratic"] = all(e.is_homogeneous(2) for row in sy.entries for e in row)
    expected = PolyMatrix.scalar(lp, 6)
    diff = square.first_difference(expected)
    literal = PolyMatrix.scalar(sl6_quartic(field, minor_pairing="literal"), 6)
    cert.attempts.append({"minor_pairing": "literal", "passed": square.first_difference(literal) is None})
    cert.attempts.append({"minor_pairing": "transposed", "passed": diff is None})
    if diff is not None:
        cert.failure = f"S_y^2 differs from lP*I6 at entry {diff}"
        return cert
    oracle = kimura_sato_oracle(field)
    sigma = matrix_proportionality(oracle, sy)
    cert.details["oracle_matches"] = sigma is not None and sigma != 0
    if not cert.details["oracle_matches"]:
        cert.failure = "Kimura-Sato oracle is not a nonzero multiple of S_y"
        return cert
    cert.passed = True
    cert.constants["sigma"] = sigma
    return cert


# -- linear sections -------------------------------------------------------------------

def restrict_to_section(M: PolyMatrix, m: Sequence[Sequence[int]], target: WeightedRing | None = None) -> PolyMatrix:
    """Entrywise f(m·z). A section of rank below its column count is flagged, not rejected."""
    if len(m) != M.ring.nvars:
        raise ValueError(f"section has {len(m)} rows, matrix ring has {M.ring.nvars} variables")
    width = len(m[0]) if m else 0
    target = target or section_ring(width)
    warnings: tuple[str, ...] = ()
    section_rank = rank(m, M.field) if width else 0
    if section_rank < width:
        warnings = (f"degenerate section: rank {section_rank} < {width}",)
        LOGGER.warning("Degenerate section %s", kv(rank=section_rank, cols=width, vars=M.ring.nvars))
    entries = [[substitute_linear(e, m, target) for e in row] for row in M.entries]
    return PolyMatrix(target, M.field, entries, M.degree, warnings)


def random_section(nvars: int, field: FieldSpec, seed: int, cols: int = 6) -> list[list[int]]:
    return Rng(seed).matrix(nvars, cols, field)


# -- matrix factorizations -------------------------------------------------------------

@dataclass
class MatrixFactorization:
    B: PolyMatrix
    C: PolyMatrix
    W: SparsePoly
    warnings: tuple[str, ...] = dc_field(default=())

    @property
    def n(self) -> int:
        return self.B.rows

    @property
    def ring(self) -> WeightedRing:
        return self.B.ring

    @property
    def field(self) -> FieldSpec:
        return self.B.field

    def verify(self) -> Certificate:
        cert = Certificate("B·C == C·B == W·I", False)
        target = PolyMatrix.scalar(self.W, self.n)
        for name, product in (("B·C", self.B @ self.C), ("C·B", self.C @ self.B)):
            diff = product.first_difference(target)
            if diff is not None:
                cert.failure = f"{name} differs from W·I at entry {diff}"
                return cert
        degrees = (self.B.degree or 0) + (self.C.degree or 0)
        cert.details["degree_sum"] = degrees
        if degrees != self.W.homogeneous_degree():
            cert.failure = f"deg B + deg C = {degrees} but deg W = {self.W.homogeneous_degree()}"
            return cert
        cert.passed = True
        return cert


def _scalar_square(S: PolyMatrix) -> SparsePoly:
    if S.rows != S.cols:
        raise ValueError(f"S must be square, got {S.rows}x{S.cols}")
    if not S.degree:
        raise ValueError("S must be homogeneous of positive degree (constant S rejected)")
    Q = (S @ S).scalar_value()
    if Q is None:
        raise ValueError("S^2 is not a scalar matrix")
    return Q


def _cover_ring(base: WeightedRing, x_weight: int) -> WeightedRing:
    if "x" in base.var_names:
        raise ValueError("base ring already has a variable named x")
    return WeightedRing(base.var_names + ("x",), base.weights + (x_weight,))


def double_cover_mf(S: PolyMatrix, field: FieldSpec | None = None) -> MatrixFactorization:
    """B = S + i·x·I, C = S - i·x·I over the base ring extended by x of weight deg S; W = Q + x^2."""
    field = field or S.field
    Q = _scalar_square(S)
    ring = _cover_ring(S.ring, S.degree)
    x = SparsePoly.variable(ring, field, "x")
    ix = PolyMatrix.scalar(x.scale(field.sqrt_minus_one), S.rows)
    base = S.embed(ring)
    W = Q.embed(ring) + x * x
    if Q.is_zero():
        LOGGER.warning("Double cover of a zero quadric %s", kv(n=S.rows))
    return MatrixFactorization(base + ix, base - ix, W, S.warnings)


def single_cover_mf(S: PolyMatrix) -> MatrixFactorization:
    """(S, S) as a factorization of Q = S^2 on the hypersurface {Q = 0} itself."""
    Q = _scalar_square(S)
    return MatrixFactorization(S, S, Q, S.warnings)


@dataclass(frozen=True)
class Resolution:
    """F_0 <- F_1 <- ... <- F_length over A = R/W, d_k: F_k -> F_{k-1}."""

    ranks: tuple[int, ...]
    twists: tuple[int, ...]
    differentials: tuple[PolyMatrix, ...]
    W: SparsePoly

    def composite_vanishes(self, k: int) -> bool:
        """d_k ∘ d_{k+1} = W·I, which is zero in A."""
        product = self.differentials[k - 1] @ self.differentials[k]
        return product.first_difference(PolyMatrix.scalar(self.W, product.rows)) is None


def periodic_resolution(mf: MatrixFactorization, length: int) -> Resolution:
    if length < 1:
        raise ValueError(f"resolution length must be at least 1, got {length}")
    differentials = []
    twists = [0]
    for k in range(1, length + 1):
        d = mf.B if k % 2 else mf.C
        differentials.append(d)
        twists.append(twists[-1] - (d.degree or 0))
    return Resolution((mf.n,) * (length + 1), tuple(twists), tuple(differentials), mf.W)


def write_mf_dir(mf: MatrixFactorization, directory: Path, seed: int | None = None) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "potential.txt").write_text(to_text(mf.W))
    for name, M in (("B", mf.B), ("C", mf.C)):
        sub = directory / name
        sub.mkdir(exist_ok=True)
        for r, row in enumerate(M.entries):
            for c, entry in enumerate(row):
                (sub / f"entry_{r}_{c}.txt").write_text(to_text(entry))
    manifest = {
        "ring": list(mf.ring.var_names),
        "weights": list(mf.ring.weights),
        "n": mf.n,
        "seed": seed,
        "prime": mf.field.p,
        "field": mf.field.describe(),
        "warnings": list(mf.warnings),
    }
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    LOGGER.info("Matrix factorization exported %s", kv(path=directory, n=mf.n))
    return directory
