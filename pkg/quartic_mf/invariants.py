"""Responsibility: The Spin12 (Igusa) and SL6 invariant quartics, Pfaffians and partials.

Coordinate orders are frozen:
  Igusa:   x0, x12, x13, ..., x56, y12, ..., y56, y0     (32 variables)
  Lambda3: y1..y20 for u_i^u_j^u_k, i<j<k in lex order   (y1 = u1^u2^u3, y20 = u4^u5^u6)
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .field import FieldSpec
from .linalg import det
from .poly import SparsePoly, WeightedRing

PAIRS: tuple[tuple[int, int], ...] = tuple(combinations(range(1, 7), 2))
TRIPLES: tuple[tuple[int, int, int], ...] = tuple(combinations(range(1, 7), 3))

IGUSA_NAMES: tuple[str, ...] = (
    ("x0",) + tuple(f"x{i}{j}" for i, j in PAIRS) + tuple(f"y{i}{j}" for i, j in PAIRS) + ("y0",)
)
LAMBDA3_NAMES: tuple[str, ...] = tuple(f"y{k}" for k in range(1, 21))

IGUSA_RING = WeightedRing.ordinary(IGUSA_NAMES)
LAMBDA3_RING = WeightedRing.ordinary(LAMBDA3_NAMES)


def _check_alternating(M: Sequence[Sequence[SparsePoly]]) -> None:
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("Pfaffian needs a square matrix")
    if n % 2:
        raise ValueError(f"Pfaffian of odd size {n}")
    for i in range(n):
        if not M[i][i].is_zero():
            raise ValueError(f"non-alternating input: nonzero diagonal entry ({i},{i})")
        for j in range(i + 1, n):
            if M[i][j] != -M[j][i]:
                raise ValueError(f"non-alternating input: entries ({i},{j}) and ({j},{i})")


def pfaffian(M: Sequence[Sequence[SparsePoly]], ring: WeightedRing | None = None, field: FieldSpec | None = None) -> SparsePoly:
    """Pf with Pf([[0, a], [-a, 0]]) = a, expanded along the first row."""
    _check_alternating(M)
    if not M:
        if ring is None or field is None:
            raise ValueError("Pfaffian of the empty matrix needs ring and field")
        return SparsePoly.constant(ring, field, 1)
    ring, field = M[0][0].ring, M[0][0].field
    memo: dict[tuple[int, ...], SparsePoly] = {}

    def pf(idx: tuple[int, ...]) -> SparsePoly:
        if not idx:
            return SparsePoly.constant(ring, field, 1)
        if idx in memo:
            return memo[idx]
        head, rest = idx[0], idx[1:]
        total = SparsePoly(ring, field)
        for k, j in enumerate(rest):
            entry = M[head][j]
            if entry.is_zero():
                continue
            term = entry * pf(rest[:k] + rest[k + 1:])
            total = total + term if k % 2 == 0 else total - term
        memo[idx] = total
        return total

    return pf(tuple(range(len(M))))


def alternating_matrix(entries: dict[tuple[int, int], SparsePoly], n: int, ring: WeightedRing, field: FieldSpec) -> list[list[SparsePoly]]:
    """n x n alternating matrix from its strict upper triangle (1-based keys)."""
    zero = SparsePoly(ring, field)
    M = [[zero for _ in range(n)] for _ in range(n)]
    for (i, j), value in entries.items():
        M[i - 1][j - 1] = value
        M[j - 1][i - 1] = -value
    return M


def delete_indices(M: Sequence[Sequence[SparsePoly]], drop: Sequence[int]) -> list[list[SparsePoly]]:
    """Cross out rows and columns (0-based), keeping the induced order."""
    keep = [k for k in range(len(M)) if k not in drop]
    return [[M[r][c] for c in keep] for r in keep]


def igusa_quartic(field: FieldSpec, flip_square_sign: bool = False) -> SparsePoly:
    """x0 Pf(x) + y0 Pf(y) + sum_{i<j} Pf(X_ij) Pf(Y_ij) - 1/4 (x0 y0 - sum x_ij y_ij)^2.

    flip_square_sign replaces -1/4 by +1/4 (negative control for the moment-map check).
    """
    ring = IGUSA_RING
    var = {name: SparsePoly.variable(ring, field, name) for name in IGUSA_NAMES}
    X = alternating_matrix({(i, j): var[f"x{i}{j}"] for i, j in PAIRS}, 6, ring, field)
    Y = alternating_matrix({(i, j): var[f"y{i}{j}"] for i, j in PAIRS}, 6, ring, field)

    P = var["x0"] * pfaffian(X) + var["y0"] * pfaffian(Y)
    for i, j in PAIRS:
        drop = (i - 1, j - 1)
        P = P + pfaffian(delete_indices(X, drop)) * pfaffian(delete_indices(Y, drop))
    inner = var["x0"] * var["y0"]
    for i, j in PAIRS:
        inner = inner - var[f"x{i}{j}"] * var[f"y{i}{j}"]
    quarter = field.inv(field.from_int(4))
    square = (inner * inner).scale(quarter)
    return P + square if flip_square_sign else P - square


def _det3(A: Sequence[Sequence[SparsePoly]]) -> SparsePoly:
    return (
        A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
        - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
        + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0])
    )


def _minor2(A: Sequence[Sequence[SparsePoly]], i: int, j: int) -> SparsePoly:
    r = [k for k in range(3) if k != i]
    c = [k for k in range(3) if k != j]
    return A[r[0]][c[0]] * A[r[1]][c[1]] - A[r[0]][c[1]] * A[r[1]][c[0]]


def sl6_blocks(field: FieldSpec) -> tuple[list[list[SparsePoly]], list[list[SparsePoly]]]:
    y = [None] + [SparsePoly.variable(LAMBDA3_RING, field, n) for n in LAMBDA3_NAMES]
    Ya = [[y[11], -y[5], y[2]], [y[12], -y[6], y[3]], [y[13], -y[7], y[4]]]
    Yb = [[y[10], -y[9], y[8]], [y[16], -y[15], y[14]], [y[19], -y[18], y[17]]]
    return Ya, Yb


def sl6_quartic(field: FieldSpec, minor_pairing: str = "transposed") -> SparsePoly:
    """(y1 y20 - Tr(Ya Yb))^2 + 4 y1 det Yb + 4 y20 det Ya - 4 sum minor(Ya) minor(Yb).

    With the Ya, Yb above, S_y^2 = lP I6 holds when the (i,j) minor of Ya is paired with
    the (j,i) minor of Yb ("transposed"). "literal" pairs (i,j) with (i,j).
    """
    if minor_pairing not in {"transposed", "literal"}:
        raise ValueError(f"unknown minor pairing {minor_pairing!r}")
    ring = LAMBDA3_RING
    Ya, Yb = sl6_blocks(field)
    y1 = SparsePoly.variable(ring, field, "y1")
    y20 = SparsePoly.variable(ring, field, "y20")
    trace = SparsePoly(ring, field)
    for i in range(3):
        for k in range(3):
            trace = trace + Ya[i][k] * Yb[k][i]
    head = y1 * y20 - trace
    lp = head * head + (y1 * _det3(Yb)) * 4 + (y20 * _det3(Ya)) * 4
    for i in range(3):
        for j in range(3):
            other = _minor2(Yb, j, i) if minor_pairing == "transposed" else _minor2(Yb, i, j)
            lp = lp - (_minor2(Ya, i, j) * other) * 4
    return lp


def partials(f: SparsePoly) -> list[SparsePoly]:
    return [f.partial(k) for k in range(f.ring.nvars)]


def relabel(f: SparsePoly, permutation: Sequence[int]) -> SparsePoly:
    """Send variable k to variable permutation[k]."""
    out = {}
    for e, c in f.terms.items():
        new = [0] * f.ring.nvars
        for k, ek in enumerate(e):
            new[permutation[k]] = ek
        out[tuple(new)] = c
    return SparsePoly(f.ring, f.field, out)


def igusa_swap_permutation() -> list[int]:
    """(x0, x_ij) <-> (y0, y_ij) as an index permutation of IGUSA_NAMES."""
    swap = {"x0": "y0", "y0": "x0"}
    for i, j in PAIRS:
        swap[f"x{i}{j}"] = f"y{i}{j}"
        swap[f"y{i}{j}"] = f"x{i}{j}"
    return [IGUSA_NAMES.index(swap[name]) for name in IGUSA_NAMES]


def decomposable_point(vectors: Sequence[Sequence[int]], field: FieldSpec) -> list[int]:
    """Lambda3 coordinates of v1^v2^v3: the 3x3 minors of the 6x3 matrix [v1 v2 v3]."""
    if len(vectors) != 3 or any(len(v) != 6 for v in vectors):
        raise ValueError("need three vectors of length 6")
    return [det([[vectors[c][r] for c in range(3)] for r in (i - 1, j - 1, k - 1)], field) for i, j, k in TRIPLES]


def lambda3_point(coefficients: dict[tuple[int, int, int], int]) -> list[int]:
    index = {t: k for k, t in enumerate(TRIPLES)}
    point = [0] * 20
    for triple, value in coefficients.items():
        point[index[tuple(sorted(triple))]] = value
    return point
