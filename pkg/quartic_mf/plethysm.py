"""Responsibility: Root systems A5/D6, Freudenthal multiplicities and symmetric-power plethysms.

Weights are integer tuples of Dynkin labels. Both types are simply laced, so a root with
simple-root coordinates c pairs with a weight nu as sum_i c_i nu_i.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import islice
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np
import sympy

Weight = tuple[int, ...]


def dynkin_to_cartan(series: str, rank: int) -> np.ndarray:
    A = 2 * np.eye(rank, dtype=int)
    A[range(rank - 1), range(1, rank)] = -1
    A[range(1, rank), range(rank - 1)] = -1
    if series == "A":
        return A
    if series == "D":
        # Bourbaki labels: chain 1..rank-1, node rank hangs off node rank-2.
        A[rank - 2, rank - 1] = A[rank - 1, rank - 2] = 0
        A[rank - 3, rank - 1] = A[rank - 1, rank - 3] = -1
        return A
    raise ValueError(f"unsupported series {series!r}")


@dataclass(frozen=True)
class RootSystem:
    type: str
    cartan: tuple[tuple[int, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]  # simple-root coordinates

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @property
    def rho(self) -> Weight:
        return (1,) * self.rank

    def simple_root_weight(self, i: int) -> Weight:
        return self.cartan[i]

    def root_weight(self, c: tuple[int, ...]) -> Weight:
        return tuple(int(v) for v in np.array(c) @ np.array(self.cartan))

    def pair(self, nu: Weight, c: tuple[int, ...]) -> int:
        return sum(ci * ni for ci, ni in zip(c, nu))

    def reflect(self, nu: Weight, i: int) -> Weight:
        k = nu[i]
        return tuple(n - k * a for n, a in zip(nu, self.cartan[i]))

    @property
    def root_count(self) -> int:
        return 2 * len(self.positive_roots)


@lru_cache(maxsize=None)
def root_system(name: str) -> RootSystem:
    series, rank = name[0], int(name[1:])
    if name not in {"A5", "D6"}:
        raise ValueError(f"root system {name!r} not supported (A5 or D6)")
    A = dynkin_to_cartan(series, rank)
    simple = [tuple(int(k == i) for k in range(rank)) for i in range(rank)]
    roots = list(simple)
    seen = set(roots)
    frontier = list(simple)
    while frontier:
        nxt = []
        for c in frontier:
            labels = np.array(c) @ A
            for i in range(rank):
                if labels[i] == -1:
                    new = tuple(v + (k == i) for k, v in enumerate(c))
                    if new not in seen:
                        seen.add(new)
                        roots.append(new)
                        nxt.append(new)
        frontier = nxt
    roots.sort(key=lambda c: (sum(c), c))
    return RootSystem(name, tuple(tuple(int(v) for v in row) for row in A), tuple(roots))


@lru_cache(maxsize=None)
def _inverse_cartan(rs: RootSystem) -> tuple[tuple[Fraction, ...], ...]:
    inv = sympy.Matrix(rs.cartan).inv()
    return tuple(tuple(Fraction(int(v.p), int(v.q)) for v in inv.row(i)) for i in range(rs.rank))


def height(rs: RootSystem, nu: Weight) -> Fraction:
    """Sum of the simple-root coordinates of nu (rational in general)."""
    inv = _inverse_cartan(rs)
    return sum((nu[i] * inv[i][j] for i in range(rs.rank) for j in range(rs.rank)), Fraction(0))


def is_dominant(nu: Weight) -> bool:
    return all(v >= 0 for v in nu)


def dominant_conjugate(rs: RootSystem, nu: Weight) -> Weight:
    while True:
        negative = next((i for i, v in enumerate(nu) if v < 0), None)
        if negative is None:
            return nu
        nu = rs.reflect(nu, negative)


def weyl_orbit(rs: RootSystem, nu: Weight) -> set[Weight]:
    orbit = {nu}
    frontier = [nu]
    while frontier:
        nxt = []
        for w in frontier:
            for i in range(rs.rank):
                if w[i]:
                    r = rs.reflect(w, i)
                    if r not in orbit:
                        orbit.add(r)
                        nxt.append(r)
        frontier = nxt
    return orbit


def weyl_dimension(rs: RootSystem, hw: Weight) -> int:
    num, den = 1, 1
    shifted = tuple(h + 1 for h in hw)
    for c in rs.positive_roots:
        num *= rs.pair(shifted, c)
        den *= rs.pair(rs.rho, c)
    if num % den:
        raise ArithmeticError(f"Weyl dimension of {hw} is not an integer")
    return num // den


@lru_cache(maxsize=None)
def dominant_multiplicities(rs: RootSystem, hw: Weight) -> Mapping[Weight, int]:
    """Freudenthal recursion on dominant weights only; other weights via their dominant conjugate."""
    if len(hw) != rs.rank or not is_dominant(hw):
        raise ValueError(f"highest weight {hw} is not dominant for {rs.type}")
    pos = [(c, rs.root_weight(c)) for c in rs.positive_roots]
    depth: dict[Weight, tuple[int, ...]] = {hw: (0,) * rs.rank}
    frontier = [hw]
    while frontier:
        nxt = []
        for mu in frontier:
            for c, a in pos:
                nu = tuple(m - x for m, x in zip(mu, a))
                if is_dominant(nu) and nu not in depth:
                    depth[nu] = tuple(d + x for d, x in zip(depth[mu], c))
                    nxt.append(nu)
        frontier = nxt

    shift = tuple(h + 2 for h in hw)  # lambda + 2 rho
    mult: dict[Weight, int] = {hw: 1}
    for mu in sorted(depth, key=lambda w: (sum(depth[w]), w)):
        if mu == hw:
            continue
        numerator = 0
        for c, a in pos:
            k = 1
            while True:
                nu = tuple(m + k * x for m, x in zip(mu, a))
                m_nu = mult.get(dominant_conjugate(rs, nu), 0)
                if not m_nu:
                    break
                numerator += m_nu * rs.pair(nu, c)
                k += 1
        denominator = sum(d * (s + m) for d, s, m in zip(depth[mu], shift, mu))
        value, rem = divmod(2 * numerator, denominator)
        if rem:
            raise ArithmeticError(f"Freudenthal recursion not integral at {mu} for {hw}")
        if value:
            mult[mu] = value
    return MappingProxyType(mult)


@dataclass
class WeightMultiset:
    weights: Counter

    @property
    def mass(self) -> int:
        return sum(self.weights.values())

    def dominant_part(self) -> dict[Weight, int]:
        return {w: m for w, m in self.weights.items() if is_dominant(w) and m}

    def adams(self, r: int) -> "WeightMultiset":
        return WeightMultiset(Counter({tuple(r * v for v in w): m for w, m in self.weights.items()}))

    def dual(self) -> "WeightMultiset":
        return WeightMultiset(Counter({tuple(-v for v in w): m for w, m in self.weights.items()}))

    def __mul__(self, other: "WeightMultiset") -> "WeightMultiset":
        out: Counter = Counter()
        for w1, m1 in self.weights.items():
            for w2, m2 in other.weights.items():
                out[tuple(a + b for a, b in zip(w1, w2))] += m1 * m2
        return WeightMultiset(out)


def irrep_weights(rs: RootSystem, hw: Weight) -> WeightMultiset:
    out: Counter = Counter()
    for mu, m in dominant_multiplicities(rs, tuple(hw)).items():
        for w in weyl_orbit(rs, mu):
            out[w] = m
    return WeightMultiset(out)


tensor_character = WeightMultiset.__mul__

# Newton: k! ch S^k = sum over cycle types of (number of permutations) prod p_r.
_SYMMETRIC_POWER = {
    1: (1, [(1, (1,))]),
    2: (2, [(1, (1, 1)), (1, (2,))]),
    3: (6, [(1, (1, 1, 1)), (3, (1, 2)), (2, (3,))]),
    4: (24, [(1, (1, 1, 1, 1)), (6, (1, 1, 2)), (3, (2, 2)), (8, (1, 3)), (6, (4,))]),
}


def sym_power_character(w: WeightMultiset, k: int) -> WeightMultiset:
    if k not in _SYMMETRIC_POWER:
        raise ValueError(f"symmetric power k={k} outside 1..4")
    denominator, terms = _SYMMETRIC_POWER[k]
    total: Counter = Counter()
    for coef, cycle_type in terms:
        product = None
        for r in cycle_type:
            factor = w.adams(r)
            product = factor if product is None else product * factor
        for weight, m in product.weights.items():
            total[weight] += coef * m
    out: Counter = Counter()
    for weight, m in total.items():
        q, rem = divmod(m, denominator)
        if rem:
            raise ArithmeticError(f"power-sum combination not divisible by {denominator} at {weight}")
        if q:
            out[weight] = q
    return WeightMultiset(out)


def is_weyl_symmetric(rs: RootSystem, w: WeightMultiset, sample: int = 64) -> bool:
    for weight in islice(sorted(w.weights), sample):
        for i in range(rs.rank):
            if w.weights[rs.reflect(weight, i)] != w.weights[weight]:
                return False
    return True


def decompose(rs: RootSystem, w: WeightMultiset) -> list[tuple[Weight, int]]:
    """Peel off the highest dominant weight (by height, then lexicographically) until empty."""
    if not is_weyl_symmetric(rs, w):
        raise ValueError("not a character: weight multiset is not Weyl symmetric")
    remaining = w.dominant_part()
    out = []
    while remaining:
        top = max(remaining, key=lambda mu: (height(rs, mu), mu))
        count = remaining[top]
        for mu, m in dominant_multiplicities(rs, top).items():
            left = remaining.get(mu, 0) - count * m
            if left < 0:
                raise ValueError(f"not a character: multiplicity of {mu} would become {left}")
            if left:
                remaining[mu] = left
            else:
                remaining.pop(mu, None)
        out.append((top, count))
    return out


def decomposition_json(rs: RootSystem, parts: Iterable[tuple[Weight, int]]) -> list[dict]:
    return [
        {"weight": list(mu), "multiplicity": m, "dimension": weyl_dimension(rs, mu)}
        for mu, m in parts
    ]


def _s4(system: str, hw: Weight) -> tuple[RootSystem, WeightMultiset]:
    rs = root_system(system)
    return rs, sym_power_character(irrep_weights(rs, hw), 4)


def _end(system: str, hw: Weight) -> tuple[RootSystem, WeightMultiset]:
    rs = root_system(system)
    v = irrep_weights(rs, hw)
    return rs, v * v.dual()


PLETHYSM_CASES = {
    "s4-lambda3": (lambda: _s4("A5", (0, 0, 1, 0, 0)), [
        (0, 0, 4, 0, 0), (1, 0, 2, 0, 1), (2, 0, 0, 0, 2), (0, 0, 2, 0, 0), (0, 1, 0, 1, 0), (0, 0, 0, 0, 0),
    ]),
    "s4-delta": (lambda: _s4("D6", (0, 0, 0, 0, 0, 1)), [
        (0, 0, 0, 0, 0, 4), (0, 1, 0, 0, 0, 2), (0, 2, 0, 0, 0, 0), (0, 0, 0, 0, 0, 2), (0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 0, 0),
    ]),
    "end6": (lambda: _end("A5", (1, 0, 0, 0, 0)), [(1, 0, 0, 0, 1), (0, 0, 0, 0, 0)]),
    "end12": (lambda: _end("D6", (1, 0, 0, 0, 0, 0)), [(2, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0), (0, 0, 0, 0, 0, 0)]),
}


def run_case(case: str) -> tuple[RootSystem, WeightMultiset, list[tuple[Weight, int]]]:
    if case not in PLETHYSM_CASES:
        raise ValueError(f"unknown plethysm case {case!r}")
    build, _expected = PLETHYSM_CASES[case]
    rs, character = build()
    return rs, character, decompose(rs, character)


def expected_case(case: str) -> list[Weight]:
    return list(PLETHYSM_CASES[case][1])
