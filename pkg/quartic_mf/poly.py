"""Responsibility: Sparse weighted multivariate polynomials and polynomial matrices over a FieldSpec."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .field import FieldSpec

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class WeightedRing:
    var_names: tuple[str, ...]
    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.var_names) != len(self.weights):
            raise ValueError(f"ring has {len(self.var_names)} names but {len(self.weights)} weights")
        if any(w <= 0 for w in self.weights):
            raise ValueError(f"ring weights must be positive, got {self.weights}")
        if len(set(self.var_names)) != len(self.var_names):
            raise ValueError("ring variable names must be unique")

    @classmethod
    def ordinary(cls, names: Iterable[str]) -> "WeightedRing":
        names = tuple(names)
        return cls(names, (1,) * len(names))

    @property
    def nvars(self) -> int:
        return len(self.var_names)

    def index(self, name: str) -> int:
        try:
            return self.var_names.index(name)
        except ValueError:
            raise ValueError(f"unknown variable {name!r}") from None

    def degree(self, exponent: Exponent) -> int:
        return sum(e * w for e, w in zip(exponent, self.weights))

    def unit(self, k: int) -> Exponent:
        return tuple(1 if j == k else 0 for j in range(self.nvars))

    @property
    def one(self) -> Exponent:
        return (0,) * self.nvars


def section_ring(n: int = 6) -> WeightedRing:
    """Ordinary ring z1..zn: the coordinates of a linear section P^{n-1}."""
    return WeightedRing.ordinary(f"z{k}" for k in range(1, n + 1))


def double_cover_ring(n: int = 6) -> WeightedRing:
    """z1..zn of weight 1 plus x of weight 2: the ambient P(1^n, 2) of a double cover."""
    return WeightedRing(tuple(f"z{k}" for k in range(1, n + 1)) + ("x",), (1,) * n + (2,))


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def monomial_order_key(ring: WeightedRing, exponent: Exponent) -> tuple[int, Exponent]:
    """Graded-lex: higher weighted degree first, then lexicographically larger exponent first."""
    return (-ring.degree(exponent), tuple(-e for e in exponent))


@lru_cache(maxsize=None)
def monomial_basis(ring: WeightedRing, d: int) -> tuple[Exponent, ...]:
    """All exponents of weighted degree exactly d, in graded-lex order."""
    if d < 0:
        return ()
    out: list[Exponent] = []
    n = ring.nvars

    def extend(k: int, remaining: int, prefix: list[int]) -> None:
        if k == n - 1:
            w = ring.weights[k]
            if remaining % w == 0:
                out.append(tuple(prefix + [remaining // w]))
            return
        for e in range(remaining // ring.weights[k], -1, -1):
            extend(k + 1, remaining - e * ring.weights[k], prefix + [e])

    if n == 0:
        return ((),) if d == 0 else ()
    extend(0, d, [])
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(ring: WeightedRing, d: int) -> dict[Exponent, int]:
    return {e: k for k, e in enumerate(monomial_basis(ring, d))}


class SparsePoly:
    """Exponent -> nonzero field element. Coefficients are canonical elements of `field`."""

    __slots__ = ("ring", "field", "terms")

    def __init__(self, ring: WeightedRing, field: FieldSpec, terms: Mapping[Exponent, int] | None = None) -> None:
        self.ring = ring
        self.field = field
        self.terms: dict[Exponent, int] = {e: c for e, c in (terms or {}).items() if c}

    # -- constructors ------------------------------------------------------------------

    @classmethod
    def zero(cls, ring: WeightedRing, field: FieldSpec) -> "SparsePoly":
        return cls(ring, field)

    @classmethod
    def constant(cls, ring: WeightedRing, field: FieldSpec, value: int) -> "SparsePoly":
        return cls(ring, field, {ring.one: value})

    @classmethod
    def variable(cls, ring: WeightedRing, field: FieldSpec, var: int | str) -> "SparsePoly":
        k = ring.index(var) if isinstance(var, str) else var
        return cls(ring, field, {ring.unit(k): 1})

    @classmethod
    def linear_form(cls, ring: WeightedRing, field: FieldSpec, coeffs: Sequence[int]) -> "SparsePoly":
        if len(coeffs) != ring.nvars:
            raise ValueError(f"linear form needs {ring.nvars} coefficients, got {len(coeffs)}")
        return cls(ring, field, {ring.unit(k): field.canonical(c) for k, c in enumerate(coeffs)})

    # -- arithmetic --------------------------------------------------------------------

    def _check(self, other: "SparsePoly") -> None:
        if other.ring != self.ring:
            raise ValueError(f"ring mismatch: {self.ring.var_names} vs {other.ring.var_names}")

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        self._check(other)
        add = self.field.add
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = add(out[e], c) if e in out else c
        return SparsePoly(self.ring, self.field, out)

    def __neg__(self) -> "SparsePoly":
        neg = self.field.neg
        return SparsePoly(self.ring, self.field, {e: neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-other)

    def scale(self, c: int) -> "SparsePoly":
        """Multiply by a canonical field element."""
        if not c:
            return SparsePoly(self.ring, self.field)
        mul = self.field.mul
        return SparsePoly(self.ring, self.field, {e: mul(v, c) for e, v in self.terms.items()})

    def __mul__(self, other: "SparsePoly | int") -> "SparsePoly":
        if isinstance(other, int):
            return self.scale(self.field.from_int(other))
        self._check(other)
        if not self.terms or not other.terms:
            return SparsePoly(self.ring, self.field)
        out: dict[Exponent, int] = {}
        if self.field.ext_mode:
            mul, add = self.field.mul, self.field.add
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = _add_exp(e1, e2)
                    v = mul(c1, c2)
                    out[e] = add(out[e], v) if e in out else v
        else:
            p = self.field.p
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = _add_exp(e1, e2)
                    out[e] = (out.get(e, 0) + c1 * c2) % p
        return SparsePoly(self.ring, self.field, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SparsePoly":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = SparsePoly.constant(self.ring, self.field, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        shown = " + ".join(f"{c}*{self._monomial_str(e)}" for e, c in self.sorted_terms()[:6])
        more = " + ..." if len(self.terms) > 6 else ""
        return f"SparsePoly({shown or '0'}{more})"

    def _monomial_str(self, e: Exponent) -> str:
        parts = [n if k == 1 else f"{n}^{k}" for n, k in zip(self.ring.var_names, e) if k]
        return "*".join(parts) or "1"

    # -- structure ---------------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exponent, int]]:
        return sorted(self.terms.items(), key=lambda item: monomial_order_key(self.ring, item[0]))

    def coefficient(self, exponent: Exponent) -> int:
        return self.terms.get(exponent, 0)

    def degree(self) -> int | None:
        if not self.terms:
            return None
        return max(self.ring.degree(e) for e in self.terms)

    def homogeneous_degree(self) -> int | None:
        """Common weighted degree of all terms; None for zero; -1 if not homogeneous."""
        degrees = {self.ring.degree(e) for e in self.terms}
        if not degrees:
            return None
        return degrees.pop() if len(degrees) == 1 else -1

    def is_homogeneous(self, d: int | None = None) -> bool:
        h = self.homogeneous_degree()
        if h is None:
            return True
        return h >= 0 and (d is None or h == d)

    def evaluate(self, point: Sequence[int]) -> int:
        if len(point) != self.ring.nvars:
            raise ValueError(f"point has {len(point)} coordinates, ring has {self.ring.nvars}")
        f = self.field
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = f.mul(v, f.power(x, k))
            total = f.add(total, v)
        return total

    def partial(self, k: int) -> "SparsePoly":
        f = self.field
        out: dict[Exponent, int] = {}
        for e, c in self.terms.items():
            if e[k]:
                d = list(e)
                d[k] -= 1
                out[tuple(d)] = f.mul(c, f.from_int(e[k]))
        return SparsePoly(self.ring, self.field, out)

    def embed(self, ring: WeightedRing) -> "SparsePoly":
        """Rename into another ring by variable name; variables absent from `ring` must not occur."""
        if ring == self.ring:
            return self
        target = {name: ring.index(name) for name in self.ring.var_names if name in ring.var_names}
        out: dict[Exponent, int] = {}
        for e, c in self.terms.items():
            new = [0] * ring.nvars
            for name, k in zip(self.ring.var_names, e):
                if not k:
                    continue
                if name not in target:
                    raise ValueError(f"variable {name!r} does not exist in target ring")
                new[target[name]] = k
            out[tuple(new)] = c
        return SparsePoly(ring, self.field, out)

    def substitute(self, images: Sequence["SparsePoly"]) -> "SparsePoly":
        """f(images[0], ..., images[N-1]); images share one target ring."""
        if len(images) != self.ring.nvars:
            raise ValueError(f"need {self.ring.nvars} images, got {len(images)}")
        target = images[0].ring if images else self.ring
        cache: dict[tuple[int, int], SparsePoly] = {}

        def power(k: int, e: int) -> SparsePoly:
            key = (k, e)
            if key not in cache:
                cache[key] = images[k] if e == 1 else power(k, e - 1) * images[k]
            return cache[key]

        total = SparsePoly(target, self.field)
        for e, c in self.terms.items():
            term = SparsePoly.constant(target, self.field, c)
            for k, ek in enumerate(e):
                if ek:
                    term = term * power(k, ek)
                    if term.is_zero():
                        break
            total = total + term
        return total

    def coefficient_vector(self, d: int) -> np.ndarray:
        """Coordinates in monomial_basis(ring, d); the polynomial must be homogeneous of degree d."""
        index = monomial_index(self.ring, d)
        vec = np.zeros(len(index), dtype=np.int64)
        for e, c in self.terms.items():
            if e not in index:
                raise ValueError(f"term of degree {self.ring.degree(e)} outside degree {d}")
            vec[index[e]] = c
        return vec


def poly_arith(a: SparsePoly, b: SparsePoly | int, op: str) -> SparsePoly:
    if op == "scale":
        if isinstance(b, SparsePoly):
            a._check(b)
            if any(e != b.ring.one for e in b.terms):
                raise ValueError("scale expects a constant")
            return a.scale(b.coefficient(b.ring.one))
        return a.scale(a.field.canonical(b))
    if not isinstance(b, SparsePoly):
        raise ValueError(f"op={op} needs a polynomial operand")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def substitute_linear(
    f: SparsePoly, m: Sequence[Sequence[int]], target: WeightedRing | None = None
) -> SparsePoly:
    """f(m·z): variable k of f becomes sum_j m[k][j]·z_j."""
    if len(m) != f.ring.nvars:
        raise ValueError(f"substitution matrix has {len(m)} rows, ring has {f.ring.nvars} variables")
    cols = {len(row) for row in m}
    if len(cols) > 1:
        raise ValueError("substitution matrix rows have unequal lengths")
    width = cols.pop() if cols else 0
    target = target or section_ring(width)
    if target.nvars != width:
        raise ValueError(f"target ring has {target.nvars} variables, matrix has {width} columns")
    images = [SparsePoly.linear_form(target, f.field, row) for row in m]
    return f.substitute(images)


def to_text(poly: SparsePoly) -> str:
    """One term per line, `coeff e1 ... en`, in graded-lex order."""
    return "".join(f"{c} {' '.join(map(str, e))}\n" for e, c in poly.sorted_terms())


def from_text(text: str, ring: WeightedRing, field: FieldSpec) -> SparsePoly:
    terms: dict[Exponent, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = [int(tok) for tok in line.split()]
        if len(parts) != ring.nvars + 1:
            raise ValueError(f"line {lineno}: expected {ring.nvars + 1} fields, got {len(parts)}")
        terms[tuple(parts[1:])] = parts[0]
    return SparsePoly(ring, field, terms)


@dataclass
class PolyMatrix:
    ring: WeightedRing
    field: FieldSpec
    entries: list[list[SparsePoly]]
    degree: int | None = None
    warnings: tuple[str, ...] = dc_field(default=())

    def __post_init__(self) -> None:
        widths = {len(row) for row in self.entries}
        if len(widths) > 1:
            raise ValueError("ragged polynomial matrix")
        for row in self.entries:
            for entry in row:
                if entry.ring != self.ring:
                    raise ValueError("matrix entry lives in a different ring")
                h = entry.homogeneous_degree()
                if h is None:
                    continue
                if h < 0:
                    raise ValueError("matrix entry is not homogeneous")
                if self.degree is None:
                    self.degree = h
                elif h != self.degree:
                    raise ValueError(f"entry of degree {h} in a matrix of degree {self.degree}")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @classmethod
    def zeros(cls, ring: WeightedRing, field: FieldSpec, rows: int, cols: int, degree: int | None = None) -> "PolyMatrix":
        return cls(ring, field, [[SparsePoly(ring, field) for _ in range(cols)] for _ in range(rows)], degree)

    @classmethod
    def scalar(cls, value: SparsePoly, n: int) -> "PolyMatrix":
        zero = SparsePoly(value.ring, value.field)
        return cls(value.ring, value.field, [[value if r == c else zero for c in range(n)] for r in range(n)])

    def __getitem__(self, rc: tuple[int, int]) -> SparsePoly:
        r, c = rc
        return self.entries[r][c]

    def map_entries(self, fn: Callable[[SparsePoly], SparsePoly], ring: WeightedRing | None = None) -> "PolyMatrix":
        return PolyMatrix(ring or self.ring, self.field, [[fn(e) for e in row] for row in self.entries])

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same_shape(other)
        return PolyMatrix(self.ring, self.field, [
            [a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)
        ])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same_shape(other)
        return PolyMatrix(self.ring, self.field, [
            [a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)
        ])

    def __neg__(self) -> "PolyMatrix":
        return self.map_entries(lambda e: -e)

    def _same_shape(self, other: "PolyMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def scale(self, c: int) -> "PolyMatrix":
        return self.map_entries(lambda e: e.scale(c))

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        out = []
        for r in range(self.rows):
            row = []
            for c in range(other.cols):
                acc = SparsePoly(self.ring, self.field)
                for k in range(self.cols):
                    a, b = self.entries[r][k], other.entries[k][c]
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.ring, self.field, out)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.ring, self.field, [list(col) for col in zip(*self.entries)], self.degree)

    def antitranspose(self) -> "PolyMatrix":
        """A^tau[i][j] = A[n-1-j][n-1-i]: transpose across the antidiagonal."""
        n, m = self.rows, self.cols
        return PolyMatrix(self.ring, self.field, [
            [self.entries[n - 1 - j][m - 1 - i] for j in range(n)] for i in range(m)
        ], self.degree)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "PolyMatrix":
        return PolyMatrix(self.ring, self.field, [row[c0:c1] for row in self.entries[r0:r1]], self.degree)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def scalar_value(self) -> SparsePoly | None:
        """q if the matrix equals q·I, else None."""
        if self.rows != self.cols:
            return None
        q = self.entries[0][0]
        for r, row in enumerate(self.entries):
            for c, e in enumerate(row):
                if (r == c and e != q) or (r != c and not e.is_zero()):
                    return None
        return q

    def first_difference(self, other: "PolyMatrix") -> tuple[int, int] | None:
        self._same_shape(other)
        for r in range(self.rows):
            for c in range(self.cols):
                if self.entries[r][c] != other.entries[r][c]:
                    return (r, c)
        return None

    def embed(self, ring: WeightedRing) -> "PolyMatrix":
        return self.map_entries(lambda e: e.embed(ring), ring)

    def evaluate(self, point: Sequence[int]) -> np.ndarray:
        return np.array([[e.evaluate(point) for e in row] for row in self.entries], dtype=np.int64)
