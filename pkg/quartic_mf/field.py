"""Responsibility: Prime fields with a square root of -1, and the seeded SplitMix64 stream.

Elements of F_p are plain ints in [0, p). When p = 3 mod 4 the field is F_p[t]/(t^2 + 1)
and an element a + b*t is packed as the int a + b*p, so coefficient dictionaries and
numpy arrays keep a single integer per entry in both modes.
"""

from dataclasses import dataclass
from typing import Iterator

from sympy import isprime  # Deterministic primality for moduli below 2**31.
from sympy.ntheory import sqrt_mod  # All square roots of -1 mod p.

from .config import MAX_PRIME

MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class FieldSpec:
    p: int
    i: int | None
    ext_mode: bool

    @property
    def order(self) -> int:
        return self.p * self.p if self.ext_mode else self.p

    @property
    def sqrt_minus_one(self) -> int:
        """The designated i: an F_p residue, or the packed generator t in extension mode."""
        if self.ext_mode:
            return self.p
        assert self.i is not None
        return self.i

    def from_int(self, n: int) -> int:
        return n % self.p

    def canonical(self, n: int) -> int:
        """Keep a canonical element as is; reduce any other integer through from_int."""
        return n if 0 <= n < self.order else self.from_int(n)

    def split(self, a: int) -> tuple[int, int]:
        return a % self.p, a // self.p

    def pack(self, re: int, im: int) -> int:
        return re % self.p + (im % self.p) * self.p

    def add(self, a: int, b: int) -> int:
        if not self.ext_mode:
            return (a + b) % self.p
        (ar, ai), (br, bi) = self.split(a), self.split(b)
        return self.pack(ar + br, ai + bi)

    def neg(self, a: int) -> int:
        if not self.ext_mode:
            return -a % self.p
        ar, ai = self.split(a)
        return self.pack(-ar, -ai)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if not self.ext_mode:
            return a * b % self.p
        (ar, ai), (br, bi) = self.split(a), self.split(b)
        return self.pack(ar * br - ai * bi, ar * bi + ai * br)

    def inv(self, a: int) -> int:
        if a % self.order == 0:
            raise ZeroDivisionError(f"inverse of zero in F_{self.order}")
        if not self.ext_mode:
            return pow(a, -1, self.p)
        ar, ai = self.split(a)
        norm_inv = pow((ar * ar + ai * ai) % self.p, -1, self.p)
        return self.pack(ar * norm_inv, -ai * norm_inv)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, e: int) -> int:
        if not self.ext_mode:
            return pow(a, e, self.p)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def describe(self) -> str:
        return f"F_{self.p}^2" if self.ext_mode else f"F_{self.p}"


def make_field(p: int) -> FieldSpec:
    """Build F_p with i = sqrt(-1) (smallest positive root), or F_{p^2} when p = 3 mod 4."""
    if p == 2:
        raise ValueError("p=2 is not supported: the invariant formulas divide by 4")
    if p < 2 or not isprime(p):
        raise ValueError(f"modulus p={p} is not prime")
    if p >= MAX_PRIME:
        raise ValueError(f"modulus p={p} must be below 2**31")
    if p % 4 == 1:
        return FieldSpec(p=p, i=min(sqrt_mod(p - 1, p, all_roots=True)), ext_mode=False)
    return FieldSpec(p=p, i=None, ext_mode=True)


class Rng:
    """SplitMix64. Field elements are next() mod p; matrices fill row-major."""

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def stream(self, count: int) -> Iterator[int]:
        for _ in range(count):
            yield self.next()

    def element(self, field: FieldSpec) -> int:
        return self.next() % field.p

    def nonzero_element(self, field: FieldSpec) -> int:
        while True:
            value = self.element(field)
            if value:
                return value

    def matrix(self, rows: int, cols: int, field: FieldSpec) -> list[list[int]]:
        return [[self.element(field) for _ in range(cols)] for _ in range(rows)]
