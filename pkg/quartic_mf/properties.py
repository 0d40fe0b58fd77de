"""Responsibility: Property suites behind `verify properties` and `verify quartics`."""

from __future__ import annotations

from itertools import product

from .field import FieldSpec, Rng
from .invariants import (
    IGUSA_RING,
    alternating_matrix,
    decomposable_point,
    igusa_quartic,
    igusa_swap_permutation,
    partials,
    pfaffian,
    relabel,
    sl6_quartic,
)
from .linalg import det
from .logging_utils import LOGGER, kv
from .poly import SparsePoly, WeightedRing, monomial_basis, section_ring, substitute_linear
from .spinor import Certificate, SpinorElement, clifford_apply, spinor_ring

SPLITMIX64_SEED0 = (
    0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F, 0xF88BB8A8724C81EC, 0x1B39896A51A8749B,
    0x53CB9F0C747EA2EA, 0x2C829ABE1F4532E1, 0xC584133AC916AB3C, 0x3EE5789041C98AC3, 0xF3B8488C368CB0A6,
)


def _pairing(a: int, b: int) -> int:
    """{g_a, g_b} = <g_a, g_b>: 1 exactly for e_i with f_i."""
    return 1 if abs(a - b) == 6 else 0


def clifford_relations(field: FieldSpec) -> Certificate:
    """g_a g_b + g_b g_a = <g_a, g_b> on every basis vector of the full exterior algebra."""
    cert = Certificate("clifford relations", True)
    checked = 0
    for parity in ("even", "odd"):
        ring = spinor_ring(parity)
        masks = [m for m in range(64) if bin(m).count("1") % 2 == (parity == "odd")]
        for mask, a, b in product(masks, range(12), range(12)):
            s = SpinorElement.basis(mask, ring, field)
            lhs = clifford_apply(a, clifford_apply(b, s)) + clifford_apply(b, clifford_apply(a, s))
            rhs = SpinorElement(ring, field, {mask: SparsePoly.constant(ring, field, 1)} if _pairing(a, b) else {})
            checked += 1
            if lhs != rhs:
                cert.passed = False
                cert.failure = f"anticommutator of generators {a},{b} fails on subset mask {mask:06b}"
                return cert
    cert.details["cases"] = checked
    return cert


def pfaffian_squares(field: FieldSpec, seed: int, trials: int = 10, size: int = 6) -> Certificate:
    ring = WeightedRing.ordinary(("t",))
    rng = Rng(seed)
    cert = Certificate("Pf^2 == det", True, details={"trials": trials})
    for trial in range(trials):
        upper = {(i, j): rng.element(field) for i in range(1, size + 1) for j in range(i + 1, size + 1)}
        M = alternating_matrix({k: SparsePoly.constant(ring, field, v) for k, v in upper.items()}, size, ring, field)
        pf = pfaffian(M).coefficient(ring.one)
        values = [[e.coefficient(ring.one) for e in row] for row in M]
        if field.mul(pf, pf) != det(values, field):
            cert.passed, cert.failure = False, f"trial {trial}: Pf^2 != det"
            return cert
    return cert


def _random_poly(ring: WeightedRing, field: FieldSpec, rng: Rng, degree: int) -> SparsePoly:
    return SparsePoly(ring, field, {e: rng.element(field) for e in monomial_basis(ring, degree)})


def substitution_multiplicative(field: FieldSpec, seed: int, trials: int = 5) -> Certificate:
    source, target = section_ring(4), section_ring(3)
    rng = Rng(seed)
    cert = Certificate("substitute_linear(f*g) == substitute_linear(f)*substitute_linear(g)", True)
    for trial in range(trials):
        f, g = _random_poly(source, field, rng, 2), _random_poly(source, field, rng, 3)
        m = rng.matrix(4, 3, field)
        if substitute_linear(f * g, m, target) != substitute_linear(f, m, target) * substitute_linear(g, m, target):
            cert.passed, cert.failure = False, f"trial {trial}: substitution not multiplicative"
            return cert
    return cert


def splitmix_vector() -> Certificate:
    produced = tuple(Rng(0).stream(10))
    cert = Certificate("SplitMix64 seed-0 vector", produced == SPLITMIX64_SEED0)
    if not cert.passed:
        index = next(k for k, (a, b) in enumerate(zip(produced, SPLITMIX64_SEED0)) if a != b)
        cert.failure = f"value {index} is {produced[index]:#018x}, expected {SPLITMIX64_SEED0[index]:#018x}"
    return cert


def property_suite(field: FieldSpec, seed: int) -> list[Certificate]:
    certs = [
        clifford_relations(field),
        pfaffian_squares(field, seed),
        substitution_multiplicative(field, seed),
        splitmix_vector(),
    ]
    for cert in certs:
        if not cert.passed:
            LOGGER.warning("Property failed %s", kv(check=cert.check, failure=cert.failure))
    return certs


# -- quartic sanity ---------------------------------------------------------------------

def euler_identity(f: SparsePoly, degree: int) -> bool:
    total = SparsePoly(f.ring, f.field)
    for k, d in enumerate(partials(f)):
        total = total + SparsePoly.variable(f.ring, f.field, k) * d
    return total == f * degree


def quartic_suite(field: FieldSpec, seed: int, samples: int = 10) -> list[Certificate]:
    P = igusa_quartic(field)
    lp = sl6_quartic(field)
    rng = Rng(seed)

    swap = Certificate("Igusa quartic symmetric under x <-> y", relabel(P, igusa_swap_permutation()) == P)
    homogeneous = Certificate(
        "quartics homogeneous of degree 4",
        P.is_homogeneous(4) and lp.is_homogeneous(4) and P.ring == IGUSA_RING,
        details={"igusa_terms": len(P), "lp_terms": len(lp)},
    )
    vanishing = Certificate("lP vanishes on decomposable 3-forms", True, details={"samples": samples})
    for trial in range(samples):
        vectors = [[rng.element(field) for _ in range(6)] for _ in range(3)]
        if lp.evaluate(decomposable_point(vectors, field)):
            vanishing.passed, vanishing.failure = False, f"sample {trial}: lP != 0"
            break
    euler = Certificate("Euler identity sum x_k dP/dx_k == 4P", euler_identity(P, 4) and euler_identity(lp, 4))
    return [swap, homogeneous, vanishing, euler]
