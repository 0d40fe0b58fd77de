"""Responsibility: Unit tests for S_y, linear sections, double-cover factorizations and resolutions."""

import json
import tempfile
import unittest
from pathlib import Path

import numpy as np


class SyTests(unittest.TestCase):
    @classmethod
    def setUpClass(cls) -> None:
        from quartic_mf.field import make_field
        from quartic_mf.matfact import build_sy

        cls.field = make_field(313)
        cls.sy = build_sy(cls.field)

    def test_square_is_lp_and_oracle_scalar(self) -> None:
        from quartic_mf.matfact import verify_sy

        cert = verify_sy(self.field)
        self.assertTrue(cert.passed, msg=cert.failure)
        self.assertTrue(cert.details["entries_quadratic"])
        self.assertEqual(cert.constants["sigma"], 1)
        self.assertEqual([a["minor_pairing"] for a in cert.attempts], ["literal", "transposed"])
        self.assertFalse(cert.attempts[0]["passed"])

    def test_value_at_u123_plus_u456(self) -> None:
        value = self.sy.evaluate([1] + [0] * 18 + [1])
        self.assertTrue(np.array_equal(value, np.diag([1, 1, 1, -1, -1, -1]) % 313))

    def test_oracle_vanishes_at_zero(self) -> None:
        from quartic_mf.matfact import kimura_sato_oracle

        self.assertFalse(kimura_sato_oracle(self.field, [0] * 20).any())

    def test_oracle_matches_sy_at_a_point(self) -> None:
        from quartic_mf.field import Rng
        from quartic_mf.matfact import kimura_sato_oracle

        rng = Rng(8)
        y = [rng.element(self.field) for _ in range(20)]
        self.assertTrue(np.array_equal(kimura_sato_oracle(self.field, y), self.sy.evaluate(y)))

    def test_oracle_reduces_negative_coordinates_in_extension_field(self) -> None:
        from quartic_mf.field import make_field
        from quartic_mf.matfact import kimura_sato_oracle

        field = make_field(311)
        y = [(-1) ** k * (k + 1) for k in range(20)]
        reduced = [v % 311 for v in y]
        self.assertTrue(np.array_equal(kimura_sato_oracle(field, y), kimura_sato_oracle(field, reduced)))

    def test_oracle_rejects_short_point(self) -> None:
        from quartic_mf.matfact import kimura_sato_oracle

        with self.assertRaises(ValueError):
            kimura_sato_oracle(self.field, [1, 2, 3])

    def test_restriction_commutes_with_product(self) -> None:
        from quartic_mf.matfact import random_section, restrict_to_section

        m = random_section(20, self.field, seed=11)
        S = restrict_to_section(self.sy, m)
        self.assertEqual(S.warnings, ())
        self.assertIsNone((S @ S).first_difference(restrict_to_section(self.sy @ self.sy, m)))

    def test_degenerate_section_is_flagged(self) -> None:
        from quartic_mf.matfact import random_section, restrict_to_section

        m = random_section(20, self.field, seed=2)
        for row in m:
            row[5] = row[4]
        S = restrict_to_section(self.sy, m)
        self.assertEqual(len(S.warnings), 1)
        self.assertIn("degenerate", S.warnings[0])


class DoubleCoverTests(unittest.TestCase):
    @classmethod
    def setUpClass(cls) -> None:
        from quartic_mf.field import make_field
        from quartic_mf.matfact import build_sy, double_cover_mf, random_section, restrict_to_section

        cls.field = make_field(313)
        cls.S = restrict_to_section(build_sy(cls.field), random_section(20, cls.field, seed=11))
        cls.mf = double_cover_mf(cls.S)

    def test_factorization_identities(self) -> None:
        cert = self.mf.verify()
        self.assertTrue(cert.passed, msg=cert.failure)
        self.assertEqual(cert.details["degree_sum"], 4)
        self.assertEqual(self.mf.ring.weights, (1, 1, 1, 1, 1, 1, 2))

    def test_determinants_multiply_to_w_power(self) -> None:
        from quartic_mf.field import Rng
        from quartic_mf.linalg import det

        rng = Rng(5)
        for _ in range(3):
            point = [rng.element(self.field) for _ in range(7)]
            lhs = self.field.mul(det(self.mf.B.evaluate(point), self.field), det(self.mf.C.evaluate(point), self.field))
            self.assertEqual(lhs, self.field.power(self.mf.W.evaluate(point), 6))

    def test_determinant_has_weighted_degree_twelve(self) -> None:
        from quartic_mf.field import Rng
        from quartic_mf.linalg import det

        rng = Rng(6)
        point = [rng.element(self.field) for _ in range(7)]
        t = 7
        scaled = [self.field.mul(t, v) for v in point[:6]] + [self.field.mul(t * t, point[6])]
        base = det(self.mf.B.evaluate(point), self.field)
        self.assertEqual(det(self.mf.B.evaluate(scaled), self.field), self.field.mul(self.field.power(t, 12), base))

    def test_potential_is_q_plus_x_squared(self) -> None:
        from quartic_mf.poly import SparsePoly

        Q = (self.S @ self.S).scalar_value()
        x = SparsePoly.variable(self.mf.ring, self.field, "x")
        self.assertEqual(self.mf.W, Q.embed(self.mf.ring) + x * x)

    def test_extension_field_cover(self) -> None:
        from quartic_mf.field import make_field
        from quartic_mf.matfact import build_sy, double_cover_mf, random_section, restrict_to_section

        field = make_field(331)
        S = restrict_to_section(build_sy(field), random_section(20, field, seed=3))
        self.assertTrue(double_cover_mf(S).verify().passed)

    def test_constant_and_non_scalar_inputs_rejected(self) -> None:
        from quartic_mf.matfact import double_cover_mf, single_cover_mf
        from quartic_mf.poly import PolyMatrix, SparsePoly

        one = SparsePoly.constant(self.S.ring, self.field, 1)
        with self.assertRaises(ValueError):
            double_cover_mf(PolyMatrix.scalar(one, 6))
        with self.assertRaises(ValueError):
            single_cover_mf(self.S.block(0, 6, 0, 5))
        skewed = PolyMatrix(self.S.ring, self.field, [list(row) for row in self.S.entries])
        skewed.entries[0][1] = skewed.entries[0][1] + skewed.entries[0][0]
        with self.assertRaises(ValueError):
            double_cover_mf(skewed)

    def test_periodic_resolution(self) -> None:
        from quartic_mf.matfact import periodic_resolution

        res = periodic_resolution(self.mf, 3)
        self.assertEqual(res.twists, (0, -2, -4, -6))
        self.assertEqual(res.ranks, (6, 6, 6, 6))
        self.assertTrue(res.composite_vanishes(1))
        self.assertTrue(res.composite_vanishes(2))
        with self.assertRaises(ValueError):
            periodic_resolution(self.mf, 0)

    def test_write_mf_dir(self) -> None:
        from quartic_mf.matfact import write_mf_dir

        with tempfile.TemporaryDirectory() as tmp:
            path = write_mf_dir(self.mf, Path(tmp) / "mf", seed=11)
            manifest = json.loads((path / "manifest.json").read_text())
            self.assertEqual(manifest["n"], 6)
            self.assertEqual(manifest["seed"], 11)
            self.assertEqual(len(list((path / "B").glob("entry_*.txt"))), 36)
            self.assertTrue((path / "potential.txt").read_text())


class SingleCoverTests(unittest.TestCase):
    def test_quartic_fourfold_factorization(self) -> None:
        from quartic_mf.field import make_field
        from quartic_mf.matfact import build_sy, random_section, restrict_to_section, single_cover_mf

        field = make_field(313)
        S = restrict_to_section(build_sy(field), random_section(20, field, seed=1))
        mf = single_cover_mf(S)
        self.assertTrue(mf.verify().passed)
        self.assertEqual(mf.W.homogeneous_degree(), 4)


if __name__ == "__main__":
    unittest.main()
