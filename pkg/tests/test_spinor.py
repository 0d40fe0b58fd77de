"""Responsibility: Unit tests for the Clifford action, the so12 moment maps and their certificates."""

import tempfile
import unittest
from pathlib import Path


class CliffordTests(unittest.TestCase):
    def test_relations_on_full_exterior_algebra(self) -> None:
        from quartic_mf.field import make_field
        from quartic_mf.properties import clifford_relations

        cert = clifford_relations(make_field(313))
        self.assertTrue(cert.passed, msg=cert.failure)
        self.assertEqual(cert.details["cases"], 64 * 144)

    def test_contraction_sign(self) -> None:
        from quartic_mf.field import make_field
        from quartic_mf.spinor import SpinorElement, clifford_apply, generator_index, mask_of, spinor_ring

        field = make_field(313)
        ring = spinor_ring("odd")
        s = SpinorElement.basis(mask_of((1, 2, 3)), ring, field)
        out = clifford_apply(generator_index("f", 2), s)
        self.assertEqual(list(out.coeffs), [mask_of((1, 3))])
        self.assertEqual(out.coefficient(mask_of((1, 3))).coefficient(ring.one), 312)

    def test_generator_bounds(self) -> None:
        from quartic_mf.spinor import generator_index, parity_masks

        self.assertEqual(generator_index("e", 1), 0)
        self.assertEqual(generator_index("f", 6), 11)
        with self.assertRaises(ValueError):
            generator_index("g", 1)
        with self.assertRaises(ValueError):
            parity_masks("both")
        self.assertEqual(len(parity_masks("even")), 32)


class EvenMomentMapTests(unittest.TestCase):
    @classmethod
    def setUpClass(cls) -> None:
        from quartic_mf.field import make_field
        from quartic_mf.spinor import moment_map

        cls.field = make_field(313)
        cls.moment = moment_map("even", cls.field)

    def test_lies_in_so12(self) -> None:
        self.assertIsNone(self.moment.so12_defect())
        self.assertTrue(self.moment.trace().is_zero())

    def test_square_is_c_even_times_igusa(self) -> None:
        from quartic_mf.spinor import SWAPPED_EMBEDDING, verify_mf_even

        cert = verify_mf_even(self.field, moment=self.moment)
        self.assertTrue(cert.passed, msg=cert.failure)
        self.assertEqual(cert.constants["c_even"], 309)
        self.assertEqual(cert.details["embedding"], SWAPPED_EMBEDDING.name)
        self.assertFalse(cert.attempts[0]["passed"])

    def test_random_point_precheck_agrees(self) -> None:
        from quartic_mf.spinor import precheck_mf_even

        cert = precheck_mf_even(self.field, seeds=8, moment=self.moment)
        self.assertTrue(cert.passed, msg=cert.failure)
        self.assertEqual(cert.constants["c_even"], 309)

    def test_negative_control_is_rejected(self) -> None:
        from quartic_mf.invariants import igusa_quartic
        from quartic_mf.spinor import verify_mf_even

        control = verify_mf_even(self.field, quartic=igusa_quartic(self.field, flip_square_sign=True), moment=self.moment)
        self.assertFalse(control.passed)
        self.assertIsNotNone(control.failure)

    def test_export_writes_entries_and_manifest(self) -> None:
        import json

        from quartic_mf.spinor import export_moment_matrix

        with tempfile.TemporaryDirectory() as tmp:
            path = export_moment_matrix(self.moment, Path(tmp) / "even", {"c_even": 309})
            self.assertEqual(len(list(path.glob("entry_*_*.txt"))), 144)
            manifest = json.loads((path / "manifest.json").read_text())
            self.assertEqual(manifest["constants"], {"c_even": 309})
            self.assertEqual(len(manifest["variables"]), 32)


class OddMomentMapTests(unittest.TestCase):
    @classmethod
    def setUpClass(cls) -> None:
        from quartic_mf.field import make_field
        from quartic_mf.spinor import moment_map

        cls.field = make_field(313)
        cls.moment = moment_map("odd", cls.field)

    def test_square_restricts_to_lp(self) -> None:
        from quartic_mf.spinor import verify_mf_odd

        cert = verify_mf_odd(self.field, moment=self.moment)
        self.assertTrue(cert.passed, msg=cert.failure)
        self.assertEqual(cert.constants["lambda"], 1)
        self.assertEqual(cert.details["q_at_zero"], 0)

    def test_block_structure_on_lambda3(self) -> None:
        from quartic_mf.matfact import build_sy
        from quartic_mf.spinor import verify_block_structure

        cert = verify_block_structure(self.field, build_sy(self.field), moment=self.moment)
        self.assertTrue(cert.passed, msg=cert.failure)
        self.assertEqual(cert.constants["s"], 312)
        self.assertTrue(cert.details["lower_right_is_minus_antitranspose"])


if __name__ == "__main__":
    unittest.main()
