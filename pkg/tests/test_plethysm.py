"""Responsibility: Unit tests for root systems, weight multiplicities and plethysm decompositions."""

import unittest
from collections import Counter


class RootSystemTests(unittest.TestCase):
    def test_d6_cartan_fork(self) -> None:
        from quartic_mf.plethysm import dynkin_to_cartan

        A = dynkin_to_cartan("D", 6)
        self.assertTrue((A == A.T).all())
        self.assertEqual(A[3, 5], -1)
        self.assertEqual(A[4, 5], 0)
        self.assertEqual(int(A.sum()), 2)

    def test_root_counts(self) -> None:
        from quartic_mf.plethysm import root_system

        self.assertEqual(root_system("A5").root_count, 30)
        self.assertEqual(root_system("D6").root_count, 60)

    def test_unsupported_names(self) -> None:
        from quartic_mf.plethysm import dynkin_to_cartan, root_system

        with self.assertRaises(ValueError):
            root_system("E6")
        with self.assertRaises(ValueError):
            dynkin_to_cartan("B", 4)


class MultiplicityTests(unittest.TestCase):
    def test_fundamental_dimensions(self) -> None:
        from quartic_mf.plethysm import irrep_weights, root_system, weyl_dimension

        a5, d6 = root_system("A5"), root_system("D6")
        cases = [
            (a5, (0, 0, 1, 0, 0), 20),
            (d6, (0, 0, 0, 0, 0, 1), 32),
            (a5, (1, 0, 0, 0, 1), 35),
            (d6, (0, 1, 0, 0, 0, 0), 66),
        ]
        for rs, hw, dim in cases:
            self.assertEqual(weyl_dimension(rs, hw), dim)
            self.assertEqual(irrep_weights(rs, hw).mass, dim)

    def test_freudenthal_agrees_with_weyl_dimension(self) -> None:
        from quartic_mf.field import Rng
        from quartic_mf.plethysm import irrep_weights, root_system, weyl_dimension

        candidates = [
            ("A5", (1, 0, 0, 0, 0)), ("A5", (0, 1, 0, 0, 0)), ("A5", (2, 0, 0, 0, 0)),
            ("A5", (0, 1, 0, 1, 0)), ("A5", (1, 1, 0, 0, 0)), ("A5", (0, 0, 2, 0, 0)),
            ("D6", (1, 0, 0, 0, 0, 0)), ("D6", (2, 0, 0, 0, 0, 0)), ("D6", (0, 0, 0, 0, 1, 0)),
            ("D6", (0, 0, 0, 0, 0, 2)), ("D6", (1, 0, 0, 0, 0, 1)), ("D6", (0, 0, 1, 0, 0, 0)),
        ]
        rng = Rng(17)
        for _ in range(10):
            name, hw = candidates[rng.next() % len(candidates)]
            rs = root_system(name)
            self.assertEqual(irrep_weights(rs, hw).mass, weyl_dimension(rs, hw), msg=f"{name} {hw}")

    def test_adjoint_zero_weight_multiplicity(self) -> None:
        from quartic_mf.plethysm import dominant_multiplicities, root_system

        mult = dominant_multiplicities(root_system("D6"), (0, 1, 0, 0, 0, 0))
        self.assertEqual(mult[(0,) * 6], 6)

    def test_non_dominant_highest_weight_rejected(self) -> None:
        from quartic_mf.plethysm import dominant_multiplicities, root_system

        with self.assertRaises(ValueError):
            dominant_multiplicities(root_system("A5"), (1, -1, 0, 0, 0))


class DecomposeTests(unittest.TestCase):
    def test_single_irrep(self) -> None:
        from quartic_mf.plethysm import decompose, irrep_weights, root_system

        rs = root_system("A5")
        self.assertEqual(decompose(rs, irrep_weights(rs, (0, 1, 0, 1, 0))), [((0, 1, 0, 1, 0), 1)])

    def test_not_a_character(self) -> None:
        from quartic_mf.plethysm import WeightMultiset, decompose, root_system

        with self.assertRaises(ValueError):
            decompose(root_system("A5"), WeightMultiset(Counter({(1, 0, 0, 0, 0): 1})))

    def test_sym_power_range(self) -> None:
        from quartic_mf.plethysm import irrep_weights, root_system, sym_power_character

        v = irrep_weights(root_system("A5"), (1, 0, 0, 0, 0))
        self.assertEqual(sym_power_character(v, 2).mass, 21)
        with self.assertRaises(ValueError):
            sym_power_character(v, 5)

    def test_fourth_powers_and_endomorphisms(self) -> None:
        from quartic_mf.plethysm import PLETHYSM_CASES, expected_case, run_case, weyl_dimension

        masses = {"s4-lambda3": 8855, "s4-delta": 52360, "end6": 36, "end12": 144}
        for case in PLETHYSM_CASES:
            rs, character, parts = run_case(case)
            self.assertEqual(character.mass, masses[case], msg=case)
            self.assertEqual(sorted(mu for mu, _ in parts), sorted(expected_case(case)), msg=case)
            self.assertTrue(all(m == 1 for _, m in parts), msg=case)
            self.assertEqual(sum(m * weyl_dimension(rs, mu) for mu, m in parts), character.mass, msg=case)

    def test_unknown_case(self) -> None:
        from quartic_mf.plethysm import run_case

        with self.assertRaises(ValueError):
            run_case("s5-lambda3")


if __name__ == "__main__":
    unittest.main()
