"""Responsibility: Unit tests for graded cokernel pieces, the precomposition complex and Hom/Ext dimensions."""

import unittest

from quartic_mf.config import RUN_SLOW


class GradedPieceTests(unittest.TestCase):
    @classmethod
    def setUpClass(cls) -> None:
        from quartic_mf.families import build_family
        from quartic_mf.field import make_field

        cls.field = make_field(313)
        cls.instance = build_family("sl6-x5", cls.field, 11)
        cls.pres = cls.instance.presentation()

    def test_quotient_ring_degree_four(self) -> None:
        from quartic_mf.poly import monomial_basis

        ring = self.pres.ring
        self.assertEqual(len(monomial_basis(ring, 4)) - len(monomial_basis(ring, 0)), 147)

    def test_low_degree_pieces(self) -> None:
        from quartic_mf.homalg import hilbert_function, module_piece

        self.assertEqual(module_piece(self.pres, 0).dim, 6)
        self.assertEqual(module_piece(self.pres, -1).dim, 0)
        self.assertEqual(module_piece(self.pres, 2).dim, 6 * 22 - 6)
        self.assertEqual(hilbert_function(self.pres, [-2, 0, 2, 3]), {
            -2: 0, 0: 6, 2: module_piece(self.pres, 2).dim, 3: module_piece(self.pres, 3).dim,
        })

    def test_projection_kills_relations(self) -> None:
        from quartic_mf.homalg import _sparse_relations, module_piece
        from quartic_mf.linalg import matmul

        piece = module_piece(self.pres, 3)
        relations = _sparse_relations(self.pres, 3).toarray() % 313
        self.assertFalse(matmul(relations, piece.projection.T % 313, self.field).any())

    def test_precomposition_complex(self) -> None:
        from quartic_mf.homalg import complex_check

        self.assertTrue(complex_check(self.pres, self.pres, max_degree=6))

    def test_presentation_steps_and_shifts(self) -> None:
        self.assertEqual(self.pres.w_degree, 4)
        self.assertEqual([self.pres.shift(i) for i in range(4)], [0, 2, 4, 6])
        self.assertIs(self.pres.step(1), self.pres.partner)


class SL6ExtTests(unittest.TestCase):
    def test_sl6_x5_is_simple_and_rigid(self) -> None:
        from quartic_mf.families import build_family
        from quartic_mf.field import make_field
        from quartic_mf.homalg import DegreeZeroComplex, ext_sheaf, hom_sheaf

        instance = build_family("sl6-x5", make_field(313), 11)
        E = instance.presentation()
        cx = DegreeZeroComplex(E, E)
        hom = hom_sheaf(E, E, seed=11, family="sl6-x5", with_witness=True, complex_=cx)
        ext1 = ext_sheaf(E, E, 1, seed=11, family="sl6-x5", complex_=cx)
        self.assertEqual(hom.dim_ext, 1)
        self.assertEqual(len(hom.witness), 1)
        self.assertEqual(ext1.dim_ext, 0)
        self.assertEqual(ext1.dim_image, cx.source_dim(0) - hom.dim_kernel)
        self.assertEqual(set(hom.to_json()), {
            "task", "family", "prime", "seed", "i", "dim_kernel", "dim_image", "dim_ext", "elapsed_ms", "status",
        })

    def test_sl6_q4_first_order_deformations(self) -> None:
        from quartic_mf.families import build_family
        from quartic_mf.field import make_field
        from quartic_mf.homalg import ext_sheaf

        instance = build_family("sl6-q4", make_field(313), 1)
        F = instance.presentation()
        self.assertEqual(ext_sheaf(F, F, 1, seed=1, family="sl6-q4").dim_ext, 21)

    def test_kernel_rank_three_on_the_quartic(self) -> None:
        from quartic_mf.families import build_family
        from quartic_mf.field import make_field
        from quartic_mf.homalg import rank3_at_point

        instance = build_family("sl6-q4", make_field(313), 1)
        S = instance.restricted
        point = rank3_at_point(S, (S @ S).scalar_value(), seed=1)
        self.assertEqual(point.kernel_dim, 3)
        self.assertEqual((S @ S).scalar_value().evaluate(list(point.point)), 0)

    def test_ext_index_validation(self) -> None:
        from quartic_mf.families import build_family
        from quartic_mf.field import make_field
        from quartic_mf.homalg import ext_sheaf

        E = build_family("sl6-x5", make_field(313), 11).presentation()
        with self.assertRaises(ValueError):
            ext_sheaf(E, E, 0)

    def test_mismatched_potentials_rejected(self) -> None:
        from quartic_mf.families import build_family
        from quartic_mf.field import make_field
        from quartic_mf.homalg import DegreeZeroComplex

        field = make_field(313)
        E = build_family("sl6-x5", field, 11).presentation()
        F = build_family("sl6-x5", field, 12).presentation()
        with self.assertRaises(ValueError):
            DegreeZeroComplex(E, F)


class Lambda3BlockTests(unittest.TestCase):
    @classmethod
    def setUpClass(cls) -> None:
        from quartic_mf.families import build_family
        from quartic_mf.field import make_field

        cls.field = make_field(313)
        cls.instance = build_family("spin12-special", cls.field, 1)

    def test_upper_block_of_mu_is_transposed_sy(self) -> None:
        from quartic_mf.matfact import build_sy, restrict_to_section

        S = restrict_to_section(build_sy(self.field), self.instance.lambda3_section)
        self.assertTrue((self.instance.restricted.block(0, 6, 0, 6) - S.transpose()).is_zero())
        self.assertTrue((self.instance.mfs["E_mu"].B - self.instance.mfs["G"].B).is_zero())

    def test_e_and_g_share_the_potential(self) -> None:
        mfs = self.instance.mfs
        self.assertEqual(mfs["E"].W, mfs["G"].W)
        self.assertEqual(mfs["E"].W, mfs["Etilde"].W)
        self.assertTrue(mfs["G"].verify().passed)

    def test_cross_terms_between_e_and_g_vanish(self) -> None:
        from quartic_mf.homalg import DegreeZeroComplex, ext_sheaf, hom_sheaf

        E, G = self.instance.presentation("E"), self.instance.presentation("G")
        for source, target in ((E, G), (G, E)):
            cx = DegreeZeroComplex(source, target)
            self.assertEqual(hom_sheaf(source, target, complex_=cx).dim_ext, 0)
            self.assertEqual(ext_sheaf(source, target, 1, complex_=cx).dim_ext, 0)

    def test_each_block_is_simple_and_rigid(self) -> None:
        from quartic_mf.homalg import DegreeZeroComplex, ext_sheaf, hom_sheaf

        for key in ("E", "G"):
            P = self.instance.presentation(key)
            cx = DegreeZeroComplex(P, P)
            self.assertEqual(hom_sheaf(P, P, complex_=cx).dim_ext, 1, msg=key)
            self.assertEqual(ext_sheaf(P, P, 1, complex_=cx).dim_ext, 0, msg=key)


@unittest.skipUnless(RUN_SLOW, "set QMF_RUN_SLOW=1 for the rank-12 Ext computations")
class Spin12ExtTests(unittest.TestCase):
    def test_generic_section_is_simple_and_rigid(self) -> None:
        from quartic_mf.families import build_family
        from quartic_mf.field import make_field
        from quartic_mf.homalg import DegreeZeroComplex, ext_sheaf, hom_sheaf

        E = build_family("spin12-x5", make_field(313), 1).presentation()
        cx = DegreeZeroComplex(E, E)
        self.assertEqual(hom_sheaf(E, E, complex_=cx).dim_ext, 1)
        self.assertEqual(ext_sheaf(E, E, 1, complex_=cx).dim_ext, 0)

    def test_special_section_splits(self) -> None:
        from quartic_mf.families import build_family
        from quartic_mf.field import make_field
        from quartic_mf.homalg import DegreeZeroComplex, ext_sheaf, hom_sheaf

        instance = build_family("spin12-special", make_field(313), 1)
        Et = instance.presentation()
        self.assertEqual(hom_sheaf(Et, Et).dim_ext, 2)
        E, G = instance.presentation("E"), instance.presentation("G")
        for source, target in ((E, G), (G, E)):
            cx = DegreeZeroComplex(source, target)
            self.assertEqual(hom_sheaf(source, target, complex_=cx).dim_ext, 0)
            self.assertEqual(ext_sheaf(source, target, 1, complex_=cx).dim_ext, 0)

    def test_special_section_is_not_spherical(self) -> None:
        from quartic_mf.families import build_family
        from quartic_mf.field import make_field
        from quartic_mf.homalg import is_spherical, spherical_profile

        Et = build_family("spin12-special", make_field(313), 1).presentation()
        profile = spherical_profile(Et, top=1)
        self.assertEqual(profile, (2, 42))
        self.assertFalse(is_spherical(profile))

    def test_generic_section_is_spherical(self) -> None:
        from quartic_mf.families import build_family
        from quartic_mf.field import make_field
        from quartic_mf.homalg import is_spherical, spherical_profile

        profile = spherical_profile(build_family("spin12-x5", make_field(313), 1).presentation())
        self.assertEqual(profile, (1, 0, 0, 1))
        self.assertTrue(is_spherical(profile))

    def test_ext_drops_from_special_to_generic_section(self) -> None:
        from quartic_mf.families import build_family
        from quartic_mf.field import make_field
        from quartic_mf.homalg import spherical_profile

        field = make_field(313)
        special = spherical_profile(build_family("spin12-special", field, 1).presentation(), top=1)
        generic = spherical_profile(build_family("spin12-odd", field, 1).presentation(), top=1)
        for i in (0, 1):
            self.assertLessEqual(generic[i], special[i], msg=f"Ext^{i}")

    def test_ext_task_passes_for_special_section(self) -> None:
        from quartic_mf import app
        from quartic_mf.reports import RunConfig

        rc, report = app.run("ext", RunConfig(task="ext", family="spin12-special", seed=1, timeout_s=86400))
        self.assertEqual(rc, 0, msg=[c for c in report["checks"] if c["status"] != "pass"])


if __name__ == "__main__":
    unittest.main()
