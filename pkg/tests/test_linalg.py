"""Responsibility: Unit tests for exact rank, kernels, streaming elimination and products."""

import unittest

import numpy as np
import scipy.sparse as sp


def naive_rank(rows: list[list[int]], p: int) -> int:
    A = [[v % p for v in row] for row in rows]
    rank, ncols = 0, len(A[0]) if A else 0
    for c in range(ncols):
        pivot = next((r for r in range(rank, len(A)) if A[r][c]), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        inv = pow(A[rank][c], -1, p)
        A[rank] = [v * inv % p for v in A[rank]]
        for r in range(len(A)):
            if r != rank and A[r][c]:
                f = A[r][c]
                A[r] = [(a - f * b) % p for a, b in zip(A[r], A[rank])]
        rank += 1
    return rank


class RankTests(unittest.TestCase):
    def setUp(self) -> None:
        from quartic_mf.field import make_field

        self.field = make_field(313)

    def test_matches_naive_elimination_on_random_matrices(self) -> None:
        from quartic_mf.field import Rng
        from quartic_mf.linalg import rank

        rng = Rng(5)
        for trial in range(12):
            rows = rng.matrix(20, 20, self.field)
            if trial % 3 == 0:
                rows[5] = [(a + 2 * b) % 313 for a, b in zip(rows[1], rows[2])]
                rows[9] = list(rows[3])
            self.assertEqual(rank(rows, self.field), naive_rank(rows, 313), msg=f"trial {trial}")

    def test_rank_kernel_examples(self) -> None:
        from quartic_mf.linalg import rank_kernel

        result = rank_kernel([[1, 2, 3], [2, 4, 6]], self.field)
        self.assertEqual(result.rank, 1)
        self.assertEqual(result.nullity, 2)
        product = np.array([[1, 2, 3]]) @ result.kernel.T % 313
        self.assertFalse(product.any())

    def test_zero_matrix(self) -> None:
        from quartic_mf.linalg import rank_kernel

        result = rank_kernel(np.zeros((3, 4), dtype=np.int64), self.field)
        self.assertEqual(result.rank, 0)
        self.assertEqual(result.nullity, 4)

    def test_sparse_path_agrees_with_dense(self) -> None:
        from quartic_mf.field import Rng
        from quartic_mf.linalg import rank

        rng = Rng(11)
        dense = np.zeros((30, 25), dtype=np.int64)
        for _ in range(70):
            dense[rng.next() % 30, rng.next() % 25] = rng.nonzero_element(self.field)
        self.assertEqual(rank(sp.csr_matrix(dense), self.field), naive_rank(dense.tolist(), 313))

    def test_streaming_blocks_match_one_shot(self) -> None:
        from quartic_mf.field import Rng
        from quartic_mf.linalg import rref, rref_stream

        M = np.array(Rng(3).matrix(40, 15, self.field), dtype=np.int64)
        streamed = rref_stream([M[:13], M[13:29], M[29:]], 15, self.field, block_rows=16)
        whole = rref(M, self.field)
        self.assertEqual(streamed.pivots, whole.pivots)
        self.assertTrue(np.array_equal(streamed.rows % 313, whole.rows % 313))

    def test_reduce_kills_row_space(self) -> None:
        from quartic_mf.field import Rng
        from quartic_mf.linalg import matmul, rref

        rng = Rng(4)
        M = np.array(rng.matrix(6, 10, self.field), dtype=np.int64)
        combo = matmul(np.array(rng.matrix(3, 6, self.field), dtype=np.int64), M, self.field)
        self.assertFalse(rref(M, self.field).reduce(combo).any())


class ProductTests(unittest.TestCase):
    def test_matmul_matches_python_ints_for_large_prime(self) -> None:
        from quartic_mf.field import Rng, make_field
        from quartic_mf.linalg import matmul

        field = make_field(2147483629)
        rng = Rng(9)
        A = np.array(rng.matrix(4, 7, field), dtype=np.int64)
        B = np.array(rng.matrix(7, 3, field), dtype=np.int64)
        expected = [[sum(int(A[r, k]) * int(B[k, c]) for k in range(7)) % field.p for c in range(3)] for r in range(4)]
        self.assertEqual(matmul(A, B, field).tolist(), expected)

    def test_det_of_permutation_and_singular(self) -> None:
        from quartic_mf.field import make_field
        from quartic_mf.linalg import det

        field = make_field(313)
        self.assertEqual(det([[0, 1], [1, 0]], field), 312)
        self.assertEqual(det([[1, 2], [2, 4]], field), 0)
        with self.assertRaises(ValueError):
            det([[1, 2, 3]], field)


class ExtensionFieldTests(unittest.TestCase):
    def test_rank_over_f_p_squared(self) -> None:
        from quartic_mf.field import make_field
        from quartic_mf.linalg import rank

        field = make_field(331)
        i = field.sqrt_minus_one
        # Rows (1, i) and (i, -1) are dependent over F_p[i].
        M = [[1, i], [i, field.pack(-1, 0)]]
        self.assertEqual(rank(M, field), 1)
        self.assertEqual(rank([[1, i], [1, 0]], field), 2)


if __name__ == "__main__":
    unittest.main()
