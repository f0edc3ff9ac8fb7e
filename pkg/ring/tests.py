import itertools

import numpy as np
from django.conf import settings
from django.test import SimpleTestCase
from unittest import skipUnless

from .polynomials import (
    DensePolynomial,
    NonInvertibleError,
    RingMismatchError,
    SparsePolynomial,
    add,
    bits_from_hex,
    bits_to_hex,
    circulant,
    invert,
    mul_dense,
    mul_mod,
    mul_sparse_dense,
    sample_sparse,
    transpose,
)


def poly(Q, *support):
    return SparsePolynomial(Q, tuple(support))


class SparsePolynomialTests(SimpleTestCase):

    def test_rejects_unsorted_or_out_of_range_support(self):
        with self.assertRaises(ValueError):
            SparsePolynomial(7, (3, 1))
        with self.assertRaises(ValueError):
            SparsePolynomial(7, (1, 1))
        with self.assertRaises(ValueError):
            SparsePolynomial(7, (7,))

    def test_from_exponents_cancels_pairs(self):
        self.assertEqual(SparsePolynomial.from_exponents(7, [1, 8, 3, 10]).support, ())
        self.assertEqual(SparsePolynomial.from_exponents(7, [0, 7, 7]).support, (0,))

    def test_record_roundtrip(self):
        a = poly(31, 0, 4, 17)
        self.assertEqual(SparsePolynomial.from_record(a.to_record()), a)

    def test_dense_roundtrip_and_hex(self):
        a = poly(13, 0, 2, 12)
        dense = a.to_dense()
        self.assertEqual(dense.to_sparse(), a)
        # bit 0 y bit 2 en el primer byte, bit 12 es el bit 4 del segundo
        self.assertEqual(dense.to_hex(), '0510')
        self.assertEqual(DensePolynomial.from_hex(13, dense.to_hex()), dense)

    def test_hex_rejects_wrong_length_and_padding(self):
        with self.assertRaises(ValueError):
            DensePolynomial.from_hex(13, '05')
        with self.assertRaises(ValueError):
            DensePolynomial.from_hex(13, '05f0')

    def test_bit_vector_hex(self):
        bits = np.array([1, 0, 0, 0, 0, 0, 0, 0, 1, 1], dtype=np.uint8)
        self.assertEqual(bits_to_hex(bits), '0103')
        np.testing.assert_array_equal(bits_from_hex(10, '0103'), bits)
        with self.assertRaises(ValueError):
            bits_from_hex(10, '01zz')


class AddTests(SimpleTestCase):

    def test_gf2_cancellation(self):
        self.assertEqual(add(poly(7, 0, 1), poly(7, 1, 3)), poly(7, 0, 3))

    def test_self_sum_is_zero(self):
        a = poly(7, 0, 2, 5)
        self.assertTrue(add(a, a).is_zero)

    def test_zero_is_identity(self):
        a = poly(7, 0, 2, 5)
        self.assertEqual(a + SparsePolynomial.zero(7), a)

    def test_mismatched_rings(self):
        with self.assertRaises(RingMismatchError):
            add(poly(7, 0), poly(11, 0))


class MulTests(SimpleTestCase):

    def test_small_product(self):
        self.assertEqual(mul_mod(poly(7, 0, 1), poly(7, 0, 1, 3)), poly(7, 0, 2, 3, 4))

    def test_identity_and_annihilator(self):
        a = poly(7, 1, 4, 6)
        self.assertEqual(a * SparsePolynomial.one(7), a)
        self.assertTrue((a * SparsePolynomial.zero(7)).is_zero)

    def test_mismatched_rings(self):
        with self.assertRaises(RingMismatchError):
            mul_mod(poly(7, 0), poly(11, 0))

    def test_matches_circulant_product(self):
        rng = np.random.default_rng(11)
        for Q in (2, 5, 13, 31):
            for _ in range(10):
                a = sample_sparse(Q, int(rng.integers(0, Q + 1)), rng)
                b = sample_sparse(Q, int(rng.integers(0, Q + 1)), rng)
                expected = (circulant(a).astype(int) @ circulant(b).astype(int)) % 2
                np.testing.assert_array_equal(circulant(mul_mod(a, b)), expected)

    def test_dense_products_agree_with_sparse(self):
        rng = np.random.default_rng(5)
        Q = 31
        for _ in range(10):
            a = sample_sparse(Q, 6, rng)
            b = sample_sparse(Q, 15, rng)
            expected = mul_mod(a, b).to_dense()
            self.assertEqual(mul_sparse_dense(a, b.to_dense()), expected)
            self.assertEqual(mul_dense(a.to_dense(), b.to_dense()), expected)

    def test_dense_product_exact_at_key_size(self):
        rng = np.random.default_rng(8)
        Q = 4801
        a = sample_sparse(Q, 45, rng)
        b = sample_sparse(Q, Q // 2, rng)
        expected = mul_mod(a, b).to_dense()
        self.assertEqual(mul_sparse_dense(a, b.to_dense()), expected)
        self.assertEqual(mul_dense(a.to_dense(), b.to_dense()), expected)
        self.assertEqual(mul_dense(b.to_dense(), b.to_dense()), mul_mod(b, b).to_dense())


class RingLawTests(SimpleTestCase):

    def test_laws_on_random_triples(self):
        rng = np.random.default_rng(2024)
        for Q in (7, 13, 31):
            for _ in range(20):
                a, b, c = (sample_sparse(Q, int(rng.integers(0, Q + 1)), rng) for _ in range(3))
                self.assertEqual(a + b, b + a)
                self.assertEqual(a * b, b * a)
                self.assertEqual((a + b) + c, a + (b + c))
                self.assertEqual((a * b) * c, a * (b * c))
                self.assertEqual(a * (b + c), a * b + a * c)
                self.assertLessEqual((a * b).weight, a.weight * b.weight)
                self.assertLessEqual((a + b).weight, a.weight + b.weight)

    def test_transpose_is_antihomomorphic_and_commutative(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = sample_sparse(31, 5, rng)
            b = sample_sparse(31, 9, rng)
            self.assertEqual(transpose(a * b), transpose(a) * transpose(b))


class TransposeTests(SimpleTestCase):

    def test_small_cases(self):
        self.assertEqual(transpose(poly(7, 0)), poly(7, 0))
        self.assertEqual(transpose(poly(7, 1, 3)), poly(7, 4, 6))

    def test_involution_and_weight(self):
        a = poly(31, 0, 5, 9, 30)
        self.assertEqual(transpose(transpose(a)), a)
        self.assertEqual(transpose(a).weight, a.weight)

    def test_matches_matrix_transpose(self):
        a = poly(13, 1, 2, 7)
        np.testing.assert_array_equal(circulant(transpose(a)), circulant(a).T)
        self.assertEqual(transpose(a.to_dense()), transpose(a).to_dense())


class InvertTests(SimpleTestCase):

    def test_one_is_self_inverse(self):
        self.assertEqual(invert(SparsePolynomial.one(7)), SparsePolynomial.one(7))

    def test_small_inverse(self):
        a = poly(7, 0, 1, 3)
        self.assertEqual(a * invert(a), SparsePolynomial.one(7))

    def test_inverse_matches_exhaustive_search(self):
        Q = 7
        a = poly(Q, 0, 1, 3)
        candidates = [
            SparsePolynomial(Q, support)
            for w in range(Q + 1)
            for support in itertools.combinations(range(Q), w)
        ]
        found = [b for b in candidates if (a * b) == SparsePolynomial.one(Q)]
        self.assertEqual(found, [invert(a)])

    def test_even_weight_is_not_invertible(self):
        with self.assertRaises(NonInvertibleError):
            invert(poly(13, 0, 4))
        with self.assertRaises(NonInvertibleError):
            invert(poly(31, 1, 2, 3, 9))

    def test_zero_is_not_invertible(self):
        with self.assertRaises(NonInvertibleError):
            invert(SparsePolynomial.zero(7))

    def test_monomials_are_invertible(self):
        for e in range(13):
            self.assertEqual(invert(poly(13, e)), transpose(poly(13, e)))

    def test_random_odd_weight_at_full_size(self):
        rng = np.random.default_rng(9)
        a = sample_sparse(4801, 45, rng)
        self.assertEqual(a * invert(a), SparsePolynomial.one(4801))


class SampleSparseTests(SimpleTestCase):

    def test_edge_weights(self):
        rng = np.random.default_rng(0)
        self.assertTrue(sample_sparse(13, 0, rng).is_zero)
        self.assertEqual(sample_sparse(13, 13, rng).support, tuple(range(13)))

    def test_rejects_excess_weight(self):
        with self.assertRaises(ValueError):
            sample_sparse(13, 14, np.random.default_rng(0))

    def test_deterministic_for_seed(self):
        a = sample_sparse(4801, 45, np.random.default_rng(77))
        b = sample_sparse(4801, 45, np.random.default_rng(77))
        self.assertEqual(a, b)

    @skipUnless(settings.MDPC_SLOW_TESTS, 'prueba larga (MDPC_SLOW_TESTS=1)')
    def test_uniform_positions(self):
        rng = np.random.default_rng(1)
        draws = 100_000
        counts = np.zeros(13)
        for _ in range(draws):
            counts[list(sample_sparse(13, 3, rng).support)] += 1
        expected = draws * 3 / 13
        chi2 = float(((counts - expected) ** 2 / expected).sum())
        # 12 grados de libertad, cuantil 0.999 ~ 32.9
        self.assertLess(chi2, 32.9)
