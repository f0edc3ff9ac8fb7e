import numpy as np
from django.conf import settings
from django.test import SimpleTestCase
from unittest import skipUnless

from ring.polynomials import SparsePolynomial, circulant

from .ensembles import (
    BaseMatrix,
    EnsembleError,
    ensemble,
    ensemble_from_base,
    key_space_bits,
    weight_bound,
)
from .matrices import PolyMatrix, derive_H, sample_gamma


class EnsembleTests(SimpleTestCase):

    def test_reference_ensemble(self):
        spec = ensemble('A', 4801)
        self.assertEqual(spec.base.rows, ((45, 45),))
        self.assertFalse(spec.has_state)
        self.assertEqual(spec.block_length, 9602)
        self.assertEqual(spec.dimension, 4801)

    def test_state_ensembles(self):
        b = ensemble('B', 4801)
        c = ensemble('C', 4801)
        self.assertEqual(b.base.rows, ((1, 8, 8), (5, 5, 5)))
        self.assertEqual(c.base.rows, ((1, 22, 22), (2, 1, 1)))
        self.assertEqual(c.base.state_columns, frozenset({0}))
        self.assertEqual(c.block_length, 9602)
        self.assertEqual(c.extended_vn_count, 3 * 4801)

    def test_unknown_name(self):
        with self.assertRaises(EnsembleError):
            ensemble('Z')

    def test_entries_bounded_by_Q(self):
        with self.assertRaises(EnsembleError):
            ensemble('A', 13)

    def test_custom_base_shapes(self):
        spec = ensemble_from_base([[1, 2, 2], [1, 1, 1]], [0], Q=13)
        self.assertTrue(spec.base.is_state_family)
        with self.assertRaises(EnsembleError):
            ensemble_from_base([[2, 2, 2], [1, 1, 1]], [0], Q=13)
        with self.assertRaises(EnsembleError):
            ensemble_from_base([[1, 1, 1]], [], Q=13)


class WeightBoundTests(SimpleTestCase):

    def test_builtin_bounds(self):
        self.assertEqual(weight_bound(ensemble('B').base), 90)
        self.assertEqual(weight_bound(ensemble('C').base), 90)
        self.assertEqual(weight_bound(ensemble('A').base), 90)

    def test_zero_off_diagonals(self):
        base = BaseMatrix(((1, 0, 0), (0, 3, 4)), frozenset({0}))
        self.assertEqual(weight_bound(base), 7)

    def test_wrong_shape(self):
        with self.assertRaises(EnsembleError):
            weight_bound(BaseMatrix(((1, 2, 3, 4),)))


class KeySpaceTests(SimpleTestCase):

    def test_table_values(self):
        self.assertAlmostEqual(key_space_bits(ensemble('A', 4801)), 715, delta=1)
        self.assertAlmostEqual(key_space_bits(ensemble('B', 4801)), 328, delta=1)
        self.assertAlmostEqual(key_space_bits(ensemble('C', 4801)), 446, delta=1)

    def test_trivial_entries_give_single_key(self):
        spec = ensemble_from_base([[0, 13]], [], Q=13)
        self.assertEqual(key_space_bits(spec), 0)
        spec = ensemble_from_base([[1, 0, 13], [0, 13, 0]], [0], Q=13)
        self.assertEqual(key_space_bits(spec), 0)

    def test_monotone_in_entries(self):
        previous = -1.0
        for b in range(1, 40):
            bits = key_space_bits(ensemble_from_base([[1, b, 5], [2, 1, 1]], [0], Q=101))
            self.assertGreater(bits, previous)
            previous = bits


class SampleGammaTests(SimpleTestCase):

    def test_weights_follow_base(self):
        gamma = sample_gamma(ensemble('C', 4801), np.random.default_rng(1))
        self.assertEqual(gamma.weights(), [[1, 22, 22], [2, 1, 1]])
        self.assertEqual(gamma[0, 0], SparsePolynomial.one(4801))

    def test_zero_entry(self):
        spec = ensemble_from_base([[1, 0, 3], [1, 2, 2]], [0], Q=13)
        gamma = sample_gamma(spec, np.random.default_rng(2))
        self.assertTrue(gamma[0, 1].is_zero)

    def test_deterministic_for_seed(self):
        spec = ensemble('B', 4801)
        self.assertEqual(
            sample_gamma(spec, np.random.default_rng(5)),
            sample_gamma(spec, np.random.default_rng(5)),
        )


class DeriveHTests(SimpleTestCase):

    def test_degenerate_reduction(self):
        Q = 13
        g11 = SparsePolynomial(Q, (2, 5))
        g12 = SparsePolynomial(Q, (7,))
        zero = SparsePolynomial.zero(Q)
        gamma = PolyMatrix((
            (SparsePolynomial.one(Q), zero, zero),
            (SparsePolynomial(Q, (1, 4)), g11, g12),
        ))
        h = derive_H(gamma)
        self.assertEqual((h[0, 0], h[0, 1]), (g11, g12))

    def test_matches_binary_elimination(self):
        Q = 13
        p = lambda *s: SparsePolynomial(Q, s)  # noqa: E731
        gamma = PolyMatrix((
            (p(0), p(1, 5), p(3, 4, 11)),
            (p(2, 9), p(6), p(0)),
        ))
        h = derive_H(gamma)
        g = [[circulant(x).astype(int) for x in row] for row in gamma.entries]
        # Eliminar el bloque de estado: fila1 - G10 * fila0 (G00 = I)
        expected0 = (g[1][1] + g[1][0] @ g[0][1]) % 2
        expected1 = (g[1][2] + g[1][0] @ g[0][2]) % 2
        np.testing.assert_array_equal(circulant(h[0, 0]), expected0)
        np.testing.assert_array_equal(circulant(h[0, 1]), expected1)

    def test_rejects_wrong_shape(self):
        one = SparsePolynomial.one(7)
        with self.assertRaises(EnsembleError):
            derive_H(PolyMatrix(((one, one),)))
        with self.assertRaises(EnsembleError):
            derive_H(PolyMatrix(((SparsePolynomial(7, (1,)), one, one), (one, one, one))))

    def test_row_weight_bound(self):
        rng = np.random.default_rng(3)
        for name in ('B', 'C'):
            spec = ensemble(name, 4801)
            for _ in range(50):
                h = derive_H(sample_gamma(spec, rng))
                self.assertLessEqual(h.row_weight, weight_bound(spec.base))

    @skipUnless(settings.MDPC_SLOW_TESTS, 'prueba larga (MDPC_SLOW_TESTS=1)')
    def test_row_weight_bound_thousand_keys(self):
        rng = np.random.default_rng(4)
        for name in ('B', 'C'):
            spec = ensemble(name, 4801)
            for _ in range(1000):
                h = derive_H(sample_gamma(spec, rng))
                self.assertLessEqual(h.row_weight, 90)
