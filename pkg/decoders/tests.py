import numpy as np
from django.conf import settings
from django.test import SimpleTestCase
from unittest import skipUnless

from protograph.ensembles import ensemble, ensemble_from_base
from protograph.matrices import sample_gamma
from ring.polynomials import sample_sparse
from simulation.sampling import sample_error_vector
from tanner.graph import TannerGraph, expand

from .message_passing import (
    ALGORITHM_E,
    ALGORITHM_SPA,
    DecoderConfig,
    DecoderInputError,
    DecoderStateError,
    bits_to_bipolar,
    channel_llr,
    check_node_update_e,
    decode,
    decode_e,
    decode_spa,
)


def reference_graph(Q=101, weight=5, seed=0):
    spec = ensemble_from_base([[weight, weight]], [], Q=Q)
    return expand(sample_gamma(spec, np.random.default_rng(seed)))


def random_codeword(graph, rng):
    """Palabra de código del grafo de referencia (h0, h1): x = (C1 u, C0 u)"""
    H = graph.parity_matrix().astype(np.int64)
    Q = graph.Q
    u = rng.integers(0, 2, Q)
    x0 = (H[:, Q:] @ u) % 2
    x1 = (H[:, :Q] @ u) % 2
    return np.concatenate([x0, x1])


class DecoderConfigTests(SimpleTestCase):

    def test_defaults(self):
        cfg = DecoderConfig()
        self.assertEqual(cfg.algorithm, ALGORITHM_E)
        self.assertEqual(cfg.max_iterations, 100)
        self.assertTrue(cfg.early_stop)

    def test_algorithm_aliases(self):
        self.assertEqual(DecoderConfig(algorithm='AlgE').algorithm, ALGORITHM_E)
        self.assertEqual(DecoderConfig(algorithm='spa').algorithm, ALGORITHM_SPA)
        with self.assertRaises(DecoderInputError):
            DecoderConfig(algorithm='min-sum')

    def test_rejects_negative_omega(self):
        with self.assertRaises(DecoderInputError):
            DecoderConfig(omega=-1)


class ChannelTests(SimpleTestCase):

    def test_llr(self):
        self.assertAlmostEqual(channel_llr(100, 10), np.log(9))
        self.assertEqual(channel_llr(100, 0), 30.0)
        self.assertEqual(channel_llr(100, 100), -30.0)
        with self.assertRaises(DecoderInputError):
            channel_llr(100, 101)


class CleanCodewordTests(SimpleTestCase):

    def setUp(self):
        self.graph = reference_graph()
        self.codeword = random_codeword(self.graph, np.random.default_rng(1))
        self.assertFalse(self.graph.syndrome(self.codeword).any())

    def test_spa(self):
        result = decode_spa(self.graph, bits_to_bipolar(self.codeword), 0, DecoderConfig(ALGORITHM_SPA))
        self.assertTrue(result.syndrome_zero)
        self.assertLessEqual(result.iterations_used, 1)
        np.testing.assert_array_equal(result.estimate, self.codeword)

    def test_algorithm_e(self):
        result = decode_e(self.graph, bits_to_bipolar(self.codeword), DecoderConfig(ALGORITHM_E))
        self.assertTrue(result.syndrome_zero)
        self.assertLessEqual(result.iterations_used, 1)
        np.testing.assert_array_equal(result.estimate, self.codeword)

    def test_state_graph(self):
        gamma = sample_gamma(ensemble('C', 101), np.random.default_rng(2))
        graph = expand(gamma, {0})
        ciphertext = np.ones(graph.observed_count, dtype=np.int8)
        for cfg in (DecoderConfig(ALGORITHM_SPA), DecoderConfig(ALGORITHM_E, omega=8)):
            result = decode(graph, ciphertext, 0, cfg)
            self.assertTrue(result.syndrome_zero)
            self.assertFalse(result.full_estimate.any())

    def test_dimension_mismatch(self):
        with self.assertRaises(DecoderInputError):
            decode_e(self.graph, np.ones(3), DecoderConfig())
        with self.assertRaises(DecoderInputError):
            decode_e(self.graph, np.zeros(self.graph.observed_count), DecoderConfig())


class NoisyDecodingTests(SimpleTestCase):

    def test_omega_zero_returns_channel_decisions(self):
        graph = reference_graph()
        rng = np.random.default_rng(3)
        noisy = sample_error_vector(graph.observed_count, 4, rng)
        cfg = DecoderConfig(ALGORITHM_SPA, omega=0, max_iterations=5)
        result = decode_spa(graph, bits_to_bipolar(noisy), 4, cfg)
        np.testing.assert_array_equal(result.estimate, noisy)
        self.assertFalse(result.syndrome_zero)

    def test_complement_symmetry(self):
        graph = reference_graph()
        rng = np.random.default_rng(4)
        c = bits_to_bipolar(sample_error_vector(graph.observed_count, 6, rng))
        for cfg in (
            DecoderConfig(ALGORITHM_SPA, omega=0.8, max_iterations=10, early_stop=False),
            DecoderConfig(ALGORITHM_E, omega=2, max_iterations=10, early_stop=False),
        ):
            a = decode(graph, c, 6, cfg)
            b = decode(graph, -c, 6, cfg)
            np.testing.assert_array_equal(a.estimate, 1 - b.estimate)

    def test_deterministic_without_early_stop(self):
        graph = reference_graph()
        c = bits_to_bipolar(sample_error_vector(graph.observed_count, 5, np.random.default_rng(5)))
        cfg = DecoderConfig(ALGORITHM_SPA, max_iterations=20, early_stop=False)
        a = decode(graph, c, 5, cfg)
        b = decode(graph, c, 5, cfg)
        np.testing.assert_array_equal(a.full_estimate, b.full_estimate)
        self.assertEqual(a.iterations_used, 20)

    def test_reference_ensemble_corrects_few_errors(self):
        spec = ensemble('A', 4801)
        rng = np.random.default_rng(6)
        graph = expand(sample_gamma(spec, rng))
        error = sample_error_vector(graph.observed_count, 30, rng)
        for cfg in (DecoderConfig(ALGORITHM_SPA), DecoderConfig(ALGORITHM_E)):
            result = decode(graph, bits_to_bipolar(error), 30, cfg)
            self.assertTrue(result.syndrome_zero)
            np.testing.assert_array_equal(result.estimate, np.zeros(9602, dtype=np.uint8))

    @skipUnless(settings.MDPC_SLOW_TESTS, 'prueba larga (MDPC_SLOW_TESTS=1)')
    def test_spa_reference_ensemble_success_rate(self):
        spec = ensemble('A', 4801)
        rng = np.random.default_rng(7)
        cfg = DecoderConfig(ALGORITHM_SPA, omega=1.0)
        successes = 0
        for _ in range(200):
            graph = expand(sample_gamma(spec, rng))
            error = sample_error_vector(graph.observed_count, 30, rng)
            result = decode(graph, bits_to_bipolar(error), 30, cfg)
            successes += result.syndrome_zero and not result.estimate.any()
        self.assertGreaterEqual(successes, 198)

    @skipUnless(settings.MDPC_SLOW_TESTS, 'prueba larga (MDPC_SLOW_TESTS=1)')
    def test_algorithm_e_state_ensemble(self):
        spec = ensemble('C', 4801)
        rng = np.random.default_rng(8)
        cfg = DecoderConfig(ALGORITHM_E, omega=8)
        successes = 0
        for _ in range(200):
            graph = expand(sample_gamma(spec, rng), {0})
            error = sample_error_vector(graph.observed_count, 100, rng)
            result = decode(graph, bits_to_bipolar(error), 100, cfg)
            successes += result.syndrome_zero and not result.estimate.any()
        self.assertGreater(successes, 100)


class TernaryRuleTests(SimpleTestCase):

    def setUp(self):
        # CN 0 con VN 0, 1, 2
        self.graph = TannerGraph(1, [0, 0, 0], [0], [0, 0, 0], [0, 1, 2])

    def test_erasure_blocks_other_edges(self):
        out = check_node_update_e(self.graph, np.array([0, 1, -1], dtype=np.int8))
        np.testing.assert_array_equal(out, [-1, 0, 0])

    def test_sign_product(self):
        out = check_node_update_e(self.graph, np.array([-1, 1, -1], dtype=np.int8))
        np.testing.assert_array_equal(out, [-1, 1, -1])

    def test_rejects_out_of_alphabet(self):
        with self.assertRaises(DecoderStateError):
            check_node_update_e(self.graph, np.array([2, 1, 1], dtype=np.int8))


class OrphanStateNodeTests(SimpleTestCase):

    def test_degree_zero_state_vn(self):
        # VN 0 de estado sin aristas; CN 0 comprueba VN 1 y VN 2
        graph = TannerGraph(1, [0, 1, 2], [0], [0, 0], [1, 2], state_columns={0})
        for cfg in (DecoderConfig(ALGORITHM_SPA), DecoderConfig(ALGORITHM_E)):
            result = decode(graph, np.array([-1, -1], dtype=np.int8), 1, cfg)
            self.assertTrue(result.syndrome_zero)
            np.testing.assert_array_equal(result.estimate, [1, 1])
            self.assertEqual(result.full_estimate[0], 0)
