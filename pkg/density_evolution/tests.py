import numpy as np
from django.conf import settings
from django.test import SimpleTestCase, TestCase
from unittest import skipUnless

from protograph.ensembles import ensemble, ensemble_from_base

from .algorithm_e import (
    LatticePMF,
    TernaryPMF,
    app_e,
    channel_prime_vector,
    channel_vector,
    cn_update_e,
    de_run_e,
    unstructured_de_run_e,
    vn_update_e,
)
from .models import ThresholdRecord
from .quantized import (
    Quantizer,
    QuantizedLLRPMF,
    boxplus,
    channel_llr_pmf,
    convolve,
    de_run_spa,
    power,
    scale,
)
from .state import DEResult, DensityEvolutionError, check_normalized, run_fixed_point
from .threshold import ThresholdBracketError, bisect_threshold, threshold_e, threshold_spa

ERASURE = TernaryPMF.of(0, 1, 0)
CERTAIN = TernaryPMF.of(0, 0, 1)
COIN = TernaryPMF.of(0.5, 0, 0.5)
N_REFERENCE = 9602


def regular_3_6(Q=13):
    return ensemble_from_base([[3, 3]], [], Q=Q, name='3-6')


class CheckNodeUpdateTests(SimpleTestCase):

    def test_erasure_input_erases_output(self):
        out = cn_update_e([CERTAIN, ERASURE, COIN])
        self.assertEqual(out, ERASURE)

    def test_certain_inputs(self):
        self.assertEqual(cn_update_e([CERTAIN, CERTAIN, CERTAIN]), CERTAIN)

    def test_two_coins(self):
        self.assertEqual(cn_update_e([COIN, COIN]), COIN)

    def test_single_negative_flips_sign(self):
        self.assertEqual(cn_update_e([TernaryPMF.of(1, 0, 0), CERTAIN]), TernaryPMF.of(1, 0, 0))

    def test_empty_inputs(self):
        with self.assertRaises(DensityEvolutionError):
            cn_update_e([])

    def test_chained_pairwise_updates_match_direct(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            inputs = [TernaryPMF(rng.dirichlet(np.ones(3))) for _ in range(6)]
            direct = cn_update_e(inputs)
            chained = inputs[0]
            for q in inputs[1:]:
                chained = cn_update_e([chained, q])
            np.testing.assert_allclose(direct.probs, chained.probs, atol=1e-12)


class VariableNodeUpdateTests(SimpleTestCase):

    def test_state_node_with_erasures(self):
        self.assertEqual(vn_update_e([ERASURE, ERASURE], channel_vector(0.1, 3, state=True)), ERASURE)

    def test_clean_channel_without_inputs(self):
        self.assertEqual(vn_update_e([], channel_vector(0.0, 2)), CERTAIN)

    def test_noisy_channel_with_erasure(self):
        out = vn_update_e([ERASURE], channel_vector(0.2, 1))
        self.assertEqual(out, TernaryPMF.of(0.2, 0, 0.8))

    def test_amplified_channel_outvotes_single_message(self):
        out = vn_update_e([TernaryPMF.of(1, 0, 0)], channel_vector(0.0, 2))
        self.assertEqual(out, CERTAIN)

    def test_tie_maps_to_zero(self):
        out = vn_update_e([TernaryPMF.of(1, 0, 0)], channel_vector(0.0, 1))
        self.assertEqual(out, ERASURE)

    def test_invalid_channel_support(self):
        channel = LatticePMF(-2, [0.25, 0.25, 0, 0.25, 0.25])
        with self.assertRaises(DensityEvolutionError):
            vn_update_e([ERASURE], channel)


class AppEstimateTests(SimpleTestCase):

    def test_state_node_with_certain_inputs(self):
        self.assertEqual(app_e([CERTAIN, CERTAIN], channel_prime_vector(0.3, state=True)), CERTAIN)

    def test_channel_only(self):
        self.assertEqual(app_e([], channel_prime_vector(0.1)), TernaryPMF.of(0.1, 0, 0.9))

    def test_erasures_do_not_shrink_erasure_mass(self):
        prime = channel_prime_vector(0.0, state=True)
        f = app_e([ERASURE] * 4, prime)
        self.assertGreaterEqual(f.zero, prime.sign_bins().zero)

    def test_rejects_amplified_channel(self):
        with self.assertRaises(DensityEvolutionError):
            app_e([], channel_vector(0.1, 2))


class PMFTests(SimpleTestCase):

    def test_ternary_validation(self):
        with self.assertRaises(DensityEvolutionError):
            TernaryPMF.of(0.5, 0.5, 0.5)
        with self.assertRaises(DensityEvolutionError):
            TernaryPMF([0.5, 0.5])

    def test_lattice_convolution(self):
        z = LatticePMF(-1, [0.5, 0, 0.5]).convolve(LatticePMF(-1, [0.5, 0, 0.5]))
        self.assertEqual(z.lo, -2)
        self.assertEqual(z.support(), [-2, 0, 2])
        self.assertEqual(z.sign_bins(), TernaryPMF.of(0.25, 0.5, 0.25))

    def test_check_normalized(self):
        with self.assertRaises(DensityEvolutionError):
            check_normalized(np.array([0.5, 0.6]), 'prueba')
        with self.assertRaises(DensityEvolutionError):
            check_normalized(np.array([1.5, -0.5]), 'prueba')


class AlgorithmEDensityEvolutionTests(SimpleTestCase):

    def test_noiseless_channel_converges_immediately(self):
        for name in ('A', 'B', 'C'):
            result = de_run_e(ensemble(name), 0.0, 1)
            self.assertTrue(result.converged, name)
            self.assertLessEqual(result.iterations, 2)

    def test_validation(self):
        spec = ensemble('A')
        with self.assertRaises(DensityEvolutionError):
            de_run_e(spec, 0.6, 1)
        with self.assertRaises(DensityEvolutionError):
            de_run_e(spec, 0.01, 1.5)
        with self.assertRaises(DensityEvolutionError):
            de_run_e(spec, 0.01, 0)

    def test_edge_type_count(self):
        spec = ensemble('C')
        result = de_run_e(spec, 0.001, 8, max_iter=5)
        self.assertEqual(result.state.edge_type_count, 2 * spec.base.edge_count)

    def test_pmfs_stay_normalized(self):
        result = de_run_e(ensemble('B'), 0.004, 4, max_iter=30)
        for f in result.app.values():
            self.assertAlmostEqual(float(f.probs.sum()), 1.0, places=9)
        np.testing.assert_allclose(result.state.v2c.sum(axis=1), 1.0, atol=1e-9)
        np.testing.assert_allclose(result.state.c2v.sum(axis=1), 1.0, atol=1e-9)

    def test_well_below_and_above_threshold(self):
        spec = ensemble('A')
        self.assertTrue(de_run_e(spec, 30 / N_REFERENCE, 1).converged)
        self.assertFalse(de_run_e(spec, 100 / N_REFERENCE, 1).converged)

    def test_half_crossover_reaches_symmetric_point(self):
        result = de_run_e(ensemble('C'), 0.5, 1, max_iter=40)
        self.assertFalse(result.converged)
        for f in result.app.values():
            self.assertAlmostEqual(f.minus, f.plus, places=9)

    def test_reference_ensemble_matches_unstructured(self):
        spec = ensemble('A')
        for delta in (40 / N_REFERENCE, 70 / N_REFERENCE):
            protograph = de_run_e(spec, delta, 1, max_iter=300)
            unstructured = unstructured_de_run_e(45, 90, delta, 1, max_iter=300)
            self.assertEqual(protograph.converged, unstructured.converged)
            common = min(len(protograph.trace), len(unstructured.trace))
            self.assertLessEqual(abs(len(protograph.trace) - len(unstructured.trace)), 1)
            np.testing.assert_allclose(
                protograph.trace[:common], unstructured.trace[:common], rtol=1e-9, atol=1e-15,
            )

    def test_unstructured_validation(self):
        with self.assertRaises(DensityEvolutionError):
            unstructured_de_run_e(3, 1, 0.01, 1)


class ResidualTraceTests(SimpleTestCase):
    """Aviso cuando el residuo vuelve a crecer después del máximo inicial"""

    def run_trace(self, residuals):
        residuals = iter(residuals)
        return run_fixed_point(
            None, [np.zeros(3)],
            cn_step=lambda v2c: v2c,
            vn_step=lambda c2v: c2v,
            app_step=lambda c2v: (next(residuals), {}),
            max_iter=10, eps=1e-9, label='sintética',
        )

    def test_rising_residual_warns(self):
        with self.assertLogs('density_evolution.state', 'WARNING') as logs:
            result = self.run_trace([0.2, 0.5, 0.3, 0.35, 1e-12])
        self.assertTrue(result.converged)
        self.assertEqual(result.iterations, 5)
        self.assertEqual(len(logs.records), 1)
        self.assertIn('(iteración 4)', logs.output[0])

    def test_monotone_tail_is_quiet(self):
        with self.assertNoLogs('density_evolution.state', 'WARNING'):
            result = self.run_trace([0.2, 0.5, 0.3, 0.1, 1e-12])
        self.assertTrue(result.converged)

    def test_unconverged_run_is_quiet(self):
        with self.assertNoLogs('density_evolution.state', 'WARNING'):
            result = self.run_trace([0.5, 0.3, 0.4] + [0.2] * 7)
        self.assertFalse(result.converged)
        self.assertEqual(result.iterations, 10)


class QuantizedDensityEvolutionTests(SimpleTestCase):

    def setUp(self):
        self.quantizer = Quantizer(step=0.25, saturation=16.0)

    def test_default_quantizer(self):
        q = Quantizer()
        self.assertEqual(q.step, 2 ** -4)
        self.assertEqual(q.saturation, 32.0)
        self.assertEqual(q.size, 1025)

    def test_invalid_quantizer(self):
        with self.assertRaises(DensityEvolutionError):
            Quantizer(step=0, saturation=1.0)
        with self.assertRaises(DensityEvolutionError):
            Quantizer(step=0.3, saturation=1.0)

    def test_boxplus_with_zero_is_zero(self):
        q = self.quantizer
        p = channel_llr_pmf(q, 0.1)
        out = boxplus(q, q.point(0.0), p)
        np.testing.assert_allclose(out, q.point(0.0))

    def test_boxplus_identity(self):
        p = channel_llr_pmf(self.quantizer, 0.1)
        self.assertIs(boxplus(self.quantizer, None, p), p)

    def test_boxplus_sign_rule(self):
        q = self.quantizer
        out = boxplus(q, q.point(-4.0), q.point(6.0))
        self.assertEqual(QuantizedLLRPMF(q, out).error_probability(), 1.0)

    def test_convolve_adds_and_saturates(self):
        q = self.quantizer
        np.testing.assert_allclose(convolve(q, q.point(1.0), q.point(2.0)), q.point(3.0))
        np.testing.assert_allclose(convolve(q, q.point(-3.5), q.point(-1.25)), q.point(-4.75))
        np.testing.assert_allclose(convolve(q, q.point(15.0), q.point(5.0)), q.point(16.0))

    def test_power(self):
        q = self.quantizer
        np.testing.assert_allclose(power(convolve, q, q.point(0.5), 5), q.point(2.5))
        self.assertIsNone(power(convolve, q, q.point(0.5), 0))

    def test_scale(self):
        q = self.quantizer
        np.testing.assert_allclose(scale(q, q.point(4.0), 0.5), q.point(2.0))
        np.testing.assert_allclose(scale(q, q.point(4.0), 0.0), q.point(0.0))

    def test_channel_pmf(self):
        q = self.quantizer
        self.assertAlmostEqual(QuantizedLLRPMF(q, channel_llr_pmf(q, 0.1)).error_probability(), 0.1)
        self.assertEqual(QuantizedLLRPMF(q, channel_llr_pmf(q, 0.1, state=True)).error_probability(), 0.5)

    def test_noiseless_channel_converges(self):
        for name in ('A', 'C'):
            result = de_run_spa(ensemble(name), 0.0, 1.0, quantizer=self.quantizer)
            self.assertTrue(result.converged, name)

    def test_validation(self):
        with self.assertRaises(DensityEvolutionError):
            de_run_spa(ensemble('A'), 0.7, 1.0)
        with self.assertRaises(DensityEvolutionError):
            de_run_spa(ensemble('A'), 0.01, -1.0)

    def test_regular_3_6_transition(self):
        spec = regular_3_6()
        self.assertTrue(de_run_spa(spec, 0.05, 1.0, quantizer=self.quantizer).converged)
        self.assertFalse(de_run_spa(spec, 0.12, 1.0, quantizer=self.quantizer).converged)


class ThresholdSearchTests(SimpleTestCase):

    @staticmethod
    def step_run(edge):
        return lambda delta: DEResult(converged=delta < edge, iterations=1, residual=0.0)

    def test_bisection_resolution(self):
        delta, _, probes = bisect_threshold(self.step_run(0.1), 100)
        self.assertLess(delta, 0.1)
        self.assertGreater(delta, 0.1 - 1 / 200)
        self.assertGreater(probes, 2)

    def test_bracket_failures(self):
        with self.assertRaises(ThresholdBracketError):
            bisect_threshold(self.step_run(1.0), 100)
        with self.assertRaises(ThresholdBracketError):
            bisect_threshold(self.step_run(-1.0), 100)

    def test_non_positive_tolerance(self):
        with self.assertRaises(DensityEvolutionError):
            bisect_threshold(self.step_run(0.1), 100, tol=-1)

    def test_threshold_e_row(self):
        spec = regular_3_6()
        result = threshold_e(spec, 1, tol=0.01)
        self.assertGreater(result.delta_star, 0)
        self.assertLess(result.delta_star, 0.5)
        self.assertAlmostEqual(result.n_delta_star, spec.block_length * result.delta_star)
        self.assertEqual(set(result.as_row()), {
            'ensemble', 'algorithm', 'omega', 'Q', 'delta_star', 'n_delta_star', 'iterations', 'residual',
        })

    def test_threshold_spa_regular_3_6(self):
        result = threshold_spa(regular_3_6(), 1.0, tol=0.005, quantizer=Quantizer(step=0.25, saturation=16.0))
        self.assertGreater(result.delta_star, 0.06)
        self.assertLess(result.delta_star, 0.1)


@skipUnless(settings.MDPC_SLOW_TESTS, 'prueba larga (MDPC_SLOW_TESTS=1)')
class ThresholdTableTests(SimpleTestCase):
    """Umbrales de referencia con n = 9602"""

    def test_algorithm_e(self):
        for name, omega, expected in [
            ('A', 1, 57), ('A', 14, 106), ('B', 1, 25), ('B', 4, 57), ('C', 1, 43), ('C', 8, 128),
        ]:
            with self.subTest(ensemble=name, omega=omega):
                result = threshold_e(ensemble(name), omega)
                self.assertAlmostEqual(result.n_delta_star, expected, delta=2)

    def test_spa(self):
        for name, omega, expected in [
            ('A', 1.0, 113), ('A', 0.5, 112), ('B', 1.0, 132), ('C', 1.0, 171), ('C', 0.8, 155),
        ]:
            with self.subTest(ensemble=name, omega=omega):
                result = threshold_spa(ensemble(name), omega)
                self.assertAlmostEqual(result.n_delta_star, expected, delta=0.05 * expected)


class ThresholdRecordTests(TestCase):

    def test_from_result(self):
        result = threshold_e(regular_3_6(), 1, tol=0.02)
        record = ThresholdRecord.from_result(result)
        self.assertEqual(ThresholdRecord.objects.count(), 1)
        self.assertEqual(record.algorithm, 'E')
        self.assertIn('3-6', str(record))
