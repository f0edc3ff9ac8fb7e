import io
import json
import tempfile
from pathlib import Path

import numpy as np
from django.conf import settings
from django.test import SimpleTestCase, TestCase, override_settings
from unittest import skipUnless

from cryptosystem.keys import keygen
from decoders.message_passing import ALGORITHM_E, ALGORITHM_SPA, DecoderConfig
from protograph.ensembles import ensemble

from .engine import (
    KEY_FIXED,
    OUTCOME_FAILURE,
    OUTCOME_SUCCESS,
    OUTCOME_UNDETECTED,
    SimPlan,
    SimPoint,
    SimulationError,
    _Tally,
    run_bler,
    wilson_interval,
)
from .models import SimulationRecord
from .results import SIM_COLUMNS, dump_results, read_results, write_results
from .sampling import ErrorWeightError, sample_error_vector, trial_rng

SMALL_Q = 101


def small_plan(**kwargs):
    values = {
        'spec': ensemble('A', Q=SMALL_Q),
        'decoder': DecoderConfig(algorithm=ALGORITHM_E, omega=1),
        'error_weights': [0],
        'trials': 10,
        'seed': 1234,
    }
    values.update(kwargs)
    return SimPlan(**values)


def sample_point(**kwargs):
    values = {
        'ensemble': 'C', 'algorithm': ALGORITHM_SPA, 'omega': 0.8, 'Q': 4801, 'e': 95,
        'trials': 1000, 'failures': 7, 'bler': 0.007, 'ci_lo': 0.0034, 'ci_hi': 0.0144,
        'seed': 2 ** 70 + 3, 'undetected': 1,
    }
    values.update(kwargs)
    return SimPoint(**values)


class SampleErrorVectorTests(SimpleTestCase):

    def test_extremes(self):
        rng = np.random.default_rng(0)
        self.assertFalse(sample_error_vector(20, 0, rng).any())
        self.assertTrue(sample_error_vector(20, 20, rng).all())

    def test_exact_weight(self):
        rng = np.random.default_rng(1)
        for e in (1, 5, 17):
            bits = sample_error_vector(40, e, rng)
            self.assertEqual(bits.dtype, np.uint8)
            self.assertEqual(int(bits.sum()), e)

    def test_weight_out_of_range(self):
        with self.assertRaises(ErrorWeightError):
            sample_error_vector(20, 21, np.random.default_rng(0))

    def test_trial_rng_is_reproducible(self):
        a = trial_rng(7, 30, 4).integers(0, 2 ** 32, 4)
        b = trial_rng(7, 30, 4).integers(0, 2 ** 32, 4)
        c = trial_rng(7, 30, 5).integers(0, 2 ** 32, 4)
        np.testing.assert_array_equal(a, b)
        self.assertFalse(np.array_equal(a, c))

    @skipUnless(settings.MDPC_SLOW_TESTS, 'prueba larga (MDPC_SLOW_TESTS=1)')
    def test_uniform_positions(self):
        rng = np.random.default_rng(2)
        draws = 10 ** 5
        counts = np.zeros(20)
        for _ in range(draws):
            counts += sample_error_vector(20, 5, rng)
        sigma = np.sqrt(0.25 * 0.75 / draws)
        np.testing.assert_array_less(np.abs(counts / draws - 0.25), 3 * sigma)


class WilsonIntervalTests(SimpleTestCase):

    def test_zero_failures(self):
        lo, hi = wilson_interval(0, 10)
        self.assertEqual(lo, 0.0)
        self.assertAlmostEqual(hi, 0.2775, places=3)

    def test_all_failures(self):
        lo, hi = wilson_interval(10, 10)
        self.assertAlmostEqual(lo, 0.7225, places=3)
        self.assertEqual(hi, 1.0)

    def test_contains_estimate(self):
        for failures, trials in [(1, 3), (7, 1000), (50, 100)]:
            lo, hi = wilson_interval(failures, trials)
            self.assertLessEqual(lo, failures / trials)
            self.assertGreaterEqual(hi, failures / trials)

    def test_requires_trials(self):
        with self.assertRaises(SimulationError):
            wilson_interval(0, 0)


class TallyTests(SimpleTestCase):

    def test_counts_undetected_as_failures(self):
        tally = _Tally(10, 100)
        tally.add([OUTCOME_SUCCESS, OUTCOME_UNDETECTED, OUTCOME_FAILURE, OUTCOME_SUCCESS])
        self.assertEqual((tally.run, tally.failures, tally.undetected), (4, 2, 1))

    def test_stops_at_failure_cap_in_trial_order(self):
        tally = _Tally(10, 2)
        tally.add([OUTCOME_FAILURE, OUTCOME_SUCCESS, OUTCOME_FAILURE, OUTCOME_FAILURE])
        self.assertTrue(tally.done)
        self.assertEqual((tally.run, tally.failures), (3, 2))


class SimPlanTests(SimpleTestCase):

    def test_defaults(self):
        plan = small_plan()
        self.assertEqual(plan.max_failures, 100)
        self.assertEqual(plan.key_policy, 'per-trial')

    def test_validation(self):
        with self.assertRaises(SimulationError):
            small_plan(trials=0)
        with self.assertRaises(SimulationError):
            small_plan(error_weights=[0, 2 * SMALL_Q + 1])
        with self.assertRaises(SimulationError):
            small_plan(key_policy='shared')
        with self.assertRaises(SimulationError):
            small_plan(max_failures=0)

    def test_given_keys_must_match_ensemble(self):
        keys = keygen(ensemble('A', Q=53), np.random.default_rng(0))
        with self.assertRaises(SimulationError):
            small_plan(key_policy=KEY_FIXED, keys=keys)
        with self.assertRaises(SimulationError):
            small_plan(keys=keygen(ensemble('A', Q=SMALL_Q), np.random.default_rng(0)))

    def test_fixed_key_is_derived_from_seed(self):
        first = small_plan(key_policy=KEY_FIXED).fixed_keys()
        second = small_plan(key_policy=KEY_FIXED).fixed_keys()
        self.assertEqual(first[0], second[0])
        self.assertEqual(first[1], second[1])


class RunBlerTests(SimpleTestCase):

    def test_noiseless_points_never_fail(self):
        for algorithm in (ALGORITHM_E, ALGORITHM_SPA):
            [point] = run_bler(small_plan(decoder=DecoderConfig(algorithm=algorithm)))
            self.assertEqual(point.failures, 0)
            self.assertEqual(point.bler, 0.0)
            self.assertEqual(point.trials, 10)
            self.assertEqual(point.ensemble, 'A')
            self.assertEqual(point.Q, SMALL_Q)

    def test_half_weight_always_fails(self):
        [point] = run_bler(small_plan(error_weights=[SMALL_Q], trials=50))
        self.assertEqual(point.bler, 1.0)
        self.assertEqual(point.trials, 50)
        self.assertLessEqual(point.ci_lo, 1.0)

    def test_failure_cap(self):
        [point] = run_bler(small_plan(error_weights=[SMALL_Q], trials=50, max_failures=5))
        self.assertEqual((point.trials, point.failures), (5, 5))

    def test_fixed_key_policy(self):
        points = run_bler(small_plan(key_policy=KEY_FIXED, error_weights=[0, SMALL_Q], trials=5))
        self.assertEqual([p.bler for p in points], [0.0, 1.0])

    def test_reproducible(self):
        plan = dict(error_weights=[0, 4, SMALL_Q], trials=12)
        self.assertEqual(run_bler(small_plan(**plan)), run_bler(small_plan(**plan)))

    @override_settings(MDPC_WORKBENCH={'SIM_CHUNK_SIZE': 3})
    def test_independent_of_worker_count(self):
        plan = dict(error_weights=[2, SMALL_Q], trials=20, max_failures=7)
        sequential = run_bler(small_plan(**plan), workers=1)
        parallel = run_bler(small_plan(**plan), workers=2)
        self.assertEqual(sequential, parallel)
        self.assertEqual(parallel[1].trials, 7)


class WaterfallShapeTests(SimpleTestCase):

    def test_bler_non_decreasing_in_error_weight(self):
        weights = [0, 2, 4, 8, 16, 32, SMALL_Q]
        points = run_bler(small_plan(error_weights=weights, trials=40, seed=77))
        self.assertEqual([p.e for p in points], weights)
        self.assertEqual(points[0].bler, 0.0)
        self.assertGreater(points[-1].bler, 0.9)
        for before, after in zip(points, points[1:]):
            self.assertGreaterEqual(after.ci_hi, before.ci_lo, f'e={before.e} -> e={after.e}')


@skipUnless(settings.MDPC_SLOW_TESTS, 'prueba larga (MDPC_SLOW_TESTS=1)')
class FiniteLengthOrderingTests(SimpleTestCase):
    """
    Con n = 9602 el ensamble C (omega = 8) falla menos que el A (omega = 14)
    en la caída de la curva de A. A e = 95 el suelo de C con el Algoritmo E
    (~1 %) se solapa con la BLER de A.
    """

    def run_point(self, name, omega, e, trials):
        plan = SimPlan(
            spec=ensemble(name),
            decoder=DecoderConfig(algorithm=ALGORITHM_E, omega=omega),
            error_weights=[e],
            trials=trials,
            seed=e,
            max_failures=trials,
        )
        [point] = run_bler(plan, workers=4)
        return point

    def test_state_ensemble_beats_reference_in_waterfall(self):
        reference = self.run_point('A', 14, 105, 300)
        state = self.run_point('C', 8, 105, 300)
        self.assertGreater(reference.bler, 0.2)
        self.assertLess(state.ci_hi, reference.ci_lo)

    def test_state_ensemble_floor_at_low_weight(self):
        state = self.run_point('C', 8, 95, 400)
        self.assertLess(state.bler, 0.05)


class ResultsFileTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def test_empty_csv_has_header_only(self):
        path = self.dir / 'empty.csv'
        write_results([], path)
        self.assertEqual(path.read_text(), ','.join(SIM_COLUMNS) + '\n')
        self.assertEqual(read_results(path), [])

    def test_one_point_one_row(self):
        path = self.dir / 'one.csv'
        write_results([sample_point()], path)
        lines = path.read_text().splitlines()
        self.assertEqual(len(lines), 2)
        self.assertTrue(lines[1].startswith('C,SPA,0.8,4801,95,1000,7,'))

    def test_csv_read_back(self):
        points = [sample_point(), sample_point(e=110, failures=300, bler=0.3, ci_lo=0.27, ci_hi=0.33, undetected=0)]
        path = self.dir / 'curve.csv'
        write_results(points, path)
        self.assertEqual(read_results(path), points)

    def test_json_read_back(self):
        points = [sample_point(ci_lo=1 / 3)]
        path = self.dir / 'curve.json'
        write_results(points, path, format='json')
        self.assertEqual(json.loads(path.read_text())[0]['ci_lo'], 1 / 3)
        self.assertEqual(read_results(path), points)

    def test_unknown_format(self):
        with self.assertRaises(SimulationError):
            dump_results([sample_point()], io.StringIO(), format='xml')

    def test_missing_column(self):
        path = self.dir / 'broken.csv'
        path.write_text('ensemble,e\nA,84\n')
        with self.assertRaises(SimulationError):
            read_results(path)

    def test_point_invariants(self):
        with self.assertRaises(SimulationError):
            sample_point(failures=1001)
        with self.assertRaises(SimulationError):
            sample_point(undetected=8)


class SimulationRecordTests(TestCase):

    def test_from_point(self):
        record = SimulationRecord.from_point(sample_point())
        self.assertEqual(SimulationRecord.objects.get().failures, 7)
        self.assertEqual(record.seed, str(2 ** 70 + 3))
        self.assertIn('e=95', str(record))
