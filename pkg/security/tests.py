import math

import numpy as np
from django.test import SimpleTestCase

from protograph.ensembles import ensemble
from simulation.engine import SimPoint

from .report import (
    ATTACK_DECODING,
    ATTACK_DISTINGUISHING,
    ATTACK_KEY_SPACE,
    CurveCoverageError,
    locate_error_weight,
    security_report,
)
from .work_factors import (
    InfeasibleParametersError,
    WorkFactor,
    prange_expected_iterations,
    simulate_prange_iterations,
    wf_dec,
    wf_dist,
    wf_isd,
)

N, M = 9602, 4801


def curve_point(e, bler, name='A', Q=4801):
    failures = round(bler * 10 ** 6)
    return SimPoint(
        ensemble=name, algorithm='E', omega=14, Q=Q, e=e, trials=10 ** 6, failures=failures,
        bler=failures / 10 ** 6, ci_lo=0.0, ci_hi=1.0, seed=1,
    )


class WorkFactorTests(SimpleTestCase):

    def test_rejects_negative_or_infinite(self):
        with self.assertRaises(InfeasibleParametersError):
            WorkFactor(-1.0)
        with self.assertRaises(InfeasibleParametersError):
            WorkFactor(math.inf)

    def test_minus_bits_floors_at_zero(self):
        self.assertEqual(WorkFactor(3.0).minus_bits(5).log2_cost, 0.0)


class ISDTests(SimpleTestCase):

    def test_zero_weight_costs_one_elimination(self):
        gauss = math.log2(N * M * M)
        for variant in ('prange', 'stern', 'mmt'):
            self.assertAlmostEqual(wf_isd(N, M, 0, variant).log2_cost, gauss, delta=0.01)

    def test_variant_ordering(self):
        prange = wf_isd(N, M, 90, 'prange').log2_cost
        stern = wf_isd(N, M, 90, 'stern').log2_cost
        mmt = wf_isd(N, M, 90, 'mmt').log2_cost
        self.assertLessEqual(mmt, stern)
        self.assertLessEqual(stern, prange)

    def test_monotone_in_weight(self):
        for variant in ('prange', 'stern', 'mmt'):
            costs = [wf_isd(1202, 601, w, variant).log2_cost for w in (10, 30, 50, 70, 90)]
            self.assertEqual(costs, sorted(costs), variant)

    def test_larger_grid_never_worse(self):
        for variant in ('stern', 'mmt'):
            small = wf_isd(N, M, 90, variant, max_p=4, max_l=20).log2_cost
            full = wf_isd(N, M, 90, variant).log2_cost
            self.assertLessEqual(full, small)

    def test_reports_parameters(self):
        result = wf_isd(N, M, 90, 'mmt')
        self.assertEqual(result.variant, 'mmt')
        self.assertEqual(set(result.params), {'p', 'l', 'l2'})
        self.assertEqual(result.params['p'] % 2, 0)

    def test_infeasible(self):
        with self.assertRaises(InfeasibleParametersError):
            wf_isd(10, 5, 6, 'prange')
        with self.assertRaises(InfeasibleParametersError):
            wf_isd(10, 0, 2)
        with self.assertRaises(InfeasibleParametersError):
            wf_isd(10, 5, 11)
        with self.assertRaises(InfeasibleParametersError):
            wf_isd(10, 5, 2, 'ball-collision')


class DOOMTests(SimpleTestCase):

    def test_distinguishing_reference_parameters(self):
        self.assertAlmostEqual(wf_dist(N, M, 90).log2_cost, 80.6, delta=3)

    def test_decoding_reference_parameters(self):
        self.assertAlmostEqual(wf_dec(N, M, 84).log2_cost, 81.0, delta=3)
        self.assertAlmostEqual(wf_dec(N, M, 102).log2_cost, 98.3, delta=3)

    def test_single_target_has_no_gain(self):
        isd = wf_isd(40, 39, 1, 'prange').log2_cost
        self.assertEqual(wf_dist(40, 1, 1, 'prange').log2_cost, isd)
        self.assertEqual(wf_dec(40, 1, 1, 'prange').log2_cost, isd)

    def test_gain_structure(self):
        isd = wf_isd(N, M, 90).log2_cost
        self.assertAlmostEqual(isd - wf_dist(N, M, 90).log2_cost, math.log2(M))
        isd = wf_isd(N, M, 84).log2_cost
        self.assertAlmostEqual(isd - wf_dec(N, M, 84).log2_cost, math.log2(M) / 2)

    def test_weight_larger_than_length(self):
        with self.assertRaises(InfeasibleParametersError):
            wf_dist(100, 50, 101)
        with self.assertRaises(InfeasibleParametersError):
            wf_dec(100, 50, 101)


class PrangeSimulationTests(SimpleTestCase):

    def test_expected_iterations(self):
        self.assertAlmostEqual(prange_expected_iterations(30, 15, 3), 4060 / 455)

    def test_formula_matches_simulation(self):
        predicted = prange_expected_iterations(30, 15, 3)
        measured = simulate_prange_iterations(30, 15, 3, 10 ** 4, np.random.default_rng(11))
        self.assertLess(abs(measured - predicted) / predicted, 0.1)

    def test_infeasible(self):
        with self.assertRaises(InfeasibleParametersError):
            simulate_prange_iterations(10, 5, 6, 10, np.random.default_rng(0))


class LocateErrorWeightTests(SimpleTestCase):

    def setUp(self):
        self.curve = [curve_point(110, 0.5), curve_point(80, 0.0), curve_point(100, 1e-2), curve_point(90, 1e-4)]

    def test_reads_weight_at_target(self):
        self.assertEqual(locate_error_weight(self.curve, 1e-3), 90)
        self.assertEqual(locate_error_weight(self.curve, 0.1), 100)

    def test_zero_failure_points_cover_deep_targets(self):
        self.assertEqual(locate_error_weight(self.curve, 1e-6), 80)

    def test_curve_above_target(self):
        with self.assertRaises(CurveCoverageError):
            locate_error_weight([curve_point(100, 1e-2), curve_point(110, 0.5)], 1e-3)

    def test_invalid_target(self):
        with self.assertRaises(CurveCoverageError):
            locate_error_weight(self.curve, 0)


class SecurityReportTests(SimpleTestCase):

    def test_reference_ensemble(self):
        report = security_report(ensemble('A'), error_weight=84)
        self.assertEqual([row['attack'] for row in report.rows],
                         [ATTACK_DISTINGUISHING, ATTACK_DECODING, ATTACK_KEY_SPACE])
        self.assertAlmostEqual(report.bits(ATTACK_DECODING), 81.0, delta=3)
        self.assertAlmostEqual(report.bits(ATTACK_DISTINGUISHING), 80.6, delta=3)
        self.assertAlmostEqual(report.bits(ATTACK_KEY_SPACE), 715, delta=1)

    def test_state_ensemble(self):
        report = security_report(ensemble('C'), error_weight=102)
        self.assertAlmostEqual(report.bits(ATTACK_DECODING), 98.3, delta=3)
        self.assertAlmostEqual(report.bits(ATTACK_KEY_SPACE), 446, delta=1)
        self.assertIn('e=102', report.rows[1]['parameters'])

    def test_weight_from_curve(self):
        report = security_report(ensemble('A'), points=self.curve(), target_bler=1e-3)
        self.assertEqual(report.error_weight, 90)

    def test_curve_of_other_ensemble(self):
        with self.assertRaises(CurveCoverageError):
            security_report(ensemble('C'), points=self.curve(), target_bler=1e-3)

    def test_requires_weight_or_curve(self):
        with self.assertRaises(CurveCoverageError):
            security_report(ensemble('A'))

    @staticmethod
    def curve():
        return [curve_point(80, 0.0), curve_point(90, 1e-4), curve_point(100, 1e-2)]
