import itertools

import numpy as np
from django.test import SimpleTestCase

from protograph.ensembles import ensemble, ensemble_from_base
from protograph.matrices import PolyMatrix, derive_H, sample_gamma
from ring.polynomials import SparsePolynomial

from .graph import degree_profile, expand, protograph_profile


def all_vectors(length):
    return np.array(list(itertools.product((0, 1), repeat=length)), dtype=np.int64)


class ExpandTests(SimpleTestCase):

    def test_identity_circulant(self):
        graph = expand(PolyMatrix(((SparsePolynomial.one(3),),)))
        self.assertEqual(graph.edge_count, 3)
        for c in range(3):
            self.assertEqual(list(graph.cn_neighbors(c)), [c])
            self.assertEqual(list(graph.vn_neighbors(c)), [c])

    def test_shift_structure(self):
        graph = expand(PolyMatrix(((SparsePolynomial(7, (1, 3)),),)))
        for r in range(7):
            self.assertEqual(sorted(graph.cn_neighbors(r)), sorted({(r + 1) % 7, (r + 3) % 7}))

    def test_parity_matrix_matches_circulants(self):
        gamma = sample_gamma(ensemble_from_base([[1, 2, 3], [2, 1, 1]], [0], Q=11), np.random.default_rng(0))
        graph = expand(gamma, {0})
        np.testing.assert_array_equal(graph.parity_matrix(), gamma.to_binary())

    def test_degree_sums(self):
        gamma = sample_gamma(ensemble('C', 101), np.random.default_rng(1))
        graph = expand(gamma, {0})
        self.assertEqual(graph.vn_degrees.sum(), graph.edge_count)
        self.assertEqual(graph.cn_degrees.sum(), graph.edge_count)
        self.assertEqual(graph.edge_count, 101 * 49)

    def test_punctured_flags(self):
        gamma = sample_gamma(ensemble('B', 31), np.random.default_rng(2))
        graph = expand(gamma, {0})
        self.assertTrue(graph.punctured[:31].all())
        self.assertFalse(graph.punctured[31:].any())
        np.testing.assert_array_equal(graph.observed_vns, np.arange(31, 93))

    def test_no_parallel_edges(self):
        gamma = sample_gamma(ensemble('C', 53), np.random.default_rng(3))
        graph = expand(gamma, {0})
        pairs = set(zip(graph.edge_cn.tolist(), graph.edge_vn.tolist()))
        self.assertEqual(len(pairs), graph.edge_count)

    def test_syndrome(self):
        graph = expand(PolyMatrix(((SparsePolynomial(5, (0, 1)),),)))
        np.testing.assert_array_equal(graph.syndrome([1, 0, 0, 0, 0]), [1, 0, 0, 0, 1])


class DegreeProfileTests(SimpleTestCase):

    def test_state_vns_of_C(self):
        gamma = sample_gamma(ensemble('C', 4801), np.random.default_rng(4))
        profile = degree_profile(expand(gamma, {0}))
        self.assertEqual(profile['vn_by_type'][0], {3: 4801})
        self.assertEqual(profile['vn_by_type'][1], {23: 4801})
        self.assertEqual(profile['punctured'], 4801)

    def test_reference_ensemble_check_degree(self):
        h = sample_gamma(ensemble('A', 4801), np.random.default_rng(5))
        profile = degree_profile(expand(h))
        self.assertEqual(profile['cn'], {90: 4801})
        self.assertEqual(profile['vn'], {45: 9602})

    def test_empty_matrix(self):
        zero = SparsePolynomial.zero(5)
        profile = degree_profile(expand(PolyMatrix(((zero, zero),))))
        self.assertEqual(profile['vn'], {0: 10})
        self.assertEqual(profile['cn'], {0: 5})
        self.assertEqual(profile['edges'], 0)

    def test_base_matrix_profile_matches_expansion(self):
        for name in ('A', 'B', 'C'):
            spec = ensemble(name, 101)
            gamma = sample_gamma(spec, np.random.default_rng(6))
            expanded = degree_profile(expand(gamma, spec.base.state_columns))
            self.assertEqual(protograph_profile(spec), expanded, name)


class PuncturingEquivalenceTests(SimpleTestCase):
    """El código del grafo extendido, perforado en el bloque de estado, es el de H"""

    def check(self, spec, seed):
        Q = spec.Q
        gamma = sample_gamma(spec, np.random.default_rng(seed))
        extended = expand(gamma, {0})
        reduced = expand(derive_H(gamma))

        vectors = all_vectors(3 * Q)
        syndromes = (vectors @ extended.parity_matrix().T.astype(np.int64)) % 2
        codewords = vectors[~syndromes.any(axis=1)]
        punctured_code = {tuple(row) for row in codewords[:, Q:]}

        vectors = all_vectors(2 * Q)
        syndromes = (vectors @ reduced.parity_matrix().T.astype(np.int64)) % 2
        h_code = {tuple(row) for row in vectors[~syndromes.any(axis=1)]}

        self.assertEqual(punctured_code, h_code)

    def test_small_instances(self):
        self.check(ensemble_from_base([[1, 2, 1], [1, 1, 2]], [0], Q=5), 0)
        self.check(ensemble_from_base([[1, 1, 2], [2, 1, 1]], [0], Q=5), 1)
        self.check(ensemble_from_base([[1, 2, 2], [1, 3, 1]], [0], Q=6), 2)
