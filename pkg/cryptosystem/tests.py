import json
import tempfile
from pathlib import Path

import numpy as np
from django.conf import settings
from django.test import SimpleTestCase
from unittest import skipUnless

from decoders.message_passing import ALGORITHM_E, ALGORITHM_SPA, DecoderConfig, DecodingFailure
from protograph.ensembles import ensemble, ensemble_from_base
from simulation.sampling import sample_error_vector
from tanner.graph import expand

from .keyfiles import (
    KeyFileError,
    KeyVersionError,
    MalformedKeyFileError,
    dumps_key,
    key_to_record,
    load_key,
    loads_key,
    save_key,
)
from .keys import (
    KeyInvariantError,
    MessageLengthError,
    PrivateKey,
    decrypt,
    default_error_weight,
    encrypt,
    keygen,
    keys_match,
)

TOY_STATE = ensemble_from_base([[1, 2, 2], [1, 1, 1]], [0], Q=13, name='toy')
TOY_REFERENCE = ensemble_from_base([[3, 3]], [], Q=13, name='toy-ref')


class KeygenTests(SimpleTestCase):

    def test_reference_ensemble_weights(self):
        private, public = keygen(ensemble('A', 4801), np.random.default_rng(1))
        self.assertEqual(private.h.weights(), [[45, 45]])
        self.assertIsNone(private.gamma)
        self.assertEqual(public.error_weight, 84)
        self.assertEqual(public.p.Q, 4801)

    def test_state_ensemble_row_weight(self):
        rng = np.random.default_rng(2)
        for _ in range(5):
            private, _ = keygen(ensemble('C', 4801), rng)
            self.assertLessEqual(private.row_weight, 90)
            self.assertEqual(private.decoding_graph.vn_count, 3 * 4801)
            self.assertEqual(private.decoding_graph.observed_count, 9602)

    def test_generator_is_orthogonal_to_parity_check(self):
        for spec in (TOY_STATE, TOY_REFERENCE):
            private, public = keygen(spec, np.random.default_rng(3))
            G = public.generator_matrix().astype(np.int64)
            H = private.h.to_binary().astype(np.int64)
            self.assertFalse(((G @ H.T) % 2).any())

    def test_codewords_satisfy_private_checks(self):
        rng = np.random.default_rng(4)
        for name in ('A', 'C'):
            private, public = keygen(ensemble(name, 4801), rng)
            reduced = expand(private.h)
            for _ in range(5):
                x = public.encode(rng.integers(0, 2, 4801))
                self.assertFalse(reduced.syndrome(x).any())

    def test_key_pair_consistency(self):
        for name in ('A', 'C'):
            private, public = keygen(ensemble(name, 4801), np.random.default_rng(6))
            other_private, other_public = keygen(ensemble(name, 4801), np.random.default_rng(7))
            self.assertTrue(keys_match(private, public))
            self.assertFalse(keys_match(private, other_public))
            self.assertFalse(keys_match(other_private, public))
        _, toy_public = keygen(TOY_STATE, np.random.default_rng(6))
        self.assertFalse(keys_match(private, toy_public))

    def test_deterministic_for_seed(self):
        a = keygen(ensemble('B', 4801), np.random.default_rng(5))
        b = keygen(ensemble('B', 4801), np.random.default_rng(5))
        self.assertEqual(a, b)

    def test_default_error_weight_scales_with_Q(self):
        self.assertEqual(default_error_weight(ensemble('C', 4801)), 102)
        self.assertEqual(default_error_weight(ensemble('A', 2401)), 42)


class EncryptDecryptTests(SimpleTestCase):

    def test_noiseless_encryption(self):
        private, public = keygen(TOY_STATE, np.random.default_rng(6))
        u = np.random.default_rng(7).integers(0, 2, 13)
        c = encrypt(public, u, np.random.default_rng(8), error_weight=0)
        expected = (u @ public.generator_matrix().astype(np.int64)) % 2
        np.testing.assert_array_equal(c, expected)
        self.assertFalse(encrypt(public, np.zeros(13), np.random.default_rng(9), error_weight=0).any())

    def test_error_weight_is_exact(self):
        _, public = keygen(ensemble('A', 4801), np.random.default_rng(10))
        u = np.random.default_rng(11).integers(0, 2, 4801)
        for seed in range(5):
            c = encrypt(public, u, np.random.default_rng(seed))
            self.assertEqual(int((c ^ public.encode(u)).sum()), public.error_weight)

    def test_noiseless_roundtrip_all_ensembles(self):
        rng = np.random.default_rng(12)
        for name in ('A', 'B', 'C'):
            private, public = keygen(ensemble(name, 4801), rng)
            for algorithm in (ALGORITHM_E, ALGORITHM_SPA):
                u = rng.integers(0, 2, 4801)
                c = encrypt(public, u, rng, error_weight=0)
                np.testing.assert_array_equal(decrypt(private, c, DecoderConfig(algorithm), 0), u)

    def test_noiseless_roundtrip_toy(self):
        rng = np.random.default_rng(13)
        for spec in (TOY_STATE, TOY_REFERENCE):
            private, public = keygen(spec, rng)
            u = rng.integers(0, 2, 13)
            c = encrypt(public, u, rng, error_weight=0)
            np.testing.assert_array_equal(decrypt(private, c, DecoderConfig(), 0), u)

    def test_corrects_errors(self):
        rng = np.random.default_rng(14)
        private, public = keygen(ensemble('A', 4801), rng)
        u = rng.integers(0, 2, 4801)
        c = encrypt(public, u, rng, error_weight=30)
        np.testing.assert_array_equal(decrypt(private, c, DecoderConfig(ALGORITHM_E, omega=1)), u)

    def test_half_flipped_fails(self):
        rng = np.random.default_rng(15)
        private, public = keygen(ensemble('A', 4801), rng)
        c = encrypt(public, rng.integers(0, 2, 4801), rng, error_weight=4801)
        with self.assertRaises(DecodingFailure) as ctx:
            decrypt(private, c, DecoderConfig(ALGORITHM_E, max_iterations=20))
        self.assertFalse(ctx.exception.result.syndrome_zero)

    def test_length_checks(self):
        private, public = keygen(TOY_REFERENCE, np.random.default_rng(16))
        with self.assertRaises(MessageLengthError):
            encrypt(public, np.zeros(12), np.random.default_rng(0))
        with self.assertRaises(MessageLengthError):
            decrypt(private, np.zeros(25), DecoderConfig())

    @skipUnless(settings.MDPC_SLOW_TESTS, 'prueba larga (MDPC_SLOW_TESTS=1)')
    def test_reference_roundtrip_rate(self):
        rng = np.random.default_rng(17)
        spec = ensemble('A', 4801)
        cfg = DecoderConfig(ALGORITHM_E, omega=1, max_iterations=100)
        successes = 0
        for _ in range(200):
            private, public = keygen(spec, rng)
            u = rng.integers(0, 2, 4801)
            try:
                successes += bool((decrypt(private, encrypt(public, u, rng, 30), cfg) == u).all())
            except DecodingFailure:
                pass
        self.assertGreaterEqual(successes, 198)

    @skipUnless(settings.MDPC_SLOW_TESTS, 'prueba larga (MDPC_SLOW_TESTS=1)')
    def test_half_flipped_always_fails(self):
        rng = np.random.default_rng(18)
        private, public = keygen(ensemble('A', 4801), rng)
        successes = 0
        for _ in range(50):
            try:
                decrypt(private, encrypt(public, rng.integers(0, 2, 4801), rng, 4801), DecoderConfig())
                successes += 1
            except DecodingFailure:
                pass
        self.assertEqual(successes, 0)

    @skipUnless(settings.MDPC_SLOW_TESTS, 'prueba larga (MDPC_SLOW_TESTS=1)')
    def test_error_vector_uniformity(self):
        rng = np.random.default_rng(19)
        draws = 100_000
        counts = np.zeros(100)
        for _ in range(draws):
            counts += sample_error_vector(100, 3, rng)
        p = 3 / 100
        sigma = np.sqrt(draws * p * (1 - p))
        self.assertTrue((np.abs(counts - draws * p) < 3 * sigma + 1).mean() > 0.98)


class KeyFileTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def test_roundtrip(self):
        for spec in (ensemble('C', 4801), ensemble('A', 4801), TOY_STATE):
            private, public = keygen(spec, np.random.default_rng(20))
            self.assertEqual(load_key(save_key(private, self.dir / 'k.priv.json'), 'private'), private)
            self.assertEqual(load_key(save_key(public, self.dir / 'k.pub.json'), 'public'), public)

    def test_byte_identical_for_seed(self):
        a, _ = keygen(ensemble('B', 4801), np.random.default_rng(21))
        b, _ = keygen(ensemble('B', 4801), np.random.default_rng(21))
        self.assertEqual(dumps_key(a), dumps_key(b))

    def test_truncated_file(self):
        private, _ = keygen(TOY_STATE, np.random.default_rng(22))
        text = dumps_key(private)
        with self.assertRaises(MalformedKeyFileError):
            loads_key(text[: len(text) // 2])

    def test_tampered_row_weight(self):
        private, _ = keygen(ensemble('C', 4801), np.random.default_rng(23))
        record = key_to_record(private)
        record['payload']['row_weight'] = 95
        with self.assertRaises(KeyInvariantError):
            loads_key(json.dumps(record))

    def test_tampered_support(self):
        private, _ = keygen(ensemble('C', 4801), np.random.default_rng(24))
        record = key_to_record(private)
        support = record['payload']['gamma'][0][1]
        support.append(max(support) + 1 if max(support) < 4800 else 0)
        support.sort()
        with self.assertRaises(KeyFileError):
            loads_key(json.dumps(record))

    def test_version_mismatch(self):
        _, public = keygen(TOY_REFERENCE, np.random.default_rng(25))
        record = key_to_record(public)
        record['version'] = 2
        with self.assertRaises(KeyVersionError):
            loads_key(json.dumps(record))

    def test_wrong_role(self):
        _, public = keygen(TOY_REFERENCE, np.random.default_rng(26))
        path = save_key(public, self.dir / 'k.pub.json')
        with self.assertRaises(MalformedKeyFileError):
            load_key(path, 'private')

    def test_private_key_validates_direct_construction(self):
        private, _ = keygen(TOY_STATE, np.random.default_rng(27))
        with self.assertRaises(KeyInvariantError):
            PrivateKey(TOY_STATE, private.h, None)
