import csv
import json
import tempfile
from io import StringIO
from pathlib import Path
from types import SimpleNamespace
from unittest import skipUnless

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from cryptosystem.keyfiles import MalformedKeyFileError
from decoders.message_passing import ALGORITHM_E, ALGORITHM_SPA, DecodingFailure
from density_evolution.models import ThresholdRecord
from simulation.models import SimulationRecord

from .cli import EXIT_DECODING_FAILURE, EXIT_IO, EXIT_USAGE, exit_code_for
from .exceptions import ConfigurationError
from .forms import RunConfigForm, load_config_file, run_config

SMALL_Q = 101


def run(command, *args):
    """Ejecuta un comando y devuelve (stdout, stderr)"""
    out, err = StringIO(), StringIO()
    call_command(command, *[str(a) for a in args], stdout=out, stderr=err)
    return out.getvalue(), err.getvalue()


class WorkspaceMixin:

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def keygen(self, name='keys', seed=5, ensemble='A'):
        private, public = self.dir / f'{name}.priv.json', self.dir / f'{name}.pub.json'
        run('keygen', '--ensemble', ensemble, '--Q', SMALL_Q, '--seed', seed,
            '--private-key', private, '--public-key', public)
        return private, public


class RunConfigFormTests(SimpleTestCase):

    def test_integer_lists(self):
        form = RunConfigForm({'error_weights': '80:100:10'})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.cleaned_data['error_weights'], [80, 90, 100])
        form = RunConfigForm({'error_weights': '1, 5,9'})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.cleaned_data['error_weights'], [1, 5, 9])
        self.assertFalse(RunConfigForm({'error_weights': '10:20:0'}).is_valid())
        self.assertFalse(RunConfigForm({'error_weights': 'a,b'}).is_valid())

    def test_builds_ensemble(self):
        form = RunConfigForm({'ensemble': 'c', 'Q': 101})
        self.assertTrue(form.is_valid(), form.errors)
        spec = form.cleaned_data['spec']
        self.assertEqual((spec.name, spec.Q, spec.block_length), ('C', 101, 202))

        form = RunConfigForm({'base': '[[3, 3]]', 'Q': 13})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.cleaned_data['spec'].base.rows, ((3, 3),))

    def test_default_Q(self):
        form = RunConfigForm({'ensemble': 'A'})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.cleaned_data['spec'].Q, 4801)

    def test_rejects_ensemble_and_base(self):
        form = RunConfigForm({'ensemble': 'A', 'base': [[45, 45]]})
        self.assertFalse(form.is_valid())
        self.assertIn('__all__', form.errors)

    def test_rejects_unsupported_base(self):
        self.assertFalse(RunConfigForm({'base': [[1, 2, 3]]}).is_valid())
        self.assertFalse(RunConfigForm({'ensemble': 'Z'}).is_valid())

    def test_algorithm_aliases(self):
        form = RunConfigForm({'algorithm': 'alg_e'})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.cleaned_data['algorithm'], ALGORITHM_E)
        form = RunConfigForm({'algorithm': 'spa'})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.cleaned_data['algorithm'], ALGORITHM_SPA)
        self.assertFalse(RunConfigForm({'algorithm': 'gallager-b'}).is_valid())

    def test_defaults(self):
        form = RunConfigForm({})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.cleaned_data['format'], 'csv')
        self.assertEqual(form.cleaned_data['key_policy'], 'per-trial')
        self.assertEqual(form.cleaned_data['variant'], 'mmt')
        self.assertIsNone(form.cleaned_data['spec'])


class ConfigFileTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.path = Path(self.tmp.name) / 'run.toml'

    def test_options_override_file(self):
        self.path.write_text('ensemble = "B"\nQ = 101\nerror_weights = [2, 4]\ntrials = 7\n')
        config = run_config({'trials': 30, 'error_weights': [], 'seed': None}, self.path)
        self.assertEqual(config['spec'].name, 'B')
        self.assertEqual(config['error_weights'], [2, 4])
        self.assertEqual(config['trials'], 30)

    def test_unknown_key(self):
        self.path.write_text('ensemble = "A"\ntrails = 10\n')
        with self.assertRaisesMessage(ConfigurationError, 'trails'):
            load_config_file(self.path)

    def test_invalid_toml(self):
        self.path.write_text('ensemble = \n')
        with self.assertRaises(ConfigurationError):
            load_config_file(self.path)

    def test_invalid_values(self):
        self.path.write_text('trials = 0\n')
        with self.assertRaisesMessage(ConfigurationError, 'trials'):
            run_config({}, self.path)


class ExitCodeTests(SimpleTestCase):

    def test_mapping(self):
        self.assertEqual(exit_code_for(ConfigurationError('x')), EXIT_USAGE)
        self.assertEqual(exit_code_for(MalformedKeyFileError('x')), EXIT_IO)
        self.assertEqual(exit_code_for(FileNotFoundError('x')), EXIT_IO)
        self.assertEqual(exit_code_for(DecodingFailure(SimpleNamespace(iterations_used=3))), EXIT_DECODING_FAILURE)


class CryptosystemCommandTests(WorkspaceMixin, SimpleTestCase):

    def test_keygen_is_reproducible(self):
        first = self.keygen('first', seed=9, ensemble='C')
        second = self.keygen('second', seed=9, ensemble='C')
        for a, b in zip(first, second):
            self.assertEqual(a.read_bytes(), b.read_bytes())

    def test_keygen_reports_drawn_seed(self):
        _, err = run('keygen', '--ensemble', 'A', '--Q', SMALL_Q,
                     '--private-key', self.dir / 'k.priv', '--public-key', self.dir / 'k.pub')
        self.assertRegex(err, r'semilla: \d+')

    def test_encrypt_decrypt_roundtrip(self):
        private, public = self.keygen()
        plaintext = '5a' * (SMALL_Q // 8) + '0f'
        ciphertext, _ = run('encrypt', '--public-key', public, '--plaintext', plaintext,
                            '--error-weight', 0, '--seed', 1)
        (self.dir / 'c.hex').write_text(ciphertext)
        recovered, _ = run('decrypt', '--private-key', private, '--ciphertext', f'@{self.dir / "c.hex"}')
        self.assertEqual(recovered.strip(), plaintext)

    def test_decoding_failure_exit_code(self):
        private, public = self.keygen()
        plaintext = '00' * ((SMALL_Q + 7) // 8)
        ciphertext, _ = run('encrypt', '--public-key', public, '--plaintext', plaintext,
                            '--error-weight', SMALL_Q, '--seed', 2)
        with self.assertRaises(CommandError) as ctx:
            run('decrypt', '--private-key', private, '--ciphertext', ciphertext.strip(),
                '--max-iterations', 20)
        self.assertEqual(ctx.exception.returncode, EXIT_DECODING_FAILURE)

    def test_missing_key_file(self):
        with self.assertRaises(CommandError) as ctx:
            run('decrypt', '--private-key', self.dir / 'missing.json', '--ciphertext', '00')
        self.assertEqual(ctx.exception.returncode, EXIT_IO)

    def test_wrong_key_role(self):
        private, public = self.keygen()
        with self.assertRaises(CommandError) as ctx:
            run('encrypt', '--public-key', private, '--plaintext', '00', '--seed', 1)
        self.assertEqual(ctx.exception.returncode, EXIT_IO)

    def test_bad_plaintext(self):
        _, public = self.keygen()
        with self.assertRaises(CommandError) as ctx:
            run('encrypt', '--public-key', public, '--plaintext', 'zz', '--seed', 1)
        self.assertEqual(ctx.exception.returncode, EXIT_USAGE)


class UsageErrorTests(SimpleTestCase):

    def test_missing_ensemble(self):
        with self.assertRaises(CommandError) as ctx:
            run('security', '--error-weight', 84)
        self.assertEqual(ctx.exception.returncode, EXIT_USAGE)

    def test_bad_choice(self):
        with self.assertRaises(CommandError) as ctx:
            run('security', '--ensemble', 'A', '--error-weight', 84, '--variant', 'ball-collision')
        self.assertEqual(ctx.exception.returncode, EXIT_USAGE)

    def test_json_error_record(self):
        err = StringIO()
        with self.assertRaises(CommandError):
            call_command('threshold', '--ensemble', 'A', '--algorithm', 'BP', '--error-format', 'json',
                         stdout=StringIO(), stderr=err)
        record = json.loads(err.getvalue().strip().splitlines()[-1])
        self.assertEqual(record['error'], 'ConfigurationError')
        self.assertEqual(record['exit_code'], EXIT_USAGE)
        self.assertIn('algorithm', record['message'])


class InspectCommandTests(WorkspaceMixin, SimpleTestCase):

    def test_ensemble_profile(self):
        out, _ = run('inspect', '--ensemble', 'C', '--Q', SMALL_Q, '--format', 'json')
        rows = {row['property']: row['value'] for row in json.loads(out)}
        self.assertEqual(rows['n'], 2 * SMALL_Q)
        self.assertEqual(rows['k'], SMALL_Q)
        self.assertEqual(rows['row_weight_bound'], 90)
        self.assertEqual(rows['punctured'], SMALL_Q)
        self.assertEqual(json.loads(rows['degrees.vn']), {'3': SMALL_Q, '23': 2 * SMALL_Q})

    def test_private_key_profile(self):
        private, _ = self.keygen(ensemble='C')
        out, _ = run('inspect', '--private-key', private, '--format', 'json')
        rows = {row['property']: row['value'] for row in json.loads(out)}
        self.assertEqual(rows['ensemble'], 'C')
        self.assertLessEqual(rows['row_weight'], 90)
        self.assertEqual(json.loads(rows['gamma_weights']), [[1, 22, 22], [2, 1, 1]])


class SecurityCommandTests(WorkspaceMixin, SimpleTestCase):

    def test_reference_report(self):
        out, _ = run('security', '--ensemble', 'A', '--error-weight', 84, '--format', 'json')
        rows = {row['attack']: row for row in json.loads(out)}
        self.assertEqual(set(rows), {'distinguishing', 'decoding', 'key-space'})
        self.assertAlmostEqual(rows['decoding']['bits'], 81.0, delta=3)
        self.assertIn('e=84', rows['decoding']['parameters'])

    def test_config_file(self):
        config = self.dir / 'security.toml'
        config.write_text('ensemble = "A"\nerror_weight = 84\nvariant = "stern"\nformat = "json"\n')
        out, _ = run('security', '--config', config)
        rows = json.loads(out)
        self.assertIn('stern', rows[1]['parameters'])
        out, _ = run('security', '--config', config, '--error-weight', 102)
        self.assertIn('e=102', json.loads(out)[1]['parameters'])

    def test_weight_from_curve(self):
        curve = self.dir / 'curve.csv'
        run('simulate', '--ensemble', 'A', '--Q', SMALL_Q, '--error-weights', f'0,{SMALL_Q}',
            '--trials', 4, '--seed', 3, '--output', curve)
        out, _ = run('security', '--ensemble', 'A', '--Q', SMALL_Q, '--curve', curve,
                     '--target-bler', 0.5, '--format', 'json')
        self.assertIn('e=0', json.loads(out)[1]['parameters'])

    def test_requires_weight_or_curve(self):
        with self.assertRaises(CommandError) as ctx:
            run('security', '--ensemble', 'A')
        self.assertEqual(ctx.exception.returncode, EXIT_USAGE)


class SimulateCommandTests(WorkspaceMixin, TestCase):

    def simulate(self, *args):
        out, _ = run('simulate', '--ensemble', 'A', '--Q', SMALL_Q, '--format', 'json', *args)
        return json.loads(out)

    def test_curve(self):
        points = self.simulate('--error-weights', f'0,{SMALL_Q}', '--trials', 5, '--seed', 3)
        self.assertEqual([p['e'] for p in points], [0, SMALL_Q])
        self.assertEqual([p['bler'] for p in points], [0.0, 1.0])
        self.assertEqual({p['seed'] for p in points}, {3})

    def test_reproducible(self):
        args = ('--error-weights', '2:6:2', '--trials', 6, '--seed', 17)
        self.assertEqual(self.simulate(*args), self.simulate(*args))

    def test_fixed_key_from_file(self):
        private, _ = self.keygen()
        points = self.simulate('--private-key', private, '--error-weights', 0, '--trials', 3, '--seed', 4)
        self.assertEqual(points[0]['failures'], 0)

    def test_public_key_requires_private(self):
        _, public = self.keygen()
        with self.assertRaises(CommandError) as ctx:
            self.simulate('--public-key', public, '--error-weights', 0, '--seed', 4)
        self.assertEqual(ctx.exception.returncode, EXIT_USAGE)

    def test_key_pair_must_match(self):
        private, public = self.keygen()
        _, other_public = self.keygen(name='other', seed=6)
        points = self.simulate('--private-key', private, '--public-key', public,
                               '--error-weights', 0, '--trials', 2, '--seed', 4)
        self.assertEqual(points[0]['failures'], 0)
        with self.assertRaises(CommandError) as ctx:
            self.simulate('--private-key', private, '--public-key', other_public,
                          '--error-weights', 0, '--seed', 4)
        self.assertEqual(ctx.exception.returncode, EXIT_USAGE)

    def test_record(self):
        self.simulate('--error-weights', '0,1', '--trials', 2, '--seed', 5, '--record')
        self.assertEqual(SimulationRecord.objects.count(), 2)
        self.assertEqual(SimulationRecord.objects.get(e=0).seed, '5')


class ThresholdCommandTests(TestCase):

    def test_rows_per_omega(self):
        out, _ = run('threshold', '--base', '[[3, 3]]', '--Q', 13, '--omega', 1, 2, '--format', 'json')
        rows = json.loads(out)
        self.assertEqual([row['omega'] for row in rows], [1.0, 2.0])
        for row in rows:
            self.assertEqual(row['algorithm'], ALGORITHM_E)
            self.assertGreater(row['delta_star'], 0)
            self.assertLess(row['delta_star'], 0.5)

    def test_record(self):
        run('threshold', '--base', '[[3, 3]]', '--Q', 13, '--record')
        self.assertEqual(ThresholdRecord.objects.count(), 1)
        self.assertEqual(ThresholdRecord.objects.get().ensemble, 'custom')

    @skipUnless(settings.MDPC_SLOW_TESTS, 'prueba larga (MDPC_SLOW_TESTS=1)')
    def test_reference_ensemble_csv(self):
        out, _ = run('threshold', '--ensemble', 'A', '--algorithm', 'E', '--omega', 14)
        [row] = list(csv.DictReader(StringIO(out)))
        self.assertAlmostEqual(float(row['n_delta_star']), 106, delta=2)
