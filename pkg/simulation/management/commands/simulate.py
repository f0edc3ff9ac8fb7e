from dataclasses import asdict

from cryptosystem.keyfiles import ROLE_PRIVATE, ROLE_PUBLIC, load_key
from cryptosystem.keys import PublicKey, default_error_weight, keys_match, public_polynomial
from mdpc_workbench.cli import WorkbenchCommand
from mdpc_workbench.exceptions import ConfigurationError
from simulation.engine import KEY_FIXED, KEY_POLICY_CHOICES, SimPlan, run_bler
from simulation.models import SimulationRecord
from simulation.results import SIM_COLUMNS

DEFAULT_TRIALS = 100


class Command(WorkbenchCommand):
    help = 'Mide la tasa de error de bloque frente al peso de error por Monte Carlo'
    uses_seed = True

    def add_command_arguments(self, parser):
        self.add_ensemble_arguments(parser)
        self.add_decoder_arguments(parser)
        parser.add_argument('--error-weights', dest='error_weights', help='Pesos: "80,90,100" o "80:120:5"')
        parser.add_argument('--trials', type=int, help=f'Ensayos por punto (por defecto {DEFAULT_TRIALS})')
        parser.add_argument('--max-failures', type=int, dest='max_failures', help='Detener un punto tras este número de fallos')
        parser.add_argument('--key-policy', dest='key_policy', choices=[c for c, _ in KEY_POLICY_CHOICES])
        parser.add_argument('--private-key', dest='private_key', help='Clave fija cargada de archivo')
        parser.add_argument('--public-key', dest='public_key', help='Clave pública de la clave fija')
        parser.add_argument('--workers', type=int, help='Procesos en paralelo')
        parser.add_argument('--record', action='store_true', help='Guardar los puntos en la base de datos')

    def run(self, config, options):
        keys = self.fixed_keys(config)
        spec = keys[0].spec if keys else self.ensemble_spec(config)
        if not config.get('error_weights'):
            raise ConfigurationError('Indique los pesos de error con --error-weights')
        plan = SimPlan(
            spec=spec,
            decoder=self.decoder_config(config),
            error_weights=config['error_weights'],
            trials=config.get('trials') or DEFAULT_TRIALS,
            seed=config['seed'],
            max_failures=config.get('max_failures'),
            key_policy=KEY_FIXED if keys else config['key_policy'],
            keys=keys,
        )
        points = run_bler(plan, workers=config.get('workers') or 1)
        if options.get('record'):
            for point in points:
                SimulationRecord.from_point(point)
        self.emit_table([asdict(point) for point in points], SIM_COLUMNS, config)

    def fixed_keys(self, config):
        if not config.get('private_key'):
            if config.get('public_key'):
                raise ConfigurationError('--public-key requiere --private-key')
            return None
        private = load_key(config['private_key'], role=ROLE_PRIVATE)
        if config.get('public_key'):
            public = load_key(config['public_key'], role=ROLE_PUBLIC)
            if not keys_match(private, public):
                raise ConfigurationError('La clave pública no corresponde a la clave privada')
        else:
            public = PublicKey(private.spec, public_polynomial(private.h), default_error_weight(private.spec))
        if config.get('spec') is not None and config['spec'] != private.spec:
            raise ConfigurationError('La clave no corresponde al ensamble indicado')
        return private, public
