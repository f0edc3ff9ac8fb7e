import numpy as np

from cryptosystem.keyfiles import save_key
from cryptosystem.keys import keygen
from mdpc_workbench.cli import WorkbenchCommand


class Command(WorkbenchCommand):
    help = 'Genera un par de claves (privada y pública) para un ensamble'
    uses_seed = True

    def add_command_arguments(self, parser):
        self.add_ensemble_arguments(parser)
        parser.add_argument('--error-weight', type=int, dest='error_weight', help='Peso de error de la clave pública')
        parser.add_argument('--private-key', dest='private_key', help='Archivo de salida de la clave privada')
        parser.add_argument('--public-key', dest='public_key', help='Archivo de salida de la clave pública')

    def run(self, config, options):
        spec = self.ensemble_spec(config)
        private_path, public_path = self.require(config, 'private_key', 'public_key')
        private, public = keygen(spec, np.random.default_rng(config['seed']), config.get('error_weight'))
        save_key(private, private_path)
        save_key(public, public_path)
        self.stdout.write(self.style.SUCCESS(
            f'Claves de {spec} (peso de fila {private.row_weight}, e={public.error_weight}) '
            f'guardadas en {private_path} y {public_path}'
        ))
