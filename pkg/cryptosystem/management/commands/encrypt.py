import numpy as np

from cryptosystem.keyfiles import ROLE_PUBLIC, load_key
from cryptosystem.keys import encrypt
from mdpc_workbench.cli import WorkbenchCommand, read_bits
from ring.polynomials import bits_to_hex


class Command(WorkbenchCommand):
    help = 'Cifra un texto claro de Q bits (hex) con una clave pública'
    uses_seed = True

    def add_command_arguments(self, parser):
        parser.add_argument('--public-key', dest='public_key', help='Archivo de la clave pública')
        parser.add_argument('--plaintext', help='Texto claro en hex, o @archivo')
        parser.add_argument('--error-weight', type=int, dest='error_weight', help='Peso de error (por defecto, el de la clave)')

    def run(self, config, options):
        public_path, plaintext = self.require(config, 'public_key', 'plaintext')
        public = load_key(public_path, role=ROLE_PUBLIC)
        u = read_bits(plaintext, public.Q, 'Texto claro')
        c = encrypt(public, u, np.random.default_rng(config['seed']), config.get('error_weight'))
        self.emit_text(bits_to_hex(c) + '\n', config)
