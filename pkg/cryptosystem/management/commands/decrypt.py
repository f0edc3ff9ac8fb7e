from cryptosystem.keyfiles import ROLE_PRIVATE, load_key
from cryptosystem.keys import decrypt
from mdpc_workbench.cli import WorkbenchCommand, read_bits
from ring.polynomials import bits_to_hex


class Command(WorkbenchCommand):
    help = 'Descifra un texto cifrado (hex) con una clave privada; código 2 si la decodificación falla'

    def add_command_arguments(self, parser):
        parser.add_argument('--private-key', dest='private_key', help='Archivo de la clave privada')
        parser.add_argument('--ciphertext', help='Texto cifrado en hex, o @archivo')
        parser.add_argument('--error-weight', type=int, dest='error_weight', help='Peso de error supuesto por el SPA')
        self.add_decoder_arguments(parser)

    def run(self, config, options):
        private_path, ciphertext = self.require(config, 'private_key', 'ciphertext')
        private = load_key(private_path, role=ROLE_PRIVATE)
        c = read_bits(ciphertext, private.block_length, 'Texto cifrado')
        u = decrypt(private, c, self.decoder_config(config), config.get('error_weight'))
        self.emit_text(bits_to_hex(u) + '\n', config)
