"""
Base común de los comandos de manage.py del banco de trabajo.

Cada comando solo traduce opciones a una llamada de un módulo; aquí se
resuelven la configuración, la semilla, el formato de salida y la conversión
de excepciones en códigos de salida.
"""
import io
import json
import logging
import secrets
import sys
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from cryptosystem.keyfiles import KeyFileError
from decoders.message_passing import ALGORITHM_E, DecoderConfig, DecodingFailure
from ring.polynomials import bits_from_hex
from simulation.results import FORMAT_CHOICES, write_rows

from .exceptions import ConfigurationError, WorkbenchError
from .forms import run_config

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_DECODING_FAILURE = 2
EXIT_IO = 3


def exit_code_for(exc):
    if isinstance(exc, DecodingFailure):
        return EXIT_DECODING_FAILURE
    if isinstance(exc, (KeyFileError, OSError)):
        return EXIT_IO
    return EXIT_USAGE


class WorkbenchCommand(BaseCommand):
    """
    Subclases: definir add_command_arguments(parser) y run(config, options).
    config son los datos validados de RunConfigForm.
    """
    uses_seed = False

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        django_error = parser.error

        def error(message):
            # el código 2 queda para los fallos de decodificación
            if parser.called_from_command_line:
                parser.print_usage(sys.stderr)
                parser.exit(EXIT_USAGE, f'{parser.prog}: error: {message}\n')
            django_error(message)

        parser.error = error
        return parser

    def add_arguments(self, parser):
        parser.add_argument('--config', help='Archivo TOML de configuración (por defecto $MDPC_CONFIG)')
        parser.add_argument('--format', choices=[c for c, _ in FORMAT_CHOICES], help='Formato de tablas (csv por defecto)')
        parser.add_argument('--output', help='Archivo de salida (por defecto, salida estándar)')
        parser.add_argument(
            '--error-format', choices=['text', 'json'], default='text',
            help='json añade un registro de error legible por máquina en stderr',
        )
        if self.uses_seed:
            parser.add_argument('--seed', type=int, help='Semilla maestra; sin ella se toma de la entropía del sistema')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    @staticmethod
    def add_ensemble_arguments(parser):
        parser.add_argument('--ensemble', help='Ensamble predefinido (A, B o C)')
        parser.add_argument('--base', help='Matriz base en JSON, p. ej. "[[1,22,22],[2,1,1]]"')
        parser.add_argument('--state-columns', dest='state_columns', help='Columnas de estado, p. ej. "0"')
        parser.add_argument('--Q', type=int, dest='Q', help='Tamaño de circulante (4801 por defecto)')

    @staticmethod
    def add_decoder_arguments(parser):
        parser.add_argument('--algorithm', help='SPA o E')
        parser.add_argument('--omega', type=float, nargs='+', help='Factor omega')
        parser.add_argument('--max-iterations', type=int, dest='max_iterations')

    def handle(self, *args, **options):
        try:
            config = run_config(options, options.get('config'))
            if self.uses_seed and config.get('seed') is None:
                config['seed'] = secrets.randbits(64)
                self.stderr.write(f'semilla: {config["seed"]}')
            return self.run(config, options)
        except (WorkbenchError, OSError) as exc:
            code = exit_code_for(exc)
            logger.debug('%s terminó con código %d', type(self).__module__, code, exc_info=True)
            if options.get('error_format') == 'json':
                record = {'error': type(exc).__name__, 'message': str(exc), 'exit_code': code}
                self.stderr.write(json.dumps(record, ensure_ascii=False))
            raise CommandError(str(exc), returncode=code) from exc

    def run(self, config, options):
        raise NotImplementedError('Los comandos deben implementar run()')

    def require(self, config, *names):
        missing = [name for name in names if not config.get(name)]
        if missing:
            flags = ', '.join('--' + name.replace('_', '-') for name in missing)
            raise ConfigurationError(f'Faltan opciones: {flags}')
        return [config[name] for name in names]

    def emit_table(self, rows, columns, config):
        """Tabla en CSV o JSON hacia --output o la salida estándar"""
        buffer = io.StringIO()
        write_rows(rows, columns, buffer, config['format'])
        self.emit_text(buffer.getvalue(), config)

    def emit_text(self, text, config):
        if config.get('output'):
            Path(config['output']).write_text(text, encoding='utf-8')
        else:
            self.stdout.write(text, ending='' if text.endswith('\n') else '\n')

    def ensemble_spec(self, config):
        if config.get('spec') is None:
            raise ConfigurationError('Indique el ensamble con --ensemble o --base')
        return config['spec']

    def decoder_config(self, config):
        omegas = config.get('omega') or [1.0]
        if len(omegas) != 1:
            raise ConfigurationError('Este comando admite un único valor de --omega')
        return DecoderConfig(
            algorithm=config.get('algorithm') or ALGORITHM_E,
            omega=omegas[0],
            max_iterations=config.get('max_iterations'),
        )


def read_bits(value, length, label):
    """Vector de bits en hex; '@ruta' lee el hex de un archivo"""
    text = Path(value[1:]).read_text(encoding='utf-8') if value.startswith('@') else value
    try:
        return bits_from_hex(length, text)
    except ValueError as exc:
        raise ConfigurationError(f'{label} inválido: {exc}') from exc
