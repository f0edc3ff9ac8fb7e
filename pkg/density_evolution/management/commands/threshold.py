import logging

from decoders.message_passing import ALGORITHM_E, ALGORITHM_SPA
from density_evolution.models import ThresholdRecord
from density_evolution.threshold import THRESHOLD_COLUMNS, threshold_e, threshold_spa
from mdpc_workbench.cli import WorkbenchCommand

logger = logging.getLogger(__name__)


class Command(WorkbenchCommand):
    help = 'Calcula el umbral de evolución de densidades delta* (una fila por omega)'

    def add_command_arguments(self, parser):
        self.add_ensemble_arguments(parser)
        parser.add_argument('--algorithm', help='E (por defecto) o SPA')
        parser.add_argument('--omega', type=float, nargs='+', help='Uno o varios factores omega')
        parser.add_argument('--tol', type=float, help='Precisión de la bisección en delta (por defecto 1/(2n))')
        parser.add_argument('--record', action='store_true', help='Guardar los umbrales en la base de datos')

    def run(self, config, options):
        spec = self.ensemble_spec(config)
        algorithm = config.get('algorithm') or ALGORITHM_E
        rows = []
        for omega in config.get('omega') or [1.0]:
            if algorithm == ALGORITHM_SPA:
                result = threshold_spa(spec, omega, tol=config.get('tol'))
            else:
                result = threshold_e(spec, omega, tol=config.get('tol'))
            rows.append(result.as_row())
            if options.get('record'):
                ThresholdRecord.from_result(result)
                logger.info('Umbral guardado: %s omega=%s', spec.name, omega)
        self.emit_table(rows, THRESHOLD_COLUMNS, config)
