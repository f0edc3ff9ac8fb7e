from mdpc_workbench.cli import WorkbenchCommand
from mdpc_workbench.exceptions import ConfigurationError
from security.report import REPORT_COLUMNS, security_report
from security.work_factors import VARIANT_CHOICES
from simulation.results import read_results


class Command(WorkbenchCommand):
    help = 'Estima los factores de trabajo de los ataques ISD y el espacio de claves'

    def add_command_arguments(self, parser):
        self.add_ensemble_arguments(parser)
        parser.add_argument('--error-weight', type=int, dest='error_weight', help='Peso de error del ataque de decodificación')
        parser.add_argument('--curve', help='CSV o JSON de simulate para leer e a la BLER objetivo')
        parser.add_argument('--target-bler', type=float, dest='target_bler', help='BLER objetivo (p. ej. 1e-3)')
        parser.add_argument('--variant', choices=[c for c, _ in VARIANT_CHOICES], help='Variante ISD (mmt por defecto)')

    def run(self, config, options):
        spec = self.ensemble_spec(config)
        points = None
        if config.get('error_weight') is None:
            if not config.get('curve') or config.get('target_bler') is None:
                raise ConfigurationError('Indique --error-weight o --curve con --target-bler')
            points = read_results(config['curve'])
        report = security_report(
            spec,
            error_weight=config.get('error_weight'),
            points=points,
            target_bler=config.get('target_bler'),
            variant=config['variant'],
        )
        self.emit_table(report.rows, REPORT_COLUMNS, config)
