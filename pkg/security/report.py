"""
Informe de seguridad de un ensamble: ataques de distinción de clave y de
decodificación, y tamaño del espacio de claves.
"""
import logging
from dataclasses import dataclass, field

from mdpc_workbench.exceptions import WorkbenchError
from protograph.ensembles import key_space_bits, weight_bound

from .work_factors import VARIANT_MMT, wf_dec, wf_dist

logger = logging.getLogger(__name__)

ATTACK_DISTINGUISHING = 'distinguishing'
ATTACK_DECODING = 'decoding'
ATTACK_KEY_SPACE = 'key-space'

REPORT_COLUMNS = ['ensemble', 'attack', 'parameters', 'bits']


class CurveCoverageError(WorkbenchError):
    """La curva de BLER no alcanza el objetivo; hace falta indicar e explícitamente"""


@dataclass
class SecurityReport:
    ensemble: str
    Q: int
    error_weight: int
    rows: list = field(default_factory=list)

    def bits(self, attack):
        for row in self.rows:
            if row['attack'] == attack:
                return row['bits']
        raise KeyError(attack)


def locate_error_weight(points, target_bler):
    """
    Mayor peso de error medido tal que la BLER no supera target_bler en él ni
    en ningún peso menor de la curva.
    """
    if not 0 < target_bler < 1:
        raise CurveCoverageError(f'BLER objetivo fuera de (0, 1): {target_bler}')
    located = None
    for point in sorted(points, key=lambda p: p.e):
        if point.bler > target_bler:
            break
        located = point.e
    if located is None:
        raise CurveCoverageError(
            f'Ningún punto de la curva tiene BLER <= {target_bler:g}; indique el peso de error con --error-weight'
        )
    return located


def security_report(spec, error_weight=None, points=None, target_bler=None, variant=VARIANT_MMT):
    """
    Factores de trabajo del ensamble. El peso de error se toma de error_weight
    o, si no se da, de la curva medida (points) en target_bler.
    """
    if error_weight is None:
        if points is None or target_bler is None:
            raise CurveCoverageError('Se necesita un peso de error o una curva con BLER objetivo')
        curve = [p for p in points if p.ensemble == spec.name and p.Q == spec.Q]
        if not curve:
            raise CurveCoverageError(f'La curva no contiene puntos de {spec}')
        error_weight = locate_error_weight(curve, target_bler)
        logger.info('%s: e=%d a BLER %g según la curva medida', spec, error_weight, target_bler)

    n, m = spec.block_length, spec.Q
    row_weight = weight_bound(spec.base)
    dist = wf_dist(n, m, row_weight, variant)
    dec = wf_dec(n, m, error_weight, variant)
    report = SecurityReport(ensemble=spec.name, Q=spec.Q, error_weight=error_weight)
    report.rows = [
        {
            'ensemble': spec.name,
            'attack': ATTACK_DISTINGUISHING,
            'parameters': f'n={n} m={m} w={row_weight} {dist.variant}{_params(dist)}',
            'bits': round(dist.log2_cost, 1),
        },
        {
            'ensemble': spec.name,
            'attack': ATTACK_DECODING,
            'parameters': f'n={n} m={m} e={error_weight} {dec.variant}{_params(dec)}',
            'bits': round(dec.log2_cost, 1),
        },
        {
            'ensemble': spec.name,
            'attack': ATTACK_KEY_SPACE,
            'parameters': f'Q={spec.Q}',
            'bits': round(key_space_bits(spec), 1),
        },
    ]
    return report


def _params(work_factor):
    if not work_factor.params:
        return ''
    return '(' + ' '.join(f'{k}={v}' for k, v in work_factor.params.items()) + ')'
