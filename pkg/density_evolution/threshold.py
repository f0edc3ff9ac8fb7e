"""
Búsqueda del umbral delta* por bisección sobre la probabilidad de cruce del BSC.
"""
import logging
from dataclasses import asdict, dataclass

from decoders.message_passing import ALGORITHM_E, ALGORITHM_SPA

from .algorithm_e import de_run_e
from .quantized import de_run_spa
from .state import DensityEvolutionError

logger = logging.getLogger(__name__)

THRESHOLD_COLUMNS = [
    'ensemble', 'algorithm', 'omega', 'Q', 'delta_star', 'n_delta_star', 'iterations', 'residual',
]


class ThresholdBracketError(DensityEvolutionError):
    """El intervalo inicial no encierra la transición de convergencia"""


@dataclass
class ThresholdResult:
    ensemble: str
    algorithm: str
    omega: float
    Q: int
    delta_star: float
    n_delta_star: float
    iterations: int
    residual: float
    probes: int = 0

    def as_row(self):
        row = asdict(self)
        row.pop('probes')
        return row


def bisect_threshold(run, n, tol=None, lo=0.0, hi=0.5, label=''):
    """
    Mayor delta en [lo, hi] para el que run(delta) converge, con precisión tol
    (por defecto 1/(2n)). Devuelve (delta*, resultado en delta*, sondeos).
    """
    tol = tol or 1 / (2 * n)
    if tol <= 0:
        raise DensityEvolutionError('tol debe ser positiva')
    at_lo = run(lo)
    if not at_lo.converged:
        raise ThresholdBracketError(f'{label}: no converge en el extremo inferior delta={lo}')
    at_hi = run(hi)
    if at_hi.converged:
        raise ThresholdBracketError(f'{label}: converge en el extremo superior delta={hi}')
    probes = 2
    while hi - lo > tol:
        mid = (lo + hi) / 2
        result = run(mid)
        probes += 1
        logger.info(
            '%s: delta=%.6f (n*delta=%.2f) %s tras %d iteraciones',
            label, mid, n * mid, 'converge' if result.converged else 'no converge', result.iterations,
        )
        if result.converged:
            lo, at_lo = mid, result
        else:
            hi = mid
    return lo, at_lo, probes


def _threshold(spec, algorithm, omega, run, tol):
    n = spec.block_length
    label = f'{algorithm} {spec.name} omega={omega}'
    delta_star, result, probes = bisect_threshold(run, n, tol, label=label)
    logger.info('%s: delta*=%.6f, n*delta*=%.2f (%d sondeos)', label, delta_star, n * delta_star, probes)
    return ThresholdResult(
        ensemble=spec.name,
        algorithm=algorithm,
        omega=omega,
        Q=spec.Q,
        delta_star=delta_star,
        n_delta_star=n * delta_star,
        iterations=result.iterations,
        residual=result.residual,
        probes=probes,
    )


def threshold_e(spec, omega, tol=None, max_iter=None, eps=None):
    """Umbral del Algoritmo E para omega entero"""
    return _threshold(
        spec, ALGORITHM_E, omega,
        lambda delta: de_run_e(spec, delta, omega, max_iter=max_iter, eps=eps), tol,
    )


def threshold_spa(spec, omega, tol=None, quantizer=None, max_iter=None, eps=None):
    """Umbral del SPA escalado por omega (evolución de densidades cuantizada)"""
    return _threshold(
        spec, ALGORITHM_SPA, omega,
        lambda delta: de_run_spa(spec, delta, omega, quantizer=quantizer, max_iter=max_iter, eps=eps), tol,
    )
