"""
Estructura común a los dos análisis de evolución de densidades: tipos de
arista del protografo, estado por tipo de arista y bucle de punto fijo con
detección de estancamiento.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from mdpc_workbench.conf import workbench_setting
from mdpc_workbench.exceptions import WorkbenchError

logger = logging.getLogger(__name__)

# Tolerancia de normalización de las pmf después de cada actualización
NORMALIZATION_TOLERANCE = 1e-9


class DensityEvolutionError(WorkbenchError):
    """Parámetros inválidos o pérdida de normalización durante la iteración"""


class EdgeGroups:
    """
    Aristas del protografo agrupadas por entrada (i, j) de la matriz base.

    Las b_ij aristas paralelas de una entrada son tipos distintos, pero por
    simetría llevan la misma pmf: se calcula una vez por grupo y se copia.
    """

    def __init__(self, base):
        self.base = base
        self.groups = [(i, j, b) for i, j, b in base.entries() if b > 0]
        self.multiplicities = [b for _, _, b in self.groups]
        self.edge_group = np.repeat(np.arange(len(self.groups)), self.multiplicities)
        self.by_cn = {i: [g for g, (gi, _, _) in enumerate(self.groups) if gi == i] for i in range(base.M0)}
        self.by_vn = {j: [g for g, (_, gj, _) in enumerate(self.groups) if gj == j] for j in range(base.N0)}
        self.state_columns = base.state_columns

    @property
    def edge_count(self):
        return int(self.edge_group.size)

    def is_state(self, j):
        return j in self.state_columns

    def per_edge(self, per_group):
        return np.stack([per_group[g] for g in self.edge_group]) if self.edge_count else np.zeros((0, 0))


@dataclass
class DEState:
    """pmf por tipo de arista dirigido (VN->CN y CN->VN)"""
    v2c: np.ndarray
    c2v: np.ndarray
    iteration: int = 0

    @property
    def edge_type_count(self):
        return len(self.v2c) + len(self.c2v)


@dataclass
class DEResult:
    converged: bool
    iterations: int
    residual: float
    trace: list = field(repr=False, default_factory=list)
    app: dict = field(repr=False, default_factory=dict)
    state: DEState = field(repr=False, default=None)
    stalled: bool = False


def check_normalized(probs, where):
    total = float(np.sum(probs))
    if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
        raise DensityEvolutionError(f'pmf no normalizada en {where}: suma {total!r}')
    if np.min(probs) < -NORMALIZATION_TOLERANCE:
        raise DensityEvolutionError(f'Probabilidad negativa en {where}')
    return np.clip(probs, 0.0, None)


def run_fixed_point(groups, initial_v2c, cn_step, vn_step, app_step, max_iter=None, eps=None, label=''):
    """
    Itera CN -> VN hasta que el residuo (max sobre tipos de VN) quede por debajo
    de eps, se estanque o se alcance max_iter.

    cn_step(v2c) -> c2v, vn_step(c2v) -> v2c, app_step(c2v) -> (residuo, app)
    operan sobre listas de pmf por grupo.
    """
    max_iter = max_iter or workbench_setting('DE_MAX_ITERATIONS')
    eps = eps if eps is not None else workbench_setting('DE_EPSILON')
    window = workbench_setting('DE_STALL_WINDOW')
    stall_tolerance = workbench_setting('DE_STALL_TOLERANCE')

    v2c = initial_v2c
    c2v = None
    trace = []
    app = {}
    converged = stalled = False
    iteration = 0
    for iteration in range(1, max_iter + 1):
        c2v = cn_step(v2c)
        v2c = vn_step(c2v)
        residual, app = app_step(c2v)
        trace.append(residual)
        if residual < eps:
            converged = True
            break
        if len(trace) > window and abs(trace[-1] - trace[-1 - window]) < stall_tolerance:
            stalled = True
            break

    if converged:
        _warn_if_not_monotone(trace, label)
    logger.debug(
        'DE %s: convergió=%s en %d iteraciones, residuo %.3e%s',
        label, converged, iteration, trace[-1] if trace else float('nan'),
        ' (estancada)' if stalled else '',
    )
    state = DEState(_rows(groups, v2c), _rows(groups, c2v), iteration)
    return DEResult(
        converged=converged,
        iterations=iteration,
        residual=trace[-1] if trace else float('nan'),
        trace=trace,
        app=app,
        state=state,
        stalled=stalled,
    )


def _warn_if_not_monotone(trace, label):
    """Tras el máximo inicial el residuo no debería crecer"""
    if len(trace) < 3:
        return
    peak = int(np.argmax(trace))
    tail = np.asarray(trace[peak:])
    increases = np.flatnonzero(np.diff(tail) > 1e-15 + 1e-9 * tail[:-1])
    if increases.size:
        logger.warning(
            'DE %s: residuo no monótono tras el transitorio (iteración %d)',
            label, peak + int(increases[0]) + 2,
        )


def _rows(groups, per_group):
    if per_group is None:
        return None
    if groups is None:
        return np.stack(per_group)
    return groups.per_edge(per_group)
