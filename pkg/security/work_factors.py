"""
Factores de trabajo de decodificación por conjuntos de información (ISD).

Todos los costes se expresan en log2 de operaciones elementales: una por
elemento de lista y por comparación de síndromes parciales. La eliminación
gaussiana (n·k·(n-k)) se cobra una vez y cada iteración añade la comprobación
de peso (n-k). Los binomiales se calculan con enteros exactos.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from mdpc_workbench.conf import workbench_setting
from mdpc_workbench.exceptions import WorkbenchError
from mdpc_workbench.mathutils import log2_add, log2_binomial

logger = logging.getLogger(__name__)

VARIANT_PRANGE = 'prange'
VARIANT_STERN = 'stern'
VARIANT_MMT = 'mmt'
VARIANT_CHOICES = [
    (VARIANT_PRANGE, 'Prange'),
    (VARIANT_STERN, 'Stern'),
    (VARIANT_MMT, 'May-Meurer-Thomae'),
]


class InfeasibleParametersError(WorkbenchError):
    """Ningún parámetro interno de la variante es admisible para (n, k, w)"""


@dataclass(frozen=True)
class WorkFactor:
    log2_cost: float
    variant: str = ''
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not math.isfinite(self.log2_cost) or self.log2_cost < 0:
            raise InfeasibleParametersError(f'Coste inválido: {self.log2_cost}')

    def minus_bits(self, bits):
        """Mismo ataque con el coste dividido por 2^bits (nunca por debajo de 0)"""
        return WorkFactor(max(0.0, self.log2_cost - bits), self.variant, self.params)

    def __str__(self):
        params = ', '.join(f'{k}={v}' for k, v in self.params.items())
        return f'2^{self.log2_cost:.1f} ({self.variant}{": " + params if params else ""})'


def _check(n, k, w):
    if not 0 < k < n:
        raise InfeasibleParametersError(f'Se requiere 0 < k < n (n={n}, k={k})')
    if not 0 <= w <= n:
        raise InfeasibleParametersError(f'Se requiere 0 <= w <= n (n={n}, w={w})')


def _log2_gauss(n, k):
    return math.log2(n) + math.log2(k) + math.log2(n - k)


def _log2_solutions(n, k, w):
    """log2 min(C(n, w), 2^(n-k)): número de candidatos que comparten síndrome"""
    return min(log2_binomial(n, w), float(n - k))


def _total(n, k, log2_iteration, log2_success):
    """Eliminación + iteraciones esperadas * coste por iteración"""
    log2_success = min(0.0, log2_success)
    return log2_add(_log2_gauss(n, k), log2_iteration - log2_success)


def prange_expected_iterations(n, k, w):
    """C(n, w)/C(n-k, w): iteraciones esperadas de Prange sin cota de soluciones"""
    _check(n, k, w)
    if w > n - k:
        raise InfeasibleParametersError(f'Prange requiere w <= n-k (w={w}, n-k={n - k})')
    return 2 ** (log2_binomial(n, w) - log2_binomial(n - k, w))


def _prange(n, k, w, max_p, max_l):
    if w > n - k:
        raise InfeasibleParametersError(f'Prange requiere w <= n-k (w={w}, n-k={n - k})')
    success = log2_binomial(n - k, w) - _log2_solutions(n, k, w)
    return _total(n, k, math.log2(n - k), success), {}


def _stern(n, k, w, max_p, max_l):
    r = n - k
    best, best_params = math.inf, None
    for p in range(0, min(max_p, w) + 1, 2):
        for l in range(0, min(max_l, r - (w - p)) + 1):
            half = (k + l) // 2
            log2_list = log2_binomial(half, p // 2)
            if log2_list == -math.inf:
                continue
            iteration = log2_add(
                log2_add(1 + log2_list, 2 * log2_list - l),
                math.log2(r),
            )
            success = 2 * log2_list + log2_binomial(r - l, w - p) - _log2_solutions(n, k, w)
            cost = _total(n, k, iteration, success)
            if cost < best:
                best, best_params = cost, {'p': p, 'l': l}
    if best_params is None:
        raise InfeasibleParametersError(f'Stern sin parámetros admisibles para (n={n}, k={k}, w={w})')
    return best, best_params


def _mmt(n, k, w, max_p, max_l):
    r = n - k
    best, best_params = math.inf, None
    for p in range(0, min(max_p, w) + 1, 2):
        log2_reps = log2_binomial(p, p // 2)
        for l in range(0, min(max_l, r - (w - p)) + 1):
            k_ext = k + l
            log2_half = log2_binomial(k_ext, p // 2)
            if log2_half == -math.inf or p > k_ext:
                continue
            base_success = log2_binomial(k_ext, p) + log2_binomial(r - l, w - p) - _log2_solutions(n, k, w)
            for l2 in range(0, min(l, int(math.floor(log2_reps))) + 1):
                log2_l0 = log2_half / 2
                log2_l1 = log2_half - l2
                iteration = log2_add(
                    log2_add(2 + log2_l0, 1 + log2_l1),
                    log2_add(2 * log2_l1 - (l - l2), math.log2(r)),
                )
                success = base_success + min(0.0, log2_reps - l2)
                cost = _total(n, k, iteration, success)
                if cost < best:
                    best, best_params = cost, {'p': p, 'l': l, 'l2': l2}
    if best_params is None:
        raise InfeasibleParametersError(f'MMT sin parámetros admisibles para (n={n}, k={k}, w={w})')
    return best, best_params


_VARIANTS = {
    VARIANT_PRANGE: _prange,
    VARIANT_STERN: _stern,
    VARIANT_MMT: _mmt,
}


def wf_isd(n, k, w, variant=VARIANT_MMT, max_p=None, max_l=None):
    """
    log2 del coste esperado de encontrar un vector de peso w con un síndrome
    dado en un código [n, k], minimizado sobre la rejilla de parámetros de la
    variante (p par <= max_p, l <= max_l).
    """
    _check(n, k, w)
    if variant not in _VARIANTS:
        raise InfeasibleParametersError(f'Variante ISD desconocida: {variant!r}')
    max_p = workbench_setting('ISD_MAX_P') if max_p is None else max_p
    max_l = workbench_setting('ISD_MAX_L') if max_l is None else max_l
    cost, params = _VARIANTS[variant](n, k, w, max_p, max_l)
    logger.debug('ISD %s (n=%d, k=%d, w=%d): 2^%.2f con %s', variant, n, k, w, cost, params)
    return WorkFactor(cost, variant, params)


def wf_dist(n, m, dc, variant=VARIANT_MMT):
    """Distinguir la clave: buscar una fila de H de peso dc en el dual, con ganancia m"""
    if dc > n:
        raise InfeasibleParametersError(f'dc={dc} mayor que n={n}')
    return wf_isd(n, n - m, dc, variant).minus_bits(math.log2(m))


def wf_dec(n, m, e, variant=VARIANT_MMT):
    """Decodificar un cifrado de peso e, con ganancia sqrt(m) por decodificar uno entre muchos"""
    if e > n:
        raise InfeasibleParametersError(f'e={e} mayor que n={n}')
    return wf_isd(n, n - m, e, variant).minus_bits(math.log2(m) / 2)


def simulate_prange_iterations(n, k, w, runs, rng):
    """
    Prange literal: se fija un error de peso w y se eligen conjuntos de
    información al azar hasta que ninguno de sus k índices toque el error.
    Devuelve el número medio de iteraciones por ejecución.
    """
    _check(n, k, w)
    if w > n - k:
        raise InfeasibleParametersError('Prange requiere w <= n-k')
    counts = np.empty(runs, dtype=np.int64)
    for run in range(runs):
        error = np.zeros(n, dtype=bool)
        error[rng.choice(n, size=w, replace=False)] = True
        iterations = 1
        while error[rng.permutation(n)[:k]].any():
            iterations += 1
        counts[run] = iterations
    return float(counts.mean())
