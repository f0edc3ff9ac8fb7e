"""
Muestreo de vectores de error y de semillas por ensayo.
"""
import numpy as np

from mdpc_workbench.exceptions import WorkbenchError
from ring.polynomials import sample_sparse


class ErrorWeightError(WorkbenchError, ValueError):
    """Peso de error fuera de [0, n]"""


def sample_error_vector(n, e, rng):
    """Vector binario de longitud n con exactamente e unos, soporte uniforme"""
    if not 0 <= e <= n:
        raise ErrorWeightError(f'Peso de error {e} fuera de [0, {n}]')
    bits = np.zeros(n, dtype=np.uint8)
    bits[list(sample_sparse(n, e, rng).support)] = 1
    return bits


def trial_rng(master_seed, e, trial):
    """Generador del ensayo (e, trial), independiente del número de procesos"""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(e, trial)))
