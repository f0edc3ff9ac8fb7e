"""
Simulación Monte Carlo de la tasa de error de bloque (BLER) frente al peso de
error.

Cada ensayo (e, t) usa su propio generador derivado de la semilla maestra, así
que el resultado no depende del número de procesos. Los ensayos se reparten en
bloques consecutivos y el corte por número de fallos se aplica en orden de
ensayo.
"""
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import django
import numpy as np
from django.conf import settings
from scipy.stats import norm

from cryptosystem.keys import decrypt, encrypt, keygen
from decoders.message_passing import DecoderConfig, DecodingFailure
from mdpc_workbench.conf import workbench_setting
from mdpc_workbench.exceptions import WorkbenchError

from .sampling import trial_rng

logger = logging.getLogger(__name__)

KEY_PER_TRIAL = 'per-trial'
KEY_FIXED = 'fixed'
KEY_POLICY_CHOICES = [
    (KEY_PER_TRIAL, 'Clave nueva por ensayo'),
    (KEY_FIXED, 'Clave fija'),
]

# Resultado de un ensayo
OUTCOME_SUCCESS = 0
OUTCOME_FAILURE = 1
OUTCOME_UNDETECTED = 2

# Flujo de la semilla maestra reservado a la clave fija
FIXED_KEY_STREAM = 0


class SimulationError(WorkbenchError):
    """Plan de simulación inválido"""


@dataclass
class SimPlan:
    spec: object
    decoder: DecoderConfig
    error_weights: list
    trials: int
    seed: int
    max_failures: int = None
    key_policy: str = KEY_PER_TRIAL
    keys: tuple = field(default=None, repr=False)

    def __post_init__(self):
        if self.max_failures is None:
            self.max_failures = workbench_setting('SIM_MAX_FAILURES')
        self.error_weights = [int(e) for e in self.error_weights]
        n = self.spec.block_length
        if self.trials < 1:
            raise SimulationError('Se necesita al menos un ensayo por punto')
        if self.max_failures < 1:
            raise SimulationError('El límite de fallos debe ser al menos 1')
        bad = [e for e in self.error_weights if not 0 <= e <= n]
        if bad:
            raise SimulationError(f'Pesos de error fuera de [0, {n}]: {bad}')
        if self.key_policy not in dict(KEY_POLICY_CHOICES):
            raise SimulationError(f'Política de clave desconocida: {self.key_policy!r}')
        if self.keys is not None:
            if self.key_policy != KEY_FIXED:
                raise SimulationError('Solo la política de clave fija admite una clave dada')
            if self.keys[0].spec != self.spec:
                raise SimulationError('La clave no corresponde al ensamble del plan')

    def fixed_keys(self):
        """Clave del modo fijo: la dada o una generada una vez desde la semilla maestra"""
        if self.keys is None:
            rng = np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(FIXED_KEY_STREAM,)))
            self.keys = keygen(self.spec, rng)
        return self.keys


@dataclass
class SimPoint:
    ensemble: str
    algorithm: str
    omega: float
    Q: int
    e: int
    trials: int
    failures: int
    bler: float
    ci_lo: float
    ci_hi: float
    seed: int
    undetected: int = 0

    def __post_init__(self):
        if not 0 <= self.failures <= self.trials:
            raise SimulationError('El número de fallos debe estar en [0, ensayos]')
        if not 0 <= self.undetected <= self.failures:
            raise SimulationError('Los errores no detectados se cuentan también como fallos')


def wilson_interval(failures, trials, confidence=0.95):
    """Intervalo de Wilson para una proporción binomial"""
    if trials < 1:
        raise SimulationError('El intervalo necesita al menos un ensayo')
    z = norm.ppf(1 - (1 - confidence) / 2)
    p = failures / trials
    denom = 1 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * np.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, min(p, center - half)), min(1.0, max(p, center + half))


def run_trial(spec, cfg, e, keys, master_seed, trial):
    """Un cifrado y descifrado completo; devuelve el código de resultado"""
    rng = trial_rng(master_seed, e, trial)
    private, public = keys if keys is not None else keygen(spec, rng)
    u = rng.integers(0, 2, spec.Q, dtype=np.uint8)
    c = encrypt(public, u, rng, error_weight=e)
    try:
        recovered = decrypt(private, c, cfg, error_weight=e)
    except DecodingFailure:
        return OUTCOME_FAILURE
    if np.array_equal(recovered, u):
        return OUTCOME_SUCCESS
    return OUTCOME_UNDETECTED


def _run_chunk(spec, cfg, e, keys, master_seed, start, stop):
    return np.array(
        [run_trial(spec, cfg, e, keys, master_seed, t) for t in range(start, stop)],
        dtype=np.uint8,
    )


def _init_worker():
    if not settings.configured:
        os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'mdpc_workbench.settings')
        django.setup()


class _Tally:
    """Acumula resultados en orden de ensayo hasta el límite de fallos"""

    def __init__(self, trials, max_failures):
        self.trials = trials
        self.max_failures = max_failures
        self.run = 0
        self.failures = 0
        self.undetected = 0

    @property
    def done(self):
        return self.run >= self.trials or self.failures >= self.max_failures

    def add(self, outcomes):
        for outcome in outcomes:
            if self.done:
                return
            self.run += 1
            if outcome != OUTCOME_SUCCESS:
                self.failures += 1
            if outcome == OUTCOME_UNDETECTED:
                self.undetected += 1


def _chunks(trials, size):
    return [(start, min(start + size, trials)) for start in range(0, trials, size)]


def _simulate_weight(plan, e, keys, executor, workers):
    tally = _Tally(plan.trials, plan.max_failures)
    chunks = _chunks(plan.trials, workbench_setting('SIM_CHUNK_SIZE'))
    args = (plan.spec, plan.decoder, e, keys, plan.seed)
    if executor is None:
        for start, stop in chunks:
            tally.add(_run_chunk(*args, start, stop))
            if tally.done:
                break
        return tally

    wave = 2 * workers
    for first in range(0, len(chunks), wave):
        futures = [executor.submit(_run_chunk, *args, start, stop) for start, stop in chunks[first:first + wave]]
        for future in futures:
            if tally.done:
                future.cancel()
                continue
            tally.add(future.result())
        if tally.done:
            break
    return tally


def run_bler(plan, workers=1):
    """
    Mide la BLER para cada peso de error del plan. Un fallo de decodificación y
    un texto claro incorrecto cuentan como fallo; los segundos se cuentan
    además como errores no detectados.
    """
    keys = plan.fixed_keys() if plan.key_policy == KEY_FIXED else None
    workers = max(1, int(workers))
    executor = ProcessPoolExecutor(max_workers=workers, initializer=_init_worker) if workers > 1 else None
    points = []
    try:
        for e in plan.error_weights:
            tally = _simulate_weight(plan, e, keys, executor, workers)
            if tally.failures >= plan.max_failures and tally.run < plan.trials:
                logger.warning(
                    'e=%d: límite de %d fallos alcanzado tras %d de %d ensayos',
                    e, plan.max_failures, tally.run, plan.trials,
                )
            ci_lo, ci_hi = wilson_interval(tally.failures, tally.run)
            point = SimPoint(
                ensemble=plan.spec.name,
                algorithm=plan.decoder.algorithm,
                omega=plan.decoder.omega,
                Q=plan.spec.Q,
                e=e,
                trials=tally.run,
                failures=tally.failures,
                bler=tally.failures / tally.run,
                ci_lo=ci_lo,
                ci_hi=ci_hi,
                seed=plan.seed,
                undetected=tally.undetected,
            )
            logger.info(
                '%s %s omega=%s e=%d: %d/%d fallos (BLER %.3e, IC95 [%.3e, %.3e])',
                point.ensemble, point.algorithm, point.omega, e, point.failures, point.trials,
                point.bler, point.ci_lo, point.ci_hi,
            )
            points.append(point)
    finally:
        if executor is not None:
            executor.shutdown(cancel_futures=True)
    return points
