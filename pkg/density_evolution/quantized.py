"""
Evolución de densidades cuantizada del suma-producto escalado.

Las LLR viven en la red {-L, ..., -step, 0, step, ..., L}. En los CN se
combinan pmf por pares con la operación boxplus tabulada; en los VN se
convolucionan y la masa fuera de [-L, L] se pliega en los extremos. El factor
omega de los CN se aplica como un mapa de índices sobre la red.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import signal

from mdpc_workbench.conf import workbench_setting

from .state import DensityEvolutionError, EdgeGroups, check_normalized, run_fixed_point

logger = logging.getLogger(__name__)

# Probabilidades por debajo de este valor se descartan tras cada operación
PRUNE_BELOW = 1e-20


@dataclass(frozen=True)
class Quantizer:
    step: float = None
    saturation: float = None

    def __post_init__(self):
        if self.step is None:
            object.__setattr__(self, 'step', workbench_setting('DE_QUANTIZATION_STEP'))
        if self.saturation is None:
            object.__setattr__(self, 'saturation', workbench_setting('DE_SATURATION'))
        if self.step <= 0 or self.saturation < self.step:
            raise DensityEvolutionError(f'Cuantización inválida: paso {self.step}, saturación {self.saturation}')
        half = self.saturation / self.step
        if abs(half - round(half)) > 1e-9:
            raise DensityEvolutionError('La saturación debe ser múltiplo del paso')

    @property
    def half_width(self):
        """K: la red tiene 2K + 1 puntos"""
        return int(round(self.saturation / self.step))

    @property
    def size(self):
        return 2 * self.half_width + 1

    @property
    def values(self):
        return (np.arange(self.size) - self.half_width) * self.step

    def index(self, llr):
        """Índice del punto más cercano, saturado en +-L"""
        k = np.rint(np.asarray(llr, dtype=float) / self.step).astype(np.int64)
        return np.clip(k, -self.half_width, self.half_width) + self.half_width

    def point(self, llr):
        probs = np.zeros(self.size)
        probs[self.index(llr)] = 1.0
        return probs


@lru_cache(maxsize=8)
def _boxplus_table(step, saturation):
    """Índice de a [+] b para cada par de puntos de la red"""
    q = Quantizer(step, saturation)
    a = q.values[:, None]
    b = q.values[None, :]
    combined = (
        np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
        + np.log1p(np.exp(-np.abs(a + b)))
        - np.log1p(np.exp(-np.abs(a - b)))
    )
    table = q.index(combined).astype(np.int32)
    table.setflags(write=False)
    return table


@dataclass(frozen=True, eq=False)
class QuantizedLLRPMF:
    quantizer: Quantizer
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.shape != (self.quantizer.size,):
            raise DensityEvolutionError('La pmf no tiene el tamaño de la red')
        object.__setattr__(self, 'probs', check_normalized(probs, 'pmf cuantizada'))

    def error_probability(self):
        """P(LLR < 0) + P(LLR = 0)/2"""
        K = self.quantizer.half_width
        return float(self.probs[:K].sum() + 0.5 * self.probs[K])


def _prune(probs):
    probs = np.where(probs < PRUNE_BELOW, 0.0, probs)
    total = probs.sum()
    if total <= 0:
        raise DensityEvolutionError('Se perdió toda la masa de la pmf')
    return probs / total


def boxplus(quantizer, p, q):
    """pmf de a [+] b para a ~ p, b ~ q independientes"""
    if p is None:
        return q
    if q is None:
        return p
    table = _boxplus_table(quantizer.step, quantizer.saturation)
    ia = np.flatnonzero(p)
    ib = np.flatnonzero(q)
    weights = np.outer(p[ia], q[ib]).ravel()
    out = np.bincount(table[np.ix_(ia, ib)].ravel(), weights=weights, minlength=quantizer.size)
    return _prune(check_normalized(out, 'CN'))


def convolve(quantizer, p, q):
    """pmf de a + b saturada en +-L"""
    if p is None:
        return q
    if q is None:
        return p
    ia = np.flatnonzero(p)
    ib = np.flatnonzero(q)
    a0, a1 = ia[0], ia[-1] + 1
    b0, b1 = ib[0], ib[-1] + 1
    conv = np.clip(signal.convolve(p[a0:a1], q[b0:b1]), 0.0, None)
    # índice del resultado: a0 + b0 - K en adelante
    index = np.arange(conv.size) + a0 + b0 - quantizer.half_width
    index = np.clip(index, 0, quantizer.size - 1)
    out = np.bincount(index, weights=conv, minlength=quantizer.size)
    return _prune(check_normalized(out, 'VN'))


def power(op, quantizer, p, k):
    """k-ésima potencia de p bajo op (boxplus o convolve); None es la identidad"""
    result = None
    base = p
    while k:
        if k & 1:
            result = op(quantizer, result, base)
        k >>= 1
        if k:
            base = op(quantizer, base, base)
    return result


def scale(quantizer, p, omega):
    """Distribución de omega * LLR sobre la red"""
    if omega == 1:
        return p
    index = quantizer.index(quantizer.values * omega)
    return np.bincount(index, weights=p, minlength=quantizer.size)


def channel_llr_pmf(quantizer, delta, state=False):
    """LLR del canal: +m con prob. 1 - delta y -m con delta, m = ln((1-delta)/delta)"""
    if state:
        return quantizer.point(0.0)
    if delta == 0:
        return quantizer.point(quantizer.saturation)
    m = np.log((1 - delta) / delta)
    probs = np.zeros(quantizer.size)
    probs[quantizer.index(m)] += 1 - delta
    probs[quantizer.index(-m)] += delta
    return probs


def _combine_excluding(op, quantizer, messages, group_ids, multiplicities):
    """
    Para cada grupo g: op sobre todas las entradas del nodo menos una copia de
    g. Devuelve también la combinación completa de cada grupo.
    """
    partial, full = {}, {}
    for g in group_ids:
        partial[g] = power(op, quantizer, messages[g], multiplicities[g] - 1)
        full[g] = op(quantizer, partial[g], messages[g])
    outputs = {}
    for g in group_ids:
        acc = partial[g]
        for other in group_ids:
            if other != g:
                acc = op(quantizer, acc, full[other])
        outputs[g] = acc
    return outputs, full


def de_run_spa(spec, delta, omega, quantizer=None, max_iter=None, eps=None):
    """
    Evolución de densidades cuantizada del SPA con los CN escalados por omega.
    Converge cuando, para todo tipo de VN, P(APP < 0) + P(APP = 0)/2 < eps.
    """
    if not 0 <= delta <= 0.5:
        raise DensityEvolutionError(f'delta debe estar en [0, 1/2], es {delta}')
    if omega < 0:
        raise DensityEvolutionError(f'omega debe ser >= 0, es {omega}')
    quantizer = quantizer or Quantizer()
    groups = EdgeGroups(spec.base)
    mult = groups.multiplicities
    channels = {j: channel_llr_pmf(quantizer, delta, groups.is_state(j)) for j in range(spec.base.N0)}
    identity = quantizer.point(quantizer.saturation)

    def cn_step(v2c):
        c2v = [None] * len(groups.groups)
        for ids in groups.by_cn.values():
            outputs, _ = _combine_excluding(boxplus, quantizer, v2c, ids, mult)
            for g, out in outputs.items():
                # CN de grado 1: producto vacío, LLR saturada
                out = identity if out is None else out
                c2v[g] = scale(quantizer, out, omega)
        return c2v

    def vn_step(c2v):
        v2c = [None] * len(groups.groups)
        for j, ids in groups.by_vn.items():
            outputs, _ = _combine_excluding(convolve, quantizer, c2v, ids, mult)
            for g, out in outputs.items():
                v2c[g] = convolve(quantizer, channels[j], out)
        return v2c

    def app_step(c2v):
        app = {}
        for j, ids in groups.by_vn.items():
            total = channels[j]
            for g in ids:
                total = convolve(quantizer, total, power(convolve, quantizer, c2v[g], mult[g]))
            app[j] = QuantizedLLRPMF(quantizer, total)
        residual = max(f.error_probability() for f in app.values())
        return residual, app

    initial = [None] * len(groups.groups)
    for j, ids in groups.by_vn.items():
        for g in ids:
            initial[g] = channels[j]
    return run_fixed_point(
        groups, initial, cn_step, vn_step, app_step, max_iter, eps,
        label=f'SPA {spec.name} delta={delta:.6g} omega={omega}',
    )
