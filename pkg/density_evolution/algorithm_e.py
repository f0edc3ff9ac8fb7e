"""
Evolución de densidades del Algoritmo E sobre protografos.

Los mensajes son pmf ternarias (p_-1, p_0, p_+1). En los CN la salida tiene
forma cerrada; en los VN se convoluciona sobre la red entera y se agrupa por
signo.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy import signal

from .state import (
    DensityEvolutionError,
    EdgeGroups,
    check_normalized,
    run_fixed_point,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TernaryPMF:
    """pmf sobre {-1, 0, +1}"""
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.shape != (3,):
            raise DensityEvolutionError('Una pmf ternaria tiene exactamente 3 entradas')
        if probs.min() < -1e-12 or abs(probs.sum() - 1) > 1e-12:
            raise DensityEvolutionError(f'pmf ternaria inválida: {probs.tolist()}')
        object.__setattr__(self, 'probs', np.clip(probs, 0.0, 1.0))

    @classmethod
    def of(cls, minus, zero, plus):
        return cls(np.array([minus, zero, plus], dtype=float))

    @property
    def minus(self):
        return float(self.probs[0])

    @property
    def zero(self):
        return float(self.probs[1])

    @property
    def plus(self):
        return float(self.probs[2])

    def to_lattice(self):
        return LatticePMF(-1, self.probs)

    def __eq__(self, other):
        if not isinstance(other, TernaryPMF):
            return NotImplemented
        return np.allclose(self.probs, other.probs, atol=1e-12)

    __hash__ = None

    def __repr__(self):
        return f'TernaryPMF({self.minus:.6g}, {self.zero:.6g}, {self.plus:.6g})'


@dataclass(frozen=True, eq=False)
class LatticePMF:
    """pmf sobre los enteros lo, lo+1, ..., lo+len(probs)-1"""
    lo: int
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise DensityEvolutionError('pmf de red vacía')
        if probs.min() < -1e-12 or abs(probs.sum() - 1) > 1e-12:
            raise DensityEvolutionError('pmf de red inválida')
        object.__setattr__(self, 'lo', int(self.lo))
        object.__setattr__(self, 'probs', np.clip(probs, 0.0, None))

    @classmethod
    def point(cls, value):
        return cls(value, np.array([1.0]))

    def support(self):
        return [self.lo + int(k) for k in np.flatnonzero(self.probs)]

    def convolve(self, other):
        return LatticePMF(self.lo + other.lo, signal.convolve(self.probs, other.probs))

    def sign_bins(self):
        return TernaryPMF(_sign_bins(self.lo, self.probs))


def _sign_bins(lo, probs):
    values = np.arange(lo, lo + probs.size)
    return np.array([probs[values < 0].sum(), probs[values == 0].sum(), probs[values > 0].sum()])


def _lattice_power(lo, probs, k):
    """k-ésima potencia de convolución (exponenciación por cuadrados)"""
    result_lo, result = 0, np.array([1.0])
    base_lo, base = lo, probs
    while k:
        if k & 1:
            result_lo, result = result_lo + base_lo, signal.convolve(result, base)
        k >>= 1
        if k:
            base_lo, base = 2 * base_lo, signal.convolve(base, base)
    return result_lo, result


def _cn_closed_form(inputs):
    """
    Salida de un CN con entradas [(q, multiplicidad)]:
    A = prod(1 - q_0), D = prod(q_+1 - q_-1),
    p_-1 = (A - D)/2, p_0 = 1 - A, p_+1 = (A + D)/2.
    """
    log_a = 0.0
    d = 1.0
    for q, mult in inputs:
        if mult == 0:
            continue
        log_a += mult * np.log1p(-q[1]) if q[1] < 1 else -np.inf
        d *= (q[2] - q[0]) ** mult
    a = np.exp(log_a)
    return np.array([(a - d) / 2, -np.expm1(log_a), (a + d) / 2])


def cn_update_e(inputs):
    """Salida de un CN de grado d a partir de sus d-1 entradas extrínsecas"""
    if not inputs:
        raise DensityEvolutionError('Un CN necesita al menos una entrada')
    return TernaryPMF(check_normalized(_cn_closed_form([(q.probs, 1) for q in inputs]), 'CN'))


def _check_channel(channel, allowed):
    support = channel.support()
    magnitudes = {abs(v) for v in support if v != 0}
    if len(magnitudes) > 1 or (allowed is not None and magnitudes - {allowed}):
        raise DensityEvolutionError(f'Soporte de canal inválido: {support}')


def vn_update_e(inputs, channel):
    """Convolución del canal (soporte {-w, 0, +w}) con las entradas y agrupación por signo"""
    _check_channel(channel, None)
    z = channel
    for q in inputs:
        z = z.convolve(q.to_lattice())
    return z.sign_bins()


def app_e(inputs, channel_prime):
    """Estimación APP final: como vn_update_e, sin arista excluida y con el canal m'"""
    _check_channel(channel_prime, 1)
    return vn_update_e(inputs, channel_prime)


def channel_vector(delta, omega, state=False):
    """Mensaje del canal amplificado: -omega con prob. delta, +omega con 1 - delta"""
    if state:
        return LatticePMF.point(0)
    probs = np.zeros(2 * omega + 1)
    probs[0] = delta
    probs[-1] += 1 - delta
    return LatticePMF(-omega, probs)


def channel_prime_vector(delta, state=False):
    return channel_vector(delta, 1, state)


def _validate(delta, omega):
    if not 0 <= delta <= 0.5:
        raise DensityEvolutionError(f'delta debe estar en [0, 1/2], es {delta}')
    if int(omega) != omega or omega < 1:
        raise DensityEvolutionError(f'omega debe ser un entero >= 1 para el Algoritmo E, es {omega}')
    return int(omega)


def _vn_messages(channel, c2v, group_ids, multiplicities):
    """
    Para cada grupo g del VN: sign(canal + todas las entradas menos una copia
    de g). Se reutilizan las potencias parciales y completas de cada grupo.
    """
    partial, full = {}, {}
    for g in group_ids:
        lo, probs = _lattice_power(-1, c2v[g], multiplicities[g] - 1)
        partial[g] = (lo, probs)
        full[g] = (lo - 1, signal.convolve(probs, c2v[g]))
    outputs = {}
    for g in group_ids:
        lo, probs = channel.lo + partial[g][0], signal.convolve(channel.probs, partial[g][1])
        for other in group_ids:
            if other != g:
                lo, probs = lo + full[other][0], signal.convolve(probs, full[other][1])
        outputs[g] = check_normalized(_sign_bins(lo, probs), 'VN')
    return outputs, full


def _app(channel_prime, full, group_ids):
    lo, probs = channel_prime.lo, channel_prime.probs
    for g in group_ids:
        lo, probs = lo + full[g][0], signal.convolve(probs, full[g][1])
    return check_normalized(_sign_bins(lo, probs), 'APP')


def de_run_e(spec, delta, omega, max_iter=None, eps=None):
    """
    Evolución de densidades del Algoritmo E para el ensamble. Converge cuando
    max sobre tipos de VN de (f_-1 + f_0) < eps.
    """
    omega = _validate(delta, omega)
    groups = EdgeGroups(spec.base)
    mult = groups.multiplicities
    columns = range(spec.base.N0)
    channels = {j: channel_vector(delta, omega, groups.is_state(j)) for j in columns}
    primes = {j: channel_prime_vector(delta, groups.is_state(j)) for j in columns}

    def cn_step(v2c):
        c2v = [None] * len(groups.groups)
        for i, ids in groups.by_cn.items():
            for g in ids:
                inputs = [(v2c[h], mult[h] - (h == g)) for h in ids]
                c2v[g] = check_normalized(_cn_closed_form(inputs), 'CN')
        return c2v

    def vn_step(c2v):
        v2c = [None] * len(groups.groups)
        for j, ids in groups.by_vn.items():
            outputs, _ = _vn_messages(channels[j], c2v, ids, mult)
            for g, q in outputs.items():
                v2c[g] = q
        return v2c

    def app_step(c2v):
        app = {}
        for j, ids in groups.by_vn.items():
            full = {}
            for g in ids:
                lo, probs = _lattice_power(-1, c2v[g], mult[g])
                full[g] = (lo, probs)
            app[j] = TernaryPMF(_app(primes[j], full, ids))
        residual = max(f.minus + f.zero for f in app.values())
        return residual, app

    initial = [None] * len(groups.groups)
    for j, ids in groups.by_vn.items():
        for g in ids:
            initial[g] = channels[j].sign_bins().probs
    return run_fixed_point(
        groups, initial, cn_step, vn_step, app_step, max_iter, eps,
        label=f'E {spec.name} delta={delta:.6g} omega={omega}',
    )


def unstructured_de_run_e(dv, dc, delta, omega, max_iter=None, eps=None):
    """Evolución de densidades clásica (no protografo) del Algoritmo E, grados (dv, dc)"""
    omega = _validate(delta, omega)
    if dv < 1 or dc < 2:
        raise DensityEvolutionError('Se requiere dv >= 1 y dc >= 2')
    channel = channel_vector(delta, omega)
    prime = channel_prime_vector(delta)

    def cn_step(v2c):
        return [check_normalized(_cn_closed_form([(v2c[0], dc - 1)]), 'CN')]

    def vn_step(c2v):
        outputs, _ = _vn_messages(channel, c2v, [0], [dv])
        return [outputs[0]]

    def app_step(c2v):
        lo, probs = _lattice_power(-1, c2v[0], dv)
        f = TernaryPMF(_app(prime, {0: (lo, probs)}, [0]))
        return f.minus + f.zero, {0: f}

    return run_fixed_point(
        None, [channel.sign_bins().probs], cn_step, vn_step, app_step, max_iter, eps,
        label=f'E ({dv},{dc}) delta={delta:.6g} omega={omega}',
    )
