"""
Decodificadores de paso de mensajes sobre grafos de Tanner con VN de estado:
suma-producto escalado (SPA) y Algoritmo E (mensajes ternarios).

Calendario de inundación: todos los CN y luego todos los VN. Los mensajes se
guardan en vectores planos indexados por arista (orden por CN del grafo).
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from mdpc_workbench.conf import workbench_setting
from mdpc_workbench.exceptions import WorkbenchError

logger = logging.getLogger(__name__)

ALGORITHM_SPA = 'SPA'
ALGORITHM_E = 'E'
ALGORITHM_CHOICES = [
    (ALGORITHM_SPA, 'Suma-producto escalado'),
    (ALGORITHM_E, 'Algoritmo E'),
]

# |mensaje| máximo antes de la transformación tanh del CN
LLR_CLIP = 30.0


class DecoderInputError(WorkbenchError):
    """Dimensiones o valores de entrada incompatibles con el grafo"""


class DecoderStateError(WorkbenchError):
    """Mensaje fuera del alfabeto permitido durante la decodificación"""


class DecodingFailure(WorkbenchError):
    """Se agotaron las iteraciones sin síndrome nulo"""

    def __init__(self, result):
        self.result = result
        super().__init__(f'Fallo de decodificación tras {result.iterations_used} iteraciones')


def normalize_algorithm(value):
    text = str(value).upper()
    if text in ('ALGE', 'ALG_E', 'ALGORITHM_E'):
        text = ALGORITHM_E
    if text not in dict(ALGORITHM_CHOICES):
        raise DecoderInputError(f'Algoritmo desconocido: {value!r} (use SPA o E)')
    return text


@dataclass(frozen=True)
class DecoderConfig:
    algorithm: str = ALGORITHM_E
    omega: float = 1.0
    max_iterations: int = None
    early_stop: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'algorithm', normalize_algorithm(self.algorithm))
        if self.max_iterations is None:
            object.__setattr__(self, 'max_iterations', workbench_setting('DECODER_MAX_ITERATIONS'))
        if self.omega < 0:
            raise DecoderInputError(f'omega debe ser >= 0, se recibió {self.omega}')
        if self.max_iterations < 1:
            raise DecoderInputError('max_iterations debe ser al menos 1')


@dataclass
class DecodeResult:
    estimate: np.ndarray
    syndrome_zero: bool
    iterations_used: int
    full_estimate: np.ndarray = field(repr=False, default=None)


def bits_to_bipolar(bits):
    """Bit 0 -> +1, bit 1 -> -1"""
    return 1 - 2 * np.asarray(bits, dtype=np.int8)


def _check_ciphertext(graph, ciphertext):
    c = np.asarray(ciphertext)
    if c.shape != (graph.observed_count,):
        raise DecoderInputError(
            f'El texto cifrado tiene {c.size} símbolos y el grafo {graph.observed_count} VN observados'
        )
    if not np.isin(c, (-1, 1)).all():
        raise DecoderInputError('El texto cifrado debe estar en {-1, +1}')
    return c.astype(np.int8)


def _decide(graph, total, channel_bits):
    """Decisión dura; un total nulo usa el canal (VN observados) o 0 (VN de estado)"""
    bits = (total < 0).astype(np.uint8)
    ties = total == 0
    bits[ties] = channel_bits[ties]
    return bits


def _finish(graph, bits, iterations):
    syndrome_zero = not graph.syndrome(bits).any()
    logger.debug('Decodificación terminada: iteraciones=%d, síndrome nulo=%s', iterations, syndrome_zero)
    return DecodeResult(
        estimate=bits[graph.observed_vns].copy(),
        syndrome_zero=syndrome_zero,
        iterations_used=iterations,
        full_estimate=bits,
    )


def channel_llr(n, e):
    """LLR del canal binario simétrico con delta = e/n, saturado en +-LLR_CLIP"""
    if not 0 <= e <= n:
        raise DecoderInputError(f'Peso de error {e} fuera de [0, {n}]')
    if e == 0:
        return LLR_CLIP
    if e == n:
        return -LLR_CLIP
    return float(np.clip(np.log((n - e) / e), -LLR_CLIP, LLR_CLIP))


def decode_spa(graph, ciphertext, error_weight, cfg):
    """Suma-producto con salida de los CN escalada por omega"""
    c = _check_ciphertext(graph, ciphertext)
    m_ch = np.zeros(graph.vn_count)
    m_ch[graph.observed_vns] = c * channel_llr(graph.observed_count, error_weight)
    channel_bits = np.zeros(graph.vn_count, dtype=np.uint8)
    channel_bits[graph.observed_vns] = c < 0

    edge_cn, edge_vn = graph.edge_cn, graph.edge_vn
    limit = np.tanh(LLR_CLIP / 2)
    v2c = m_ch[edge_vn]
    bits = channel_bits.copy()
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        # CN: producto de tanh excluyendo la propia arista
        t = np.tanh(np.clip(v2c, -LLR_CLIP, LLR_CLIP) / 2)
        magnitude = np.abs(t)
        is_zero = magnitude == 0
        log_mag = np.log(np.where(is_zero, 1.0, magnitude))
        negative = t < 0
        cn_log = np.bincount(edge_cn, weights=log_mag, minlength=graph.cn_count)
        cn_zeros = np.bincount(edge_cn, weights=is_zero, minlength=graph.cn_count)
        cn_neg = np.bincount(edge_cn, weights=negative, minlength=graph.cn_count)

        ext_zeros = cn_zeros[edge_cn] - is_zero
        ext_sign = 1 - 2 * ((cn_neg[edge_cn] - negative).astype(np.int64) % 2)
        ext_mag = np.where(ext_zeros > 0, 0.0, np.exp(np.minimum(cn_log[edge_cn] - log_mag, 0.0)))
        product = np.clip(ext_sign * ext_mag, -limit, limit)
        c2v = cfg.omega * 2 * np.arctanh(product)

        # VN: canal más todos los mensajes entrantes
        total = m_ch + np.bincount(edge_vn, weights=c2v, minlength=graph.vn_count)
        v2c = total[edge_vn] - c2v

        bits = _decide(graph, total, channel_bits)
        if cfg.early_stop and not graph.syndrome(bits).any():
            break
    return _finish(graph, bits, iterations)


def _check_ternary(messages, where):
    if (np.abs(messages) > 1).any():
        raise DecoderStateError(f'Mensaje fuera de {{-1, 0, +1}} en {where}')


def check_node_update_e(graph, v2c):
    """Producto de los mensajes ternarios entrantes excluyendo la propia arista"""
    _check_ternary(v2c, 'VN')
    is_zero = v2c == 0
    negative = v2c < 0
    cn_zeros = np.bincount(graph.edge_cn, weights=is_zero, minlength=graph.cn_count)
    cn_neg = np.bincount(graph.edge_cn, weights=negative, minlength=graph.cn_count)
    ext_zeros = cn_zeros[graph.edge_cn] - is_zero
    ext_sign = 1 - 2 * ((cn_neg[graph.edge_cn] - negative).astype(np.int64) % 2)
    return np.where(ext_zeros > 0, 0, ext_sign).astype(np.int8)


def decode_e(graph, ciphertext, cfg):
    """
    Algoritmo E: mensajes en {-1, 0, +1}. El mensaje del canal se amplifica por
    omega en los VN; la decisión final usa omega = 1.
    """
    c = _check_ciphertext(graph, ciphertext)
    m_ch = np.zeros(graph.vn_count, dtype=np.int8)
    m_ch[graph.observed_vns] = c
    channel_bits = (m_ch < 0).astype(np.uint8)

    edge_cn, edge_vn = graph.edge_cn, graph.edge_vn
    v2c = m_ch[edge_vn].copy()
    bits = channel_bits.copy()
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        c2v = check_node_update_e(graph, v2c)
        incoming = np.bincount(edge_vn, weights=c2v, minlength=graph.vn_count)
        scaled = cfg.omega * m_ch + incoming
        v2c = np.sign(scaled[edge_vn] - c2v).astype(np.int8)
        _check_ternary(v2c, 'VN')

        bits = _decide(graph, m_ch + incoming, channel_bits)
        if cfg.early_stop and not graph.syndrome(bits).any():
            break
    return _finish(graph, bits, iterations)


def decode(graph, ciphertext, error_weight, cfg):
    """Despacha al decodificador indicado en la configuración"""
    if cfg.algorithm == ALGORITHM_SPA:
        return decode_spa(graph, ciphertext, error_weight, cfg)
    return decode_e(graph, ciphertext, cfg)
