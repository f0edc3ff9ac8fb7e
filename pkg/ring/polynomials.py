"""
Aritmética en el anillo F2[X]/(X^Q - 1), isomorfo al de circulantes binarios QxQ.

Los polinomios de la clave privada (peso <= 45 << Q) se representan por su
soporte; los de la clave pública (peso ~ Q/2) como vector denso de bits.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy import signal

from mdpc_workbench.exceptions import WorkbenchError

logger = logging.getLogger(__name__)


class RingMismatchError(WorkbenchError):
    """Operandos con distinto tamaño de circulante"""


class NonInvertibleError(WorkbenchError):
    """El polinomio no es invertible módulo X^Q - 1"""


@dataclass(frozen=True)
class SparsePolynomial:
    """Elemento del anillo representado por su soporte (exponentes crecientes)"""
    Q: int
    support: tuple = ()

    def __post_init__(self):
        if self.Q <= 0:
            raise ValueError(f'Tamaño de circulante inválido: {self.Q}')
        support = tuple(int(e) for e in self.support)
        if any(b <= a for a, b in zip(support, support[1:])):
            raise ValueError('El soporte debe ser estrictamente creciente')
        if support and (support[0] < 0 or support[-1] >= self.Q):
            raise ValueError(f'Exponente fuera de [0, {self.Q})')
        object.__setattr__(self, 'support', support)

    @classmethod
    def zero(cls, Q):
        return cls(Q, ())

    @classmethod
    def one(cls, Q):
        return cls(Q, (0,))

    @classmethod
    def from_exponents(cls, Q, exponents):
        """Reduce los exponentes módulo Q y cancela repeticiones (GF(2))"""
        values = np.asarray(list(exponents), dtype=np.int64) % Q
        unique, counts = np.unique(values, return_counts=True)
        return cls(Q, tuple(unique[counts % 2 == 1].tolist()))

    @classmethod
    def from_int(cls, Q, value):
        """Construye el polinomio cuyo bit i es el coeficiente de X^i"""
        digits = bin(value)[2:][::-1]
        return cls(Q, tuple(i for i, bit in enumerate(digits) if bit == '1'))

    @classmethod
    def from_record(cls, record):
        return cls(int(record['Q']), tuple(record['support']))

    @property
    def weight(self):
        return len(self.support)

    @property
    def is_zero(self):
        return not self.support

    def to_int(self):
        value = 0
        for e in self.support:
            value |= 1 << e
        return value

    def to_dense(self):
        bits = np.zeros(self.Q, dtype=np.uint8)
        bits[list(self.support)] = 1
        return DensePolynomial(self.Q, bits)

    def to_record(self):
        return {'Q': self.Q, 'support': list(self.support)}

    def __add__(self, other):
        return add(self, other)

    def __mul__(self, other):
        return mul_mod(self, other)

    def __str__(self):
        return f'SparsePolynomial(Q={self.Q}, weight={self.weight})'


@dataclass(frozen=True, eq=False)
class DensePolynomial:
    """Elemento del anillo como vector de Q coeficientes binarios"""
    Q: int
    bits: np.ndarray

    def __post_init__(self):
        bits = np.array(self.bits, dtype=np.uint8)
        if bits.shape != (self.Q,):
            raise ValueError(f'Se esperaban {self.Q} coeficientes, hay {bits.size}')
        if np.any(bits > 1):
            raise ValueError('Los coeficientes deben ser 0 o 1')
        bits.setflags(write=False)
        object.__setattr__(self, 'bits', bits)

    def __eq__(self, other):
        if not isinstance(other, DensePolynomial):
            return NotImplemented
        return self.Q == other.Q and np.array_equal(self.bits, other.bits)

    __hash__ = None

    @classmethod
    def from_hex(cls, Q, text):
        """Decodifica hex en minúsculas, coeficiente menos significativo primero"""
        return cls(Q, bits_from_hex(Q, text))

    @property
    def weight(self):
        return int(self.bits.sum())

    def to_sparse(self):
        return SparsePolynomial(self.Q, tuple(np.flatnonzero(self.bits).tolist()))

    def to_hex(self):
        return bits_to_hex(self.bits)

    def transpose(self):
        return DensePolynomial(self.Q, self.bits[(-np.arange(self.Q)) % self.Q])

    def __add__(self, other):
        _check_same_ring(self, other)
        return DensePolynomial(self.Q, self.bits ^ other.bits)

    def __str__(self):
        return f'DensePolynomial(Q={self.Q}, weight={self.weight})'


def bits_to_hex(bits):
    """Bit i del vector = bit (i mod 8) del byte i // 8"""
    return np.packbits(np.asarray(bits, dtype=np.uint8), bitorder='little').tobytes().hex()


def bits_from_hex(length, text):
    """Inverso de bits_to_hex para un vector de length bits"""
    try:
        data = bytes.fromhex(text.strip())
    except ValueError as exc:
        raise ValueError(f'Hex inválido: {exc}') from exc
    if len(data) != (length + 7) // 8:
        raise ValueError(f'Longitud hex incompatible con {length} bits')
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder='little')
    if np.any(bits[length:]):
        raise ValueError('Bits de relleno distintos de cero')
    return bits[:length].copy()


def _check_same_ring(a, b):
    if a.Q != b.Q:
        raise RingMismatchError(f'Tamaños de circulante distintos: {a.Q} y {b.Q}')


def _reduce(value, Q):
    """Reduce un polinomio entero módulo X^Q - 1 (X^Q = 1)"""
    mask = (1 << Q) - 1
    while value >> Q:
        value = (value & mask) ^ (value >> Q)
    return value


def add(a, b):
    """Suma en GF(2): diferencia simétrica de soportes"""
    _check_same_ring(a, b)
    return SparsePolynomial(a.Q, tuple(sorted(set(a.support) ^ set(b.support))))


def mul_mod(a, b):
    """Producto disperso por disperso: convolución cíclica de soportes"""
    _check_same_ring(a, b)
    if a.is_zero or b.is_zero:
        return SparsePolynomial.zero(a.Q)
    sums = np.add.outer(np.asarray(a.support), np.asarray(b.support)).ravel()
    return SparsePolynomial.from_exponents(a.Q, sums)


def mul_sparse_dense(a, b):
    """Producto disperso por denso mediante acumulación de desplazamientos (XOR)"""
    _check_same_ring(a, b)
    acc = np.zeros(a.Q, dtype=np.uint8)
    for e in a.support:
        acc ^= np.roll(b.bits, e)
    return DensePolynomial(a.Q, acc)


def mul_dense(a, b):
    """Producto denso por denso: convolución lineal plegada módulo X^Q - 1"""
    _check_same_ring(a, b)
    Q = a.Q
    conv = signal.convolve(a.bits.astype(np.int64), b.bits.astype(np.int64))
    folded = conv[:Q].copy()
    folded[:Q - 1] += conv[Q:]
    return DensePolynomial(Q, folded % 2)


def invert(a):
    """
    Inverso en F2[X]/(X^Q - 1) por el algoritmo extendido de Euclides binario.
    Lanza NonInvertibleError si gcd(a(X), X^Q - 1) != 1.
    """
    if a.is_zero:
        raise NonInvertibleError('El polinomio cero no es invertible')
    u, v = a.to_int(), (1 << a.Q) | 1
    g1, g2 = 1, 0
    # Invariantes: a*g1 = u y a*g2 = v (mod X^Q - 1)
    while u != 1:
        if u == 0:
            if v != 1:
                raise NonInvertibleError(
                    f'gcd con X^{a.Q} - 1 de grado {v.bit_length() - 1} (peso {a.weight})'
                )
            g1 = g2
            break
        j = u.bit_length() - v.bit_length()
        if j < 0:
            u, v = v, u
            g1, g2 = g2, g1
            j = -j
        u ^= v << j
        g1 ^= g2 << j
    return SparsePolynomial.from_int(a.Q, _reduce(g1, a.Q))


def transpose(a):
    """Transpuesta del circulante: exponente e -> (Q - e) mod Q"""
    if isinstance(a, DensePolynomial):
        return a.transpose()
    return SparsePolynomial(a.Q, tuple(sorted((a.Q - e) % a.Q for e in a.support)))


def sample_sparse(Q, w, rng):
    """Soporte uniforme de peso w; determinista para un generador sembrado"""
    if w < 0 or w > Q:
        raise ValueError(f'Peso {w} fuera de [0, {Q}]')
    picks = rng.choice(Q, size=w, replace=False)
    return SparsePolynomial(Q, tuple(sorted(int(e) for e in picks)))


def circulant(a):
    """Matriz circulante QxQ (cada fila desplaza la anterior a la derecha)"""
    Q = a.Q
    matrix = np.zeros((Q, Q), dtype=np.uint8)
    rows = np.arange(Q)
    for e in a.support:
        matrix[rows, (rows + e) % Q] = 1
    return matrix
