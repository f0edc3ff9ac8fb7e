"""
Utilidades numéricas compartidas (binomiales exactos en escala log2)
"""
import math
from functools import lru_cache


def log2_int(value):
    """log2 de un entero positivo arbitrariamente grande"""
    if value <= 0:
        raise ValueError('log2 de un entero no positivo')
    shift = max(value.bit_length() - 64, 0)
    return math.log2(value >> shift) + shift


@lru_cache(maxsize=None)
def log2_binomial(n, k):
    """log2 C(n, k) calculado con enteros exactos; -inf si C(n, k) = 0"""
    if k < 0 or k > n or n < 0:
        return float('-inf')
    return log2_int(math.comb(n, k))


def log2_add(a, b):
    """log2(2^a + 2^b) sin desbordamiento"""
    if a == float('-inf'):
        return b
    if b == float('-inf'):
        return a
    high, low = max(a, b), min(a, b)
    return high + math.log2(1.0 + 2.0 ** (low - high))
