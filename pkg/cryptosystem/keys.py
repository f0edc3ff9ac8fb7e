"""
Criptosistema tipo McEliece con códigos QC-MDPC: generación de claves,
cifrado y descifrado.

La matriz generadora sistemática es G = (I | circ(p)) con
p = transpuesta(h_01^-1 * h_00), de modo que el texto claro ocupa los
primeros Q bits de la palabra de código.
"""
import logging

import numpy as np
from django.utils.functional import cached_property

from decoders.message_passing import DecodingFailure, bits_to_bipolar, decode
from mdpc_workbench.conf import workbench_setting
from mdpc_workbench.exceptions import WorkbenchError
from protograph.ensembles import weight_bound
from protograph.matrices import derive_H, sample_gamma
from ring.polynomials import (
    DensePolynomial,
    circulant,
    NonInvertibleError,
    invert,
    mul_dense,
    mul_mod,
    mul_sparse_dense,
    transpose,
)
from simulation.sampling import sample_error_vector
from tanner.graph import expand

logger = logging.getLogger(__name__)

REFERENCE_Q = 4801


class KeyGenerationError(WorkbenchError):
    """No se obtuvo un h_01 invertible dentro del límite de reintentos"""


class KeyInvariantError(WorkbenchError):
    """El material de clave no cumple las invariantes del ensamble"""


class MessageLengthError(WorkbenchError):
    """Texto claro o cifrado de longitud incorrecta"""


def default_error_weight(spec):
    """Peso de error por defecto del ensamble, escalado linealmente con Q"""
    weights = workbench_setting('DEFAULT_ERROR_WEIGHTS')
    reference = weights.get(spec.name, weights.get('A', 84))
    return max(0, min(spec.block_length, round(reference * spec.Q / REFERENCE_Q)))


class PrivateKey:
    """Clave privada: Gamma(X) (ausente en el ensamble de referencia) y H(X)"""

    def __init__(self, spec, h, gamma=None):
        self.spec = spec
        self.h = h
        self.gamma = gamma
        self.validate()

    def validate(self):
        spec = self.spec
        if self.h.shape != (1, 2) or self.h.Q != spec.Q:
            raise KeyInvariantError('H debe ser una fila de 2 circulantes de tamaño Q')
        if spec.has_state:
            if self.gamma is None:
                raise KeyInvariantError('Falta Gamma para un ensamble con VN de estado')
            if self.gamma.shape != (spec.base.M0, spec.base.N0) or self.gamma.Q != spec.Q:
                raise KeyInvariantError('Gamma no tiene la forma de la matriz base')
            if self.gamma.weights() != [list(row) for row in spec.base.rows]:
                raise KeyInvariantError('Los pesos de Gamma no coinciden con la matriz base')
            if derive_H(self.gamma) != self.h:
                raise KeyInvariantError('H no es la derivada de Gamma')
        else:
            if self.gamma is not None:
                raise KeyInvariantError('El ensamble sin estado no usa Gamma')
            if self.h.weights() != [list(row) for row in spec.base.rows]:
                raise KeyInvariantError('Los pesos de H no coinciden con la matriz base')
        if self.row_weight > weight_bound(spec.base):
            raise KeyInvariantError(
                f'Peso de fila {self.row_weight} mayor que la cota {weight_bound(spec.base)}'
            )

    @property
    def Q(self):
        return self.spec.Q

    @property
    def block_length(self):
        return self.spec.block_length

    @property
    def dimension(self):
        return self.spec.dimension

    @property
    def row_weight(self):
        return self.h.row_weight

    @cached_property
    def decoding_graph(self):
        """Grafo extendido (con VN de estado) para B/C, grafo de H para A"""
        if self.spec.has_state:
            return expand(self.gamma, self.spec.base.state_columns)
        return expand(self.h)

    def __eq__(self, other):
        if not isinstance(other, PrivateKey):
            return NotImplemented
        return (self.spec, self.h, self.gamma) == (other.spec, other.h, other.gamma)

    __hash__ = None

    def __str__(self):
        return f'PrivateKey({self.spec}, peso de fila={self.row_weight})'


class PublicKey:
    """Clave pública: polinomio denso p de G = (I | circ(p)) y peso de error e"""

    def __init__(self, spec, p, error_weight):
        self.spec = spec
        self.p = p
        self.error_weight = int(error_weight)
        if p.Q != spec.Q:
            raise KeyInvariantError('p no tiene tamaño Q')
        if not 0 <= self.error_weight <= spec.block_length:
            raise KeyInvariantError(f'Peso de error {self.error_weight} fuera de [0, {spec.block_length}]')

    @property
    def Q(self):
        return self.spec.Q

    @property
    def block_length(self):
        return 2 * self.Q

    @property
    def dimension(self):
        return self.Q

    def encode(self, u):
        """Palabra de código x = u*G = (u | u*p)"""
        u = _check_bits(u, self.Q, 'texto claro')
        redundancy = mul_dense(DensePolynomial(self.Q, u), self.p)
        return np.concatenate([u, redundancy.bits])

    def generator_matrix(self):
        """G densa; solo para comprobaciones con Q pequeño"""
        return np.hstack([np.eye(self.Q, dtype=np.uint8), circulant(self.p.to_sparse())])

    def __eq__(self, other):
        if not isinstance(other, PublicKey):
            return NotImplemented
        return (self.spec, self.p, self.error_weight) == (other.spec, other.p, other.error_weight)

    __hash__ = None

    def __str__(self):
        return f'PublicKey({self.spec}, e={self.error_weight})'


def _check_bits(bits, length, label):
    bits = np.asarray(bits)
    if bits.shape != (length,):
        raise MessageLengthError(f'El {label} debe tener {length} bits, tiene {bits.size}')
    if not np.isin(bits, (0, 1)).all():
        raise MessageLengthError(f'El {label} debe ser binario')
    return bits.astype(np.uint8)


def public_polynomial(h):
    """p = transpuesta(h_01^-1 * h_00); lanza NonInvertibleError si h_01 no es invertible"""
    return transpose(mul_mod(invert(h[0, 1]), h[0, 0])).to_dense()


def keys_match(private, public):
    """h_01^T * p = h_00^T: la G pública es ortogonal a la H privada"""
    if private.spec != public.spec:
        return False
    return mul_sparse_dense(transpose(private.h[0, 1]), public.p) == transpose(private.h[0, 0]).to_dense()


def keygen(spec, rng, error_weight=None):
    """
    Genera (clave privada, clave pública). Se remuestrea mientras h_01 no sea
    invertible, hasta KEYGEN_MAX_RETRIES intentos.
    """
    if error_weight is None:
        error_weight = default_error_weight(spec)
    retries = workbench_setting('KEYGEN_MAX_RETRIES')
    for attempt in range(1, retries + 1):
        sampled = sample_gamma(spec, rng)
        if spec.has_state:
            gamma, h = sampled, derive_H(sampled)
        else:
            gamma, h = None, sampled
        try:
            p = public_polynomial(h)
        except NonInvertibleError:
            logger.debug('Intento %d: h_01 de peso %d no invertible, se remuestrea', attempt, h[0, 1].weight)
            continue
        private = PrivateKey(spec, h, gamma)
        public = PublicKey(spec, p, error_weight)
        logger.info(
            'Clave generada para %s en %d intento(s): pesos de H %s',
            spec, attempt, h.weights()[0],
        )
        return private, public
    raise KeyGenerationError(
        f'No se obtuvo h_01 invertible en {retries} intentos para {spec}; revise el ensamble'
    )


def encrypt(pub, u, rng, error_weight=None):
    """c = u*G + e, con e uniforme de peso pub.error_weight (o el indicado)"""
    if error_weight is None:
        error_weight = pub.error_weight
    x = pub.encode(u)
    return x ^ sample_error_vector(pub.block_length, error_weight, rng)


def decrypt(priv, c, cfg, error_weight=None):
    """
    Decodifica con el grafo privado y devuelve los primeros Q bits.
    Lanza DecodingFailure si no se alcanza síndrome nulo.
    """
    c = _check_bits(c, priv.block_length, 'texto cifrado')
    if error_weight is None:
        error_weight = default_error_weight(priv.spec)
    result = decode(priv.decoding_graph, bits_to_bipolar(c), error_weight, cfg)
    if not result.syndrome_zero:
        raise DecodingFailure(result)
    return result.estimate[:priv.Q].copy()
