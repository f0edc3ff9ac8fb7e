"""
Matrices de polinomios: Gamma(X) expandida desde la matriz base y H(X) derivada.
"""
import logging
from dataclasses import dataclass

import numpy as np

from ring.polynomials import SparsePolynomial, add, circulant, mul_mod, sample_sparse

from .ensembles import EnsembleError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PolyMatrix:
    """Rejilla M0 x N0 de polinomios dispersos con el mismo Q"""
    entries: tuple

    def __post_init__(self):
        entries = tuple(tuple(row) for row in self.entries)
        if not entries or not entries[0]:
            raise EnsembleError('Matriz de polinomios vacía')
        if any(len(row) != len(entries[0]) for row in entries):
            raise EnsembleError('Filas de longitud distinta en la matriz de polinomios')
        if len({p.Q for row in entries for p in row}) != 1:
            raise EnsembleError('Todas las entradas deben compartir Q')
        object.__setattr__(self, 'entries', entries)

    @property
    def Q(self):
        return self.entries[0][0].Q

    @property
    def shape(self):
        return len(self.entries), len(self.entries[0])

    def __getitem__(self, index):
        i, j = index
        return self.entries[i][j]

    def weights(self):
        return [[p.weight for p in row] for row in self.entries]

    @property
    def row_weight(self):
        """Peso de fila (suma de pesos) de la primera fila"""
        return sum(p.weight for p in self.entries[0])

    def to_binary(self):
        """Matriz binaria completa, solo para comprobaciones con Q pequeño"""
        return np.block([[circulant(p) for p in row] for row in self.entries])

    def to_record(self):
        return [[list(p.support) for p in row] for row in self.entries]

    @classmethod
    def from_record(cls, record, Q):
        return cls(tuple(tuple(SparsePolynomial(Q, tuple(s)) for s in row) for row in record))


def sample_gamma(spec, rng):
    """
    Muestrea la expansión de la matriz base: cada entrada uniforme de peso b_ij.
    En la familia con estado gamma_00 se fija al polinomio constante 1.
    """
    Q = spec.Q
    rows = []
    for i, row in enumerate(spec.base.rows):
        polys = []
        for j, b in enumerate(row):
            if spec.has_state and (i, j) == (0, 0):
                polys.append(SparsePolynomial.one(Q))
            else:
                polys.append(sample_sparse(Q, b, rng))
        rows.append(tuple(polys))
    return PolyMatrix(tuple(rows))


def derive_H(gamma):
    """
    Elimina la columna de estado de Gamma(X):
    h_00 = gamma_11 + gamma_01*gamma_10, h_01 = gamma_12 + gamma_02*gamma_10.
    """
    if gamma.shape != (2, 3):
        raise EnsembleError(f'Gamma debe ser 2x3, es {gamma.shape[0]}x{gamma.shape[1]}')
    if gamma[0, 0] != SparsePolynomial.one(gamma.Q):
        raise EnsembleError('gamma_00 debe ser el polinomio constante 1')
    h00 = add(gamma[1, 1], mul_mod(gamma[0, 1], gamma[1, 0]))
    h01 = add(gamma[1, 2], mul_mod(gamma[0, 2], gamma[1, 0]))
    return PolyMatrix(((h00, h01),))
