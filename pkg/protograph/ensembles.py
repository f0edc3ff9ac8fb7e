"""
Matrices base (protografos) y ensambles de códigos.

Se admiten dos formas de matriz base:

* la de referencia, 1 x N sin columnas de estado (ensamble A);
* la familia con VN de estado, 2 x 3 con la columna 0 perforada y b_00 = 1
  (ensambles B y C).
"""
import logging
import math
from dataclasses import dataclass

from mdpc_workbench.exceptions import WorkbenchError
from mdpc_workbench.mathutils import log2_binomial

logger = logging.getLogger(__name__)

DEFAULT_Q = 4801

# Orden de entradas de B y C: es la única asignación con la que se cumplen a la
# vez el peso de fila 90 y los tamaños de espacio de claves 2^328 y 2^446.
BUILTIN_BASES = {
    'A': (((45, 45),), frozenset()),
    'B': (((1, 8, 8), (5, 5, 5)), frozenset({0})),
    'C': (((1, 22, 22), (2, 1, 1)), frozenset({0})),
}


class EnsembleError(WorkbenchError):
    """Ensamble desconocido o matriz base con forma no soportada"""


@dataclass(frozen=True)
class BaseMatrix:
    rows: tuple
    state_columns: frozenset = frozenset()

    def __post_init__(self):
        rows = tuple(tuple(int(b) for b in row) for row in self.rows)
        if not rows or not rows[0]:
            raise EnsembleError('La matriz base está vacía')
        if any(len(row) != len(rows[0]) for row in rows):
            raise EnsembleError('Las filas de la matriz base tienen longitudes distintas')
        if any(b < 0 for row in rows for b in row):
            raise EnsembleError('Las entradas de la matriz base deben ser no negativas')
        state_columns = frozenset(int(j) for j in self.state_columns)
        if any(j < 0 or j >= len(rows[0]) for j in state_columns):
            raise EnsembleError(f'Columna de estado fuera de rango: {sorted(state_columns)}')
        object.__setattr__(self, 'rows', rows)
        object.__setattr__(self, 'state_columns', state_columns)

    @property
    def M0(self):
        return len(self.rows)

    @property
    def N0(self):
        return len(self.rows[0])

    def entry(self, i, j):
        return self.rows[i][j]

    def entries(self):
        """Itera (i, j, b_ij) por filas"""
        for i, row in enumerate(self.rows):
            for j, b in enumerate(row):
                yield i, j, b

    @property
    def edge_count(self):
        return sum(b for _, _, b in self.entries())

    def column_degree(self, j):
        return sum(row[j] for row in self.rows)

    def row_degree(self, i):
        return sum(self.rows[i])

    @property
    def is_state_family(self):
        return (
            self.M0 == 2 and self.N0 == 3
            and self.state_columns == frozenset({0})
            and self.rows[0][0] == 1
        )

    @property
    def is_reference_shape(self):
        return self.M0 == 1 and self.N0 == 2 and not self.state_columns

    def to_record(self):
        return {'rows': [list(row) for row in self.rows], 'state_columns': sorted(self.state_columns)}

    @classmethod
    def from_record(cls, record):
        return cls(tuple(tuple(row) for row in record['rows']), frozenset(record.get('state_columns', ())))


@dataclass(frozen=True)
class EnsembleSpec:
    name: str
    base: BaseMatrix
    Q: int = DEFAULT_Q

    def __post_init__(self):
        if self.Q <= 0:
            raise EnsembleError(f'Tamaño de circulante inválido: {self.Q}')
        if not (self.base.is_state_family or self.base.is_reference_shape):
            raise EnsembleError(
                'Forma de matriz base no soportada: se espera 1x2 sin estado o 2x3 con '
                'la columna 0 de estado y b_00 = 1'
            )
        too_big = [b for _, _, b in self.base.entries() if b > self.Q]
        if too_big:
            raise EnsembleError(f'Entradas mayores que Q={self.Q}: {too_big}')

    @property
    def has_state(self):
        return bool(self.base.state_columns)

    @property
    def observed_columns(self):
        return [j for j in range(self.base.N0) if j not in self.base.state_columns]

    @property
    def block_length(self):
        """n: bits de la palabra de código (VN no perforados)"""
        return len(self.observed_columns) * self.Q

    @property
    def dimension(self):
        """k: el código MDPC tiene H de 1 x 2 circulantes"""
        return self.block_length - self.Q

    @property
    def extended_vn_count(self):
        return self.base.N0 * self.Q

    def to_record(self):
        return {'name': self.name, 'base': [list(r) for r in self.base.rows],
                'state_columns': sorted(self.base.state_columns)}

    @classmethod
    def from_record(cls, record, Q):
        base = BaseMatrix(tuple(tuple(r) for r in record['base']), frozenset(record['state_columns']))
        return cls(record['name'], base, Q)

    def __str__(self):
        return f'{self.name} (Q={self.Q}, n={self.block_length})'


def ensemble(name, Q=DEFAULT_Q):
    """Devuelve uno de los ensambles predefinidos A, B o C"""
    try:
        rows, state_columns = BUILTIN_BASES[str(name).upper()]
    except KeyError:
        raise EnsembleError(f'Ensamble desconocido: {name!r} (use A, B o C)') from None
    return EnsembleSpec(str(name).upper(), BaseMatrix(rows, state_columns), Q)


def ensemble_from_base(rows, state_columns=(), Q=DEFAULT_Q, name='custom'):
    """Construye un ensamble a partir de una matriz base dada por el usuario"""
    return EnsembleSpec(name, BaseMatrix(tuple(tuple(r) for r in rows), frozenset(state_columns)), Q)


def weight_bound(base):
    """
    Cota superior del peso de fila de H:
    b_01*b_10 + b_11 + b_02*b_10 + b_12 para la familia con estado, y la suma
    de la única fila para la forma de referencia (peso exacto).
    """
    if base.is_state_family:
        b = base.rows
        return b[0][1] * b[1][0] + b[1][1] + b[0][2] * b[1][0] + b[1][2]
    if base.is_reference_shape:
        return base.row_degree(0)
    raise EnsembleError('La cota de peso solo está definida para las formas soportadas')


def key_space_bits(spec):
    """
    log2 del número de claves privadas distintas.

    Producto de C(Q, b_ij) sobre las entradas no fijas, dividido por Q (clases
    de desplazamiento cíclico conjunto). En la familia con estado la entrada
    fija b_00 = 1 absorbe ese factor; en bases sin estado se resta log2 Q.
    """
    Q = spec.Q
    bits = 0.0
    free_entries = 0
    for i, j, b in spec.base.entries():
        if spec.has_state and (i, j) == (0, 0):
            continue
        if 0 < b < Q:
            free_entries += 1
        bits += log2_binomial(Q, b)
    if free_entries == 0:
        return 0.0
    if not spec.has_state:
        bits -= math.log2(Q)
    return bits
