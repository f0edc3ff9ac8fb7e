"""
Grafo de Tanner obtenido al expandir una matriz de polinomios (copiar y permutar).

Las aristas se guardan en arreglos planos ordenados por CN (estilo CSR); cada
arista tiene un índice estable para que los decodificadores guarden sus
mensajes en vectores indexados por arista.
"""
import logging
from collections import Counter

import numpy as np

logger = logging.getLogger(__name__)


class TannerGraph:
    """Grafo bipartito VN/CN, inmutable después de construido"""

    def __init__(self, Q, vn_types, cn_types, edge_cn, edge_vn, state_columns=()):
        self.Q = Q
        self.vn_types = _frozen(np.asarray(vn_types, dtype=np.int64))
        self.cn_types = _frozen(np.asarray(cn_types, dtype=np.int64))
        self.vn_count = self.vn_types.size
        self.cn_count = self.cn_types.size
        self.state_columns = frozenset(state_columns)

        order = np.lexsort((edge_vn, edge_cn))
        self.edge_cn = _frozen(np.asarray(edge_cn, dtype=np.int64)[order])
        self.edge_vn = _frozen(np.asarray(edge_vn, dtype=np.int64)[order])
        self.edge_count = self.edge_cn.size

        self.cn_degrees = _frozen(np.bincount(self.edge_cn, minlength=self.cn_count))
        self.vn_degrees = _frozen(np.bincount(self.edge_vn, minlength=self.vn_count))
        self.cn_ptr = _frozen(np.concatenate(([0], np.cumsum(self.cn_degrees))))
        # Aristas agrupadas por VN (orden estable dentro de cada VN)
        self.vn_edges = _frozen(np.argsort(self.edge_vn, kind='stable'))
        self.vn_ptr = _frozen(np.concatenate(([0], np.cumsum(self.vn_degrees))))

        self.punctured = _frozen(np.isin(self.vn_types, sorted(self.state_columns)))
        self.observed_vns = _frozen(np.flatnonzero(~self.punctured))

    @property
    def observed_count(self):
        return self.observed_vns.size

    def cn_neighbors(self, c):
        return self.edge_vn[self.cn_ptr[c]:self.cn_ptr[c + 1]]

    def vn_neighbors(self, v):
        return self.edge_cn[self.vn_edges[self.vn_ptr[v]:self.vn_ptr[v + 1]]]

    def syndrome(self, bits):
        """Síndrome (una entrada por CN) de una asignación completa de los VN"""
        bits = np.asarray(bits)
        return np.bincount(
            self.edge_cn, weights=bits[self.edge_vn], minlength=self.cn_count
        ).astype(np.int64) % 2

    def parity_matrix(self):
        """Matriz de paridad densa; solo para comprobaciones con Q pequeño"""
        matrix = np.zeros((self.cn_count, self.vn_count), dtype=np.uint8)
        matrix[self.edge_cn, self.edge_vn] = 1
        return matrix

    def __str__(self):
        return (
            f'TannerGraph(Q={self.Q}, VN={self.vn_count}, CN={self.cn_count}, '
            f'aristas={self.edge_count}, perforados={int(self.punctured.sum())})'
        )


def _frozen(array):
    array.setflags(write=False)
    return array


def expand(pm, state_columns=()):
    """
    Expande la matriz de polinomios: la arista (CN i*Q+r, VN j*Q+s) existe si
    (s - r) mod Q pertenece al soporte de la entrada (i, j).
    """
    Q = pm.Q
    M0, N0 = pm.shape
    rows = np.arange(Q)
    edge_cn, edge_vn = [], []
    for i in range(M0):
        for j in range(N0):
            for e in pm[i, j].support:
                edge_cn.append(i * Q + rows)
                edge_vn.append(j * Q + (rows + e) % Q)
    if edge_cn:
        edge_cn = np.concatenate(edge_cn)
        edge_vn = np.concatenate(edge_vn)
    else:
        edge_cn = edge_vn = np.zeros(0, dtype=np.int64)
    graph = TannerGraph(
        Q,
        vn_types=np.repeat(np.arange(N0), Q),
        cn_types=np.repeat(np.arange(M0), Q),
        edge_cn=edge_cn,
        edge_vn=edge_vn,
        state_columns=state_columns,
    )
    logger.debug('Grafo expandido: %s', graph)
    return graph


def degree_profile(graph):
    """Histogramas de grados de VN y CN, global y por tipo"""
    def histogram(degrees):
        return dict(sorted(Counter(int(d) for d in degrees).items()))

    return {
        'vn': histogram(graph.vn_degrees),
        'cn': histogram(graph.cn_degrees),
        'vn_by_type': {
            int(t): histogram(graph.vn_degrees[graph.vn_types == t])
            for t in np.unique(graph.vn_types)
        },
        'cn_by_type': {
            int(t): histogram(graph.cn_degrees[graph.cn_types == t])
            for t in np.unique(graph.cn_types)
        },
        'punctured': int(graph.punctured.sum()),
        'edges': int(graph.edge_count),
    }


def protograph_profile(spec):
    """Perfil de grados del grafo expandido deducido de la matriz base, sin muestrear claves"""
    base, Q = spec.base, spec.Q

    def histogram(degrees):
        counts = Counter()
        for d in degrees:
            counts[d] += Q
        return dict(sorted(counts.items()))

    vn = [base.column_degree(j) for j in range(base.N0)]
    cn = [base.row_degree(i) for i in range(base.M0)]
    return {
        'vn': histogram(vn),
        'cn': histogram(cn),
        'vn_by_type': {j: {d: Q} for j, d in enumerate(vn)},
        'cn_by_type': {i: {d: Q} for i, d in enumerate(cn)},
        'punctured': len(base.state_columns) * Q,
        'edges': base.edge_count * Q,
    }
