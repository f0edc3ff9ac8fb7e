"""
Persistencia de claves en JSON autodescriptivo.

    {"format": ..., "version": 1, "role": "private" | "public",
     "spec": {"name", "base", "state_columns"}, "Q": ..., "payload": {...}}

La salida es determinista (claves ordenadas, sangría fija), así que dos
ejecuciones con la misma semilla producen archivos idénticos byte a byte.
"""
import json
import logging
from pathlib import Path

from mdpc_workbench.exceptions import WorkbenchError
from protograph.ensembles import EnsembleError, EnsembleSpec
from protograph.matrices import PolyMatrix, derive_H
from ring.polynomials import DensePolynomial, NonInvertibleError

from .keys import KeyInvariantError, PrivateKey, PublicKey, public_polynomial

logger = logging.getLogger(__name__)

KEY_FORMAT = 'mdpc-workbench-key'
KEY_VERSION = 1
ROLE_PRIVATE = 'private'
ROLE_PUBLIC = 'public'


class KeyFileError(WorkbenchError):
    """Error al leer o validar un archivo de clave"""


class MalformedKeyFileError(KeyFileError):
    pass


class KeyVersionError(KeyFileError):
    pass


class KeyFileInvariantError(KeyFileError, KeyInvariantError):
    """Archivo bien formado cuyo contenido viola las invariantes de la clave"""


def key_to_record(key):
    spec = key.spec
    record = {
        'format': KEY_FORMAT,
        'version': KEY_VERSION,
        'spec': spec.to_record(),
        'Q': spec.Q,
    }
    if isinstance(key, PrivateKey):
        record['role'] = ROLE_PRIVATE
        payload = {'row_weight': key.row_weight}
        if key.gamma is not None:
            payload['gamma'] = key.gamma.to_record()
        else:
            payload['h'] = key.h.to_record()
        record['payload'] = payload
    elif isinstance(key, PublicKey):
        record['role'] = ROLE_PUBLIC
        record['payload'] = {'p': key.p.to_hex(), 'error_weight': key.error_weight}
    else:
        raise TypeError(f'No es una clave: {type(key).__name__}')
    return record


def dumps_key(key):
    return json.dumps(key_to_record(key), sort_keys=True, indent=2) + '\n'


def save_key(key, path):
    path = Path(path)
    path.write_text(dumps_key(key), encoding='utf-8')
    logger.info('Clave %s guardada en %s', key_to_record(key)['role'], path)
    return path


def _field(record, name, kind):
    try:
        value = record[name]
    except (KeyError, TypeError):
        raise MalformedKeyFileError(f'Falta el campo {name!r}') from None
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise MalformedKeyFileError(f'El campo {name!r} tiene un tipo inválido')
    return value


def key_from_record(record):
    if not isinstance(record, dict):
        raise MalformedKeyFileError('El archivo de clave debe contener un objeto JSON')
    if _field(record, 'format', str) != KEY_FORMAT:
        raise MalformedKeyFileError(f'Formato desconocido: {record["format"]!r}')
    version = _field(record, 'version', int)
    if version != KEY_VERSION:
        raise KeyVersionError(f'Versión de clave {version} no soportada (se espera {KEY_VERSION})')
    role = _field(record, 'role', str)
    Q = _field(record, 'Q', int)
    payload = _field(record, 'payload', dict)
    try:
        spec = EnsembleSpec.from_record(_field(record, 'spec', dict), Q)
    except (EnsembleError, KeyError, TypeError, ValueError) as exc:
        raise KeyFileInvariantError(f'Ensamble inválido en la clave: {exc}') from exc

    try:
        if role == ROLE_PRIVATE:
            return _private_from_payload(spec, payload)
        if role == ROLE_PUBLIC:
            return _public_from_payload(spec, payload)
    except KeyInvariantError as exc:
        if isinstance(exc, KeyFileError):
            raise
        raise KeyFileInvariantError(str(exc)) from exc
    raise MalformedKeyFileError(f'Rol de clave desconocido: {role!r}')


def _private_from_payload(spec, payload):
    row_weight = _field(payload, 'row_weight', int)
    try:
        if spec.has_state:
            gamma = PolyMatrix.from_record(_field(payload, 'gamma', list), spec.Q)
            key = PrivateKey(spec, derive_H(gamma), gamma)
        else:
            key = PrivateKey(spec, PolyMatrix.from_record(_field(payload, 'h', list), spec.Q))
    except (EnsembleError, ValueError, TypeError) as exc:
        raise KeyFileInvariantError(f'Material de clave privada inválido: {exc}') from exc
    if key.row_weight != row_weight:
        raise KeyFileInvariantError(
            f'Peso de fila declarado {row_weight} distinto del real {key.row_weight}'
        )
    try:
        public_polynomial(key.h)
    except NonInvertibleError as exc:
        raise KeyFileInvariantError('h_01 no es invertible') from exc
    return key


def _public_from_payload(spec, payload):
    try:
        p = DensePolynomial.from_hex(spec.Q, _field(payload, 'p', str))
    except ValueError as exc:
        raise KeyFileInvariantError(f'Polinomio público inválido: {exc}') from exc
    return PublicKey(spec, p, _field(payload, 'error_weight', int))


def loads_key(text):
    try:
        record = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedKeyFileError(f'JSON inválido: {exc}') from exc
    return key_from_record(record)


def load_key(path, role=None):
    """Carga y valida una clave; si se indica role, exige ese tipo"""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except UnicodeDecodeError as exc:
        raise MalformedKeyFileError(f'{path}: no es texto UTF-8') from exc
    key = loads_key(text)
    expected = {ROLE_PRIVATE: PrivateKey, ROLE_PUBLIC: PublicKey}.get(role)
    if expected is not None and not isinstance(key, expected):
        raise MalformedKeyFileError(f'{path}: se esperaba una clave {role}')
    logger.debug('Clave cargada desde %s: %s', path, key)
    return key
