"""
Lectura y escritura de puntos de simulación en CSV o JSON.
"""
import csv
import json
from dataclasses import asdict
from pathlib import Path

from .engine import SimPoint, SimulationError

FORMAT_CSV = 'csv'
FORMAT_JSON = 'json'
FORMAT_CHOICES = [
    (FORMAT_CSV, 'CSV'),
    (FORMAT_JSON, 'JSON'),
]

SIM_COLUMNS = [
    'ensemble', 'algorithm', 'omega', 'Q', 'e', 'trials', 'failures',
    'bler', 'ci_lo', 'ci_hi', 'seed', 'undetected',
]

_COLUMN_TYPES = {
    'ensemble': str,
    'algorithm': str,
    'omega': float,
    'Q': int,
    'e': int,
    'trials': int,
    'failures': int,
    'bler': float,
    'ci_lo': float,
    'ci_hi': float,
    'seed': int,
    'undetected': int,
}


def write_rows(rows, columns, stream, format=FORMAT_CSV):
    """Escribe filas (dicts) en stream; la tabla vacía deja solo la cabecera"""
    if format == FORMAT_CSV:
        writer = csv.DictWriter(stream, fieldnames=columns, lineterminator='\n')
        writer.writeheader()
        for row in rows:
            writer.writerow({column: row[column] for column in columns})
    elif format == FORMAT_JSON:
        json.dump([{column: row[column] for column in columns} for row in rows], stream, indent=2)
        stream.write('\n')
    else:
        raise SimulationError(f'Formato de salida desconocido: {format!r}')


def dump_results(points, stream, format=FORMAT_CSV):
    write_rows([asdict(point) for point in points], SIM_COLUMNS, stream, format)


def write_results(points, path, format=FORMAT_CSV):
    """Guarda los puntos en path (CSV o JSON)"""
    with open(path, 'w', newline='', encoding='utf-8') as stream:
        dump_results(points, stream, format)


def _typed(row):
    missing = [column for column in SIM_COLUMNS if column not in row]
    if missing:
        raise SimulationError(f'Faltan columnas en los resultados: {missing}')
    return SimPoint(**{column: _COLUMN_TYPES[column](row[column]) for column in SIM_COLUMNS})


def read_results(path, format=None):
    """
    Lee puntos escritos por write_results. Sin formato explícito se deduce de
    la extensión (.json o, en otro caso, CSV).
    """
    path = Path(path)
    if format is None:
        format = FORMAT_JSON if path.suffix.lower() == '.json' else FORMAT_CSV
    with open(path, newline='', encoding='utf-8') as stream:
        if format == FORMAT_CSV:
            rows = list(csv.DictReader(stream))
        elif format == FORMAT_JSON:
            try:
                rows = json.load(stream)
            except json.JSONDecodeError as exc:
                raise SimulationError(f'JSON de resultados inválido: {exc}') from exc
        else:
            raise SimulationError(f'Formato de resultados desconocido: {format!r}')
    try:
        return [_typed(row) for row in rows]
    except (TypeError, ValueError) as exc:
        raise SimulationError(f'Valor inválido en los resultados: {exc}') from exc
