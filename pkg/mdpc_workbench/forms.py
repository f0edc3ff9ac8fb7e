"""
Configuración de ejecución (RunConfig) de los comandos.

Los valores se leen de un archivo TOML (--config o MDPC_CONFIG), se combinan
con las opciones de la línea de comandos, que tienen prioridad, y se validan
con RunConfigForm antes de llamar a ningún módulo.
"""
import json

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from django import forms
from django.conf import settings

from decoders.message_passing import DecoderInputError, normalize_algorithm
from protograph.ensembles import DEFAULT_Q, EnsembleError, ensemble, ensemble_from_base
from security.work_factors import VARIANT_CHOICES, VARIANT_MMT
from simulation.engine import KEY_PER_TRIAL, KEY_POLICY_CHOICES
from simulation.results import FORMAT_CHOICES, FORMAT_CSV

from .exceptions import ConfigurationError


class IntegerListField(forms.Field):
    """Lista de enteros: [80, 90], "80,90,100" o un rango "80:120:10" (extremo incluido)"""

    def to_python(self, value):
        if value in self.empty_values:
            return []
        if isinstance(value, int):
            return [value]
        if isinstance(value, (list, tuple)):
            items = value
        else:
            text = str(value).strip()
            if ':' in text:
                parts = text.split(':')
                if len(parts) not in (2, 3):
                    raise forms.ValidationError('Rango inválido, use inicio:fin[:paso]')
                try:
                    start, stop, *step = [int(p) for p in parts]
                except ValueError:
                    raise forms.ValidationError('Rango inválido, use enteros') from None
                step = step[0] if step else 1
                if step < 1:
                    raise forms.ValidationError('El paso del rango debe ser positivo')
                return list(range(start, stop + 1, step))
            items = [item for item in text.split(',') if item.strip()]
        try:
            return [int(item) for item in items]
        except (TypeError, ValueError):
            raise forms.ValidationError('Se esperaba una lista de enteros') from None


class FloatListField(forms.Field):
    """Lista de reales: [1, 14] o "0.5,1" """

    def to_python(self, value):
        if value in self.empty_values:
            return []
        if isinstance(value, (int, float)):
            return [float(value)]
        items = value if isinstance(value, (list, tuple)) else str(value).split(',')
        try:
            return [float(item) for item in items]
        except (TypeError, ValueError):
            raise forms.ValidationError('Se esperaba una lista de números') from None


class BaseMatrixField(forms.Field):
    """Matriz base como lista de filas: [[1, 22, 22], [2, 1, 1]] o su texto JSON"""

    def to_python(self, value):
        if value in self.empty_values:
            return None
        if isinstance(value, str):
            try:
                value = json.loads(value)
            except json.JSONDecodeError:
                raise forms.ValidationError('La matriz base debe ser JSON, p. ej. [[45, 45]]') from None
        if not isinstance(value, list) or not value or not all(isinstance(row, list) for row in value):
            raise forms.ValidationError('La matriz base debe ser una lista de filas')
        try:
            return [[int(b) for b in row] for row in value]
        except (TypeError, ValueError):
            raise forms.ValidationError('Las entradas de la matriz base deben ser enteros') from None


class RunConfigForm(forms.Form):
    # Ensamble
    ensemble = forms.CharField(required=False, max_length=50)
    base = BaseMatrixField(required=False)
    state_columns = IntegerListField(required=False)
    Q = forms.IntegerField(required=False, min_value=2)

    # Decodificador
    algorithm = forms.CharField(required=False)
    omega = FloatListField(required=False)
    max_iterations = forms.IntegerField(required=False, min_value=1)

    # Pesos de error y simulación
    error_weight = forms.IntegerField(required=False, min_value=0)
    error_weights = IntegerListField(required=False)
    trials = forms.IntegerField(required=False, min_value=1)
    max_failures = forms.IntegerField(required=False, min_value=1)
    key_policy = forms.ChoiceField(required=False, choices=KEY_POLICY_CHOICES)
    workers = forms.IntegerField(required=False, min_value=1)

    # Análisis
    tol = forms.FloatField(required=False, min_value=0)
    variant = forms.ChoiceField(required=False, choices=VARIANT_CHOICES)
    target_bler = forms.FloatField(required=False, min_value=0, max_value=1)
    curve = forms.CharField(required=False)

    # Entradas y salidas
    seed = forms.IntegerField(required=False, min_value=0)
    private_key = forms.CharField(required=False)
    public_key = forms.CharField(required=False)
    plaintext = forms.CharField(required=False)
    ciphertext = forms.CharField(required=False)
    output = forms.CharField(required=False)
    format = forms.ChoiceField(required=False, choices=FORMAT_CHOICES)

    def clean_algorithm(self):
        value = self.cleaned_data.get('algorithm')
        if not value:
            return None
        try:
            return normalize_algorithm(value)
        except DecoderInputError as exc:
            raise forms.ValidationError(str(exc)) from None

    def clean(self):
        cleaned = super().clean()
        if cleaned.get('ensemble') and cleaned.get('base'):
            raise forms.ValidationError('Indique --ensemble o --base, no ambos')
        cleaned['spec'] = None
        Q = cleaned.get('Q') or DEFAULT_Q
        try:
            if cleaned.get('base'):
                cleaned['spec'] = ensemble_from_base(cleaned['base'], cleaned.get('state_columns') or (), Q)
            elif cleaned.get('ensemble'):
                cleaned['spec'] = ensemble(cleaned['ensemble'], Q)
        except EnsembleError as exc:
            raise forms.ValidationError(str(exc)) from None
        cleaned['format'] = cleaned.get('format') or FORMAT_CSV
        cleaned['key_policy'] = cleaned.get('key_policy') or KEY_PER_TRIAL
        cleaned['variant'] = cleaned.get('variant') or VARIANT_MMT
        return cleaned


def load_config_file(path):
    """Lee un archivo TOML de configuración y comprueba que sus claves existen"""
    try:
        with open(path, 'rb') as stream:
            values = tomllib.load(stream)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f'Archivo de configuración inválido {path}: {exc}') from exc
    unknown = sorted(set(values) - set(RunConfigForm.base_fields))
    if unknown:
        raise ConfigurationError(f'Claves desconocidas en {path}: {", ".join(unknown)}')
    return values


def run_config(options, config_path=None):
    """
    Combina el archivo de configuración con las opciones (las opciones no
    nulas ganan) y devuelve los datos validados.
    """
    config_path = config_path or settings.MDPC_CONFIG
    data = load_config_file(config_path) if config_path else {}
    for name in RunConfigForm.base_fields:
        value = options.get(name)
        if value is not None and value != []:
            data[name] = value
    form = RunConfigForm(data)
    if not form.is_valid():
        errors = '; '.join(
            f'{field}: {" ".join(messages)}' if field != '__all__' else ' '.join(messages)
            for field, messages in form.errors.items()
        )
        raise ConfigurationError(f'Configuración inválida: {errors}')
    return form.cleaned_data
