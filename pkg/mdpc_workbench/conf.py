"""
Acceso a la configuración del banco de trabajo (settings.MDPC_WORKBENCH)
"""
from django.conf import settings

DEFAULTS = {
    'DECODER_MAX_ITERATIONS': 100,
    'KEYGEN_MAX_RETRIES': 100,
    'DEFAULT_ERROR_WEIGHTS': {'A': 84, 'B': 84, 'C': 102},
    'DE_MAX_ITERATIONS': 2000,
    'DE_EPSILON': 1e-9,
    'DE_STALL_WINDOW': 50,
    'DE_STALL_TOLERANCE': 1e-12,
    'DE_QUANTIZATION_STEP': 2 ** -4,
    'DE_SATURATION': 32.0,
    'SIM_MAX_FAILURES': 100,
    'SIM_CHUNK_SIZE': 32,
    'ISD_MAX_P': 16,
    'ISD_MAX_L': 80,
}


def workbench_setting(name):
    """Obtiene un valor de MDPC_WORKBENCH o su valor por defecto"""
    overrides = getattr(settings, 'MDPC_WORKBENCH', {})
    if name in overrides:
        return overrides[name]
    return DEFAULTS[name]
