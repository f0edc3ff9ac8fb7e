"""
Django settings for mdpc_workbench project.

Banco de trabajo del criptosistema McEliece con códigos QC-MDPC basados en
protografos. No hay superficie web: el proyecto se usa a través de
``manage.py`` (comandos keygen, encrypt, decrypt, simulate, threshold,
security, inspect).

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'django-insecure-mdpc-workbench-local-key')

DEBUG = os.environ.get('DJANGO_DEBUG', '0') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'ring',
    'protograph',
    'tanner',
    'decoders',
    'cryptosystem',
    'density_evolution',
    'simulation',
    'security',
]


# Database
# Solo guarda resultados de simulaciones y umbrales (--record).

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.environ.get('MDPC_DATABASE', BASE_DIR / 'db.sqlite3'),
    }
}

# Default primary key field type
DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

USE_TZ = True
TIME_ZONE = 'UTC'


# Configuración de logging
LOG_LEVEL = os.environ.get('MDPC_LOG_LEVEL', 'INFO')
LOG_FILE = os.environ.get('MDPC_LOG_FILE')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'level': LOG_LEVEL,
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        app: {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        }
        for app in INSTALLED_APPS + ['mdpc_workbench']
    },
}

if LOG_FILE:
    LOGGING['handlers']['file'] = {
        'level': LOG_LEVEL,
        'class': 'logging.handlers.RotatingFileHandler',
        'filename': LOG_FILE,
        'maxBytes': 5 * 1024 * 1024,
        'backupCount': 3,
        'formatter': 'simple',
    }
    for logger in LOGGING['loggers'].values():
        logger['handlers'].append('file')


# Configuración del banco de trabajo
MDPC_CONFIG = os.environ.get('MDPC_CONFIG')

MDPC_WORKBENCH = {
    # Decodificadores
    'DECODER_MAX_ITERATIONS': 100,
    # Generación de claves
    'KEYGEN_MAX_RETRIES': 100,
    # Peso de error por defecto para Q=4801 (se escala con Q)
    'DEFAULT_ERROR_WEIGHTS': {'A': 84, 'B': 84, 'C': 102},
    # Evolución de densidades
    'DE_MAX_ITERATIONS': 2000,
    'DE_EPSILON': 1e-9,
    'DE_STALL_WINDOW': 50,
    'DE_STALL_TOLERANCE': 1e-12,
    'DE_QUANTIZATION_STEP': 2 ** -4,
    'DE_SATURATION': 32.0,
    # Simulación Monte Carlo
    'SIM_MAX_FAILURES': 100,
    'SIM_CHUNK_SIZE': 32,
    # Estimación ISD
    'ISD_MAX_P': 16,
    'ISD_MAX_L': 80,
}

# Pruebas largas (umbrales completos, 200 ensayos con Q=4801, ...)
MDPC_SLOW_TESTS = os.environ.get('MDPC_SLOW_TESTS', '0') == '1'
