# config/settings.py

"""
Django settings for schottky-lab project.
"""

from pathlib import Path

from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config('SECRET_KEY', default='django-insecure-schottky-lab-local-key')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = config('DEBUG', default=True, cast=bool)

ALLOWED_HOSTS = []

# Application definition
DJANGO_APPS = [
    'django.contrib.contenttypes',
]

THIRD_PARTY_APPS = [
    'rest_framework',
]

LOCAL_APPS = [
    'geometry',
    'whitney',
    'quasihyperbolic',
    'transboundary',
    'schottky',
    'modulus',
    'beltrami',
    'toolkit',
]

INSTALLED_APPS = DJANGO_APPS + THIRD_PARTY_APPS + LOCAL_APPS

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [BASE_DIR / 'templates'],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [],
        },
    },
]

# Database
# Nothing is stored; the test runner and management framework still expect one.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': config('DATABASE_PATH', default=str(BASE_DIR / 'db.sqlite3')),
    }
}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

# Default primary key field type
DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Django REST Framework
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'DEFAULT_PARSER_CLASSES': [
        'rest_framework.parsers.JSONParser',
    ],
}

# Numerical defaults
SCHOTTKY_LAB = {
    'DISJOINTNESS_TOLERANCE': config('LAB_DISJOINTNESS_TOLERANCE', default=1e-9, cast=float),
    'WHITNEY_MAX_LEVEL': config('LAB_WHITNEY_MAX_LEVEL', default=9, cast=int),
    'QUADRATURE_TOLERANCE': config('LAB_QUADRATURE_TOLERANCE', default=1e-10, cast=float),
    'QUADRATURE_MAX_DEPTH': config('LAB_QUADRATURE_MAX_DEPTH', default=12, cast=int),
    'WORD_BUDGET': config('LAB_WORD_BUDGET', default=100000, cast=int),
    'MONTE_CARLO_POINTS': config('LAB_MONTE_CARLO_POINTS', default=100000, cast=int),
    'DEFAULT_SEED': config('LAB_DEFAULT_SEED', default=0, cast=int),
    'RESULT_SCHEMA_VERSION': 1,
    'SCENE_PRECISION': config('LAB_SCENE_PRECISION', default=6, cast=int),
}

# Logging
LOG_LEVEL = config('LOG_LEVEL', default='WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'lab': {
            'format': '[%(asctime)s] %(levelname)s - %(message)s',
            'datefmt': '%Y-%m-%d %H:%M:%S',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'lab',
        },
    },
    'loggers': {
        app: {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        }
        for app in LOCAL_APPS
    },
}
