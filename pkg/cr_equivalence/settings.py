"""
Django settings for cr_equivalence project.

Engine knobs are read from the environment (or a .env file) through
python-decouple and gathered in CR_ENGINE.
"""
from pathlib import Path

from decouple import config

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('SECRET_KEY', default='django-insecure-cr-equivalence-local-key')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = config('ALLOWED_HOSTS', default='localhost,127.0.0.1,testserver',
                       cast=lambda v: [s.strip() for s in v.split(',')])


# Application definition

INSTALLED_APPS = [
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.staticfiles',
    'rest_framework',
    'drf_yasg',
    'symbolic',
    'jets',
    'forms',
    'invariants',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.middleware.common.CommonMiddleware',
]

ROOT_URLCONF = 'cr_equivalence.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.debug',
                'django.template.context_processors.request',
            ],
        },
    },
]

WSGI_APPLICATION = 'cr_equivalence.wsgi.application'

# The engine is stateless; no database is configured.
DATABASES = {}

USE_TZ = True

STATIC_URL = 'static/'

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# REST Framework

REST_FRAMEWORK = {
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [
        'rest_framework.permissions.AllowAny',
    ],
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'UNAUTHENTICATED_USER': None,
}

SWAGGER_SETTINGS = {
    'USE_SESSION_AUTH': False,
    'SECURITY_DEFINITIONS': {},
}


# Engine

CR_ENGINE = {
    'SEED': config('CR_SEED', default=7, cast=int),
    'TRIALS': config('CR_TRIALS', default=20, cast=int),
    'SAMPLE_BOUND': config('CR_SAMPLE_BOUND', default=97, cast=int),
    'NODE_BUDGET': config('CR_NODE_BUDGET', default=5_000_000, cast=int),
    'MAX_ORDER': config('CR_MAX_ORDER', default=8, cast=int),
    'RETRY_BUDGET': config('CR_RETRY_BUDGET', default=64, cast=int),
    'RENDER_LIMIT': config('CR_RENDER_LIMIT', default=200_000, cast=int),
}


# Logging: stderr only, so reports on stdout stay byte-identical

CR_LOG_LEVEL = config('CR_LOG_LEVEL', default='INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        name: {'handlers': ['console'], 'level': CR_LOG_LEVEL, 'propagate': False}
        for name in ('symbolic', 'jets', 'forms', 'invariants')
    },
}
