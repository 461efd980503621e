"""
Django settings for genetic_crystal_server project.

The project hosts the crystal basis engine of the genetic code: the exact
sl(2) + sl(2) crystal arithmetic, the misreading operator catalog and the
multiplet derivation, exposed through management commands and a small
read-only API.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get(
    'DJANGO_SECRET_KEY',
    'django-insecure-3v#crystal-basis-engine-local-only-key',
)

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = os.environ.get('DJANGO_DEBUG', 'true').lower() == 'true'

ALLOWED_HOSTS = ['*']

APPEND_SLASH = False

# Application definition

INSTALLED_APPS = [
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'rest_framework',
    'corsheaders',
    'core',
    'crystals.apps.CrystalsConfig',
    'misreading.apps.MisreadingConfig',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'corsheaders.middleware.CorsMiddleware',
    'django.middleware.common.CommonMiddleware',
]

ROOT_URLCONF = 'genetic_crystal_server.urls'

# Comma-separated list of browser origins allowed to call the API
CORS_ALLOWED_ORIGINS = [
    origin.strip() for origin in os.environ.get('CORS_ALLOWED_ORIGINS', 'http://localhost:3000').split(',')
    if origin.strip()
]

TEMPLATES = []

# The engine is stateless: no authentication, JSON only.
REST_FRAMEWORK = {
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [
        'rest_framework.permissions.AllowAny',
    ],
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'EXCEPTION_HANDLER': 'core.utils.custom_exception_handler',
    'UNAUTHENTICATED_USER': None,
}

WSGI_APPLICATION = 'genetic_crystal_server.wsgi.application'

ASGI_APPLICATION = 'genetic_crystal_server.asgi.application'

# Internationalization
# https://docs.djangoproject.com/en/4.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


def _env_flag(name, default):
    return os.environ.get(name, default).strip().lower() in ('1', 'true', 'on', 'yes')


# Engine configuration
GENETIC_CRYSTAL = {
    'DEFAULT_SCHEME': os.environ.get('GC_DEFAULT_SCHEME', 'a'),
    'DAMPING': _env_flag('GC_DAMPING', 'on'),
    # 'computed' merges on the engine's own TVTV output, 'asserted' also asserts UCA -> AGA
    'SER_TRIGGER': os.environ.get('GC_SER_TRIGGER', 'computed'),
    'EXPECTATIONS_DIR': Path(
        os.environ.get('GC_EXPECTATIONS_DIR', BASE_DIR / 'misreading' / 'data')
    ),
    'LEVEL5_MERGE_FAMILIES': ('TVTV',),
    # Merges the alternative scheme predicts at level 3 that the real codes resolve
    # otherwise (stop codons, start codon, rare amino acid, affine amino acids).
    'SCHEME_B_UNOBSERVED_MERGES': (
        ('GAR', 'AAR'),
        ('CAR', 'UAR'),
        ('CAR', 'AAR'),
        ('UGR', 'CGN'),
        ('AGR', 'GGN'),
        ('AUR', 'GUN'),
        ('AUR', 'CUN'),
    ),
}

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': 'INFO',
            'propagate': True,
        },
        'crystals': {
            'handlers': ['console'],
            'level': os.environ.get('GC_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
        'misreading': {
            'handlers': ['console'],
            'level': os.environ.get('GC_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    },
}
