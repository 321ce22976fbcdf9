"""
Django settings for the lwq project.

There is no database and no HTTP surface: Django provides the management
command layer, DRF the request validation and rendering, Celery the row
fan-out. Every value below can be overridden from the environment.
"""

from pathlib import Path
import os

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'lwq-local-only')

DEBUG = os.environ.get('DJANGO_DEBUG', '0') == '1'

ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'rest_framework',
    'lambert',
]

DATABASES = {}

USE_TZ = True
TIME_ZONE = 'UTC'

# Solver defaults
LWQ_TOL_REL = float(os.environ.get('LWQ_TOL_REL', '1e-14'))
LWQ_TOL_ABS = float(os.environ.get('LWQ_TOL_ABS', '0'))
LWQ_MAX_ITER = int(os.environ.get('LWQ_MAX_ITER', '16'))

# Output format when --format is not given: text, csv or json
LWQ_FORMAT = os.environ.get('LWQ_FORMAT', 'text')

LWQ_LOG_LEVEL = os.environ.get('LWQ_LOG_LEVEL', 'WARNING').upper()

# Logs go to stderr so CSV/JSON on stdout stay clean.
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '[{levelname}] {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'stderr': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'lambert': {
            'handlers': ['stderr'],
            'level': LWQ_LOG_LEVEL,
            'propagate': False,
        },
    },
}

REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
    'COMPACT_JSON': True,
    'STRICT_JSON': True,
}

# Celery Configuration
CELERY_BROKER_URL = os.environ.get('CELERY_BROKER_URL', 'redis://localhost:6379/0')
CELERY_RESULT_BACKEND = os.environ.get('CELERY_RESULT_BACKEND', 'redis://localhost:6379/0')

CELERY_ACCEPT_CONTENT = ['json']
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
CELERY_TIMEZONE = TIME_ZONE

# Rows run in-process unless LWQ_CELERY_EAGER=0
CELERY_TASK_ALWAYS_EAGER = os.environ.get('LWQ_CELERY_EAGER', '1') == '1'
CELERY_TASK_EAGER_PROPAGATES = True

CELERY_TASK_TIME_LIMIT = 5 * 60
CELERY_TASK_SOFT_TIME_LIMIT = 4 * 60
CELERY_WORKER_PREFETCH_MULTIPLIER = 4
