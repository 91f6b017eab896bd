"""
Base Django settings for the minimal surface workbench.
"""
from pathlib import Path

from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent

SECRET_KEY = config("SECRET_KEY", default="django-insecure-local-runs-only")

DEBUG = config("DEBUG", default=False, cast=bool)

ALLOWED_HOSTS: list[str] = []

# Application definition
DJANGO_APPS = [
    "django.contrib.contenttypes",
]

LOCAL_APPS = [
    "src.infrastructure.runs",
]

INSTALLED_APPS = DJANGO_APPS + LOCAL_APPS

# Database
# The run cache is a local SQLite file.
DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": config("RUN_CACHE_DB", default=str(BASE_DIR / "run_cache.sqlite3")),
    }
}

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# Run artifacts
RUN_OUTPUT_DIR = config("RUN_OUTPUT_DIR", default=str(BASE_DIR / "runs"))

# Discrete Plateau solver
SOLVER_MAX_ITERATIONS = config("SOLVER_MAX_ITERATIONS", default=500, cast=int)
SOLVER_DISPLACEMENT_TOLERANCE = config(
    "SOLVER_DISPLACEMENT_TOLERANCE", default=1e-9, cast=float
)
SOLVER_CURVATURE_TOLERANCE = config("SOLVER_CURVATURE_TOLERANCE", default=1e-4, cast=float)
SOLVER_REFINEMENT_LEVELS = config("SOLVER_REFINEMENT_LEVELS", default=1, cast=int)
SOLVER_EDGE_LENGTH = config("SOLVER_EDGE_LENGTH", default=0.25, cast=float)
SOLVER_FLIP_INTERVAL = config("SOLVER_FLIP_INTERVAL", default=10, cast=int)

# Conjugation and periods
CONJUGATE_RESIDUAL_THRESHOLD = config(
    "CONJUGATE_RESIDUAL_THRESHOLD", default=1.0, cast=float
)
CONJUGATE_CLOSURE_TOLERANCE = config(
    "CONJUGATE_CLOSURE_TOLERANCE", default=0.25, cast=float
)
PERIOD_TOLERANCE = config("PERIOD_TOLERANCE", default=1e-3, cast=float)
PLANE_PARALLEL_DEGREES = config("PLANE_PARALLEL_DEGREES", default=5.0, cast=float)

# Symmetry
CASE_ANGLE_DEGREES = config("CASE_ANGLE_DEGREES", default=0.5, cast=float)
WELD_TOLERANCE = config("WELD_TOLERANCE", default=1e-6, cast=float)

LOG_LEVEL = config("LOG_LEVEL", default="INFO")
LOG_FORMAT = config("LOG_FORMAT", default="verbose")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {name} {process:d} {message}",
            "style": "{",
        },
        "simple": {
            "format": "{levelname} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": LOG_FORMAT,
        },
    },
    "root": {
        "handlers": ["console"],
        "level": LOG_LEVEL,
    },
    "loggers": {
        "django": {
            "handlers": ["console"],
            "level": "WARNING",
            "propagate": False,
        },
        "src": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
    },
}
