"""
Django settings for the zetalab project.

Numerical defaults for every app live in ZETALAB_NUMERICS and can be
overridden per run through the zetalab management command.
"""

import os
from pathlib import Path

from decouple import config

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config("SECRET_KEY", default="django-insecure-zetalab-local-only")

DEBUG = config("DEBUG", default=True, cast=bool)

ALLOWED_HOSTS = config(
    "ALLOWED_HOSTS",
    default="localhost,127.0.0.1",
    cast=lambda v: [s.strip() for s in v.split(",")],
)

# Application definition
DJANGO_APPS = [
    "django.contrib.admin",
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "django.contrib.sessions",
    "django.contrib.messages",
    "django.contrib.staticfiles",
]

THIRD_PARTY_APPS = [
    "rest_framework",
]

LOCAL_APPS = [
    "core",
    "zeta",
    "dirichlet",
    "polynomials",
    "rouche",
    "counting",
    "gallery",
    "experiments",
]

INSTALLED_APPS = DJANGO_APPS + THIRD_PARTY_APPS + LOCAL_APPS

MIDDLEWARE = [
    "django.middleware.security.SecurityMiddleware",
    "django.contrib.sessions.middleware.SessionMiddleware",
    "django.middleware.common.CommonMiddleware",
    "django.middleware.csrf.CsrfViewMiddleware",
    "django.contrib.auth.middleware.AuthenticationMiddleware",
    "django.contrib.messages.middleware.MessageMiddleware",
    "django.middleware.clickjacking.XFrameOptionsMiddleware",
]

ROOT_URLCONF = "zetalab.urls"

TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,
        "OPTIONS": {
            "context_processors": [
                "django.template.context_processors.debug",
                "django.template.context_processors.request",
                "django.contrib.auth.context_processors.auth",
                "django.contrib.messages.context_processors.messages",
            ],
        },
    },
]

WSGI_APPLICATION = "zetalab.wsgi.application"

# Database (run journal only)
DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": config("ZETALAB_DB", default=str(BASE_DIR / "db.sqlite3")),
    }
}

LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = True
USE_TZ = True

STATIC_URL = "/static/"

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

REST_FRAMEWORK = {
    "DEFAULT_RENDERER_CLASSES": [
        "rest_framework.renderers.JSONRenderer",
    ],
    # Keep full precision for floats in reports
    "COERCE_DECIMAL_TO_STRING": False,
}

# Celery Configuration
CELERY_BROKER_URL = config("REDIS_URL", default="redis://localhost:6379/0")
CELERY_RESULT_BACKEND = config("REDIS_URL", default="redis://localhost:6379/0")
CELERY_ACCEPT_CONTENT = ["json"]
CELERY_TASK_SERIALIZER = "json"
CELERY_RESULT_SERIALIZER = "json"
CELERY_TIMEZONE = TIME_ZONE
CELERY_TASK_ALWAYS_EAGER = config("CELERY_TASK_ALWAYS_EAGER", default=True, cast=bool)
CELERY_TASK_EAGER_PROPAGATES = True

# Run settings
ZETALAB_WORKERS = config("ZETALAB_WORKERS", default=1, cast=int)
ZETALAB_SEED = config("ZETALAB_SEED", default=20240229, cast=int)
RUN_SLOW_CHECKS = config("ZETALAB_RUN_SLOW_CHECKS", default=False, cast=bool)

# Numerical defaults, addressed by dotted key
ZETALAB_NUMERICS = {
    # contour machinery
    "contour.boundary_threshold": 1e-9,
    "contour.initial_samples": 64,
    "contour.samples_per_unit": 8.0,
    "contour.sample_budget": 2**22,
    "contour.perturbations": [1e-4, 3e-4, 1e-3, 3e-3],
    "contour.pole_check_radius": 0.05,
    # Cauchy integral derivatives
    "cauchy.max_radius": 0.25,
    "cauchy.nodes": 64,
    "cauchy.max_nodes": 4096,
    "cauchy.rtol": 1e-11,
    # localization
    "localize.tol": 1e-8,
    "localize.newton_max_iter": 50,
    "localize.max_depth": 40,
    # zeta engine
    "zeta.truncation_N": None,
    "zeta.bernoulli_terms": 12,
    "zeta.moebius_size": 10000,
    # dirichlet ring
    "dirichlet.default_terms": 10000,
    "dirichlet.mul_budget": 10**7,
    "dirichlet.merge_tol": 1e-12,
    # polynomial caps
    "poly.max_total_degree": 8,
    "poly.max_vars": 7,
    "poly.max_terms": 512,
    # Rouché localization
    "rouche.tau_step": 0.05,
    "rouche.circle_samples": 256,
    "rouche.max_circle_samples": 8192,
    "rouche.theta_attempts": 8,
    "rouche.free_coefficient": 1.0,
    "rouche.alpha_samples": 100,
    "rouche.checkpoint_every": 1000,
    # counting suite
    "counting.panel_width": 0.5,
    "counting.gauss_nodes": 16,
    "counting.panel_tol": 1e-6,
    "counting.band_log_factor": 5.0,
    "counting.real_axis_offset": 0.5,
    "counting.berndt_sigma": [-1.0, 4.0],
    # gallery
    "gallery.remark1_radius": 0.2,
    "gallery.max_height_m": 6,
}

# Logging Configuration
LOG_DIR = Path(config("ZETALAB_LOG_DIR", default=str(BASE_DIR / "logs")))
os.makedirs(LOG_DIR, exist_ok=True)

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {module} {process:d} {thread:d} {message}",
            "style": "{",
        },
        "simple": {
            "format": "{levelname} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "file": {
            "level": "INFO",
            "class": "logging.handlers.RotatingFileHandler",
            "filename": LOG_DIR / "zetalab.log",
            "maxBytes": 1024 * 1024 * 5,  # 5MB
            "backupCount": 5,
            "formatter": "verbose",
        },
        "console": {
            "level": config("ZETALAB_LOG_LEVEL", default="WARNING"),
            "class": "logging.StreamHandler",
            "formatter": "simple",
        },
    },
    "loggers": {
        "django": {
            "handlers": ["file", "console"],
            "level": "INFO",
            "propagate": True,
        },
        **{
            app: {
                "handlers": ["file", "console"],
                "level": "DEBUG",
                "propagate": False,
            }
            for app in LOCAL_APPS
        },
    },
}

# Error reporting
SENTRY_DSN = config("SENTRY_DSN", default="")
if SENTRY_DSN:
    import sentry_sdk
    from sentry_sdk.integrations.django import DjangoIntegration

    sentry_sdk.init(dsn=SENTRY_DSN, integrations=[DjangoIntegration()])
