"""
Celery configuration for zetalab.
Runs counting and certificate work items for distributed sweeps.
"""

import os

from celery import Celery

# Set default Django settings module for Celery
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "zetalab.settings")

app = Celery("zetalab")

# Configure Celery using Django settings
app.config_from_object("django.conf:settings", namespace="CELERY")

# Auto-discover tasks from all Django apps
app.autodiscover_tasks()

app.conf.task_routes = {
    "counting.tasks.*": {"queue": "counting"},
    "rouche.tasks.*": {"queue": "rouche"},
}

# Grid points are long-running; hand them out one at a time
app.conf.task_acks_late = True
app.conf.worker_prefetch_multiplier = 1

app.conf.timezone = "UTC"

