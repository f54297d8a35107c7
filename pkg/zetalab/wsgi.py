"""
WSGI config for the zetalab project.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "zetalab.settings")

application = get_wsgi_application()
