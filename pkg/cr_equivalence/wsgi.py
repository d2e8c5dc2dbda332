"""
WSGI config for cr_equivalence project.
"""
import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'cr_equivalence.settings')

application = get_wsgi_application()
