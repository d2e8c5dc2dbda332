import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'cr_equivalence.settings')
django.setup()
