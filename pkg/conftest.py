import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'genetic_crystal_server.settings')
django.setup()
