from django.apps import AppConfig


class JetsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'jets'
