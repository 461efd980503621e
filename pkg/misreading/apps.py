from django.apps import AppConfig


class MisreadingConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'misreading'
    verbose_name = 'Translation errors and multiplet derivation'
