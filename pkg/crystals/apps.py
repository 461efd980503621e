from django.apps import AppConfig


class CrystalsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'crystals'
    verbose_name = 'Crystal basis of the codon space'
