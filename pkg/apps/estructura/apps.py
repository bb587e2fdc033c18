from django.apps import AppConfig


class EstructuraConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.estructura'
    verbose_name = 'Analisis estructural'
