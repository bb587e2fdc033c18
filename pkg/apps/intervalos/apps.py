from django.apps import AppConfig


class IntervalosConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.intervalos'
    verbose_name = 'Aritmetica de intervalos'
