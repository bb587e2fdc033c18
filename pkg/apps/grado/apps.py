from django.apps import AppConfig


class GradoConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.grado'
    verbose_name = 'Grado topologico'
