from django.apps import AppConfig


class ObjetivosConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.objetivos'
    verbose_name = 'Traduccion logica a optimizacion'
