from django.apps import AppConfig


class BusquedaConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.busqueda'
    verbose_name = 'Busqueda de certificados'
