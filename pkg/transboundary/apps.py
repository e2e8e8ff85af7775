from django.apps import AppConfig


class TransboundaryConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'transboundary'
    verbose_name = 'Transboundary chains'
