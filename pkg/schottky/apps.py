from django.apps import AppConfig


class SchottkyConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'schottky'
    verbose_name = 'Schottky groups'
