from django.apps import AppConfig


class QuasihyperbolicConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'quasihyperbolic'
    verbose_name = 'Quasihyperbolic geometry'
