from django.apps import AppConfig


class WhitneyConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'whitney'
    verbose_name = 'Whitney decompositions'
