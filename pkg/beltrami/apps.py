from django.apps import AppConfig


class BeltramiConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'beltrami'
    verbose_name = 'Beltrami coefficients'
