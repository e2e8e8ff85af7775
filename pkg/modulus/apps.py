from django.apps import AppConfig


class ModulusConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'modulus'
    verbose_name = 'Conformal modulus and distortion'
