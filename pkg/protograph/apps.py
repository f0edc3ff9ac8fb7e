from django.apps import AppConfig


class ProtographConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'protograph'
    verbose_name = 'Ensembles de protografos'
