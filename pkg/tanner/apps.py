from django.apps import AppConfig


class TannerConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'tanner'
    verbose_name = 'Grafos de Tanner'
