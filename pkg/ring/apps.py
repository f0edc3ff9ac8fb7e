from django.apps import AppConfig


class RingConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'ring'
    verbose_name = 'Anillo de circulantes'
