from django.apps import AppConfig


class DecodersConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'decoders'
    verbose_name = 'Decodificadores iterativos'
