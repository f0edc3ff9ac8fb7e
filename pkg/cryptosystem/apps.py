from django.apps import AppConfig


class CryptosystemConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'cryptosystem'
    verbose_name = 'Criptosistema McEliece'
