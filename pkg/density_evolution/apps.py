from django.apps import AppConfig


class DensityEvolutionConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'density_evolution'
    verbose_name = 'Evolución de densidades'
