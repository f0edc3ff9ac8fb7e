from django.db import models

from decoders.message_passing import ALGORITHM_CHOICES


class ThresholdRecord(models.Model):
    """Umbral de evolución de densidades calculado con el comando threshold"""
    ensemble = models.CharField(max_length=50, verbose_name="Ensamble")
    algorithm = models.CharField(max_length=3, choices=ALGORITHM_CHOICES, verbose_name="Algoritmo")
    omega = models.FloatField(verbose_name="Omega")
    Q = models.PositiveIntegerField(verbose_name="Tamaño de circulante")
    delta_star = models.FloatField(verbose_name="Umbral delta*")
    n_delta_star = models.FloatField(verbose_name="n·delta*")
    iterations = models.PositiveIntegerField(verbose_name="Iteraciones")
    residual = models.FloatField(verbose_name="Residuo")
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        verbose_name = "Umbral"
        verbose_name_plural = "Umbrales"
        ordering = ['-created_at']

    def __str__(self):
        return f"{self.ensemble} {self.algorithm} (omega={self.omega}): n·delta*={self.n_delta_star:.1f}"

    @classmethod
    def from_result(cls, result):
        """Guarda un ThresholdResult"""
        return cls.objects.create(**result.as_row())
