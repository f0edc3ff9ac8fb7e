from dataclasses import asdict

from django.db import models

from decoders.message_passing import ALGORITHM_CHOICES


class SimulationRecord(models.Model):
    """Punto de una curva de BLER medido con el comando simulate"""
    ensemble = models.CharField(max_length=50, verbose_name="Ensamble")
    algorithm = models.CharField(max_length=3, choices=ALGORITHM_CHOICES, verbose_name="Algoritmo")
    omega = models.FloatField(verbose_name="Omega")
    Q = models.PositiveIntegerField(verbose_name="Tamaño de circulante")
    e = models.PositiveIntegerField(verbose_name="Peso de error")
    trials = models.PositiveIntegerField(verbose_name="Ensayos")
    failures = models.PositiveIntegerField(verbose_name="Fallos")
    undetected = models.PositiveIntegerField(default=0, verbose_name="Errores no detectados")
    bler = models.FloatField(verbose_name="BLER")
    ci_lo = models.FloatField(verbose_name="IC95 inferior")
    ci_hi = models.FloatField(verbose_name="IC95 superior")
    seed = models.CharField(max_length=40, verbose_name="Semilla maestra")
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        verbose_name = "Punto de simulación"
        verbose_name_plural = "Puntos de simulación"
        ordering = ['ensemble', 'algorithm', 'omega', 'e']

    def __str__(self):
        return f"{self.ensemble} {self.algorithm} (omega={self.omega}) e={self.e}: {self.failures}/{self.trials}"

    @classmethod
    def from_point(cls, point):
        """Guarda un SimPoint"""
        values = asdict(point)
        values['seed'] = str(values['seed'])
        return cls.objects.create(**values)
