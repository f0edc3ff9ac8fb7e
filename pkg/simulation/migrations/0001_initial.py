# Generated by Django 5.2.4 on 2026-10-19 10:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='SimulationRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('ensemble', models.CharField(max_length=50, verbose_name='Ensamble')),
                ('algorithm', models.CharField(choices=[('SPA', 'Suma-producto escalado'), ('E', 'Algoritmo E')], max_length=3, verbose_name='Algoritmo')),
                ('omega', models.FloatField(verbose_name='Omega')),
                ('Q', models.PositiveIntegerField(verbose_name='Tamaño de circulante')),
                ('e', models.PositiveIntegerField(verbose_name='Peso de error')),
                ('trials', models.PositiveIntegerField(verbose_name='Ensayos')),
                ('failures', models.PositiveIntegerField(verbose_name='Fallos')),
                ('undetected', models.PositiveIntegerField(default=0, verbose_name='Errores no detectados')),
                ('bler', models.FloatField(verbose_name='BLER')),
                ('ci_lo', models.FloatField(verbose_name='IC95 inferior')),
                ('ci_hi', models.FloatField(verbose_name='IC95 superior')),
                ('seed', models.CharField(max_length=40, verbose_name='Semilla maestra')),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'verbose_name': 'Punto de simulación',
                'verbose_name_plural': 'Puntos de simulación',
                'ordering': ['ensemble', 'algorithm', 'omega', 'e'],
            },
        ),
    ]
