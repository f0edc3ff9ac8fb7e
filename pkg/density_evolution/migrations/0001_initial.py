# Generated by Django 5.2.4 on 2026-10-19 10:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ThresholdRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('ensemble', models.CharField(max_length=50, verbose_name='Ensamble')),
                ('algorithm', models.CharField(choices=[('SPA', 'Suma-producto escalado'), ('E', 'Algoritmo E')], max_length=3, verbose_name='Algoritmo')),
                ('omega', models.FloatField(verbose_name='Omega')),
                ('Q', models.PositiveIntegerField(verbose_name='Tamaño de circulante')),
                ('delta_star', models.FloatField(verbose_name='Umbral delta*')),
                ('n_delta_star', models.FloatField(verbose_name='n·delta*')),
                ('iterations', models.PositiveIntegerField(verbose_name='Iteraciones')),
                ('residual', models.FloatField(verbose_name='Residuo')),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'verbose_name': 'Umbral',
                'verbose_name_plural': 'Umbrales',
                'ordering': ['-created_at'],
            },
        ),
    ]
