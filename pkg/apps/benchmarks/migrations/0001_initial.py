# Generated by Django 5.2.8

from django.db import migrations, models
import django.db.models.deletion


CONFIG_CHOICES = [
    ('1a', '1a'), ('1b', '1b'), ('1c', '1c'), ('2b', '2b'), ('2c', '2c'),
    ('3b', '3b'), ('3c', '3c'), ('4b', '4b'), ('4c', '4c'), ('5b', '5b'),
    ('5c', '5c'), ('6b', '6b'), ('6c', '6c'), ('7b', '7b'), ('7c', '7c'),
]


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='BenchmarkRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('configs', models.JSONField(default=list, verbose_name='configuraciones')),
                ('corpus_dir', models.CharField(max_length=500, verbose_name='directorio del corpus')),
                ('timeout_ms', models.PositiveIntegerField(verbose_name='timeout (ms)')),
                ('workers', models.PositiveSmallIntegerField(default=1, verbose_name='procesos')),
                ('summary', models.JSONField(blank=True, default=dict, verbose_name='resumen')),
                ('passed', models.BooleanField(default=False, help_text='Todos los sat fueron revalidados por el verificador', verbose_name='revalidacion correcta')),
                ('started_at', models.DateTimeField(auto_now_add=True, verbose_name='inicio')),
                ('finished_at', models.DateTimeField(blank=True, null=True, verbose_name='fin')),
            ],
            options={
                'verbose_name': 'Corrida de benchmarks',
                'verbose_name_plural': 'Corridas de benchmarks',
                'ordering': ['-started_at'],
            },
        ),
        migrations.CreateModel(
            name='RunRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('benchmark', models.CharField(max_length=500, verbose_name='benchmark')),
                ('config_id', models.CharField(choices=CONFIG_CHOICES, max_length=4, verbose_name='configuracion')),
                ('verdict', models.CharField(choices=[('sat', 'sat'), ('unknown', 'unknown'), ('timeout', 'timeout'), ('error', 'error')], max_length=10, verbose_name='veredicto')),
                ('wall_time', models.FloatField(verbose_name='tiempo de resolucion (s)')),
                ('check_time', models.FloatField(blank=True, null=True, verbose_name='tiempo de verificacion (s)')),
                ('check_verdict', models.CharField(blank=True, max_length=15, verbose_name='veredicto de la verificacion')),
                ('certificate_path', models.CharField(blank=True, max_length=500, verbose_name='certificado')),
                ('error', models.TextField(blank=True, verbose_name='error')),
                ('statistics', models.JSONField(blank=True, default=dict, verbose_name='estadisticas')),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='records', to='benchmarks.benchmarkrun', verbose_name='corrida')),
            ],
            options={
                'verbose_name': 'Registro de benchmark',
                'verbose_name_plural': 'Registros de benchmarks',
                'ordering': ['benchmark', 'config_id'],
                'indexes': [
                    models.Index(fields=['verdict'], name='benchmarks_verdict_idx'),
                    models.Index(fields=['config_id'], name='benchmarks_config_idx'),
                ],
                'constraints': [
                    models.UniqueConstraint(fields=('run', 'benchmark', 'config_id'), name='registro_unico_por_corrida'),
                ],
            },
        ),
    ]
