from django.db import models
from django.db.models import Avg, Count, Q
from django.utils import timezone
from django.utils.translation import gettext_lazy as _

from apps.busqueda.config import PRESETS


class BenchmarkRun(models.Model):
    """
    Corrida del harness de benchmarks: un directorio de .smt2 resuelto con
    una lista de configuraciones.
    """
    configs = models.JSONField(
        _('configuraciones'),
        default=list
    )
    corpus_dir = models.CharField(
        _('directorio del corpus'),
        max_length=500
    )
    timeout_ms = models.PositiveIntegerField(
        _('timeout (ms)')
    )
    workers = models.PositiveSmallIntegerField(
        _('procesos'),
        default=1
    )

    # ==========================================================================
    # RESULTADO
    # ==========================================================================
    summary = models.JSONField(
        _('resumen'),
        default=dict,
        blank=True
    )
    passed = models.BooleanField(
        _('revalidacion correcta'),
        default=False,
        help_text=_('Todos los sat fueron revalidados por el verificador')
    )

    # ==========================================================================
    # AUDITORIA
    # ==========================================================================
    started_at = models.DateTimeField(
        _('inicio'),
        auto_now_add=True
    )
    finished_at = models.DateTimeField(
        _('fin'),
        null=True,
        blank=True
    )

    class Meta:
        ordering = ['-started_at']
        verbose_name = _('Corrida de benchmarks')
        verbose_name_plural = _('Corridas de benchmarks')

    def __str__(self):
        return f"Corrida #{self.pk} ({', '.join(self.configs)})"

    def finalizar(self, summary):
        """Guarda el resumen y marca la corrida como terminada."""
        self.summary = summary
        self.passed = summary.get('passed', False)
        self.finished_at = timezone.now()
        self.save(update_fields=['summary', 'passed', 'finished_at'])

    def tabla(self):
        """Conteos por configuracion y mejor virtual, calculados sobre los registros."""
        sat = RunRecord.Verdict.SAT
        filas = (
            self.records.values('config_id')
            .annotate(
                total=Count('id'),
                sat=Count('id', filter=Q(verdict=sat)),
                unknown=Count('id', filter=Q(verdict=RunRecord.Verdict.UNKNOWN)),
                timeout=Count('id', filter=Q(verdict=RunRecord.Verdict.TIMEOUT)),
                error=Count('id', filter=Q(verdict=RunRecord.Verdict.ERROR)),
                tiempo_medio=Avg('wall_time'),
            )
            .order_by('config_id')
        )
        return {
            'configuraciones': list(filas),
            'mejor_virtual': self.records.filter(verdict=sat).values('benchmark').distinct().count(),
            'benchmarks': self.records.values('benchmark').distinct().count(),
        }


class RunRecord(models.Model):
    """Resultado de un archivo con una configuracion."""

    class Verdict(models.TextChoices):
        SAT = 'sat', _('sat')
        UNKNOWN = 'unknown', _('unknown')
        TIMEOUT = 'timeout', _('timeout')
        ERROR = 'error', _('error')

    run = models.ForeignKey(
        BenchmarkRun,
        on_delete=models.CASCADE,
        related_name='records',
        verbose_name=_('corrida')
    )
    benchmark = models.CharField(
        _('benchmark'),
        max_length=500
    )
    config_id = models.CharField(
        _('configuracion'),
        max_length=4,
        choices=[(config_id, config_id) for config_id in PRESETS]
    )
    verdict = models.CharField(
        _('veredicto'),
        max_length=10,
        choices=Verdict.choices
    )
    wall_time = models.FloatField(
        _('tiempo de resolucion (s)')
    )

    # ==========================================================================
    # VERIFICACION
    # ==========================================================================
    check_time = models.FloatField(
        _('tiempo de verificacion (s)'),
        null=True,
        blank=True
    )
    check_verdict = models.CharField(
        _('veredicto de la verificacion'),
        max_length=15,
        blank=True
    )
    certificate_path = models.CharField(
        _('certificado'),
        max_length=500,
        blank=True
    )
    error = models.TextField(
        _('error'),
        blank=True
    )
    statistics = models.JSONField(
        _('estadisticas'),
        default=dict,
        blank=True
    )

    class Meta:
        ordering = ['benchmark', 'config_id']
        verbose_name = _('Registro de benchmark')
        verbose_name_plural = _('Registros de benchmarks')
        constraints = [
            models.UniqueConstraint(fields=['run', 'benchmark', 'config_id'], name='registro_unico_por_corrida'),
        ]
        indexes = [
            models.Index(fields=['verdict'], name='benchmarks_verdict_idx'),
            models.Index(fields=['config_id'], name='benchmarks_config_idx'),
        ]

    def __str__(self):
        return f"{self.benchmark} [{self.config_id}]: {self.verdict}"

    @property
    def check_ratio(self):
        if self.check_time is None or not self.wall_time:
            return None
        return self.check_time / self.wall_time
