from rest_framework import serializers

from .models import BenchmarkRun, RunRecord


class RunRecordSerializer(serializers.ModelSerializer):
    verdict_display = serializers.CharField(
        source='get_verdict_display',
        read_only=True
    )
    check_ratio = serializers.FloatField(read_only=True)

    class Meta:
        model = RunRecord
        fields = [
            'id',
            'run',
            'benchmark',
            'config_id',
            'verdict',
            'verdict_display',
            'wall_time',
            'check_time',
            'check_ratio',
            'check_verdict',
            'certificate_path',
            'error',
            'statistics',
        ]


class BenchmarkRunListSerializer(serializers.ModelSerializer):
    """Serializer reducido para listados."""
    records_count = serializers.IntegerField(read_only=True)

    class Meta:
        model = BenchmarkRun
        fields = [
            'id',
            'configs',
            'corpus_dir',
            'timeout_ms',
            'passed',
            'records_count',
            'started_at',
            'finished_at',
        ]


class BenchmarkRunSerializer(BenchmarkRunListSerializer):
    """Detalle con el resumen guardado al terminar la corrida."""

    class Meta(BenchmarkRunListSerializer.Meta):
        fields = BenchmarkRunListSerializer.Meta.fields + ['workers', 'summary']
