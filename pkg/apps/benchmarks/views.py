from django.db.models import Count
from django_filters.rest_framework import DjangoFilterBackend
from rest_framework import viewsets
from rest_framework.decorators import action
from rest_framework.filters import OrderingFilter, SearchFilter
from rest_framework.permissions import AllowAny
from rest_framework.response import Response

from .filters import BenchmarkRunFilter, RunRecordFilter
from .models import BenchmarkRun, RunRecord
from .serializers import BenchmarkRunListSerializer, BenchmarkRunSerializer, RunRecordSerializer


class BenchmarkRunViewSet(viewsets.ReadOnlyModelViewSet):
    """
    Corridas del harness (solo lectura; se crean con `manage.py bench`).

    Endpoints:
    - GET /api/benchmarks/runs/ - Listar corridas
    - GET /api/benchmarks/runs/{id}/ - Detalle con resumen
    - GET /api/benchmarks/runs/{id}/resumen/ - Conteos por configuracion

    Filtros:
    - ?passed=true|false
    - ?fecha_desde=...&fecha_hasta=...
    - ?ordering=-started_at
    """
    permission_classes = [AllowAny]
    filter_backends = [DjangoFilterBackend, OrderingFilter]
    filterset_class = BenchmarkRunFilter
    ordering_fields = ['started_at', 'finished_at']
    ordering = ['-started_at']

    def get_queryset(self):
        return BenchmarkRun.objects.annotate(records_count=Count('records'))

    def get_serializer_class(self):
        if self.action == 'list':
            return BenchmarkRunListSerializer
        return BenchmarkRunSerializer

    @action(detail=True, methods=['get'])
    def resumen(self, request, pk=None):
        """Solved por configuracion, mejor virtual y total de benchmarks."""
        run = self.get_object()
        data = run.tabla()
        data['run'] = run.pk
        data['passed'] = run.passed
        return Response(data)


class RunRecordViewSet(viewsets.ReadOnlyModelViewSet):
    """
    Registros por benchmark y configuracion.

    Filtros:
    - ?verdict=sat|unknown|timeout|error
    - ?config=7b
    - ?run=1
    - ?benchmark=texto
    - ?revalidacion_fallida=true
    - ?search=texto (benchmark, error)
    """
    permission_classes = [AllowAny]
    serializer_class = RunRecordSerializer
    filter_backends = [DjangoFilterBackend, SearchFilter, OrderingFilter]
    filterset_class = RunRecordFilter
    search_fields = ['benchmark', 'error']
    ordering_fields = ['wall_time', 'check_time', 'benchmark', 'config_id']
    ordering = ['benchmark', 'config_id']

    def get_queryset(self):
        return RunRecord.objects.select_related('run')
