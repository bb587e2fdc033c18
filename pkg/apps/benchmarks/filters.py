import django_filters

from .models import BenchmarkRun, RunRecord


class BenchmarkRunFilter(django_filters.FilterSet):
    """Filtros para corridas del harness."""

    passed = django_filters.BooleanFilter()

    fecha_desde = django_filters.DateTimeFilter(
        field_name='started_at',
        lookup_expr='gte'
    )
    fecha_hasta = django_filters.DateTimeFilter(
        field_name='started_at',
        lookup_expr='lte'
    )

    class Meta:
        model = BenchmarkRun
        fields = []


class RunRecordFilter(django_filters.FilterSet):
    """Filtros para registros por archivo y configuracion."""

    # Filtros exactos
    verdict = django_filters.ChoiceFilter(choices=RunRecord.Verdict.choices)
    config = django_filters.CharFilter(field_name='config_id')
    run = django_filters.NumberFilter(field_name='run_id')

    # Subcadena de la ruta del benchmark
    benchmark = django_filters.CharFilter(lookup_expr='icontains')

    # Solo sat cuya revalidacion no dio valid
    revalidacion_fallida = django_filters.BooleanFilter(method='filter_revalidacion_fallida')

    class Meta:
        model = RunRecord
        fields = []

    def filter_revalidacion_fallida(self, queryset, name, value):
        if value:
            return queryset.filter(verdict=RunRecord.Verdict.SAT).exclude(check_verdict='valid')
        return queryset
