from django.contrib import admin
from django.utils.html import format_html
from django.utils.translation import gettext_lazy as _

from .models import BenchmarkRun, RunRecord

VERDICT_COLORS = {
    RunRecord.Verdict.SAT: '#22c55e',
    RunRecord.Verdict.UNKNOWN: '#f59e0b',
    RunRecord.Verdict.TIMEOUT: '#8b5cf6',
    RunRecord.Verdict.ERROR: '#ef4444',
}


class RunRecordInline(admin.TabularInline):
    model = RunRecord
    extra = 0
    fields = ('benchmark', 'config_id', 'verdict', 'wall_time', 'check_time', 'check_verdict')
    readonly_fields = fields
    can_delete = False
    show_change_link = True


@admin.register(BenchmarkRun)
class BenchmarkRunAdmin(admin.ModelAdmin):
    list_display = (
        'id',
        'configs_display',
        'corpus_dir',
        'timeout_ms',
        'passed_badge',
        'started_at',
        'finished_at',
    )
    list_filter = ('passed', 'started_at')
    search_fields = ('corpus_dir',)
    readonly_fields = ('summary', 'started_at', 'finished_at')
    inlines = [RunRecordInline]
    ordering = ('-started_at',)
    date_hierarchy = 'started_at'

    def configs_display(self, obj):
        return ', '.join(obj.configs)
    configs_display.short_description = _('Configuraciones')

    def passed_badge(self, obj):
        if obj.finished_at is None:
            return format_html('<span style="color: #6b7280;">En curso</span>')
        color, text = ('#22c55e', 'Revalidada') if obj.passed else ('#ef4444', 'Fallida')
        return format_html('<span style="color: {}; font-weight: bold;">{}</span>', color, text)
    passed_badge.short_description = _('Revalidacion')


@admin.register(RunRecord)
class RunRecordAdmin(admin.ModelAdmin):
    list_display = (
        'id',
        'benchmark',
        'config_id',
        'verdict_badge',
        'wall_time',
        'check_time',
        'check_verdict',
        'run',
    )
    list_filter = ('verdict', 'config_id', 'check_verdict')
    search_fields = ('benchmark', 'error')
    raw_id_fields = ('run',)
    list_per_page = 50

    fieldsets = (
        (_('Benchmark'), {
            'fields': ('run', 'benchmark', 'config_id', 'verdict', 'wall_time')
        }),
        (_('Verificacion'), {
            'fields': ('check_time', 'check_verdict', 'certificate_path')
        }),
        (_('Diagnostico'), {
            'fields': ('error', 'statistics'),
            'classes': ('collapse',)
        }),
    )

    def verdict_badge(self, obj):
        return format_html(
            '<span style="color: {}; font-weight: bold;">{}</span>',
            VERDICT_COLORS.get(obj.verdict, '#6b7280'),
            obj.get_verdict_display()
        )
    verdict_badge.short_description = _('Veredicto')
