from django.conf import settings
from django.urls import include, path
from rest_framework.decorators import api_view, permission_classes
from rest_framework.permissions import AllowAny
from rest_framework.response import Response

from apps.busqueda.config import PRESETS
from apps.certificados.serialization import FORMAT_VERSION

app_name = 'api'


@api_view(['GET'])
@permission_classes([AllowAny])
def api_root(request):
    """Endpoint raiz de la API."""
    return Response({
        'status': 'ok',
        'certificate_format': FORMAT_VERSION,
        'default_config': settings.NTACERT_DEFAULT_CONFIG,
        'configs': list(PRESETS),
        'endpoints': {
            'certificados': {
                'verificar': '/api/certificados/verificar/',
            },
            'benchmarks': {
                'runs': '/api/benchmarks/runs/',
                'run_detail': '/api/benchmarks/runs/{id}/',
                'resumen': '/api/benchmarks/runs/{id}/resumen/',
                'records': '/api/benchmarks/records/',
                'record_detail': '/api/benchmarks/records/{id}/',
            },
        }
    })


urlpatterns = [
    path('', api_root, name='root'),
    path('certificados/', include('apps.certificados.urls', namespace='certificados')),
    path('benchmarks/', include('apps.benchmarks.urls', namespace='benchmarks')),
]
