import logging

from rest_framework import status
from rest_framework.decorators import api_view, permission_classes
from rest_framework.permissions import AllowAny
from rest_framework.response import Response

from .checker import check_certificate
from .serializers import CheckReportSerializer, VerificationRequestSerializer

logger = logging.getLogger(__name__)


@api_view(['POST'])
@permission_classes([AllowAny])
def verificar(request):
    """
    Verifica un certificado contra una formula.

    POST /api/certificados/verificar/
    Body:
        {
            "formula": "(declare-fun x () Real) (assert (= x 0))",
            "certificate": {"version": "ntacert/1", "formula_digest": "...",
                            "sigma": [0], "nu": {}, "beta": [{"x": ["-0x1p-1", "0x1p-1"]}]},
            "budget": 100000
        }

    Devuelve el reporte con el veredicto (valid, invalid, undetermined) y
    el resultado de cada condicion. Los errores de formato dan 400.
    """
    serializer = VerificationRequestSerializer(data=request.data)
    serializer.is_valid(raise_exception=True)
    data = serializer.validated_data
    report = check_certificate(data['formula'], data['certificate']['certificate'], data['budget'])
    return Response(CheckReportSerializer(report.as_dict()).data, status=status.HTTP_200_OK)
