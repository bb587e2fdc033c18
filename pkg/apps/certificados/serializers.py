from rest_framework import serializers

from apps.formulas.exceptions import FormulaError
from apps.formulas.parser import parse_formula
from apps.grado.degree import DEFAULT_BUDGET

from .certificate import FORMAT_VERSION
from .exceptions import CertificateFormatError
from .serialization import from_document


class CertificateSerializer(serializers.Serializer):
    """
    Documento de certificado tal como se guarda en disco.
    """
    version = serializers.CharField(default=FORMAT_VERSION)
    formula_digest = serializers.CharField()
    sigma = serializers.ListField(child=serializers.IntegerField(min_value=0))
    nu = serializers.DictField(child=serializers.CharField(), required=False, default=dict)
    beta = serializers.ListField(
        child=serializers.DictField(child=serializers.ListField(child=serializers.CharField(), min_length=2, max_length=2)),
        allow_empty=False,
    )

    def validate(self, attrs):
        try:
            attrs['certificate'] = from_document(dict(attrs))
        except CertificateFormatError as error:
            raise serializers.ValidationError(error.message)
        return attrs


class VerificationRequestSerializer(serializers.Serializer):
    """
    Pedido de verificacion: texto SMT-LIB de la formula, certificado y
    presupuesto opcional para el calculo del grado.
    """
    formula = serializers.CharField(trim_whitespace=False)
    certificate = CertificateSerializer()
    budget = serializers.IntegerField(min_value=0, required=False, default=DEFAULT_BUDGET)

    def validate_formula(self, value):
        try:
            return parse_formula(value)
        except FormulaError as error:
            raise serializers.ValidationError(error.message)


class ConditionResultSerializer(serializers.Serializer):
    key = serializers.CharField()
    name = serializers.CharField()
    status = serializers.CharField()
    detail = serializers.CharField(allow_blank=True)


class CheckReportSerializer(serializers.Serializer):
    """
    Serializer de salida del verificador.
    """
    verdict = serializers.CharField()
    reason = serializers.CharField(allow_blank=True)
    degree = serializers.IntegerField(allow_null=True)
    conditions = ConditionResultSerializer(many=True)
    timings = serializers.DictField(child=serializers.FloatField())
