"""
Formato de archivo de certificados (JSON, flotantes en hexadecimal).

    {
      "version": "ntacert/1",
      "formula_digest": "...",
      "sigma": [1, 1, 0, 0],
      "nu": {"z": "0x1.999999999999ap-3"},
      "beta": [{"x": ["-0x1.999999999999ap-4", "0x1.999999999999ap-5"], ...}]
    }
"""
import json
from pathlib import Path
from typing import Any, Dict, Union

from apps.intervalos.boxes import NamedBox
from apps.intervalos.interval import Interval

from .certificate import FORMAT_VERSION, Certificate
from .exceptions import CertificateFormatError


def to_document(cert: Certificate) -> Dict[str, Any]:
    return {
        'version': FORMAT_VERSION,
        'formula_digest': cert.formula_digest,
        'sigma': list(cert.sigma),
        'nu': {name: float.hex(value) for name, value in cert.nu},
        'beta': [
            {name: list(interval.to_hex()) for name, interval in box.items}
            for box in cert.beta
        ],
    }


def _float(text: Any, field: str) -> float:
    if not isinstance(text, str):
        raise CertificateFormatError('se esperaba un flotante hexadecimal', field)
    try:
        return float.fromhex(text)
    except ValueError:
        raise CertificateFormatError(f'flotante invalido {text!r}', field) from None


def _box(raw: Any, index: int) -> NamedBox:
    field = f'beta[{index}]'
    if not isinstance(raw, dict):
        raise CertificateFormatError('se esperaba un objeto {variable: [lo, hi]}', field)
    items = []
    for name, bounds in raw.items():
        if not isinstance(bounds, list) or len(bounds) != 2:
            raise CertificateFormatError('cada intervalo es un par [lo, hi]', f'{field}.{name}')
        lo = _float(bounds[0], f'{field}.{name}')
        hi = _float(bounds[1], f'{field}.{name}')
        try:
            items.append((name, Interval(lo, hi)))
        except ValueError as error:
            raise CertificateFormatError(str(error), f'{field}.{name}') from None
    return NamedBox(tuple(items))


def from_document(document: Any) -> Certificate:
    if not isinstance(document, dict):
        raise CertificateFormatError('El certificado debe ser un objeto JSON')
    version = document.get('version')
    if version != FORMAT_VERSION:
        raise CertificateFormatError(f'Version {version!r} no soportada (se espera {FORMAT_VERSION})', 'version')
    digest = document.get('formula_digest')
    if not isinstance(digest, str) or not digest:
        raise CertificateFormatError('falta el digest de la formula', 'formula_digest')

    sigma = document.get('sigma')
    if not isinstance(sigma, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in sigma):
        raise CertificateFormatError('se esperaba una lista de enteros', 'sigma')

    nu = document.get('nu', {})
    if not isinstance(nu, dict):
        raise CertificateFormatError('se esperaba un objeto {variable: valor}', 'nu')
    assignment = {name: _float(value, f'nu.{name}') for name, value in nu.items()}

    beta = document.get('beta')
    if not isinstance(beta, list) or not beta:
        raise CertificateFormatError('beta debe ser una lista no vacia de cajas', 'beta')
    boxes = [_box(raw, index) for index, raw in enumerate(beta)]
    return Certificate.build(sigma, assignment, boxes, digest)


def serialize(cert: Certificate) -> str:
    return json.dumps(to_document(cert), indent=2) + '\n'


def deserialize(text: str) -> Certificate:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as error:
        raise CertificateFormatError(f'JSON invalido: {error.msg} (linea {error.lineno})') from None
    return from_document(document)


def write_certificate(cert: Certificate, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(serialize(cert), encoding='utf-8')
    return path


def read_certificate(path: Union[str, Path]) -> Certificate:
    return deserialize(Path(path).read_text(encoding='utf-8'))
