class CertificateFormatError(Exception):
    """Documento de certificado mal formado o de version desconocida."""

    def __init__(self, message: str, field: str = None):
        self.field = field
        self.message = message if field is None else f'{field}: {message}'
        super().__init__(self.message)
