class MixedDomainError(Exception):
    """Cajas de un mismo conjunto con dominios de variables distintos."""

    def __init__(self, expected, found):
        self.expected = tuple(expected)
        self.found = tuple(found)
        self.message = f'Dominios de cajas distintos: {list(self.expected)} y {list(self.found)}'
        super().__init__(self.message)
