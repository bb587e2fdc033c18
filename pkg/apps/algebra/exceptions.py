class NonFiniteMatrixError(Exception):
    """Matriz con entradas infinitas o NaN donde se necesita una finita."""

    def __init__(self, shape):
        self.shape = tuple(shape)
        self.message = f'La matriz {self.shape[0]}x{self.shape[1]} tiene entradas no finitas'
        super().__init__(self.message)
