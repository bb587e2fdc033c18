class FormulaError(Exception):
    """Error base para lectura y manipulacion de formulas."""

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


class FormulaSyntaxError(FormulaError):
    """Error de sintaxis con posicion (offset, linea, columna)."""

    def __init__(self, message: str, position: int = None, line: int = None, column: int = None):
        self.position = position
        self.line = line
        self.column = column
        if line is not None:
            message = f'{message} (linea {line}, columna {column})'
        super().__init__(message)


class UnsupportedConstructError(FormulaError):
    """Construccion valida en SMT-LIB pero fuera del subconjunto aceptado."""

    def __init__(self, construct: str, position: int = None):
        self.construct = construct
        self.position = position
        super().__init__(f'Construccion no soportada: {construct}')


class CnfSizeError(FormulaError):
    """La conversion a CNF supera el tope de clausulas."""

    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f'La conversion a CNF genera {size} clausulas (tope {cap})')


class SelectorError(FormulaError):
    """El selector de literales no es total o apunta fuera de rango."""
