import enum


class error_code(enum.Enum):
    INVALID_ARGUMENT = 1
    RANK_MISMATCH = 2
    LENGTH_MISMATCH = 3
    INDEX_OUT_OF_RANGE = 4
    DEGREE_TOO_HIGH = 5
    NOT_MATERIALIZABLE = 6
    DECODE_ERROR = 7
    PARSE_ERROR = 8
    UNBOUNDED_VARIABLE = 9
    SEARCH_LIMIT = 10
    INVARIANT_VIOLATION = 11


class NilknapError(Exception):
    """Error raised by every nilknap operation.

    Args:
        code (error_code): Machine readable category.
        message (str): Human readable description.
    """

    def __init__(self, code, message):
        super().__init__(f"[{code.name}] {message}")
        self.code = code
        self.message = message


class ParseError(NilknapError):
    def __init__(self, message, line, column):
        super().__init__(error_code.PARSE_ERROR, f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
