import enum

from .errors import NilknapError, error_code


class alloc_mode(enum.Enum):
    FRESH = "fresh"
    PACKED = "packed"


class encode_mode(enum.Enum):
    POSITIVE = "positive"
    NONNEGATIVE = "nonnegative"


class search_status(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNSAT_IN_BOX = "UNSAT-in-box"
    UNKNOWN = "UNKNOWN"


class commutator_role(enum.Enum):
    EQUATION = "equation"
    PRODUCT = "product"
    TIE = "tie"
    LINK = "link"
    TERM = "term"


class solve_strategy(enum.Enum):
    DERIVED = "derived"
    DIRECT = "direct"


def _from_string(enum_type, text):
    key = text.strip().lower().replace("-", "_")
    for member in enum_type:
        if member.name.lower() == key or str(member.value).lower().replace("-", "_") == key:
            return member
    return None


def _library_type(enum_type, input_type):
    """Converts an enum member or its name/value string into `enum_type`."""
    if type(input_type) is enum_type:
        return input_type

    for cvt_fn in [
        _from_string,
    ]:
        out = cvt_fn(enum_type, input_type) if isinstance(input_type, str) else None
        if out is not None:
            return out

    raise NilknapError(
        error_code.INVALID_ARGUMENT,
        f"No available conversion from {input_type!r} to {enum_type.__name__}.",
    )
