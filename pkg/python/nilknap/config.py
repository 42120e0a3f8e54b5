import os

from .errors import NilknapError, error_code


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise NilknapError(error_code.INVALID_ARGUMENT, f"{name} must be an integer, got {raw!r}")
    if value <= 0:
        raise NilknapError(error_code.INVALID_ARGUMENT, f"{name} must be positive, got {value}")
    return value


def max_materialize_bits():
    return _env_int("NILKNAP_MAX_BITS", 1 << 20)


def max_search_nodes():
    return _env_int("NILKNAP_MAX_NODES", 20_000_000)


def default_jobs():
    return _env_int("NILKNAP_JOBS", 1)


def log_enabled():
    return os.environ.get("NILKNAP_LOG_INFO", "0") == "1"


def log_destination():
    return os.environ.get("NILKNAP_LOG_FILE")
