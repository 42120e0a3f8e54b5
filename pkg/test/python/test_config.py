import pytest

from nilknap import NilknapError, _library_type, alloc_mode, config, error_code, search_status, solve_strategy
from nilknap.constexpr import c_pow, is_materializable


def test_defaults(monkeypatch):
    for name in ("NILKNAP_MAX_BITS", "NILKNAP_MAX_NODES", "NILKNAP_JOBS", "NILKNAP_LOG_INFO", "NILKNAP_LOG_FILE"):
        monkeypatch.delenv(name, raising=False)
    assert config.max_materialize_bits() == 1 << 20
    assert config.max_search_nodes() == 20_000_000
    assert config.default_jobs() == 1
    assert not config.log_enabled()
    assert config.log_destination() is None


bad_values = ["abc", "0", "-3", "1.5"]


@pytest.fixture(params=bad_values)
def bad_extract(request):
    return request.param


def test_rejects_bad_values(monkeypatch, bad_extract):
    monkeypatch.setenv("NILKNAP_JOBS", bad_extract)
    with pytest.raises(NilknapError) as err:
        config.default_jobs()
    assert err.value.code is error_code.INVALID_ARGUMENT


def test_bit_cap_controls_materialization(monkeypatch):
    big = c_pow(5, 59)
    assert is_materializable(big)
    monkeypatch.setenv("NILKNAP_MAX_BITS", "64")
    assert not is_materializable(big)


def test_library_type_conversions():
    assert _library_type(alloc_mode, "packed") is alloc_mode.PACKED
    assert _library_type(alloc_mode, "FRESH") is alloc_mode.FRESH
    assert _library_type(solve_strategy, solve_strategy.DIRECT) is solve_strategy.DIRECT
    assert _library_type(search_status, "unsat-in-box") is search_status.UNSAT_IN_BOX
    with pytest.raises(NilknapError) as err:
        _library_type(alloc_mode, "sparse")
    assert err.value.code is error_code.INVALID_ARGUMENT
    with pytest.raises(NilknapError):
        _library_type(alloc_mode, 3)
