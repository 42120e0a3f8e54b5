import io
import logging

import pytest

from nilknap import NilknapError, error_code
from nilknap import cli

EXAMPLE_INSTANCE = "rank: 2\ng1: x2\ng2: x1\ng: x1^2 x2^3 c1,2^-6\n"


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def example(tmp_path):
    path = tmp_path / "example.kp"
    path.write_text(EXAMPLE_INSTANCE)
    return str(path)


@pytest.fixture
def product_system(tmp_path):
    path = tmp_path / "product.dio"
    path.write_text("vars: x y\neq: x*y = 6\n")
    return str(path)


def test_solve_system(product_system):
    assert run("solve", "--in", product_system, "--bound", "5") == (0, "SAT\nx=-3,y=-2\n")
    code, text = run("solve", "--in", product_system, "--bound", "1")
    assert (code, text) == (0, "UNSAT-in-box\n")


def test_derive_and_solve_instance(example, tmp_path):
    derived = tmp_path / "derived.dio"
    assert run("derive", "--in", example, "--out", str(derived)) == (0, "")
    assert derived.read_text() == (
        "# note: derived from a knapsack instance of rank 2 with 2 inputs\n"
        "vars: e1 e2\neq: e2 = 2\neq: e1 = 3\neq: -e1*e2 = -6\n"
    )
    assert run("solve", "--in", example, "--bound", "5") == (0, "SAT\ne1=3,e2=2\n")
    assert run("solve", "--in", example, "--bound", "5", "--strategy", "direct") == (0, "SAT\ne1=3,e2=2\n")
    assert run("solve", "--in", str(derived), "--bound", "5") == (0, "SAT\ne1=3,e2=2\n")


def test_verify(example):
    code, text = run("verify", "--in", example, "--witness", "3,2")
    assert code == 0
    assert text == "true\nvalue: x1^2 x2^3 c1,2^-6\nresidual: 1\n"
    code, text = run("verify", "--in", example, "--witness", "e1=2,e2=3")
    assert text.splitlines()[:2] == ["false", "value: x1^3 x2^2 c1,2^-6"]
    assert run("verify", "--in", example, "--witness", "1")[0] == 2


def test_reduce_then_solve(product_system, tmp_path):
    compiled = tmp_path / "product.kp"
    code, text = run("reduce", "--in", product_system, "--out", str(compiled))
    assert code == 0
    assert text.startswith("rank 4, 6 inputs, ")
    assert "  x: g1\n  y: g2\n" in text
    assert compiled.read_text().startswith("rank: 4\n")
    code, text = run("solve", "--in", str(compiled), "--bound", "5")
    assert code == 0
    assert text.startswith("SAT\n")
    assert text.endswith("x=-3,y=-2\n")


def test_reduce_options(product_system):
    code, text = run("reduce", "--in", product_system, "--term-mode", "--mode", "packed")
    assert code == 0 and text.startswith("rank: ")
    code, text = run("reduce", "--in", product_system, "--positive")
    assert code == 0 and "map:\n" in text
    assert run("reduce", "--in", product_system, "--positive", "--nonnegative")[0] == 2


def test_embed(example):
    code, text = run("embed", "--in", example)
    assert code == 0
    blocks = text.strip().split("\n\n")
    assert [block.splitlines()[0] for block in blocks] == ["# g1", "# g2", "# g"]
    assert all(len(block.splitlines()) == 6 for block in blocks)


def test_jones(tmp_path):
    path = tmp_path / "toy.dio"
    code, text = run("jones", "--x", "1", "--z", "1", "--y", "1", "--u", "1", "--toy-exponent", "1", "--out", str(path), "--report")
    assert code == 0
    assert "eq: B = 8*G1^2\n" in path.read_text()
    assert "published comparison: informational" in text.splitlines()
    code, text = run("jones", "--x", "1", "--z", "1", "--y", "1", "--u", "1", "--out", str(path), "--report")
    assert code == 0
    assert text.startswith("counts taken on the toy_exponent=1 system\n")
    assert "eq: B = mul(2,pow(2,add(pow(5,59),1)))*G1^2\n" in path.read_text()


def test_heis(example, tmp_path):
    code, text = run("heis", "--in", example, "--bound", "5")
    assert code == 0
    assert text == "residual: 0 = 0\nparametrization:\n  e1 = 3\n  e2 = 2\nSAT\ne1=3,e2=2\n"
    bad = tmp_path / "bad.kp"
    bad.write_text("rank: 2\ng1: x2\ng: x1\n")
    code, text = run("heis", "--in", str(bad), "--bound", "3")
    assert code == 0
    assert text.startswith("residual: 0 = 1\nparametrization:\n  (empty)\nUNSAT\n")
    wide = tmp_path / "wide.kp"
    wide.write_text("rank: 3\ng1: x1\ng: x1\n")
    assert run("heis", "--in", str(wide), "--bound", "3")[0] == 2


def test_exit_codes(example, product_system, tmp_path, monkeypatch):
    assert run("solve", "--in", example, "--bound", "-1")[0] == 2
    assert run("solve", "--in", str(tmp_path / "missing.dio"), "--bound", "1")[0] == 2
    broken = tmp_path / "broken.dio"
    broken.write_text("vars: x\neq: x + = 1\n")
    assert run("solve", "--in", str(broken), "--bound", "1")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("--help")[0] == 0

    def violated(*args, **kwargs):
        raise NilknapError(error_code.INVARIANT_VIOLATION, "witness rejected")

    monkeypatch.setattr(cli, "search_kp", violated)
    assert run("solve", "--in", example, "--bound", "2")[0] == 1


def test_jobs_do_not_change_the_output(product_system, tmp_path):
    compiled = tmp_path / "product.kp"
    run("reduce", "--in", product_system, "--out", str(compiled))
    for path in (product_system, str(compiled)):
        single = run("solve", "--in", path, "--bound", "4", "--jobs", "1")
        many = run("solve", "--in", path, "--bound", "4", "--jobs", "8")
        assert single == many


def test_verbose_attaches_one_handler(product_system):
    root = logging.getLogger("nilknap")
    before = list(root.handlers)
    level = root.level
    try:
        for _ in range(3):
            assert run("--verbose", "solve", "--in", product_system, "--bound", "5")[0] == 0
        added = [h for h in root.handlers if h not in before]
        assert len(added) == 1
    finally:
        root.handlers = before
        root.setLevel(level)
