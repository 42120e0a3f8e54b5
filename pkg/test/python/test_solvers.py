import itertools
import random

import pytest

from nilknap import (
    KPInstance,
    NilknapError,
    NormalForm,
    SearchBox,
    error_code,
    search_status,
)
from nilknap.formats import parse_system
from nilknap.group import evaluate_kp, generator, identity
from nilknap.solvers import (
    bounded_solve_kp,
    bounded_solve_system,
    heisenberg_reduce,
    iter_solutions,
    search_heisenberg,
    search_kp,
    search_system,
)
from nilknap.symbolic import kp_to_system

from test_utils import fork_set_rng, random_instance


def heisenberg_example():
    return KPInstance(2, (generator(2, 2), generator(1, 2)), NormalForm(2, (2, 3), {(1, 2): -6}))


def signed(c, body):
    return f"+ {c}*{body}" if c >= 0 else f"- {-c}*{body}"


def least_witness_ref(system, bound):
    """Plain lexicographic scan of the whole box."""
    for point in itertools.product(range(-bound, bound + 1), repeat=len(system.variables)):
        if system.satisfied_by(dict(zip(system.variables, point))):
            return point
    return None


def test_product_equation_witness():
    system = parse_system("vars: x y\neq: x*y = 6\n")
    witness = bounded_solve_system(system, SearchBox.symmetric(system.variables, 5))
    assert witness.format() == "x=-3,y=-2"
    assert witness.as_dict() == {"x": -3, "y": -2}


def test_trivial_systems():
    false = parse_system("vars: x\neq: 0 = 1\n")
    assert bounded_solve_system(false, SearchBox.symmetric(false.variables, 3)) is None
    true = parse_system("vars: x\neq: x = x\n")
    assert bounded_solve_system(true, SearchBox.symmetric(true.variables, 3)).as_dict() == {"x": -3}
    empty = parse_system("vars:\n")
    result = search_system(empty, SearchBox.symmetric((), 3))
    assert result.status is search_status.SAT
    assert result.witness.format() == ""


def test_search_status_formatting():
    system = parse_system("vars: x\neq: x^2 = 2\n")
    result = search_system(system, SearchBox.symmetric(system.variables, 4))
    assert result.status is search_status.UNSAT_IN_BOX
    assert result.format() == "UNSAT-in-box"


def test_search_box_validation():
    with pytest.raises(NilknapError) as err:
        SearchBox(("x",), ((2, 1),))
    assert err.value.code is error_code.INVALID_ARGUMENT
    with pytest.raises(NilknapError) as err:
        SearchBox(("x", "y"), ((0, 1),))
    assert err.value.code is error_code.LENGTH_MISMATCH
    system = parse_system("vars: x y\neq: x*y = 6\n")
    with pytest.raises(NilknapError) as err:
        search_system(system, SearchBox.symmetric(("x",), 2))
    assert err.value.code is error_code.LENGTH_MISMATCH


def test_unbounded_variables_need_a_determiner():
    system = parse_system("vars: x y\neq: y = 2*x + 1\n")
    box = SearchBox(("x", "y"), ((-2, 2), (None, None)))
    assert bounded_solve_system(system, box).as_dict() == {"x": -2, "y": -3}
    square = parse_system("vars: x y\neq: y^2 = x\n")
    with pytest.raises(NilknapError) as err:
        bounded_solve_system(square, SearchBox(("x", "y"), ((0, 4), (None, None))))
    assert err.value.code is error_code.UNBOUNDED_VARIABLE


def test_search_limit_reports_unknown(monkeypatch):
    system = parse_system("vars: x y z\neq: x^2 + y^2 + z^2 = 1000\n")
    result = search_system(system, SearchBox.symmetric(system.variables, 3), max_nodes=20)
    assert result.status is search_status.UNKNOWN
    monkeypatch.setenv("NILKNAP_MAX_NODES", "20")
    with pytest.raises(NilknapError) as err:
        bounded_solve_system(system, SearchBox.symmetric(system.variables, 3))
    assert err.value.code is error_code.SEARCH_LIMIT


@fork_set_rng(seed=0)
def test_pruned_search_matches_plain_scan():
    for _ in range(30):
        names = ("x", "y", "z")[: random.randint(1, 3)]
        lines = [f"vars: {' '.join(names)}"]
        for _ in range(random.randint(1, 2)):
            monomials = [f"{random.choice(names)}*{random.choice(names)}" for _ in range(2)] + [names[-1]]
            terms = " ".join(signed(random.randint(-3, 3), m) for m in monomials)
            lines.append(f"eq: 0 {terms} = {random.randint(-4, 4)}")
        system = parse_system("\n".join(lines))
        witness = bounded_solve_system(system, SearchBox.symmetric(names, 3))
        expected = least_witness_ref(system, 3)
        assert (witness.values() if witness else None) == expected, lines
        all_witnesses = [w.values() for w in iter_solutions(system, SearchBox.symmetric(names, 3))]
        scan = [
            p
            for p in itertools.product(range(-3, 4), repeat=len(names))
            if system.satisfied_by(dict(zip(names, p)))
        ]
        assert all_witnesses == scan


def test_kp_example():
    instance = heisenberg_example()
    box = SearchBox.for_instance(instance, 5)
    assert bounded_solve_kp(instance, box).values() == (3, 2)
    assert bounded_solve_kp(instance, box, strategy="direct").values() == (3, 2)


def test_kp_trivial_cases():
    instance = KPInstance(2, (generator(1, 2), generator(2, 2)), identity(2))
    assert bounded_solve_kp(instance, SearchBox.for_instance(instance, 3)).values() == (0, 0)
    unreachable = KPInstance(2, (generator(1, 2),), generator(2, 2))
    assert bounded_solve_kp(unreachable, SearchBox.for_instance(unreachable, 3)) is None
    with pytest.raises(NilknapError) as err:
        bounded_solve_kp(unreachable, SearchBox.symmetric(("e1", "e2"), 3))
    assert err.value.code is error_code.LENGTH_MISMATCH


@fork_set_rng(seed=1)
def test_oracle_agreement(samples):
    for _ in range(samples or 60):
        instance = random_instance(random.randint(1, 4), random.randint(1, 4), target_from_witness=random.random() < 0.7)
        box = SearchBox.for_instance(instance, 3 if instance.k < 4 else 2)
        derived = bounded_solve_kp(instance, box)
        direct = bounded_solve_kp(instance, box, strategy="direct")
        plain = bounded_solve_system(kp_to_system(instance), box)
        assert derived == direct == plain
        if derived is not None:
            assert evaluate_kp(instance, derived.values())[1]


@fork_set_rng(seed=2)
def test_parallel_search_is_deterministic():
    for _ in range(5):
        instance = random_instance(3, 3)
        box = SearchBox.for_instance(instance, 3)
        sequential = search_kp(instance, box, jobs=1)
        parallel = search_kp(instance, box, jobs=4)
        assert sequential == parallel
        assert sequential.format() == parallel.format()


def test_heisenberg_example():
    reduction, result = search_heisenberg(heisenberg_example(), 5)
    assert reduction.consistent
    assert reduction.parametrization.parameters == ()
    assert reduction.parametrization.apply(()) == (3, 2)
    assert reduction.equation.difference().is_zero()
    assert result.status is search_status.SAT
    assert result.witness.values() == (3, 2)


def test_heisenberg_inconsistent_linear_part():
    instance = KPInstance(2, (generator(2, 2),), generator(1, 2))
    reduction, result = search_heisenberg(instance, 3)
    assert not reduction.consistent
    assert reduction.equation.to_text() == "0 = 1"
    assert reduction.parametrization.lines() == ["(empty)"]
    assert result.status is search_status.UNSAT


def test_heisenberg_free_parameter():
    instance = KPInstance(2, (generator(1, 2), generator(1, 2, -1)), identity(2))
    reduction = heisenberg_reduce(instance)
    assert len(reduction.parametrization.parameters) == 1
    assert reduction.equation.difference().is_zero()
    for t in range(-3, 4):
        e1, e2 = reduction.parametrization.apply((t,))
        assert e1 == e2
    _, result = search_heisenberg(instance, 2)
    assert result.witness.values() == (-2, -2)


def test_heisenberg_requires_rank_two():
    with pytest.raises(NilknapError) as err:
        heisenberg_reduce(KPInstance(3, (generator(1, 3),), identity(3)))
    assert err.value.code is error_code.RANK_MISMATCH


@fork_set_rng(seed=3)
def test_heisenberg_agreement(samples):
    for _ in range(samples or 50):
        instance = random_instance(2, random.randint(1, 4), target_from_witness=random.random() < 0.7)
        system = kp_to_system(instance)
        linear = [eq for eq in system.equations if eq.label.startswith("x")]
        quadratic = [eq for eq in system.equations if eq.label.startswith("c")]
        assert len(linear) <= 2 and len(quadratic) <= 1
        bound = 2
        reduction, result = search_heisenberg(instance, bound)
        direct = bounded_solve_kp(instance, SearchBox.for_instance(instance, bound), strategy="direct")
        if direct is None:
            assert result.status in (search_status.UNSAT, search_status.UNKNOWN)
            continue
        assert result.status is search_status.SAT
        assert result.witness.values() == direct.values()
        params = reduction.parametrization.lattice.parameters_of(direct.values())
        assert reduction.parametrization.apply(params) == direct.values()
