"""Bounded exhaustive oracles for Diophantine systems and knapsack instances,
and the rank-2 (Heisenberg) reduction to a single quadratic equation.

Search visits variables in declared order. A variable occurring linearly, with
a coefficient that does not vanish, in an equation whose other variables come
earlier is solved for instead of enumerated. The first witness met is therefore
the lexicographically least one in the box.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import sympy

from . import config
from .constexpr import value
from .datatypes import _library_type, search_status, solve_strategy
from .errors import NilknapError, error_code
from .group import KPInstance, evaluate_kp, identity, multiply, power
from .lattice import LatticeSolution, solve_integer_linear
from .polynomial import DiophantineSystem, Equation, Polynomial
from .symbolic import eps_names, kp_to_system

logger = logging.getLogger(__name__)

Bound = Tuple[Optional[int], Optional[int]]


@dataclass(frozen=True)
class SearchBox:
    names: Tuple[str, ...]
    bounds: Tuple[Bound, ...]

    def __post_init__(self):
        if len(self.names) != len(self.bounds):
            raise NilknapError(error_code.LENGTH_MISMATCH, "one bound pair per variable is required")
        for name, (lo, hi) in zip(self.names, self.bounds):
            if lo is not None and hi is not None and lo > hi:
                raise NilknapError(error_code.INVALID_ARGUMENT, f"empty range [{lo}, {hi}] for {name}")

    @classmethod
    def symmetric(cls, names: Sequence[str], bound: int):
        return cls(tuple(names), tuple((-bound, bound) for _ in names))

    @classmethod
    def for_instance(cls, instance: KPInstance, bound: int):
        return cls.symmetric(eps_names(instance.k), bound)

    @classmethod
    def induced(cls, instance: KPInstance, bound: int):
        """Bounds the slots named in variable_map; every other slot is left open."""
        mapped = {index for _, index in instance.variable_map}
        bounds = tuple((-bound, bound) if i in mapped else (None, None) for i in range(instance.k))
        return cls(eps_names(instance.k), bounds)

    def bound_of(self, name) -> Bound:
        return self.bounds[self.names.index(name)]


@dataclass(frozen=True)
class Witness:
    assignment: Tuple[Tuple[str, int], ...]

    def as_dict(self) -> Dict[str, int]:
        return dict(self.assignment)

    def values(self) -> Tuple[int, ...]:
        return tuple(v for _, v in self.assignment)

    def format(self):
        return ",".join(f"{name}={v}" for name, v in self.assignment)


@dataclass(frozen=True)
class SearchResult:
    status: search_status
    witness: Optional[Witness] = None
    message: str = ""

    def format(self):
        lines = [self.status.value]
        if self.witness is not None:
            lines.append(self.witness.format())
        if self.message:
            lines.append(self.message)
        return "\n".join(lines)


class _Plan:
    """Integer-coefficient equations indexed by the position of their last variable."""

    def __init__(self, system: DiophantineSystem, box: SearchBox):
        self.names = system.variables
        position = {name: i for i, name in enumerate(self.names)}
        if set(box.names) != set(self.names) or len(box.names) != len(self.names):
            raise NilknapError(
                error_code.LENGTH_MISMATCH, f"box covers {len(box.names)} variables, system has {len(self.names)}"
            )
        self.bounds = [box.bound_of(name) for name in self.names]
        n = len(self.names)
        self.checks: List[List[list]] = [[] for _ in range(n)]
        self.determiners: List[List[Tuple[list, list]]] = [[] for _ in range(n)]
        self.constant_failure = False
        for eq in system.equations:
            terms = []
            for monomial, coef in eq.difference().items():
                coef = value(coef)
                if int(coef) != coef:
                    raise NilknapError(error_code.INVALID_ARGUMENT, f"non-integer coefficient {coef} in {eq.to_text()}")
                terms.append((int(coef), tuple(position[v] for v in monomial)))
            if not any(idx for _, idx in terms):
                if any(c for c, _ in terms):
                    self.constant_failure = True
                continue
            last = max(i for _, idx in terms for i in idx)
            self.checks[last].append(terms)
            if all(idx.count(last) <= 1 for _, idx in terms):
                with_last = [(c, tuple(i for i in idx if i != last)) for c, idx in terms if last in idx]
                without = [(c, idx) for c, idx in terms if last not in idx]
                self.determiners[last].append((with_last, without))

    @staticmethod
    def _eval(terms, values):
        total = 0
        for coef, idx in terms:
            term = coef
            for i in idx:
                term *= values[i]
            total += term
        return total

    def choices(self, i, values, override: Optional[Bound] = None):
        lo, hi = override or self.bounds[i]
        for with_last, without in self.determiners[i]:
            coef = self._eval(with_last, values)
            if coef == 0:
                continue
            rest = -self._eval(without, values)
            if rest % coef != 0:
                return ()
            v = rest // coef
            if (lo is not None and v < lo) or (hi is not None and v > hi):
                return ()
            return (v,)
        if lo is None or hi is None:
            raise NilknapError(
                error_code.UNBOUNDED_VARIABLE, f"variable {self.names[i]} is neither bounded nor determined"
            )
        return range(lo, hi + 1)

    def consistent(self, i, values):
        return all(self._eval(terms, values) == 0 for terms in self.checks[i])

    def solutions(self, first: Optional[Bound] = None, max_nodes: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
        """Lexicographic scan; raises NilknapError(SEARCH_LIMIT) past ``max_nodes``."""
        n = len(self.names)
        if self.constant_failure:
            return
        if n == 0:
            yield ()
            return
        values: List[Optional[int]] = [None] * n
        iterators: List[Optional[Iterator[int]]] = [None] * n
        nodes = 0
        i = 0
        while i >= 0:
            if iterators[i] is None:
                iterators[i] = iter(self.choices(i, values, first if i == 0 else None))
            advanced = False
            for v in iterators[i]:
                nodes += 1
                if max_nodes is not None and nodes > max_nodes:
                    raise NilknapError(error_code.SEARCH_LIMIT, f"search exceeded {max_nodes} nodes")
                values[i] = v
                if self.consistent(i, values):
                    advanced = True
                    break
            if not advanced:
                iterators[i] = None
                values[i] = None
                i -= 1
                continue
            if i == n - 1:
                yield tuple(values)
                continue
            i += 1

    def shards(self) -> List[Optional[Bound]]:
        if not self.names or self.determiners[0] or None in self.bounds[0]:
            return [None]
        lo, hi = self.bounds[0]
        return [(v, v) for v in range(lo, hi + 1)]


def _run_shard(args):
    plan, shard, max_nodes = args
    try:
        for values in plan.solutions(shard, max_nodes):
            return search_status.SAT, values
    except NilknapError as err:
        if err.code is error_code.SEARCH_LIMIT:
            return search_status.UNKNOWN, None
        raise
    return search_status.UNSAT_IN_BOX, None


def search_system(system: DiophantineSystem, box: SearchBox, jobs: int = 1, max_nodes: Optional[int] = None) -> SearchResult:
    plan = _Plan(system, box)
    max_nodes = max_nodes or config.max_search_nodes()
    shards = plan.shards()
    tasks = [(plan, shard, max_nodes) for shard in shards]
    logger.debug("searching %d variables in %d shards with %d jobs", len(plan.names), len(shards), jobs)

    def decide(results):
        for status, values in results:
            if status is search_status.SAT:
                return SearchResult(status, Witness(tuple(zip(plan.names, values))))
            if status is search_status.UNKNOWN:
                return SearchResult(status, message=f"search cap of {max_nodes} nodes reached")
        return SearchResult(search_status.UNSAT_IN_BOX)

    if jobs > 1 and len(tasks) > 1:
        with Pool(min(jobs, len(tasks))) as pool:
            return decide(pool.imap(_run_shard, tasks))
    return decide(_run_shard(task) for task in tasks)


def bounded_solve_system(system: DiophantineSystem, box: SearchBox, jobs: int = 1) -> Optional[Witness]:
    result = search_system(system, box, jobs)
    if result.status is search_status.UNKNOWN:
        raise NilknapError(error_code.SEARCH_LIMIT, result.message)
    return result.witness


def iter_solutions(system: DiophantineSystem, box: SearchBox) -> Iterator[Witness]:
    plan = _Plan(system, box)
    for values in plan.solutions():
        yield Witness(tuple(zip(plan.names, values)))


def _direct_kp(instance: KPInstance, box: SearchBox) -> Optional[Tuple[int, ...]]:
    ranges = []
    for lo, hi in box.bounds:
        if lo is None or hi is None:
            raise NilknapError(error_code.UNBOUNDED_VARIABLE, "direct enumeration needs a bounded box")
        ranges.append(range(lo, hi + 1))
    powers = [{e: power(g, e) for e in r} for g, r in zip(instance.inputs, ranges)]

    def walk(i, prefix):
        if i == instance.k:
            return () if prefix == instance.target else None
        for e in ranges[i]:
            found = walk(i + 1, multiply(prefix, powers[i][e]))
            if found is not None:
                return (e,) + found
        return None

    return walk(0, identity(instance.rank))


def search_kp(instance: KPInstance, box: SearchBox, jobs: int = 1, strategy=solve_strategy.DERIVED) -> SearchResult:
    if len(box.names) != instance.k:
        raise NilknapError(error_code.LENGTH_MISMATCH, f"box has {len(box.names)} entries, instance has {instance.k} inputs")
    strategy = _library_type(solve_strategy, strategy)
    if strategy is solve_strategy.DIRECT:
        found = _direct_kp(instance, box)
        if found is None:
            return SearchResult(search_status.UNSAT_IN_BOX)
        return SearchResult(search_status.SAT, Witness(tuple(zip(box.names, found))))
    result = search_system(kp_to_system(instance), box, jobs)
    if result.witness is not None and not evaluate_kp(instance, result.witness.values())[1]:
        raise NilknapError(
            error_code.INVARIANT_VIOLATION, f"derived witness {result.witness.format()} rejected by evaluate_kp"
        )
    return result


def bounded_solve_kp(instance: KPInstance, box: SearchBox, jobs: int = 1, strategy=solve_strategy.DERIVED) -> Optional[Witness]:
    result = search_kp(instance, box, jobs, strategy)
    if result.status is search_status.UNKNOWN:
        raise NilknapError(error_code.SEARCH_LIMIT, result.message)
    return result.witness


@dataclass(frozen=True)
class AffineMap:
    """e = particular + basis @ t over the fresh parameters t1..td."""

    variables: Tuple[str, ...]
    parameters: Tuple[str, ...]
    lattice: Optional[LatticeSolution]

    def apply(self, t: Sequence[int]) -> Tuple[int, ...]:
        return self.lattice.point(t)

    def parameter_box(self, box: SearchBox) -> List[Tuple[int, int]]:
        """Ranges of t covering every point of ``box`` on the solution lattice."""
        out = []
        for row in self.lattice.coordinates:
            lo = hi = 0
            for w, (a, b) in zip(row, box.bounds):
                lo += min(w * a, w * b)
                hi += max(w * a, w * b)
            out.append((lo, hi))
        return out

    def lines(self):
        if self.lattice is None:
            return ["(empty)"]
        out = []
        for name, p, row in zip(self.variables, self.lattice.particular, self.lattice.basis):
            expr = Polynomial.constant(p)
            for t, coef in zip(self.parameters, row):
                expr = expr + coef * Polynomial.variable(t)
            out.append(f"{name} = {expr.to_text(self.parameters)}")
        return out


@dataclass(frozen=True)
class HeisenbergReduction:
    equation: Equation
    parametrization: AffineMap

    @property
    def consistent(self):
        return self.parametrization.lattice is not None


def heisenberg_reduce(instance: KPInstance) -> HeisenbergReduction:
    if instance.rank != 2:
        raise NilknapError(error_code.RANK_MISMATCH, f"Heisenberg reduction needs rank 2, got {instance.rank}")
    system = kp_to_system(instance)
    names = system.variables
    linear = [eq for eq in system.equations if eq.label.startswith("x")]
    quadratic = [eq for eq in system.equations if eq.label.startswith("c")]
    rows, rhs = [], []
    for eq in linear:
        poly, gamma = eq.normalized()
        rows.append([poly.coefficient((name,)) for name in names])
        rhs.append(gamma)
    A = sympy.Matrix(len(rows), len(names), [int(x) for row in rows for x in row])
    lattice = solve_integer_linear(A, rhs)
    if lattice is None:
        unsat = Equation(Polynomial(), Polynomial.constant(1), label="inconsistent")
        return HeisenbergReduction(unsat, AffineMap(names, (), None))
    params = tuple(f"t{i}" for i in range(1, lattice.dimension + 1))
    substitution = {}
    for name, p, row in zip(names, lattice.particular, lattice.basis):
        expr = Polynomial.constant(p)
        for t, coef in zip(params, row):
            expr = expr + coef * Polynomial.variable(t)
        substitution[name] = expr
    residual = Polynomial()
    for eq in quadratic:
        residual = residual + eq.difference().substitute(substitution)
    gamma = -residual.constant_term
    equation = Equation(residual.without_constant(), Polynomial.constant(gamma), label="residual")
    logger.info("rank 2 instance reduced to one equation in %d parameters", len(params))
    return HeisenbergReduction(equation, AffineMap(names, params, lattice))


def search_heisenberg(instance: KPInstance, bound: int) -> Tuple[HeisenbergReduction, SearchResult]:
    reduction = heisenberg_reduce(instance)
    if not reduction.consistent:
        return reduction, SearchResult(search_status.UNSAT, message="linear subsystem has no integer solution")
    residual = reduction.equation.difference()
    if residual.is_constant() and not residual.is_zero():
        return reduction, SearchResult(search_status.UNSAT, message="residual equation is a false constant")
    box = SearchBox.for_instance(instance, bound)
    amap = reduction.parametrization
    params = amap.parameters
    best = None
    for t in itertools.product(*(range(lo, hi + 1) for lo, hi in amap.parameter_box(box))):
        eps = amap.apply(t)
        if any(not (lo <= e <= hi) for e, (lo, hi) in zip(eps, box.bounds)):
            continue
        if residual.evaluate(dict(zip(params, t))) != 0:
            continue
        if best is None or eps < best:
            best = eps
    if best is None:
        return reduction, SearchResult(search_status.UNKNOWN, message=f"no witness with |e| <= {bound}")
    return reduction, SearchResult(search_status.SAT, Witness(tuple(zip(box.names, best))))
