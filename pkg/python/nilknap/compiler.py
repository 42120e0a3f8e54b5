"""Diophantine systems to knapsack instances over free class-2 nilpotent groups.

Two constructions are provided. ``compile_quadratic`` realizes every equation
sum a_i x_i + sum b_ij x_i x_j = gamma inside one commutator [a, b]: linear
summands sit on per-variable carrier inputs, every quadratic summand is the
four-input block a^-b c1, b^-1 c2, a^b c1^-1, b c2^-1 whose product is
[a, b]^(b e e'). ``compile_terms`` follows the computation tree of every term
with constant, sum and product gadgets.

Tie commutators force two exponents to agree. They are only taken from basic
commutators involving a generator that never occurs as a non-central letter,
so their exponent in any product is exactly linear in the witness.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Deque, Dict, List, Optional, Sequence, Tuple

from .constexpr import is_symbolic, value
from .datatypes import _library_type, alloc_mode, commutator_role, encode_mode
from .errors import NilknapError, error_code
from .group import KPInstance, NormalForm, Pair
from .polynomial import (
    Const,
    DiophantineSystem,
    Equation,
    Polynomial,
    Prod,
    Sum,
    Term,
    Var,
    fresh_names,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Allocation:
    role: commutator_role
    pair: Pair
    owner: str


class CommutatorPool:
    """Hands out generators and basic commutators, never the same commutator twice.

    Generators are typed when created: gadget generators appear with non-zero
    exponent in some input, tie generators only ever appear inside commutators.
    """

    def __init__(self, mode=alloc_mode.FRESH):
        self.mode = _library_type(alloc_mode, mode)
        self.rank = 0
        self.log: List[Allocation] = []
        self._gadget_generators: List[int] = []
        self._tie_generators: List[int] = []
        self._used = set()
        self._central: Deque[Pair] = deque()

    def _new_generator(self, gadget):
        self.rank += 1
        g = self.rank
        if gadget:
            self._gadget_generators.append(g)
            self._central.extend((t, g) for t in self._tie_generators)
        else:
            self._tie_generators.append(g)
            self._central.extend((p, g) for p in range(1, g))
        return g

    def _record(self, role, pair, owner):
        if pair in self._used:
            raise NilknapError(error_code.INVARIANT_VIOLATION, f"commutator {pair} allocated twice")
        self._used.add(pair)
        self.log.append(Allocation(role, pair, owner))
        logger.debug("allocated [x%d, x%d] as %s for %s", pair[0], pair[1], role.value, owner)
        return pair

    def gadget_pair(self, role, owner) -> Pair:
        """A pair (a, b), a < b, of gadget generators whose commutator is unused."""
        if self.mode is alloc_mode.FRESH:
            a = self._new_generator(gadget=True)
            b = self._new_generator(gadget=True)
            return self._record(role, (a, b), owner)
        while True:
            gens = self._gadget_generators
            for q in range(1, len(gens)):
                for p in range(q):
                    pair = (gens[p], gens[q])
                    if pair not in self._used:
                        return self._record(role, pair, owner)
            self._new_generator(gadget=True)

    def central(self, role, owner) -> Pair:
        """An unused basic commutator with at least one tie generator."""
        while True:
            while self._central:
                pair = self._central.popleft()
                if pair not in self._used:
                    return self._record(role, pair, owner)
            self._new_generator(gadget=False)

    def count(self, role) -> int:
        return sum(1 for entry in self.log if entry.role is role)


class InstanceBuilder:
    """Collects knapsack inputs while the pool grows, then freezes them.

    Inputs are kept as (generator exponents, central exponents) dictionaries
    because the final rank is only known once every gadget has been placed.
    """

    def __init__(self, pool: CommutatorPool):
        self.pool = pool
        self._alpha: List[Dict[int, int]] = []
        self._beta: List[Dict[Pair, int]] = []
        self._target: Dict[Pair, int] = {}
        self._carriers: Dict[str, int] = {}

    def input(self, alpha=None, beta=None) -> int:
        self._alpha.append(dict(alpha or {}))
        self._beta.append({})
        slot = len(self._alpha) - 1
        for pair, exponent in (beta or {}).items():
            self.attach(slot, pair, exponent)
        return slot

    def attach(self, slot, pair, exponent):
        beta = self._beta[slot]
        beta[pair] = beta.get(pair, 0) + exponent

    def carrier(self, variable) -> int:
        if variable in self._carriers:
            raise NilknapError(error_code.INVALID_ARGUMENT, f"variable {variable} declared twice")
        self._carriers[variable] = self.input()
        return self._carriers[variable]

    def tie(self, variable, slot, owner):
        """Forces the exponent at ``slot`` to equal the carrier exponent of ``variable``."""
        pair = self.pool.central(commutator_role.TIE, owner)
        self.attach(self._carriers[variable], pair, 1)
        self.attach(slot, pair, -1)

    def link(self, first, second, owner):
        """Forces the exponents at two gadget slots to agree."""
        pair = self.pool.central(commutator_role.LINK, owner)
        self.attach(first, pair, 1)
        self.attach(second, pair, -1)

    def set_target(self, pair, exponent):
        self._target[pair] = self._target.get(pair, 0) + exponent

    def validate(self):
        used = [entry.pair for entry in self.pool.log]
        if len(used) != len(set(used)):
            raise NilknapError(error_code.INVARIANT_VIOLATION, "a basic commutator was allocated twice")
        for alpha in self._alpha:
            if len(alpha) > 1:
                raise NilknapError(error_code.INVARIANT_VIOLATION, "a gadget input carries two generator letters")

    def build(self) -> KPInstance:
        self.validate()
        rank = max(self.pool.rank, 1)

        def element(alpha, beta):
            vector = [0] * rank
            for g, e in alpha.items():
                vector[g - 1] += e
            return NormalForm(rank, tuple(vector), beta)

        inputs = tuple(element(a, b) for a, b in zip(self._alpha, self._beta))
        target = element({}, self._target)
        instance = KPInstance(
            rank,
            inputs,
            target,
            tuple(self._carriers.items()),
            allocations=tuple(self.pool.log),
        )
        logger.info(
            "built instance: rank %d, %d inputs, %d basic commutators", rank, len(inputs), len(self.pool.log)
        )
        return instance


def _integer(c, what):
    if is_symbolic(c):
        c = value(c)
    if int(c) != c:
        raise NilknapError(error_code.INVALID_ARGUMENT, f"{what} {c} is not an integer")
    return int(c)


def degree_reduce(system: DiophantineSystem) -> DiophantineSystem:
    """Rewrites every monomial of degree > 2 with auxiliary products w = u*v."""
    if system.degree() <= 2:
        return system
    names = fresh_names(system.variables, "w")
    aux_of: Dict[Tuple[str, str], str] = {}
    variables = list(system.variables)
    equations: List[Equation] = []
    pending: List[Equation] = []

    def aux(u, v):
        key = tuple(sorted((u, v)))
        if key not in aux_of:
            name = next(names)
            aux_of[key] = name
            variables.append(name)
            pending.append(
                Equation(Polynomial.variable(name), Polynomial.variable(key[0]) * Polynomial.variable(key[1]))
            )
        return aux_of[key]

    def lower(poly):
        terms = []
        for monomial, coef in poly.items():
            factors = list(monomial)
            while len(factors) > 2:
                paired = [aux(factors[i], factors[i + 1]) for i in range(0, len(factors) - 1, 2)]
                if len(factors) % 2:
                    paired.append(factors[-1])
                factors = paired
            terms.append((tuple(factors), coef))
        return Polynomial(terms)

    for eq in system.equations:
        lhs, rhs = lower(eq.lhs), lower(eq.rhs)
        equations.extend(pending)
        pending.clear()
        equations.append(Equation(lhs, rhs, label=eq.label))
    logger.info("degree reduction introduced %d auxiliary variables", len(aux_of))
    return DiophantineSystem(
        tuple(variables), equations, system.notes + (f"degree reduced with {len(aux_of)} auxiliary variables",)
    )


def nonneg_encode(system: DiophantineSystem, mode) -> DiophantineSystem:
    """Adds v = [1 +] a^2 + b^2 + c^2 + d^2 for every variable v (Lagrange four squares)."""
    mode = _library_type(encode_mode, mode)
    offset = 1 if mode is encode_mode.POSITIVE else 0
    taken = set(system.variables)
    variables = list(system.variables)
    equations = list(system.equations)
    for v in system.variables:
        squares = []
        for name in fresh_names(taken, f"{v}_s"):
            squares.append(name)
            taken.add(name)
            if len(squares) == 4:
                break
        variables.extend(squares)
        rhs = Polynomial.constant(offset)
        for name in squares:
            rhs = rhs + Polynomial.variable(name) ** 2
        equations.append(Equation(Polynomial.variable(v), rhs, label=f"{mode.value} {v}"))
    return DiophantineSystem(tuple(variables), equations, system.notes + (f"{mode.value} encoding",))


def compile_quadratic(system: DiophantineSystem, pool: Optional[CommutatorPool] = None) -> KPInstance:
    if system.degree() > 2:
        raise NilknapError(
            error_code.DEGREE_TOO_HIGH, f"system has degree {system.degree()}; run degree_reduce first"
        )
    pool = pool or CommutatorPool()
    builder = InstanceBuilder(pool)
    carriers = {v: builder.carrier(v) for v in system.variables}
    for s, eq in enumerate(system.equations, start=1):
        owner = f"eq{s}"
        poly, gamma = eq.normalized()
        gamma = _integer(gamma, "right-hand side")
        if poly.is_zero() and gamma == 0:
            continue
        a, b = pool.gadget_pair(commutator_role.EQUATION, owner)
        builder.set_target((a, b), gamma)
        for monomial, coef in poly.sorted_terms(system.variables):
            coef = _integer(coef, "coefficient")
            if len(monomial) == 1:
                builder.attach(carriers[monomial[0]], (a, b), coef)
                continue
            u, w = monomial
            g1 = builder.input(alpha={a: -coef})
            g2 = builder.input(alpha={b: -1})
            g3 = builder.input(alpha={a: coef})
            g4 = builder.input(alpha={b: 1})
            builder.link(g1, g3, owner)
            builder.link(g2, g4, owner)
            builder.tie(u, g1, owner)
            builder.tie(w, g2, owner)
    return builder.build()


@dataclass(frozen=True)
class TermEquation:
    lhs: Term
    rhs: object  # Term or integer constant


class _TermCompiler:
    def __init__(self, builder: InstanceBuilder):
        self.builder = builder
        self.pool = builder.pool
        self._gadgets = 0

    def _owner(self, kind):
        self._gadgets += 1
        return f"{kind}{self._gadgets}"

    def realize(self, term: Term) -> Pair:
        """Places inputs so the product holds c^t for the returned central c, t the value of ``term``."""
        builder = self.builder
        if isinstance(term, Var):
            owner = self._owner("var")
            c = self.pool.central(commutator_role.TERM, owner)
            slot = builder.input(beta={c: 1})
            builder.tie(term.name, slot, owner)
            return c
        if isinstance(term, Const):
            owner = self._owner("const")
            c = self.pool.central(commutator_role.TERM, owner)
            pin = self.pool.central(commutator_role.TERM, owner)
            builder.input(beta={c: 1, pin: 1})
            builder.set_target(pin, _integer(term.value, "constant"))
            return c
        if isinstance(term, Sum):
            left, right = self.realize(term.left), self.realize(term.right)
            owner = self._owner("sum")
            c = self.pool.central(commutator_role.TERM, owner)
            builder.input(beta={left: -1, c: 1})
            builder.input(beta={right: -1, c: 1})
            return c
        if isinstance(term, Prod):
            left, right = self.realize(term.left), self.realize(term.right)
            owner = self._owner("prod")
            x, y = self.pool.gadget_pair(commutator_role.PRODUCT, owner)
            g1 = builder.input(alpha={x: -1}, beta={left: -1})
            g2 = builder.input(alpha={y: -1}, beta={right: -1})
            g3 = builder.input(alpha={x: 1})
            g4 = builder.input(alpha={y: 1})
            builder.link(g1, g3, owner)
            builder.link(g2, g4, owner)
            return (x, y)
        raise NilknapError(error_code.INVALID_ARGUMENT, f"not a term: {term!r}")

    def equation(self, eq: TermEquation):
        left = self.realize(eq.lhs)
        owner = self._owner("eq")
        c = self.pool.central(commutator_role.TERM, owner)
        self.builder.input(beta={left: -1, c: 1})
        if isinstance(eq.rhs, Term):
            right = self.realize(eq.rhs)
            self.builder.input(beta={right: -1, c: -1})
        else:
            self.builder.set_target(c, _integer(eq.rhs, "right-hand side"))


def compile_terms(
    equations: Sequence[TermEquation],
    pool: Optional[CommutatorPool] = None,
    variables: Optional[Sequence[str]] = None,
) -> KPInstance:
    if variables is None:
        seen = {}
        for eq in equations:
            for side in (eq.lhs, eq.rhs):
                if isinstance(side, Term):
                    seen.update(dict.fromkeys(side.variables()))
        variables = tuple(seen)
    builder = InstanceBuilder(pool or CommutatorPool())
    for v in variables:
        builder.carrier(v)
    compiler = _TermCompiler(builder)
    for eq in equations:
        compiler.equation(eq)
    return builder.build()


def system_term_equations(system: DiophantineSystem) -> List[TermEquation]:
    """Term form of every equation, reusing parsed trees when available."""
    out = []
    for eq in system.equations:
        lhs, rhs = eq.term_pair(system.variables)
        if isinstance(rhs, Const) and not is_symbolic(rhs.value):
            out.append(TermEquation(lhs, rhs.value))
        else:
            out.append(TermEquation(lhs, rhs))
    return out
