from __future__ import annotations

import numbers
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import sympy

from .constexpr import (
    c_neg,
    from_symbols,
    is_constant_symbol,
    is_symbolic,
    to_symbols,
    to_text,
    value,
)
from .errors import NilknapError, error_code

Monomial = Tuple[str, ...]


def _monomial_expr(monomial):
    return sympy.Mul(*[sympy.Symbol(name) for name in monomial])


class Polynomial:
    """Multivariate polynomial with exact coefficients, held as an expanded sympy expression.

    Monomials are sorted tuples of variable names (repetition is the power),
    the empty tuple is the constant monomial. Coefficients are sympy numbers or
    unevaluated constants from ``constexpr``; zero coefficients are never stored.
    """

    __slots__ = ("expr", "_raw", "_items")
    max_degree: Optional[int] = None

    def __init__(self, terms=None):
        if isinstance(terms, Polynomial):
            expr = terms.expr
        else:
            items = terms.items() if isinstance(terms, Mapping) else (terms or ())
            expr = sympy.Add(*[to_symbols(coef) * _monomial_expr(monomial) for monomial, coef in items])
        self._set(expr)
        if self.max_degree is not None and self.degree() > self.max_degree:
            raise NilknapError(
                error_code.DEGREE_TOO_HIGH,
                f"{type(self).__name__} admits degree <= {self.max_degree}, got {self.degree()}",
            )

    def _set(self, expr):
        self.expr = sympy.expand(expr)
        self._raw = None
        self._items = None

    @classmethod
    def _from_expr(cls, expr):
        poly = Polynomial.__new__(Polynomial)
        poly._set(expr)
        return poly

    @classmethod
    def variable(cls, name):
        return cls({(name,): 1})

    @classmethod
    def constant(cls, c):
        return cls({(): c})

    @staticmethod
    def _coerce(other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (numbers.Rational, sympy.Basic)):
            return Polynomial.constant(other)
        return NotImplemented

    @property
    def raw_terms(self) -> Dict[Monomial, sympy.Expr]:
        """Coefficients as sympy expressions over constant symbols, read through ``sympy.Poly``."""
        if self._raw is None:
            names = sorted(s.name for s in self.expr.free_symbols if not is_constant_symbol(s))
            if not names:
                self._raw = {(): self.expr} if self.expr != 0 else {}
            else:
                poly = sympy.Poly(self.expr, *[sympy.Symbol(name) for name in names])
                self._raw = {
                    tuple(name for name, k in zip(names, exponents) for _ in range(k)): coef
                    for exponents, coef in poly.terms()
                    if coef != 0
                }
        return self._raw

    def items(self):
        if self._items is None:
            self._items = {monomial: from_symbols(coef) for monomial, coef in self.raw_terms.items()}
        return self._items.items()

    def coefficient(self, monomial):
        self.items()
        return self._items.get(tuple(sorted(monomial)), sympy.Integer(0))

    @property
    def constant_term(self):
        return self.coefficient(())

    def without_constant(self):
        return Polynomial._from_expr(self.expr - self.raw_terms.get((), 0))

    def is_zero(self):
        return self.expr == 0

    def is_constant(self):
        return all(not m for m in self.raw_terms)

    def degree(self):
        return max((len(m) for m in self.raw_terms), default=0)

    def degree_in(self, name):
        return max((m.count(name) for m in self.raw_terms), default=0)

    def variables(self):
        return {v for m in self.raw_terms for v in m}

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial._from_expr(self.expr + other.expr)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._from_expr(-self.expr)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial._from_expr(self.expr - other.expr)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial._from_expr(self.expr * other.expr)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise NilknapError(error_code.INVALID_ARGUMENT, f"polynomial power needs a non-negative integer, got {exponent!r}")
        return Polynomial._from_expr(self.expr ** exponent)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            other = self._coerce(other)
            if other is NotImplemented:
                return False
        return self.raw_terms == other.raw_terms

    def __hash__(self):
        return hash(frozenset(self.raw_terms.items()))

    def evaluate(self, assignment: Mapping[str, int]):
        total = 0
        for monomial, coef in self.items():
            term = value(coef)
            for name in monomial:
                term *= assignment[name]
            total += term
        return total

    def substitute(self, mapping: Mapping[str, "Polynomial"]):
        replacements = {sympy.Symbol(name): poly.expr for name, poly in mapping.items()}
        return Polynomial._from_expr(self.expr.xreplace(replacements))

    def denominator_lcm(self):
        denominators = [sympy.fraction(coef)[1] for coef in self.raw_terms.values()]
        return int(sympy.ilcm(1, 1, *denominators))

    def sorted_terms(self, order: Sequence[str] = ()):
        """Terms in graded-lex order over ``order`` (unknown names sort after, by name)."""
        position = {name: i for i, name in enumerate(order)}
        rank = lambda name: (position.get(name, len(position)), name)
        return sorted(
            self.items(),
            key=lambda item: (-len(item[0]), [rank(v) for v in sorted(item[0], key=rank)]),
        )

    def to_text(self, order: Sequence[str] = ()):
        position = {name: i for i, name in enumerate(order)}
        rank = lambda name: (position.get(name, len(position)), name)
        pieces = []
        for monomial, coef in self.sorted_terms(order):
            factors = []
            names = sorted(monomial, key=rank)
            for name in dict.fromkeys(names):
                count = names.count(name)
                factors.append(name if count == 1 else f"{name}^{count}")
            negative = not is_symbolic(coef) and coef < 0
            magnitude = -coef if negative else coef
            fractional = not is_symbolic(magnitude) and not magnitude.is_Integer
            if not factors:
                body = f"({magnitude})" if fractional else to_text(magnitude)
            elif not is_symbolic(magnitude) and magnitude == 1:
                body = "*".join(factors)
            else:
                shown = f"({magnitude})" if fractional else to_text(magnitude)
                body = "*".join([shown] + factors)
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(pieces) if pieces else "0"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"{type(self).__name__}({self.to_text()!r})"


class LinearForm(Polynomial):
    __slots__ = ()
    max_degree = 1


class QuadraticPolynomial(Polynomial):
    __slots__ = ()
    max_degree = 2


class Term:
    """Node of a term computation tree: constant, variable, sum or product."""

    def to_polynomial(self) -> Polynomial:
        raise NotImplementedError

    def variables(self) -> Tuple[str, ...]:
        raise NotImplementedError


@dataclass(frozen=True)
class Const(Term):
    value: object

    def to_polynomial(self):
        return Polynomial.constant(self.value)

    def variables(self):
        return ()


@dataclass(frozen=True)
class Var(Term):
    name: str

    def to_polynomial(self):
        return Polynomial.variable(self.name)

    def variables(self):
        return (self.name,)


@dataclass(frozen=True)
class Sum(Term):
    left: Term
    right: Term

    def to_polynomial(self):
        return self.left.to_polynomial() + self.right.to_polynomial()

    def variables(self):
        return tuple(dict.fromkeys(self.left.variables() + self.right.variables()))


@dataclass(frozen=True)
class Prod(Term):
    left: Term
    right: Term

    def to_polynomial(self):
        return self.left.to_polynomial() * self.right.to_polynomial()

    def variables(self):
        return tuple(dict.fromkeys(self.left.variables() + self.right.variables()))


def term_from_polynomial(poly: Polynomial, order: Sequence[str] = ()) -> Term:
    """Left-deep sum of coefficient-times-variables products."""
    summands = []
    for monomial, coef in poly.sorted_terms(order):
        node = None if (not is_symbolic(coef) and coef == 1 and monomial) else Const(coef)
        for name in monomial:
            node = Var(name) if node is None else Prod(node, Var(name))
        summands.append(node)
    if not summands:
        return Const(0)
    result = summands[0]
    for node in summands[1:]:
        result = Sum(result, node)
    return result


@dataclass(frozen=True)
class Equation:
    lhs: Polynomial
    rhs: Polynomial
    terms: Optional[Tuple[Term, Term]] = field(default=None, compare=False)
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "lhs", Polynomial(Polynomial._coerce(self.lhs)))
        object.__setattr__(self, "rhs", Polynomial(Polynomial._coerce(self.rhs)))

    def difference(self) -> Polynomial:
        return self.lhs - self.rhs

    def normalized(self):
        """(P, gamma) with lhs - rhs == P - gamma and P free of a constant term."""
        diff = self.difference()
        return diff.without_constant(), c_neg(diff.constant_term)

    def degree(self):
        return max(self.lhs.degree(), self.rhs.degree())

    def variables(self):
        return self.lhs.variables() | self.rhs.variables()

    def holds(self, assignment: Mapping[str, int]):
        return self.difference().evaluate(assignment) == 0

    def term_pair(self, order: Sequence[str] = ()) -> Tuple[Term, Term]:
        if self.terms is not None:
            return self.terms
        return term_from_polynomial(self.lhs, order), term_from_polynomial(self.rhs, order)

    def to_text(self, order: Sequence[str] = ()):
        return f"{self.lhs.to_text(order)} = {self.rhs.to_text(order)}"


@dataclass(frozen=True)
class DiophantineSystem:
    variables: Tuple[str, ...]
    equations: Tuple[Equation, ...] = ()
    notes: Tuple[str, ...] = ()

    def __post_init__(self):
        variables = tuple(self.variables)
        if len(set(variables)) != len(variables):
            raise NilknapError(error_code.INVALID_ARGUMENT, f"duplicate variable in {variables}")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "equations", tuple(self.equations))
        object.__setattr__(self, "notes", tuple(self.notes))
        declared = set(variables)
        for eq in self.equations:
            missing = eq.variables() - declared
            if missing:
                raise NilknapError(
                    error_code.INVALID_ARGUMENT, f"undeclared variable(s) {sorted(missing)} in {eq.to_text()}"
                )

    def degree(self):
        return max((eq.degree() for eq in self.equations), default=0)

    def satisfied_by(self, assignment: Mapping[str, int]):
        return all(eq.holds(assignment) for eq in self.equations)

    def with_notes(self, *notes: str):
        return DiophantineSystem(self.variables, self.equations, self.notes + tuple(notes))


def fresh_names(taken: Iterable[str], stem: str):
    """Yields ``stem1, stem2, ...`` skipping names already taken."""
    taken = set(taken)
    counter = 0
    while True:
        counter += 1
        name = f"{stem}{counter}"
        if name not in taken:
            taken.add(name)
            yield name
