"""Exact integer constants that may be too large to materialize.

Small values are plain sympy numbers. Powers too big to fold stay unevaluated
sympy trees built with ``evaluate=False``, written ``pow(5,59)`` or the tower
``pow(2,add(pow(5,59),1))``. Inside polynomials each such tree is carried as a
constant symbol named by its text, so polynomial arithmetic never touches its
value.
"""

from __future__ import annotations

import functools
from typing import Dict, Union

import sympy
from sympy import Add, Mul, Pow

from . import config
from .errors import NilknapError, error_code

# powers whose result stays below this many bits are folded eagerly
_FOLD_BITS = 64

ConstExpr = sympy.Expr
Number = Union[int, sympy.Expr]

_CONSTANTS: Dict[str, sympy.Expr] = {}


def as_number(c) -> sympy.Expr:
    return sympy.sympify(c)


def is_symbolic(c):
    return isinstance(c, sympy.Basic) and not c.is_Number


def constant_symbol(c) -> sympy.Symbol:
    name = to_text(c)
    _CONSTANTS.setdefault(name, c)
    return sympy.Symbol(name)


def is_constant_symbol(s):
    return s.is_Symbol and s.name in _CONSTANTS


def bit_estimate(c):
    """Upper bound on the bit length of ``c``, or None when it exceeds the cap."""
    cap = config.max_materialize_bits()
    c = as_number(c)
    if c.is_Number:
        return abs(int(c.p)).bit_length()
    if c.is_Symbol:
        return bit_estimate(_CONSTANTS[c.name])
    if c.is_Add or c.is_Mul:
        estimates = [bit_estimate(arg) for arg in c.args]
        if any(e is None for e in estimates):
            return None
        total = max(estimates) + len(estimates) if c.is_Add else sum(estimates)
        return total if total <= cap else None
    base, exponent = c.args
    base_bits = bit_estimate(base)
    exponent_bits = bit_estimate(exponent)
    if base_bits is None or exponent_bits is None or exponent_bits > _FOLD_BITS:
        return None
    if base_bits <= 1:
        return 1
    total = base_bits * int(_value(exponent))
    return total if total <= cap else None


def is_materializable(c):
    return bit_estimate(c) is not None


@functools.lru_cache(maxsize=None)
def _value(c):
    if c.is_Number:
        return c
    if c.is_Symbol:
        return _value(_CONSTANTS[c.name])
    args = [_value(arg) for arg in c.args]
    if c.is_Add:
        return sympy.Add(*args)
    if c.is_Mul:
        return sympy.Mul(*args)
    return sympy.Pow(*args)


def value(c):
    """Exact value of ``c``; refuses rather than approximates huge constants."""
    c = as_number(c)
    if is_symbolic(c) and not is_materializable(c):
        raise NilknapError(error_code.NOT_MATERIALIZABLE, f"constant {to_text(c)} is too large to materialize")
    result = _value(c)
    return int(result) if result.is_Integer else result


def is_zero(c):
    c = as_number(c)
    if not is_symbolic(c):
        return c.is_zero
    return is_materializable(c) and value(c) == 0


def c_add(a, b):
    a, b = as_number(a), as_number(b)
    if not is_symbolic(a) and not is_symbolic(b):
        return a + b
    if is_zero(a):
        return b
    if is_zero(b):
        return a
    return Add(a, b, evaluate=False)


def c_mul(a, b):
    a, b = as_number(a), as_number(b)
    if not is_symbolic(a) and not is_symbolic(b):
        return a * b
    if is_zero(a) or is_zero(b):
        return sympy.Integer(0)
    if a == 1:
        return b
    if b == 1:
        return a
    return Mul(a, b, evaluate=False)


def c_neg(a):
    return c_mul(-1, a)


def c_pow(base, exponent):
    base, exponent = as_number(base), as_number(exponent)
    if not is_symbolic(exponent) and (not exponent.is_Integer or exponent < 0):
        raise NilknapError(error_code.INVALID_ARGUMENT, f"constant exponent must be a nonnegative integer, got {exponent}")
    if not is_symbolic(base) and not is_symbolic(exponent):
        if abs(base) <= 1 or abs(int(base.p)).bit_length() * int(exponent) <= _FOLD_BITS:
            return base ** exponent
    return Pow(base, exponent, evaluate=False)


def to_symbols(c) -> sympy.Expr:
    """``c`` with every unevaluated power replaced by its constant symbol."""
    c = as_number(c)
    if not is_symbolic(c):
        return c
    if c.is_Add:
        return sympy.Add(*[to_symbols(arg) for arg in c.args])
    if c.is_Mul:
        return sympy.Mul(*[to_symbols(arg) for arg in c.args])
    return constant_symbol(c)


def from_symbols(expr) -> sympy.Expr:
    """Inverse of ``to_symbols`` up to the order of sums and products."""
    if expr.is_Number:
        return expr
    if expr.is_Symbol:
        return _CONSTANTS[expr.name]
    args = [from_symbols(arg) for arg in expr.args]
    if expr.is_Add:
        return functools.reduce(c_add, args)
    if expr.is_Mul:
        return functools.reduce(c_mul, args)
    return c_pow(*args)


def to_text(c):
    c = as_number(c)
    if c.is_Number:
        return str(c)
    if c.is_Symbol:
        return c.name
    if c.is_Add:
        return "add(" + ",".join(to_text(arg) for arg in c.args) + ")"
    if c.is_Mul:
        return "mul(" + ",".join(to_text(arg) for arg in c.args) + ")"
    base, exponent = c.args
    return f"pow({to_text(base)},{to_text(exponent)})"
