"""Text formats: system files (``.dio``), instance files (``.kp``), witnesses and matrices.

System file::

    # note: free text kept with the system
    vars: x y
    eq: x*y = 6

Polynomials use ``+ - * ^``, parentheses, decimal integers and the constant
calls ``pow(b,e)``, ``mul(a,b,...)``, ``add(a,b,...)``. Instance file::

    rank: 2
    g1: x2
    g2: x1
    g: x1^2 x2^3 c1,2^-6
    map:
      x: g1

Word tokens are ``x<k>`` and ``c<k>,<l>`` (k < l), each optionally raised to
``^<integer>``; the identity is written ``1``.
"""

from __future__ import annotations

import functools
import keyword
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from .constexpr import c_add, c_mul, c_pow
from .errors import NilknapError, ParseError, error_code
from .group import KPInstance, NormalForm, basic_commutator, generator, identity, multiply
from .polynomial import Const, DiophantineSystem, Equation, Prod, Sum, Term, Var

_TOKEN = re.compile(
    r"(?P<space>\s+)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^(),/=])"
)
_CONST_CALLS = {
    "pow": c_pow,
    "mul": lambda *args: functools.reduce(c_mul, args),
    "add": lambda *args: functools.reduce(c_add, args),
}
# names the generated sympy code refers to
_RESERVED = set(_CONST_CALLS) | {"Integer", "Symbol", "Float", "Rational", "Add", "Mul", "Pow"}
_TRANSFORMATIONS = standard_transformations + (convert_xor,)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    column: int


def _tokenize(text: str, line: int, offset: int) -> List[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, offset + pos + 1)
        if match.lastgroup != "space":
            tokens.append(_Token(match.lastgroup, match.group(), offset + pos + 1))
        pos = match.end()
    tokens.append(_Token("end", "", offset + len(text) + 1))
    return tokens


def _shown(token: _Token):
    return repr(token.text) if token.kind != "end" else "end of side"


def _check_side(tokens: List[_Token], line: int, declared: Optional[Sequence[str]]):
    """Pins every syntax error of one side to its column before sympy sees it.

    Operands are integers, variables, parenthesized expressions and the constant
    calls; ``^`` takes an integer exponent and ``/`` only joins plain integers.
    """
    declared = None if declared is None else set(declared)
    calls: List[List] = []  # open parentheses: [call token or None, argument count]
    operand = True
    i = 0
    while True:
        token = tokens[i]
        if operand:
            if token.kind == "int":
                operand = False
            elif token.kind == "name" and token.text in _CONST_CALLS:
                if tokens[i + 1].text != "(":
                    raise ParseError(f"{token.text}() needs parenthesized arguments", line, token.column)
                calls.append([token, 1])
                i += 1
            elif token.kind == "name":
                if token.text in _RESERVED or keyword.iskeyword(token.text):
                    raise ParseError(f"{token.text!r} is a reserved name", line, token.column)
                if declared is not None and token.text not in declared:
                    raise ParseError(f"undeclared variable {token.text!r}", line, token.column)
                inside = [entry[0] for entry in calls if entry[0] is not None]
                if inside:
                    raise ParseError(f"{inside[-1].text}() takes constant arguments only", line, inside[-1].column)
                operand = False
            elif token.text == "(":
                calls.append([None, 1])
            elif token.text not in ("-", "+"):
                raise ParseError(f"expected an operand, found {_shown(token)}", line, token.column)
        elif token.text in ("+", "-", "*"):
            operand = True
        elif token.text == "/":
            after = tokens[i + 1]
            if tokens[i - 1].kind != "int" or after.kind != "int" or int(after.text) == 0:
                raise ParseError("division is only allowed between plain nonzero constants", line, token.column)
            i += 1
        elif token.text == "^":
            exponent = tokens[i + 1]
            if exponent.kind != "int":
                raise ParseError(f"expected an integer exponent, found {_shown(exponent)}", line, exponent.column)
            if tokens[i + 2].text == "^":
                raise ParseError("chained exponents need parentheses", line, tokens[i + 2].column)
            i += 1
        elif token.text == "," and calls and calls[-1][0] is not None:
            calls[-1][1] += 1
            operand = True
        elif token.text == ")" and calls:
            call, count = calls.pop()
            if call is not None and call.text == "pow" and count != 2:
                raise ParseError("pow() takes exactly two arguments", line, call.column)
        elif token.kind == "end" and not calls:
            return
        elif token.kind == "end":
            raise ParseError("expected ')'", line, token.column)
        else:
            raise ParseError(f"unexpected {_shown(token)}", line, token.column)
        i += 1


def _constant(node):
    """Rebuilds a variable-free sympy tree with the folding rules of ``constexpr``."""
    if node.is_Number:
        return node
    args = [_constant(arg) for arg in node.args]
    if node.is_Add:
        return functools.reduce(c_add, args)
    if node.is_Mul:
        return functools.reduce(c_mul, args)
    base, exponent = args
    if exponent.is_Number and exponent < 0 and base.is_Number and base != 0:
        return base ** exponent
    return c_pow(base, exponent)


def _product(left: Term, right: Term) -> Term:
    if isinstance(left, Const) and isinstance(right, Const):
        return Const(c_mul(left.value, right.value))
    if isinstance(left, Const) and isinstance(right, Prod) and isinstance(right.left, Const):
        return Prod(Const(c_mul(left.value, right.left.value)), right.right)
    return Prod(left, right)


def _term(node) -> Term:
    """Term tree of an unevaluated sympy expression, following its written shape."""
    if not node.free_symbols:
        return Const(_constant(node))
    if node.is_Symbol:
        return Var(node.name)
    if node.is_Pow:
        base, exponent = node.args
        if not exponent.is_Integer or exponent < 0:
            raise NilknapError(error_code.PARSE_ERROR, f"variable power {node} needs a nonnegative integer exponent")
        if exponent == 0:
            return Const(sympy.Integer(1))
        return functools.reduce(Prod, [_term(base)] * int(exponent))
    parts = [_term(arg) for arg in node.args]
    if node.is_Add:
        return functools.reduce(Sum, parts)
    if node.is_Mul:
        return functools.reduce(_product, parts)
    raise NilknapError(error_code.PARSE_ERROR, f"unsupported expression {node}")


def _parse_side(tokens: List[_Token], line: int, declared: Optional[Sequence[str]]) -> Term:
    _check_side(tokens, line, declared)
    names = {t.text for t in tokens if t.kind == "name" and t.text not in _CONST_CALLS}
    local_dict = {name: sympy.Symbol(name) for name in names}
    local_dict.update(_CONST_CALLS)
    source = " ".join(str(int(t.text)) if t.kind == "int" else t.text for t in tokens)
    try:
        node = parse_expr(source, local_dict=local_dict, transformations=_TRANSFORMATIONS, evaluate=False)
        return _term(sympy.sympify(node))
    except NilknapError as err:
        raise ParseError(err.message, line, tokens[0].column)
    except (SyntaxError, TypeError, ValueError, ZeroDivisionError, sympy.SympifyError) as err:
        raise ParseError(f"cannot read expression: {err}", line, tokens[0].column)


def parse_equation(text: str, variables: Optional[Sequence[str]] = None, line: int = 1, offset: int = 0) -> Equation:
    """Parses ``lhs = rhs``; the term trees are kept on the equation."""
    tokens = _tokenize(text, line, offset)
    split = [i for i, t in enumerate(tokens) if t.text == "="]
    if len(split) != 1:
        column = tokens[split[1]].column if len(split) > 1 else tokens[-1].column
        raise ParseError("an equation needs exactly one '='", line, column)
    equals = tokens[split[0]]
    lhs = _parse_side(tokens[: split[0]] + [_Token("end", "", equals.column)], line, variables)
    rhs = _parse_side(tokens[split[0] + 1 :], line, variables)
    return Equation(lhs.to_polynomial(), rhs.to_polynomial(), terms=(lhs, rhs))


def _lines(text: str) -> Iterable[Tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        yield number, raw.rstrip()


def parse_system(text: str) -> DiophantineSystem:
    variables: Optional[Tuple[str, ...]] = None
    equations: List[Equation] = []
    notes: List[str] = []
    for number, line in _lines(text):
        stripped = line.strip()
        indent = len(line) - len(line.lstrip())
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if body.startswith("note:"):
                notes.append(body[len("note:"):].strip())
            continue
        key, sep, rest = stripped.partition(":")
        if not sep or key not in ("vars", "eq"):
            raise ParseError("expected 'vars:' or 'eq:'", number, indent + 1)
        offset = indent + len(key) + 1
        if key == "vars":
            if variables is not None:
                raise ParseError("duplicate 'vars:' line", number, indent + 1)
            names = tuple(rest.split())
            for name in names:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name) or name in _RESERVED or keyword.iskeyword(name):
                    raise ParseError(f"bad variable name {name!r}", number, offset + rest.index(name) + 1)
            if len(set(names)) != len(names):
                raise ParseError("duplicate variable in 'vars:'", number, indent + 1)
            variables = names
            continue
        if variables is None:
            raise ParseError("'eq:' before 'vars:'", number, indent + 1)
        equations.append(parse_equation(rest, variables, number, offset))
    if variables is None:
        raise ParseError("missing 'vars:' line", 1, 1)
    return DiophantineSystem(variables, equations, notes)


def format_system(system: DiophantineSystem) -> str:
    lines = [f"# note: {note}" for note in system.notes]
    lines.append("vars: " + " ".join(system.variables) if system.variables else "vars:")
    lines += [f"eq: {eq.to_text(system.variables)}" for eq in system.equations]
    return "\n".join(lines) + "\n"


_WORD_TOKEN = re.compile(r"^(?:x(\d+)|c(\d+),(\d+))(?:\^\{?(-?\d+)\}?)?$")


def parse_word(text: str, rank: int, line: int = 1, offset: int = 0) -> NormalForm:
    """Multiplies the tokens of ``text`` left to right."""
    result = identity(rank)
    stripped = text.strip()
    if stripped == "1":
        return result
    pos = 0
    for token in text.split():
        pos = text.index(token, pos)
        column = offset + pos + 1
        pos += len(token)
        match = _WORD_TOKEN.match(token)
        if match is None:
            raise ParseError(f"bad word token {token!r}", line, column)
        exponent = int(match.group(4) or 1)
        if match.group(1) is not None:
            index = int(match.group(1))
            if not 1 <= index <= rank:
                raise ParseError(f"generator x{index} outside rank {rank}", line, column)
            factor = generator(index, rank, exponent)
        else:
            i, j = int(match.group(2)), int(match.group(3))
            if not 1 <= i < j <= rank:
                raise ParseError(f"commutator c{i},{j} needs 1 <= k < l <= {rank}", line, column)
            factor = basic_commutator(i, j, rank, exponent)
        result = multiply(result, factor)
    return result


def parse_instance(text: str) -> KPInstance:
    rank = None
    inputs: Dict[int, NormalForm] = {}
    target = None
    variable_map: List[Tuple[str, int]] = []
    in_map = False
    for number, line in _lines(text):
        stripped = line.strip()
        indent = len(line) - len(line.lstrip())
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, rest = stripped.partition(":")
        if not sep:
            raise ParseError("expected '<key>: <value>'", number, indent + 1)
        key = key.strip()
        offset = indent + len(key) + 1
        if in_map and indent > 0:
            slot = re.fullmatch(r"\s*g(\d+)\s*", rest)
            if slot is None:
                raise ParseError(f"map entry for {key} must name an input g<i>", number, offset + 1)
            variable_map.append((key, int(slot.group(1)) - 1))
            continue
        in_map = False
        if key == "rank":
            if rank is not None:
                raise ParseError("duplicate 'rank:' line", number, indent + 1)
            try:
                rank = int(rest)
            except ValueError:
                raise ParseError(f"bad rank {rest.strip()!r}", number, offset + 1)
            if rank < 1:
                raise ParseError("rank must be positive", number, offset + 1)
            continue
        if key == "map":
            in_map = True
            continue
        if rank is None:
            raise ParseError("'rank:' must come first", number, indent + 1)
        if key == "g":
            target = parse_word(rest, rank, number, offset)
            continue
        match = re.fullmatch(r"g(\d+)", key)
        if match is None:
            raise ParseError(f"unknown key {key!r}", number, indent + 1)
        index = int(match.group(1))
        if index in inputs:
            raise ParseError(f"duplicate input g{index}", number, indent + 1)
        inputs[index] = parse_word(rest, rank, number, offset)
    if rank is None:
        raise ParseError("missing 'rank:' line", 1, 1)
    if target is None:
        raise ParseError("missing target line 'g:'", 1, 1)
    if sorted(inputs) != list(range(1, len(inputs) + 1)):
        raise NilknapError(error_code.PARSE_ERROR, f"inputs must be numbered g1..g{len(inputs)} without gaps")
    ordered = tuple(inputs[i] for i in range(1, len(inputs) + 1))
    return KPInstance(rank, ordered, target, tuple(variable_map))


def format_instance(instance: KPInstance) -> str:
    lines = [f"rank: {instance.rank}"]
    for allocation in instance.allocations:
        i, j = allocation.pair
        lines.append(f"# {allocation.role.value} c{i},{j} {allocation.owner}")
    lines += [f"g{i}: {g}" for i, g in enumerate(instance.inputs, start=1)]
    lines.append(f"g: {instance.target}")
    if instance.variable_map:
        lines.append("map:")
        lines += [f"  {name}: g{index + 1}" for name, index in instance.variable_map]
    return "\n".join(lines) + "\n"


def looks_like_instance(text: str) -> bool:
    for _, line in _lines(text):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            return stripped.startswith("rank:")
    return False


def parse_witness(text: str, names: Sequence[str]) -> Tuple[int, ...]:
    """Reads ``e1=3,e2=-2`` (any order, every name once) or a bare list ``3,-2``."""
    items = [item.strip() for item in text.split(",") if item.strip()]
    try:
        if all("=" not in item for item in items):
            values = tuple(int(item) for item in items)
        else:
            assignment = {}
            for item in items:
                name, _, raw = item.partition("=")
                name = name.strip()
                if name in assignment:
                    raise NilknapError(error_code.PARSE_ERROR, f"{name} assigned twice")
                assignment[name] = int(raw)
            unknown = set(assignment) - set(names)
            if unknown:
                raise NilknapError(error_code.PARSE_ERROR, f"unknown witness entries {sorted(unknown)}")
            values = tuple(assignment.get(name, 0) for name in names)
            if len(assignment) != len(names):
                missing = [name for name in names if name not in assignment]
                raise NilknapError(error_code.LENGTH_MISMATCH, f"witness misses {missing}")
    except ValueError as err:
        raise NilknapError(error_code.PARSE_ERROR, f"bad witness {text!r}: {err}")
    if len(values) != len(names):
        raise NilknapError(error_code.LENGTH_MISMATCH, f"expected {len(names)} values, got {len(values)}")
    return values


def format_matrix(rows: Sequence[Sequence[int]]) -> List[str]:
    width = max((len(str(x)) for row in rows for x in row), default=1)
    return [" ".join(str(x).rjust(width) for x in row) for row in rows]


def format_matrices(labelled: Sequence[Tuple[str, Sequence[Sequence[int]]]]) -> str:
    blocks = []
    for label, rows in labelled:
        blocks.append("\n".join([f"# {label}"] + format_matrix(rows)))
    return "\n\n".join(blocks) + "\n"

