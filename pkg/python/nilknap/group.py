"""Exact arithmetic in the free nilpotent group of class 2 and rank n.

Elements are kept in the normal form

    x_1^a_1 ... x_n^a_n * prod_{i<j} [x_i, x_j]^b_ij,   [x, y] = x^-1 y^-1 x y

and collected with yx = xy[x,y]^-1. Two elements are equal iff their normal
forms are equal, which decides the word problem.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .errors import NilknapError, error_code

Pair = Tuple[int, int]

_LETTER = re.compile(r"^x(\d+)(?:\^\{?(-?\d+)\}?)?$")


def _check_rank(rank):
    if not isinstance(rank, int) or rank < 1:
        raise NilknapError(error_code.INVALID_ARGUMENT, f"rank must be a positive integer, got {rank!r}")


@dataclass(frozen=True)
class Word:
    rank: int
    letters: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        _check_rank(self.rank)
        letters = []
        for index, exponent in self.letters:
            if not 1 <= index <= self.rank:
                raise NilknapError(
                    error_code.INDEX_OUT_OF_RANGE, f"generator x{index} outside rank {self.rank}"
                )
            if exponent != 0:
                letters.append((int(index), int(exponent)))
        object.__setattr__(self, "letters", tuple(letters))

    @classmethod
    def parse(cls, rank, text):
        """Builds a word from text such as ``"x2 x1^-1 x3^{2}"``."""
        letters = []
        for token in text.split():
            match = _LETTER.match(token)
            if match is None:
                raise NilknapError(error_code.INVALID_ARGUMENT, f"bad word letter {token!r}")
            letters.append((int(match.group(1)), int(match.group(2) or 1)))
        return cls(rank, tuple(letters))

    def __mul__(self, other):
        if self.rank != other.rank:
            raise NilknapError(error_code.RANK_MISMATCH, f"cannot concatenate words of rank {self.rank} and {other.rank}")
        return Word(self.rank, self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def inverse(self):
        return Word(self.rank, tuple((index, -exponent) for index, exponent in reversed(self.letters)))

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in self.letters)


@dataclass(frozen=True)
class NormalForm:
    rank: int
    alpha: Tuple[int, ...]
    beta: Tuple[Tuple[Pair, int], ...] = ()

    def __post_init__(self):
        _check_rank(self.rank)
        alpha = tuple(int(a) for a in self.alpha)
        if len(alpha) != self.rank:
            raise NilknapError(
                error_code.LENGTH_MISMATCH, f"alpha has {len(alpha)} entries for rank {self.rank}"
            )
        items = self.beta.items() if isinstance(self.beta, Mapping) else self.beta
        beta = {}
        for (i, j), value in items:
            if not 1 <= i < j <= self.rank:
                raise NilknapError(error_code.INDEX_OUT_OF_RANGE, f"bad commutator key {(i, j)} for rank {self.rank}")
            beta[(i, j)] = beta.get((i, j), 0) + int(value)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", tuple(sorted((k, v) for k, v in beta.items() if v != 0)))

    @property
    def beta_map(self) -> Dict[Pair, int]:
        return dict(self.beta)

    def is_identity(self):
        return not self.beta and not any(self.alpha)

    def is_central(self):
        return not any(self.alpha)

    def __mul__(self, other):
        return multiply(self, other)

    def __pow__(self, exponent):
        return power(self, exponent)

    def __invert__(self):
        return inverse(self)

    def __str__(self):
        parts = [f"x{i}" if a == 1 else f"x{i}^{a}" for i, a in enumerate(self.alpha, start=1) if a]
        parts += [f"c{i},{j}" if b == 1 else f"c{i},{j}^{b}" for (i, j), b in self.beta]
        return " ".join(parts) if parts else "1"


def identity(rank) -> NormalForm:
    _check_rank(rank)
    return NormalForm(rank, (0,) * rank)


def generator(index, rank, exponent=1) -> NormalForm:
    _check_rank(rank)
    if not 1 <= index <= rank:
        raise NilknapError(error_code.INDEX_OUT_OF_RANGE, f"generator x{index} outside rank {rank}")
    alpha = [0] * rank
    alpha[index - 1] = exponent
    return NormalForm(rank, tuple(alpha))


def basic_commutator(i, j, rank, exponent=1) -> NormalForm:
    """[x_i, x_j]^exponent; [x_j, x_i] is stored as the negated exponent on (i, j)."""
    if i == j:
        return identity(rank)
    if i > j:
        i, j, exponent = j, i, -exponent
    return NormalForm(rank, (0,) * rank, {(i, j): exponent})


def _same_rank(a, b):
    if a.rank != b.rank:
        raise NilknapError(
            error_code.RANK_MISMATCH, f"elements belong to groups of rank {a.rank} and {b.rank}"
        )


def multiply(a: NormalForm, b: NormalForm) -> NormalForm:
    _same_rank(a, b)
    beta = dict(a.beta)
    for key, value in b.beta:
        beta[key] = beta.get(key, 0) + value
    # moving each x_j of b left past the x_k (k > j) of a emits [x_j, x_k]^(-a_k b_j)
    left = [(k, ak) for k, ak in enumerate(a.alpha, start=1) if ak]
    right = [(j, bj) for j, bj in enumerate(b.alpha, start=1) if bj]
    for k, ak in left:
        for j, bj in right:
            if j < k:
                beta[(j, k)] = beta.get((j, k), 0) - ak * bj
    alpha = tuple(x + y for x, y in zip(a.alpha, b.alpha))
    return NormalForm(a.rank, alpha, beta)


def inverse(a: NormalForm) -> NormalForm:
    beta = {key: -value for key, value in a.beta}
    nonzero = [(i, ai) for i, ai in enumerate(a.alpha, start=1) if ai]
    for p, (i, ai) in enumerate(nonzero):
        for j, aj in nonzero[p + 1:]:
            beta[(i, j)] = beta.get((i, j), 0) - ai * aj
    return NormalForm(a.rank, tuple(-x for x in a.alpha), beta)


def power(a: NormalForm, e: int) -> NormalForm:
    """Closed form, valid for every integer e: (e alpha, e beta - C(e, 2) alpha_j alpha_k)."""
    e = int(e)
    triangle = e * (e - 1) // 2
    beta = {key: e * value for key, value in a.beta}
    nonzero = [(j, aj) for j, aj in enumerate(a.alpha, start=1) if aj]
    for p, (j, aj) in enumerate(nonzero):
        for k, ak in nonzero[p + 1:]:
            beta[(j, k)] = beta.get((j, k), 0) - triangle * aj * ak
    return NormalForm(a.rank, tuple(e * x for x in a.alpha), beta)


def commutator(a: NormalForm, b: NormalForm) -> NormalForm:
    _same_rank(a, b)
    return multiply(multiply(inverse(a), inverse(b)), multiply(a, b))


def reduce_word(w: Word) -> NormalForm:
    result = identity(w.rank)
    for index, exponent in w.letters:
        result = multiply(result, generator(index, w.rank, exponent))
    return result


def commutator_word(i, j, rank, exponent=1) -> Word:
    """The letters of [x_i, x_j]^exponent."""
    if exponent >= 0:
        block = ((i, -1), (j, -1), (i, 1), (j, 1))
    else:
        block = ((j, -1), (i, -1), (j, 1), (i, 1))
    return Word(rank, block * abs(exponent))


def spell(nf: NormalForm) -> Word:
    letters = tuple((i, a) for i, a in enumerate(nf.alpha, start=1) if a)
    for (i, j), b in nf.beta:
        letters += commutator_word(i, j, nf.rank, b).letters
    return Word(nf.rank, letters)


@dataclass(frozen=True)
class KPInstance:
    """Inputs g_1..g_k and target g of g_1^e_1 ... g_k^e_k = g.

    ``variable_map`` lists (system variable, 0-based input index) pairs in
    declaration order; ``allocations`` is the compiler's commutator log and
    takes no part in equality.
    """

    rank: int
    inputs: Tuple[NormalForm, ...]
    target: NormalForm
    variable_map: Tuple[Tuple[str, int], ...] = ()
    allocations: tuple = field(default=(), compare=False)

    def __post_init__(self):
        _check_rank(self.rank)
        object.__setattr__(self, "inputs", tuple(self.inputs))
        for g in self.inputs + (self.target,):
            if g.rank != self.rank:
                raise NilknapError(
                    error_code.RANK_MISMATCH, f"element of rank {g.rank} in instance of rank {self.rank}"
                )
        variable_map = tuple(self.variable_map.items()) if isinstance(self.variable_map, Mapping) else tuple(self.variable_map)
        for name, index in variable_map:
            if not 0 <= index < len(self.inputs):
                raise NilknapError(error_code.INDEX_OUT_OF_RANGE, f"variable {name} mapped to missing input {index + 1}")
        object.__setattr__(self, "variable_map", variable_map)

    @property
    def k(self):
        return len(self.inputs)

    def slot_of(self, name) -> Optional[int]:
        return dict(self.variable_map).get(name)

    def witness_for(self, eps: Sequence[int]) -> Dict[str, int]:
        return {name: eps[index] for name, index in self.variable_map}


def evaluate_kp(instance: KPInstance, eps: Sequence[int]) -> Tuple[NormalForm, bool]:
    if len(eps) != instance.k:
        raise NilknapError(
            error_code.LENGTH_MISMATCH, f"expected {instance.k} exponents, got {len(eps)}"
        )
    value = identity(instance.rank)
    for g, e in zip(instance.inputs, eps):
        if e:
            value = multiply(value, power(g, e))
    return value, value == instance.target

