"""Symbolic evaluation of g_1^e_1 ... g_k^e_k and the equivalent Diophantine system."""

from __future__ import annotations

import logging
from typing import Dict, List, Tuple

import sympy

from .group import KPInstance, Pair
from .polynomial import DiophantineSystem, Equation, LinearForm, Polynomial, QuadraticPolynomial

logger = logging.getLogger(__name__)


def eps_names(k) -> Tuple[str, ...]:
    return tuple(f"e{i}" for i in range(1, k + 1))


def symbolic_evaluate(instance: KPInstance) -> Tuple[Tuple[LinearForm, ...], Dict[Pair, QuadraticPolynomial]]:
    """Returns the generator exponents and commutator exponents of the product as polynomials in e1..ek.

    Appending g^e to a prefix with generator forms A contributes, for j < k,
    e*b_jk - a_j a_k e(e-1)/2 from the power itself and -A_k * a_j e from moving
    its x_j letters left past the prefix.
    """
    n = instance.rank
    names = eps_names(instance.k)
    forms: List[Polynomial] = [Polynomial() for _ in range(n)]
    quadratic: Dict[Pair, Polynomial] = {}

    def bump(pair, poly):
        quadratic[pair] = quadratic.get(pair, Polynomial()) + poly

    for name, g in zip(names, instance.inputs):
        e = Polynomial.variable(name)
        for pair, b in g.beta:
            bump(pair, b * e)
        nonzero = [(j, a) for j, a in enumerate(g.alpha, start=1) if a]
        triangle = e * e - e
        for p, (j, aj) in enumerate(nonzero):
            for k, ak in nonzero[p + 1:]:
                bump((j, k), triangle * sympy.Rational(-aj * ak, 2))
        for j, aj in nonzero:
            for k in range(j + 1, n + 1):
                if not forms[k - 1].is_zero():
                    bump((j, k), -(forms[k - 1] * (aj * e)))
        for j, aj in nonzero:
            forms[j - 1] = forms[j - 1] + aj * e

    result = {pair: QuadraticPolynomial(poly) for pair, poly in quadratic.items() if not poly.is_zero()}
    return tuple(LinearForm(f) for f in forms), result


def kp_to_system(instance: KPInstance) -> DiophantineSystem:
    """The system in e1..ek satisfied exactly by the witnesses of ``instance``.

    Equations are labelled ``x<i>`` (generator exponent) or ``c<i>,<j>``
    (commutator exponent); equations reading 0 = 0 are dropped.
    """
    forms, quadratic = symbolic_evaluate(instance)
    target_beta = instance.target.beta_map
    equations = []
    for i, form in enumerate(forms, start=1):
        gamma = instance.target.alpha[i - 1]
        if form.is_zero() and gamma == 0:
            continue
        equations.append(Equation(form, Polynomial.constant(gamma), label=f"x{i}"))
    n = instance.rank
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            poly = quadratic.get((i, j), Polynomial())
            gamma = target_beta.get((i, j), 0)
            if poly.is_zero() and gamma == 0:
                continue
            scale = poly.denominator_lcm()
            equations.append(Equation(scale * poly, Polynomial.constant(scale * gamma), label=f"c{i},{j}"))
    logger.info(
        "derived %d equations over %d exponents from a rank %d instance", len(equations), instance.k, n
    )
    return DiophantineSystem(
        eps_names(instance.k),
        equations,
        (f"derived from a knapsack instance of rank {n} with {instance.k} inputs",),
    )
