"""The explicit universal Diophantine system (a quadratic rewrite of Jones's
universal system) parameterized by x and the three box parameters.

Greek and boxed symbols are written in ASCII, see ``TRANSLITERATION``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from .constexpr import c_add, c_mul, c_pow, is_materializable, is_symbolic, to_text, value
from .datatypes import commutator_role
from .errors import NilknapError, error_code
from .group import KPInstance
from .polynomial import DiophantineSystem, Equation, Polynomial

logger = logging.getLogger(__name__)

TRANSLITERATION = (
    ("Γ_k", "Gk"),
    ("C_1", "C1"),
    ("D_1", "D1"),
    ("α", "alf"),
    ("Δ", "Del"),
    ("ε", "eps"),
    ("λ", "lam"),
    ("γ", "gam"),
    ("φ", "phi"),
    ("■_z", "bz"),
    ("■_y", "by"),
    ("■_u", "bu"),
)

VARIABLES = tuple(f"G{k}" for k in range(1, 28)) + (
    "B", "C1", "D1", "c", "e", "l", "t", "m", "g", "S", "T", "N", "R", "P", "K",
    "h", "M", "U", "Y", "w", "s", "D", "I", "o", "F", "i", "E", "G", "H", "j",
    "alf", "Del", "eps", "lam", "gam", "phi",
)

PUBLISHED_FIGURES = {
    "equation_commutators": 167,
    "tie_commutators": 155,
    "basic_commutators": 322,
    "inputs": 334,
}


@dataclass(frozen=True)
class UniversalParams:
    x: object
    z: object
    y: object
    u: object
    toy_exponent: Optional[int] = None

    def __post_init__(self):
        for name in ("x", "z", "y", "u"):
            param = getattr(self, name)
            if is_symbolic(param) and not is_materializable(param):
                raise NilknapError(error_code.INVALID_ARGUMENT, f"parameter {name} = {to_text(param)} cannot be checked for positivity")
            if value(param) <= 0:
                raise NilknapError(error_code.INVALID_ARGUMENT, f"parameter {name} must be positive, got {to_text(param)}")
        if self.toy_exponent is not None and self.toy_exponent <= 0:
            raise NilknapError(error_code.INVALID_ARGUMENT, f"toy exponent must be positive, got {self.toy_exponent}")


def jones_system(params: UniversalParams) -> DiophantineSystem:
    v = {name: Polynomial.variable(name) for name in VARIABLES}
    G = lambda k: v[f"G{k}"]
    B, C1, D1, c, e, l, t, m, g = (v[n] for n in ("B", "C1", "D1", "c", "e", "l", "t", "m", "g"))
    S, T, N, R, P, K, h, M, U = (v[n] for n in ("S", "T", "N", "R", "P", "K", "h", "M", "U"))
    Y, w, s, D, I, o, F, i, E = (v[n] for n in ("Y", "w", "s", "D", "I", "o", "F", "i", "E"))
    GG, H, j = v["G"], v["H"], v["j"]
    alf, Del, eps, lam, gam, phi = (v[n] for n in ("alf", "Del", "eps", "lam", "gam", "phi"))
    x, bz, by, bu = (Polynomial.constant(p) for p in (params.x, params.z, params.y, params.u))

    big = c_pow(5, 59) if params.toy_exponent is None else params.toy_exponent
    tower = c_pow(c_mul(2, params.z), c_add(big, 1))

    rows = [
        ("G1 = G26^2", G(1), G(26) ** 2),
        ("G2 = M U", G(2), M * U),
        ("G3 = B(2 G23 - B) - 1", G(3), B * (2 * G(23) - B) - 1),
        ("G4 = G23 C1", G(4), G(23) * C1),
        ("G5 = c^2", G(5), c ** 2),
        ("G6 = G5^2", G(6), G(5) ** 2),
        ("G8 = G24^2", G(8), G(24) ** 2),
        ("G9 = lam B", G(9), lam * B),
        ("G10 = G H", G(10), GG * H),
        ("G11 = F^2", G(11), F ** 2),
        ("G12 = G23 E", G(12), G(23) * E),
        ("G13 = G25^2", G(13), G(25) ** 2),
        ("G14 = G23 G25", G(14), G(23) * G(25)),
        ("G15 = N^2", G(15), N ** 2),
        ("G16 = Y K", G(16), Y * K),
        ("G18 = P K", G(18), P * K),
        ("G20 = G8 G24", G(20), G(8) * G(24)),
        ("G21 = G8^2", G(21), G(8) ** 2),
        ("G22 = G6 G20", G(22), G(6) * G(20)),
        ("B = 2 G1^2 (2bz)^(5^59+1)", B, Polynomial.constant(c_mul(2, tower)) * G(1) ** 2),
        ("D1 = 1 + G27 + C1(G23 - B) + alf G3", D1, 1 + G(27) + C1 * (G(23) - B) + alf * G(3)),
        ("(G4 - C1)(G4 + C1) + 1 = D1^2", (G(4) - C1) * (G(4) + C1) + 1, D1 ** 2),
        ("C1 = 5^59 + Del(G23 - 1)", C1, Polynomial.constant(big) + Del * (G(23) - 1)),
        ("c = 1 + (G26 - eps)B + g", c, 1 + (G(26) - eps) * B + g),
        (
            "e + 2bz G26 l + 2bz B G6 + G7 = 2bz(1 + G27)",
            e + 2 * bz * G(26) * l + 2 * bz * B * G(6) + G(7),
            2 * bz * (1 + G(27)),
        ),
        ("l = bu + t(B - 2bz)", l, bu + t * (B - 2 * bz)),
        ("e = by + m(B - 2bz)", e, by + m * (B - 2 * bz)),
        (
            "S = g - 4bz^2 G22 + l G24 + e(G8 + 4bz G22) + 2bz G9(-2bz G22 + G20 + G21)",
            S,
            g - 4 * bz ** 2 * G(22) + l * G(24) + e * (G(8) + 4 * bz * G(22))
            + 2 * bz * G(9) * (-2 * bz * G(22) + G(20) + G(21)),
        ),
        (
            "T = G24 - 1 - (G26 - 1)l + (G9 - 2 lam bz)(G24 + G8) + 2bz(B - 2)G21",
            T,
            G(24) - 1 - (G(26) - 1) * l + (G(9) - 2 * lam * bz) * (G(24) + G(8)) + 2 * bz * (B - 2) * G(21),
        ),
        ("N = 16 bz G20 G8", N, 16 * bz * G(20) * G(8)),
        ("R = S(G15 - N) + (T + 1)(G15 - 1)", R, S * (G(15) - N) + (T + 1) * (G(15) - 1)),
        ("P = 2 M G2", P, 2 * M * G(2)),
        ("(K - G18)(K + G18) + G19^2 = 1", (K - G(18)) * (K + G(18)) + G(19) ** 2, Polynomial.constant(1)),
        (
            "(2G25 - 2G16 - K)(2G25 - 2G16 + K) + G17 = 0",
            (2 * G(25) - 2 * G(16) - K) * (2 * G(25) - 2 * G(16) + K) + G(17),
            Polynomial(),
        ),
        ("K = R + 1 + h(P - 1)", K, R + 1 + h * (P - 1)),
        ("M = R Y", M, R * Y),
        ("U = G15 w", U, G(15) * w),
        ("Y = G15 s", Y, G(15) * s),
        (
            "D = -2G25 - 5gam + G26 w + G23(G25 + 4gam)",
            D,
            -2 * G(25) - 5 * gam + G(26) * w + G(23) * (G(25) + 4 * gam),
        ),
        ("I = D + o F", I, D + o * F),
        ("(D - G14)(D + G14) + G13 = 1", (D - G(14)) * (D + G(14)) + G(13), Polynomial.constant(1)),
        ("E = i G13 + 1", E, i * G(13) + 1),
        ("(G12 - E)(G12 + E) - G11 + 1 = 0", (G(12) - E) * (G(12) + E) - G(11) + 1, Polynomial()),
        ("G = G23 + G11(G11 - G23)", GG, G(23) + G(11) * (G(11) - G(23))),
        ("H = 2R + 1 + j G25", H, 2 * R + 1 + j * G(25)),
        ("I^2 + H(H - G10) = 1", I ** 2 + H * (H - G(10)), Polynomial.constant(1)),
        ("G23 = G2 + M", G(23), G(2) + M),
        ("G24 = 1 + G9 - lam", G(24), 1 + G(9) - lam),
        ("G25 = 2R + 1 + C1 + phi", G(25), 2 * R + 1 + C1 + phi),
        ("G26 = eps + x", G(26), eps + x),
        ("G27 = lam(B - 1)", G(27), lam * (B - 1)),
    ]
    equations = [Equation(lhs, rhs, label=label) for label, lhs, rhs in rows]
    for eq in equations:
        if eq.degree() > 2:
            raise NilknapError(error_code.INVARIANT_VIOLATION, f"universal equation {eq.label} has degree {eq.degree()}")
    notes = [f"universal system with x={to_text(params.x)} bz={to_text(params.z)} by={to_text(params.y)} bu={to_text(params.u)}"]
    if params.toy_exponent is not None:
        notes.append(f"toy_exponent={params.toy_exponent} replaces 5^59 in the equations for B and C1")
    logger.info("generated universal system with %d equations", len(equations))
    return DiophantineSystem(VARIABLES, equations, tuple(notes))


@dataclass(frozen=True)
class ResourceReport:
    equations: int = 0
    variables: int = 0
    equation_commutators: int = 0
    tie_commutators: int = 0
    link_commutators: int = 0
    term_commutators: int = 0
    basic_commutators: int = 0
    generators: int = 0
    inputs: int = 0

    def lines(self):
        out = [f"{name}: {getattr(self, name)}" for name in self.__dataclass_fields__]
        out.append("published comparison: informational")
        for name, figure in PUBLISHED_FIGURES.items():
            out.append(f"  {name}: ours {getattr(self, name)}, published {figure}")
        return out


def resource_report(system: DiophantineSystem, compiled: KPInstance) -> ResourceReport:
    log = compiled.allocations
    count = lambda role: sum(1 for entry in log if entry.role is role)
    if log:
        generators = max(max(entry.pair) for entry in log)
    else:
        generators = 0
    used = set()
    for g in compiled.inputs + (compiled.target,):
        used.update(pair for pair, _ in g.beta)
    return ResourceReport(
        equations=len(system.equations),
        variables=len(system.variables),
        equation_commutators=count(commutator_role.EQUATION) + count(commutator_role.PRODUCT),
        tie_commutators=count(commutator_role.TIE),
        link_commutators=count(commutator_role.LINK),
        term_commutators=count(commutator_role.TERM),
        basic_commutators=len(log) if log else len(used),
        generators=generators,
        inputs=compiled.k,
    )


def worked_example_instance() -> KPInstance:
    """The ten-input instance for (K - G18)(K + G18) + G19^2 = 1.

    a = x1, b = x2; c1..c7 are basic commutators involving a generator that
    only occurs inside commutators. K, G18 and G19 are read at inputs 1, 2 and 7.
    """
    from .compiler import CommutatorPool, InstanceBuilder

    pool = CommutatorPool()
    builder = InstanceBuilder(pool)
    a, b = pool.gadget_pair(commutator_role.EQUATION, "example")
    cs = [pool.central(commutator_role.LINK, "example") for _ in range(7)]
    c1, c2, c3, c4, c5, c6, c7 = cs
    builder.input(alpha={a: -1}, beta={c1: 1, c3: 1})
    builder.input(alpha={a: -1}, beta={c1: 1, c4: 1})
    builder.input(alpha={b: -1}, beta={c2: 1, c3: -1})
    builder.input(alpha={b: -1}, beta={c2: 1, c4: 1})
    builder.input(alpha={a: 1}, beta={c1: -1})
    builder.input(alpha={b: 1}, beta={c2: -1})
    builder.input(alpha={a: -1}, beta={c5: 1, c7: 1})
    builder.input(alpha={b: -1}, beta={c6: 1, c7: -1})
    builder.input(alpha={a: 1}, beta={c5: -1})
    builder.input(alpha={b: 1}, beta={c6: -1})
    builder.set_target((a, b), 1)
    instance = builder.build()
    return KPInstance(
        instance.rank,
        instance.inputs,
        instance.target,
        (("K", 0), ("G18", 1), ("G19", 6)),
        allocations=instance.allocations,
    )
