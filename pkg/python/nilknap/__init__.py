import logging
import sys

from . import config
from .compiler import (
    Allocation,
    CommutatorPool,
    InstanceBuilder,
    TermEquation,
    compile_quadratic,
    compile_terms,
    degree_reduce,
    nonneg_encode,
    system_term_equations,
)
from .constexpr import Add, ConstExpr, Mul, Pow, c_add, c_mul, c_pow, is_materializable, value
from .datatypes import (
    _library_type,
    alloc_mode,
    commutator_role,
    encode_mode,
    search_status,
    solve_strategy,
)
from .embed import UnitriangularMatrix, matrix_commutator, matrix_to_normal_form, rho, rho_generator, rho_word
from .errors import NilknapError, ParseError, error_code
from .formats import format_instance, format_system, parse_instance, parse_system, parse_word
from .group import (
    KPInstance,
    NormalForm,
    Word,
    basic_commutator,
    commutator,
    evaluate_kp,
    generator,
    identity,
    inverse,
    multiply,
    power,
    reduce_word,
    spell,
)
from .polynomial import (
    Const,
    DiophantineSystem,
    Equation,
    LinearForm,
    Polynomial,
    Prod,
    QuadraticPolynomial,
    Sum,
    Term,
    Var,
)
from .solvers import (
    SearchBox,
    SearchResult,
    Witness,
    bounded_solve_kp,
    bounded_solve_system,
    heisenberg_reduce,
    iter_solutions,
    search_heisenberg,
    search_kp,
    search_system,
)
from .symbolic import kp_to_system, symbolic_evaluate
from .universal import (
    UniversalParams,
    jones_system,
    resource_report,
    worked_example_instance,
)

__version__ = "0.3.0"


def _configure_logging():
    # NILKNAP_LOG_INFO=1 together with NILKNAP_LOG_FILE=stdout|stderr|<file> enables output
    logger = logging.getLogger(__name__)
    if not config.log_enabled() or not config.log_destination():
        logger.addHandler(logging.NullHandler())
        return
    destination = config.log_destination()
    if destination == "stdout":
        handler = logging.StreamHandler(sys.stdout)
    elif destination == "stderr":
        handler = logging.StreamHandler(sys.stderr)
    else:
        handler = logging.FileHandler(destination)
    handler.setFormatter(logging.Formatter("[nilknap] %(levelname)s %(name)s: %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(logging.INFO)


_configure_logging()
