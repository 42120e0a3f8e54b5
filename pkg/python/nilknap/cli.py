"""``nilknap`` command line: compile, derive, solve, verify, embed and generate systems."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import config
from .compiler import CommutatorPool, compile_quadratic, compile_terms, degree_reduce, nonneg_encode, system_term_equations
from .datatypes import alloc_mode, encode_mode, solve_strategy
from .embed import rho
from .errors import NilknapError, error_code
from .formats import (
    format_instance,
    format_matrices,
    format_system,
    looks_like_instance,
    parse_instance,
    parse_system,
    parse_witness,
)
from .group import evaluate_kp, inverse, multiply
from .solvers import SearchBox, search_heisenberg, search_kp, search_system
from .symbolic import eps_names, kp_to_system
from .universal import UniversalParams, jones_system, resource_report

logger = logging.getLogger(__name__)

_VERBOSE_HANDLER = "nilknap-verbose"


def _read(path):
    return Path(path).read_text()


def _write(path, text, out):
    if path is None or path == "-":
        out.write(text)
    else:
        Path(path).write_text(text)


def _reduce(args, out):
    system = parse_system(_read(args.input))
    if args.positive or args.nonnegative:
        system = nonneg_encode(system, encode_mode.POSITIVE if args.positive else encode_mode.NONNEGATIVE)
    pool = CommutatorPool(args.mode)
    if args.term_mode:
        instance = compile_terms(system_term_equations(system), pool, system.variables)
    else:
        instance = compile_quadratic(degree_reduce(system), pool)
    _write(args.output, format_instance(instance), out)
    if args.output not in (None, "-"):
        out.write(f"rank {instance.rank}, {instance.k} inputs, {len(instance.allocations)} basic commutators\n")
        for name, index in instance.variable_map:
            out.write(f"  {name}: g{index + 1}\n")
    return 0


def _derive(args, out):
    instance = parse_instance(_read(args.input))
    _write(args.output, format_system(kp_to_system(instance)), out)
    return 0


def _solve(args, out):
    text = _read(args.input)
    jobs = args.jobs or config.default_jobs()
    if looks_like_instance(text):
        instance = parse_instance(text)
        if instance.variable_map and args.strategy == solve_strategy.DERIVED.value:
            box = SearchBox.induced(instance, args.bound)
        else:
            box = SearchBox.for_instance(instance, args.bound)
        result = search_kp(instance, box, jobs, args.strategy)
        out.write(result.format() + "\n")
        if result.witness is not None and instance.variable_map:
            mapped = instance.witness_for(result.witness.values())
            out.write(",".join(f"{name}={mapped[name]}" for name, _ in instance.variable_map) + "\n")
        return 0
    system = parse_system(text)
    result = search_system(system, SearchBox.symmetric(system.variables, args.bound), jobs)
    out.write(result.format() + "\n")
    return 0


def _verify(args, out):
    instance = parse_instance(_read(args.input))
    eps = parse_witness(args.witness, eps_names(instance.k))
    value, accepted = evaluate_kp(instance, eps)
    out.write(("true" if accepted else "false") + "\n")
    out.write(f"value: {value}\n")
    out.write(f"residual: {multiply(inverse(value), instance.target)}\n")
    return 0


def _embed(args, out):
    instance = parse_instance(_read(args.input))
    labelled = [(f"g{i}", rho(g).rows()) for i, g in enumerate(instance.inputs, start=1)]
    labelled.append(("g", rho(instance.target).rows()))
    _write(args.output, format_matrices(labelled), out)
    return 0


def _jones(args, out):
    params = UniversalParams(args.x, args.z, args.y, args.u, args.toy_exponent)
    system = jones_system(params)
    _write(args.output, format_system(system), out)
    if args.report:
        twin = system
        if args.toy_exponent is None:
            # constant values do not change the allocation counts
            twin = jones_system(UniversalParams(args.x, args.z, args.y, args.u, 1))
            out.write("counts taken on the toy_exponent=1 system\n")
        compiled = compile_quadratic(twin, CommutatorPool(args.mode))
        for line in resource_report(twin, compiled).lines():
            out.write(line + "\n")
    return 0


def _heis(args, out):
    instance = parse_instance(_read(args.input))
    reduction, result = search_heisenberg(instance, args.bound)
    out.write(f"residual: {reduction.equation.to_text(reduction.parametrization.parameters)}\n")
    out.write("parametrization:\n")
    for line in reduction.parametrization.lines():
        out.write(f"  {line}\n")
    out.write(result.format() + "\n")
    return 0


def _parser():
    parser = argparse.ArgumentParser(prog="nilknap", description=__doc__)
    parser.add_argument("--verbose", action="store_true", help="log pipeline stages to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="compile a Diophantine system into a knapsack instance")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output")
    p.add_argument("--term-mode", action="store_true", help="follow term trees instead of the quadratic layout")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--positive", action="store_true", help="variables range over positive integers")
    group.add_argument("--nonnegative", action="store_true", help="variables range over nonnegative integers")
    p.add_argument("--mode", choices=[m.value for m in alloc_mode], default=alloc_mode.FRESH.value)
    p.set_defaults(run=_reduce)

    p = sub.add_parser("derive", help="derive the Diophantine system of a knapsack instance")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output")
    p.set_defaults(run=_derive)

    p = sub.add_parser("solve", help="bounded search on a system or instance file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--strategy", choices=[s.value for s in solve_strategy], default=solve_strategy.DERIVED.value)
    p.set_defaults(run=_solve)

    p = sub.add_parser("verify", help="evaluate an instance at a witness")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--witness", required=True)
    p.set_defaults(run=_verify)

    p = sub.add_parser("embed", help="unitriangular matrices of every input and the target")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output")
    p.set_defaults(run=_embed)

    p = sub.add_parser("jones", help="write the universal system")
    for name in ("x", "z", "y", "u"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--toy-exponent", type=int, default=None)
    p.add_argument("--out", dest="output")
    p.add_argument("--report", action="store_true")
    p.add_argument("--mode", choices=[m.value for m in alloc_mode], default=alloc_mode.FRESH.value)
    p.set_defaults(run=_jones)

    p = sub.add_parser("heis", help="rank 2 reduction to one quadratic equation")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.set_defaults(run=_heis)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return int(err.code or 0)
    if args.verbose:
        root = logging.getLogger("nilknap")
        if not any(h.get_name() == _VERBOSE_HANDLER for h in root.handlers):
            handler = logging.StreamHandler(sys.stderr)
            handler.set_name(_VERBOSE_HANDLER)
            handler.setFormatter(logging.Formatter("[nilknap] %(levelname)s %(name)s: %(message)s"))
            root.addHandler(handler)
        root.setLevel(logging.INFO)
    if getattr(args, "bound", 0) is not None and getattr(args, "bound", 0) < 0:
        parser.print_usage(sys.stderr)
        sys.stderr.write("nilknap: error: --bound must be nonnegative\n")
        return 2
    try:
        return args.run(args, out)
    except NilknapError as err:
        sys.stderr.write(f"nilknap: {err}\n")
        return 1 if err.code is error_code.INVARIANT_VIOLATION else 2
    except OSError as err:
        sys.stderr.write(f"nilknap: {err}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
