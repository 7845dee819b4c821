"""Batch front-end: check, diff, reduce, eval, laws, theorems.

Exit codes: 0 success, 1 type or program-parse error, 2 fuel exhausted,
3 model validation error, 4 law or theorem violation, 5 usage error.
Reports are deterministic for fixed inputs and seed, and all rationals are
printed in reduced p/q form.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .ccdc import LawConfig, check_axioms
from .gen import (
    DEFAULT_CONTEXT,
    default_pcs_model,
    default_poly_model,
    generate_typed_terms,
    law_generators,
)
from .objects import atom_from_str, atom_key, atom_str, space_str, web
from .parser import ParseError, parse_program
from .pcs import (
    ModelError,
    PcsInstance,
    build_symbol_matrix,
    corrupted_sigma_instance,
    membership,
    parse_model_file,
)
from .rewrite import DEFAULT_FUEL, FuelExhausted, normalize
from .semantics import (
    Model,
    ModelValidationError,
    check_diff_theorem,
    check_invariance,
    interp_term,
)
from .syntax import (
    GroundType,
    ProductType,
    Type,
    TypeCheckError,
    d_type,
    differentiate,
    term_str,
    type_str,
    typecheck,
)

EXIT_OK = 0
EXIT_TYPE = 1
EXIT_FUEL = 2
EXIT_MODEL = 3
EXIT_VIOLATION = 4
EXIT_USAGE = 5


def _default_fuel() -> int:
    raw = os.environ.get("COHDIFF_FUEL")
    if raw is None:
        return DEFAULT_FUEL
    try:
        fuel = int(raw)
    except ValueError:
        raise SystemExit(f"COHDIFF_FUEL must be an integer, got {raw!r}")
    if fuel < 1:
        raise SystemExit("COHDIFF_FUEL must be >= 1")
    return fuel


def _load_program(path: str, out):
    with open(path, encoding="utf-8") as handle:
        return parse_program(handle.read())


def _named_term(program, name: str):
    if name not in program.terms:
        raise KeyError(name)
    return program.terms[name]


def cmd_check(args, out) -> int:
    program = _load_program(args.file, out)
    for name, (ctx, t) in program.terms.items():
        ty = typecheck(program.signature, ctx, t)
        print(f"term {name} : {type_str(ty)}", file=out)
    return EXIT_OK


def cmd_diff(args, out) -> int:
    program = _load_program(args.file, out)
    ctx, t = _named_term(program, args.term)
    if all(v != args.var for v, _ in ctx):
        print(f"error: variable {args.var!r} not in the context of {args.term!r}",
              file=out)
        return EXIT_TYPE
    typecheck(program.signature, ctx, t)
    dt = differentiate(t, args.var)
    dctx = tuple(
        (v, d_type(ty) if v == args.var else ty) for v, ty in ctx
    )
    ty = typecheck(program.signature, dctx, dt)
    print(f"d {args.term} / d {args.var} = {term_str(dt)}", file=out)
    print(f"type : {type_str(ty)}", file=out)
    return EXIT_OK


def cmd_reduce(args, out) -> int:
    program = _load_program(args.file, out)
    ctx, t = _named_term(program, args.term)
    typecheck(program.signature, ctx, t)
    fuel = args.fuel if args.fuel is not None else _default_fuel()
    try:
        final, trace = normalize(t, fuel)
    except FuelExhausted as exc:
        if args.trace:
            for line in exc.trace.render_lines():
                print(line, file=out)
        print(f"fuel exhausted after {len(exc.trace.steps)} steps", file=out)
        return EXIT_FUEL
    print(f"start : {trace.initial.render()}", file=out)
    if args.trace:
        for line in trace.render_lines():
            print(line, file=out)
    print(f"normal : {final.render()} ({len(trace.steps)} steps)", file=out)
    return EXIT_OK


def _build_model_from_files(program, model_path: str) -> Model:
    inst = PcsInstance()
    parsed = parse_model_file(open(model_path, encoding="utf-8").read())

    def interp_ground(name: str):
        if name not in parsed.spaces:
            raise ModelError(f"ground type {name!r} not declared in the model")
        return parsed.spaces[name]

    def space_of(ty: Type):
        if isinstance(ty, GroundType):
            space = interp_ground(ty.symbol)
            for _ in range(ty.depth):
                space = inst.d_object(space)
            return space
        assert isinstance(ty, ProductType)
        return inst.product(space_of(ty.left), space_of(ty.right))

    symbols = {}
    for name, ftype in program.signature.decls.items():
        if name not in parsed.interps:
            raise ModelError(f"symbol {name!r} has no interp block")
        slots = [space_of(a) for a in ftype.args]
        cod = space_of(ftype.result)
        symbols[name] = build_symbol_matrix(
            inst, slots, cod, parsed.interps[name], name
        )
    grounds = dict(parsed.spaces)
    return Model(inst, grounds, program.signature, symbols)


def _parse_point(text: str) -> dict:
    point = {}
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if "=" not in piece:
            raise ModelError(f"bad point entry {piece!r}, want atom=p/q")
        path, _, value = piece.partition("=")
        num, _, den = value.partition("/")
        frac = Fraction(int(num), int(den)) if den else Fraction(int(num))
        point[atom_from_str(path.strip())] = frac
    return point


def cmd_eval(args, out) -> int:
    program = _load_program(args.file, out)
    model = _build_model_from_files(program, args.model)
    ctx, t = _named_term(program, args.term)
    ty = typecheck(program.signature, ctx, t)
    matrix = interp_term(model, ctx, t)
    print(f"term {args.term} : {type_str(ty)}", file=out)
    print(f"domain : {space_str(matrix.dom)}", file=out)
    print(matrix.render(), file=out)
    if args.at is not None:
        point = _parse_point(args.at)
        for atom in point:
            if atom not in set(web(matrix.dom)):
                raise ModelError(
                    f"point atom outside the context web: {atom_str(atom)}"
                )
        if not membership(matrix.dom, point):
            print("warning: point is outside the domain space", file=out)
        value = matrix.eval(point)
        if value:
            for atom in sorted(value, key=atom_key):
                print(f"value {atom_str(atom)} = {value[atom]}", file=out)
        else:
            print("value = 0", file=out)
    return EXIT_OK


def _make_backend(name: str):
    if name == "pcs":
        model = default_pcs_model()
    elif name == "poly":
        model = default_poly_model()
    elif name == "pcs-corrupt-sigma":
        from .gen import _build_model, truncated_nat

        model = _build_model(corrupted_sigma_instance(), truncated_nat())
    else:
        raise ValueError(name)
    return model


def cmd_laws(args, out) -> int:
    model = _make_backend(args.backend)
    gens, multis, objs = law_generators(model, seed=args.seed)
    report = check_axioms(
        model.inst, gens, multis, objs, LawConfig(args.seed, args.cases)
    )
    for line in report.render_lines():
        print(line, file=out)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_theorems(args, out) -> int:
    backends = ["pcs", "poly"] if args.backend == "both" else [args.backend]
    fuel = args.fuel if args.fuel is not None else _default_fuel()
    models = {name: _make_backend(name) for name in backends}
    names = [v for v, _ in DEFAULT_CONTEXT]
    ok = True
    for i, (ctx, t, _) in enumerate(
        generate_typed_terms(args.cases, seed=args.seed)
    ):
        x = names[i % len(names)]
        for name in backends:
            verdict = check_diff_theorem(models[name], ctx, t, x)
            if not verdict.holds or args.verbose:
                print(f"[{name}] {verdict.render()}", file=out)
            ok = ok and verdict.holds
        if "pcs" in models:
            verdict = check_invariance(models["pcs"], ctx, t, fuel)
            if not verdict.holds or args.verbose:
                print(f"[pcs] {verdict.render()}", file=out)
            ok = ok and verdict.holds
    print(
        f"checked {args.cases} terms: "
        + ("all theorems hold" if ok else "violations found"),
        file=out,
    )
    return EXIT_OK if ok else EXIT_VIOLATION


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cohdiff",
        description="Coherent differentiation: typecheck, differentiate, "
        "reduce, evaluate, and verify the axioms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and typecheck a program file")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("diff", help="differentiate a named term")
    p.add_argument("file")
    p.add_argument("--term", required=True)
    p.add_argument("--var", required=True)
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("reduce", help="normalize a named term")
    p.add_argument("file")
    p.add_argument("--term", required=True)
    p.add_argument("--fuel", type=int, default=None)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("eval", help="interpret a term against a PCS model")
    p.add_argument("file")
    p.add_argument("--model", required=True)
    p.add_argument("--term", required=True)
    p.add_argument("--at", default=None, help="point, e.g. 'L.0=1/2,R.1=1/3'")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("laws", help="run the axiom suite on a backend")
    p.add_argument(
        "--backend",
        choices=["pcs", "poly", "pcs-corrupt-sigma"],
        default="pcs",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=100)
    p.set_defaults(func=cmd_laws)

    p = sub.add_parser(
        "theorems", help="differential and invariance theorems on random terms"
    )
    p.add_argument("--backend", choices=["pcs", "poly", "both"], default="both")
    p.add_argument("--cases", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fuel", type=int, default=None)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_theorems)

    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if getattr(args, "fuel", None) is not None and args.fuel < 1:
        print("error: fuel must be >= 1", file=out)
        return EXIT_USAGE
    if getattr(args, "cases", None) is not None and args.cases < 1:
        print("error: case count must be >= 1", file=out)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=out)
        return EXIT_TYPE
    except TypeCheckError as exc:
        print(f"type error: {exc}", file=out)
        return EXIT_TYPE
    except (ModelError, ModelValidationError) as exc:
        print(f"model error: {exc}", file=out)
        return EXIT_MODEL
    except KeyError as exc:
        print(f"error: no term named {exc.args[0]!r}", file=out)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=out)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
