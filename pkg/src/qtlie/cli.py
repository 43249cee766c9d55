"""Command-line surface.

Verbs: torus info, bracket eval, verify, module build|verify|decompose|
roundtrip|compare, export, cache.  Exit codes: 0 pass, 1 fail, 2 config error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .cuspidal import (
    OperatorFamily,
    build_module,
    coefficients_to_representation,
    dump_module,
    extract_coefficients,
    modules_equal_on_box,
    tensor_field_module,
)
from .cyclo import parse_scalar
from .derivations import bracket_d, bracket_witt, parse_d_element, parse_witt_element
from .errors import ParseError, QtlieError
from .jetalg import bracket_jets, cache_structure_constants, parse_jet_element
from .repn import (
    GLdGLNModule,
    decompose_tensor,
    graded_regular_glN,
    natural_gld,
    pullback,
    rep_from_dict,
    rep_to_dict,
    trivial_gld,
    verify_representation,
)
from .torus import TorusSpec, center_generator_names, class_representatives, load_torus
from .verify import run_suites, reports_to_json
from .xmatrix import x_power


def _load_spec(path: str) -> TorusSpec:
    return load_torus(path)


def _alpha_from_arg(spec: TorusSpec, text: str | None):
    if not text:
        return (0,) * spec.d
    parts = text.split(",")
    if len(parts) != spec.d:
        raise ParseError(f"alpha needs {spec.d} entries")
    return tuple(parse_scalar(p, spec.field) for p in parts)


def _vw_from_name(spec: TorusSpec, name: str) -> GLdGLNModule:
    wmats, wclasses = graded_regular_glN(spec)
    if name == "natural-regular":
        return GLdGLNModule(spec, natural_gld(spec), wmats, wclasses)
    if name == "trivial-regular":
        return GLdGLNModule(spec, trivial_gld(spec), wmats, wclasses)
    raise ParseError(f"unknown module preset {name!r} (use natural-regular or trivial-regular)")


def cmd_torus_info(args) -> int:
    spec = _load_spec(args.spec)
    print(f"d={spec.d} z={spec.z} k={list(spec.k)} L={spec.L}")
    print(f"N={spec.N}, |Gamma|={spec.N ** 2}")
    if spec.z:
        parts = []
        for i in range(spec.z):
            parts.append(f"{spec.k[i]}Z x {spec.k[i]}Z")
        parts.extend("Z" for _ in range(spec.d - 2 * spec.z))
        print(f"R = {' x '.join(parts)}")
    else:
        print(f"commutative torus, R=Z^{spec.d}")
    print(f"center generated by: {', '.join(center_generator_names(spec))}")
    print(f"class representatives: {len(class_representatives(spec))}")
    return 0


def cmd_bracket_eval(args) -> int:
    spec = _load_spec(args.spec)
    if args.algebra == "d":
        a = parse_d_element(spec, args.left)
        b = parse_d_element(spec, args.right)
        print(bracket_d(spec, a, b))
    elif args.algebra == "wd":
        a = parse_witt_element(spec.field, args.left)
        b = parse_witt_element(spec.field, args.right)
        print(bracket_witt(a, b))
    elif args.algebra == "gtilde":
        a = parse_jet_element(spec, args.left)
        b = parse_jet_element(spec, args.right)
        print(bracket_jets(spec, a, b))
    else:
        raise ParseError(f"unknown algebra {args.algebra!r}")
    return 0


def cmd_verify(args) -> int:
    spec = _load_spec(args.spec)
    config = {}
    if args.box is not None:
        config["box"] = args.box
    if args.degree is not None:
        config["degree"] = args.degree
    if args.samples is not None:
        config["samples"] = args.samples
    config["seed"] = args.seed
    config["flip"] = args.flip_sigma
    suites = args.suite or ["all"]
    reports = run_suites(spec, suites, config)
    text = reports_to_json(reports, spec, args.seed)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    for report in reports:
        print(report.summary())
    return 0 if all(r.passed for r in reports) else 1


def cmd_export(args) -> int:
    spec = _load_spec(args.spec)
    exp = tuple(int(x) for x in args.exp.split(","))
    if len(exp) != spec.d:
        raise ParseError(f"exponent needs {spec.d} coordinates")
    mat = x_power(spec, exp)
    payload = {
        "L": spec.L,
        "rows": mat.rows,
        "cols": mat.cols,
        "entries": mat.serialize(),
    }
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return 0


def cmd_cache(args) -> int:
    spec = _load_spec(args.spec)
    directory = args.dir or os.environ.get("QTL_CACHE_DIR") or ".qtl-cache"
    path, hit = cache_structure_constants(spec, args.max_degree, directory)
    print(f"{'cache hit' if hit else 'computed'}: {path}")
    return 0


def _write_json(path: str, payload: dict):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def cmd_module(args) -> int:
    if args.action == "build":
        spec = _load_spec(args.spec)
        alpha = _alpha_from_arg(spec, args.alpha)
        vw = _vw_from_name(spec, args.vw)
        if args.tensor_field:
            module = tensor_field_module(spec, alpha, vw, box=args.box)
        else:
            module = build_module(spec, alpha, pullback(spec, vw), box=args.box)
        payload = dump_module(module, args.box)
        if args.out:
            _write_json(args.out, payload)
            print(f"wrote module dump to {args.out}")
        else:
            print(json.dumps(payload, sort_keys=True))
        return 0
    if args.action == "verify":
        with open(args.rep, "r", encoding="utf-8") as fh:
            spec, rep, _ = rep_from_dict(json.load(fh))
        report = verify_representation(spec, rep, args.degree or max(rep.cutoff, 1))
        print(f"representation check: {'PASS' if report.passed else 'FAIL'} "
              f"({report.cases} pairs)")
        if not report.passed:
            print(f"first failure: {report.first_failure}")
            return 1
        return 0
    if args.action == "decompose":
        with open(args.rep, "r", encoding="utf-8") as fh:
            spec, rep, _ = rep_from_dict(json.load(fh))
        vw, _phi = decompose_tensor(spec, rep, seed=args.seed)
        print(f"factors: dim V = {vw.dim_V}, dim W = {vw.dim_W}")
        if args.out:
            payload = rep_to_dict(pullback(spec, vw))
            _write_json(args.out, payload)
            print(f"wrote factored representation to {args.out}")
        return 0
    if args.action == "roundtrip":
        spec = _load_spec(args.spec)
        alpha = _alpha_from_arg(spec, args.alpha)
        vw = _vw_from_name(spec, args.vw)
        rep = pullback(spec, vw)
        module = build_module(spec, alpha, rep, box=(args.degree or 3) + 1)
        family = OperatorFamily(module, degree_bound=args.degree or 3)
        coeffs = extract_coefficients(family, spec, alpha)
        back = coefficients_to_representation(spec, coeffs)
        ok = back == rep
        print(f"roundtrip: {'PASS' if ok else 'FAIL'}")
        return 0 if ok else 1
    if args.action == "compare":
        if args.dump_a and args.dump_b:
            with open(args.dump_a, "r", encoding="utf-8") as fh:
                da = json.load(fh)
            with open(args.dump_b, "r", encoding="utf-8") as fh:
                db = json.load(fh)
            ok = da == db
        else:
            spec = _load_spec(args.spec)
            alpha = _alpha_from_arg(spec, args.alpha)
            vw = _vw_from_name(spec, args.vw)
            built = build_module(spec, alpha, pullback(spec, vw), box=args.box)
            direct = tensor_field_module(spec, alpha, vw, box=args.box)
            ok = modules_equal_on_box(built, direct, args.box)
        print(f"compare: {'EQUAL' if ok else 'DIFFERENT'}")
        return 0 if ok else 1
    raise ParseError(f"unknown module action {args.action!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtlie",
                                     description="Exact quantum-torus Lie algebra toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_torus = sub.add_parser("torus", help="torus utilities")
    torus_sub = p_torus.add_subparsers(dest="action", required=True)
    p_info = torus_sub.add_parser("info", help="print derived torus data")
    p_info.add_argument("spec")
    p_info.set_defaults(fn=cmd_torus_info)

    p_bracket = sub.add_parser("bracket", help="bracket evaluation")
    bracket_sub = p_bracket.add_subparsers(dest="action", required=True)
    p_eval = bracket_sub.add_parser("eval", help="evaluate a bracket of two elements")
    p_eval.add_argument("--spec", required=True)
    p_eval.add_argument("--algebra", default="d", choices=["d", "wd", "gtilde"])
    p_eval.add_argument("left")
    p_eval.add_argument("right")
    p_eval.set_defaults(fn=cmd_bracket_eval)

    p_verify = sub.add_parser("verify", help="run verification suites")
    p_verify.add_argument("--spec", required=True)
    p_verify.add_argument("--suite", action="append",
                          help="suite name (repeatable); default: all")
    p_verify.add_argument("--box", type=int)
    p_verify.add_argument("--degree", type=int)
    p_verify.add_argument("--samples", type=int)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--flip-sigma", action="store_true",
                          help="swap the pairing arguments (must fail)")
    p_verify.add_argument("--out", help="write the JSON report here")
    p_verify.set_defaults(fn=cmd_verify)

    p_export = sub.add_parser("export", help="export a class matrix as JSON")
    p_export.add_argument("--spec", required=True)
    p_export.add_argument("--exp", required=True, help="comma-separated exponent")
    p_export.add_argument("--out")
    p_export.set_defaults(fn=cmd_export)

    p_cache = sub.add_parser("cache", help="persist jet-algebra structure constants")
    p_cache.add_argument("--spec", required=True)
    p_cache.add_argument("--max-degree", type=int, default=3)
    p_cache.add_argument("--dir", help="cache directory (or QTL_CACHE_DIR)")
    p_cache.set_defaults(fn=cmd_cache)

    p_module = sub.add_parser("module", help="module operations")
    p_module.add_argument("action",
                          choices=["build", "verify", "decompose", "roundtrip", "compare"])
    p_module.add_argument("--spec")
    p_module.add_argument("--rep", help="representation file (verify/decompose)")
    p_module.add_argument("--alpha", help="comma-separated weight offset")
    p_module.add_argument("--vw", default="natural-regular",
                          help="module preset: natural-regular or trivial-regular")
    p_module.add_argument("--tensor-field", action="store_true",
                          help="build the closed-form tensor-field module")
    p_module.add_argument("--box", type=int, default=2)
    p_module.add_argument("--degree", type=int)
    p_module.add_argument("--seed", type=int, default=1)
    p_module.add_argument("--out")
    p_module.add_argument("--dump-a")
    p_module.add_argument("--dump-b")
    p_module.set_defaults(fn=cmd_module)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ParseError, FileNotFoundError, KeyError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except QtlieError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
