"""Command-line front end: ``supercut bgmc|vcsp|gen ...``.

Exit codes: 0 success, 1 engine/oracle divergence under ``--check``,
2 input error, 3 precondition error, 4 budget exceeded.
"""
from __future__ import annotations

import argparse
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import budget, io
from .approx import language_path, solve_lower_bounded, solve_with_constants
from .bgmc import brute_force_enumerate, classify_optimum, enumerate_alpha_optimal
from .classify import CLASSES, classify_boolean_s, classify_three_element_seds, language_class
from .errors import BudgetExceeded, InputError, LanguageError, PreconditionError, SupercutError
from .ext import to_ext
from .generators import random_bgmc, random_gadget_pair, random_language, random_lower_bounded
from .reductions import build_gadget_instance
from .vcsp import Mode, bnb_solve, brute_solve, fix_language

EXIT_OK, EXIT_DIVERGENCE, EXIT_INPUT, EXIT_PRECONDITION, EXIT_BUDGET = 0, 1, 2, 3, 4


class Divergence(SupercutError):
    pass


def _inputs(paths: list[str]) -> list[Path]:
    out = []
    for p in map(Path, paths):
        if p.is_dir():
            out.extend(sorted(q for q in p.iterdir() if q.suffix == ".json"))
        else:
            out.append(p)
    return out


def _alpha(text: str):
    try:
        a = to_ext(text)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InputError(f"bad alpha {text!r}") from None
    if isinstance(a, Fraction) and a >= 1:
        return a
    raise InputError("alpha must be a finite rational >= 1")


def _bounds(text: str | None):
    if text is None:
        return None
    try:
        return [int(b) for b in text.split(",") if b.strip()]
    except ValueError:
        raise InputError(f"bad bounds {text!r}") from None


# per-file tasks; top-level functions so a process pool can pickle them

def _bgmc(path, args):
    obj = io.load(path)
    if isinstance(obj, dict):
        if args.q is not None:
            obj = {**obj, "q": args.q}
        if args.p is not None:
            obj = {**obj, "p": args.p}
    return io.bgmc_from_json(obj)


def task_bgmc_classify(path, args):
    h = _bgmc(path, args)
    return io.optimum_class_to_json(classify_optimum(h))


def task_bgmc_enumerate(path, args):
    h = _bgmc(path, args)
    alpha = _alpha(args.alpha)
    if args.oracle:
        res = brute_force_enumerate(h, alpha)
    else:
        res = enumerate_alpha_optimal(h, alpha)
    if args.check:
        ref = brute_force_enumerate(h, alpha)
        if ref.solutions != res.solutions or ref.lam != res.lam:
            raise Divergence(f"{path}: engine and oracle disagree")
    return io.enumeration_to_json(res)


def _instance(path, args):
    inst = io.instance_from_json(io.load(path))
    if getattr(args, "mode", None):
        kind = args.mode.replace("-", "_")
        if kind == "lower_bounded":
            b = _bounds(args.bounds)
            if b is None:
                raise InputError("--mode lower-bounded needs --bounds")
            inst = inst.with_mode(Mode.lower_bounded(b))
        else:
            inst = inst.with_mode(Mode(kind))
    elif getattr(args, "bounds", None):
        inst = inst.with_mode(Mode.lower_bounded(_bounds(args.bounds)))
    return inst


def task_vcsp_solve(path, args):
    inst = _instance(path, args)
    method = args.solver
    if method == "auto":
        if inst.mode.kind == "plain":
            method = "bnb"
        else:
            try:
                language_path(inst.language)
                method = "lower-bounded"
            except LanguageError:
                method = "constants"
    if method == "lower-bounded":
        res = solve_lower_bounded(inst, enumerate_all=args.enumerate)
        return io.solve_to_json(res.status, res.value, res.assignment, res.enumeration if args.enumerate else None)
    if method == "constants":
        res = solve_with_constants(inst, enumerate_all=args.enumerate)
    elif method == "bnb":
        res = bnb_solve(inst, all_optima=args.enumerate)
    elif method == "brute":
        res = brute_solve(inst)
    else:
        raise InputError(f"unknown solver {method!r}")
    return io.solve_result_to_json(res, args.enumerate)


def task_vcsp_brute(path, args):
    inst = _instance(path, args)
    return io.solve_result_to_json(brute_solve(inst), True)


def task_vcsp_classify(path, args):
    lang = io.language_from_json(io.load(path))
    out = {cls: io.report_to_json(language_class(lang, cls)) for cls in CLASSES}
    if lang.domain_size == 2:
        out["boolean_verdict"] = io.verdict_to_json(classify_boolean_s(lang))
    if lang.domain_size == 3:
        out["three_element_verdict"] = io.verdict_to_json(classify_three_element_seds(lang))
    return out


def task_vcsp_fix(path, args):
    return io.language_to_json(fix_language(io.language_from_json(io.load(path))))


def task_vcsp_gadget(path, args):
    lang = io.language_from_json(io.load(args.language))
    fixed = fix_language(lang)
    obj = io.load(path)
    if "relations" in obj:
        given = io.language_from_json(obj)
        for name, rel in given.items():
            if name not in fixed or fixed[name] != rel:
                raise InputError(f"relation {name!r} is not a member of the pinned language")
    inst = io.instance_from_json(obj, fixed)
    if inst.mode.kind != "surjective":
        inst = inst.with_mode(Mode.surjective())
    g = build_gadget_instance(inst, lang)
    w = g.witness
    sidecar = {
        "case": g.case,
        "witness": {"relation": w.relation, "X": list(w.X), "Y": list(w.Y),
                    "x_blocks": [list(b) for b in w.x_blocks], "y_blocks": [list(b) for b in w.y_blocks]},
        "epsilon": io.fmt(g.epsilon),
        "omega": io.fmt(g.omega),
        "nu": io.fmt(g.nu),
        "threshold": io.fmt(g.threshold),
        "pair_coefficient": io.fmt(g.pair_coefficient),
        "offset": io.fmt(g.offset),
    }
    return {"instance": io.instance_to_json(g.instance), "sidecar": sidecar}


TASKS = {
    ("bgmc", "classify"): task_bgmc_classify,
    ("bgmc", "enumerate"): task_bgmc_enumerate,
    ("vcsp", "solve"): task_vcsp_solve,
    ("vcsp", "brute"): task_vcsp_brute,
    ("vcsp", "classify-language"): task_vcsp_classify,
    ("vcsp", "fix"): task_vcsp_fix,
    ("vcsp", "gadget"): task_vcsp_gadget,
}


def _run_one(key, path, args):
    try:
        with budget.scoped(args.budget):
            return ("ok", TASKS[key](path, args))
    except Divergence as exc:
        return ("err", EXIT_DIVERGENCE, str(exc))
    except BudgetExceeded as exc:
        return ("err", EXIT_BUDGET, str(exc))
    except PreconditionError as exc:
        return ("err", EXIT_PRECONDITION, str(exc))
    except (SupercutError, ValueError, TypeError, KeyError, IndexError) as exc:
        return ("err", EXIT_INPUT, f"{type(exc).__name__}: {exc}")


def _emit(args, payload) -> None:
    text = io.dumps(payload)
    if args.output and getattr(args, "command", None) == "gadget" and "sidecar" in payload:
        out = Path(args.output)
        out.write_text(io.dumps(payload["instance"]), encoding="utf-8")
        out.with_name(out.stem + ".sidecar.json").write_text(io.dumps(payload["sidecar"]), encoding="utf-8")
    elif args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def run_files(key, args) -> int:
    paths = _inputs(args.files)
    if not paths:
        print("error: no input files", file=sys.stderr)
        return EXIT_INPUT
    if args.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_run_one, [key] * len(paths), paths, [args] * len(paths)))
    else:
        results = [_run_one(key, p, args) for p in paths]
    code = EXIT_OK
    payload = {}
    for p, r in zip(paths, results):
        if r[0] == "ok":
            payload[str(p)] = r[1]
        else:
            print(f"error: {p}: {r[2]}", file=sys.stderr)
            code = max(code, r[1])
    if code == EXIT_OK or payload:
        if len(paths) == 1 and not Path(args.files[0]).is_dir():
            if payload:
                _emit(args, payload[str(paths[0])])
        else:
            _emit(args, payload)
    return code


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    out = Path(args.out) if args.out else None
    docs = []
    for i in range(args.count):
        if args.what == "bgmc":
            doc = io.bgmc_to_json(random_bgmc(rng, n_max=args.n_max))
        elif args.what == "vcsp":
            lang = random_language(rng, args.kind)
            doc = io.instance_to_json(random_lower_bounded(rng, lang, n_max=args.n_max))
        else:
            lang, inst = random_gadget_pair(rng, 1 + i % 2, n_max=min(args.n_max, 5))
            doc = {"language": io.language_to_json(lang), "instance": io.instance_to_json(inst)}
        docs.append(doc)
    if out is None:
        for doc in docs:
            sys.stdout.write(io.dumps(doc))
        return EXIT_OK
    out.mkdir(parents=True, exist_ok=True)
    for i, doc in enumerate(docs):
        (out / f"{args.what}_{args.seed}_{i:04d}.json").write_text(io.dumps(doc), encoding="utf-8")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="supercut", description=__doc__.splitlines()[0])
    parser.add_argument("--budget", type=int, help="evaluation budget for exhaustive sweeps (overrides SUPERCUT_BUDGET)")
    top = parser.add_subparsers(dest="group", required=True)

    def files(p):
        p.add_argument("files", nargs="+", help="JSON input files or directories")
        p.add_argument("-o", "--output", help="write JSON here instead of stdout")
        p.add_argument("--jobs", type=int, default=1, help="process files in parallel")

    bgmc = top.add_parser("bgmc", help="bounded generalised min-cut instances")
    bgmc.add_argument("--q", type=int, help="override the instance's q")
    bgmc.add_argument("--p", type=int, help="override the instance's p")
    bsub = bgmc.add_subparsers(dest="command", required=True)
    p = bsub.add_parser("classify", help="zero, positive finite, or infinite optimum")
    files(p)
    p = bsub.add_parser("enumerate", help="all alpha-optimal solutions")
    p.add_argument("--alpha", default="1")
    p.add_argument("--oracle", action="store_true", help="use the brute-force enumerator")
    p.add_argument("--check", action="store_true", help="also run the oracle and fail on any difference")
    files(p)

    vcsp = top.add_parser("vcsp", help="valued constraint satisfaction")
    vsub = vcsp.add_subparsers(dest="command", required=True)
    p = vsub.add_parser("solve", help="optimal assignment")
    p.add_argument("--mode", choices=["plain", "surjective", "lower-bounded"])
    p.add_argument("--bounds", help="comma-separated lower bounds l(0),...,l(k)")
    p.add_argument("--solver", default="auto", choices=["auto", "lower-bounded", "constants", "bnb", "brute"])
    p.add_argument("--enumerate", action="store_true", help="list all optimal assignments")
    files(p)
    p = vsub.add_parser("brute", help="exhaustive reference solver")
    p.add_argument("--mode", choices=["plain", "surjective", "lower-bounded"])
    p.add_argument("--bounds")
    files(p)
    p = vsub.add_parser("classify-language", help="class reports and verdicts")
    files(p)
    p = vsub.add_parser("fix", help="pinned language on the nonzero labels")
    files(p)
    p = vsub.add_parser("gadget", help="hardness gadget for an instance over the pinned language")
    p.add_argument("--language", required=True, help="language file of Gamma")
    files(p)

    gen = top.add_parser("gen", help="seeded random instances")
    gen.add_argument("what", choices=["bgmc", "vcsp", "gadget"])
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--kind", choices=["SDS", "SEDS"], default="SDS")
    gen.add_argument("--n-max", type=int, default=8)
    gen.add_argument("--out", help="directory for the generated files (default: stdout, one per line)")
    return parser


def _validate(args) -> None:
    if getattr(args, "alpha", None) is not None:
        _alpha(args.alpha)
    if getattr(args, "bounds", None) is not None:
        b = _bounds(args.bounds)
        if not b or any(x < 0 for x in b):
            raise InputError("bounds must be non-negative integers")
    for name in ("q", "p", "jobs", "budget", "count"):
        v = getattr(args, name, None)
        if v is not None and v < (1 if name in ("jobs", "budget") else 0):
            raise InputError(f"--{name} out of range")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.group == "gen":
        return cmd_gen(args)
    return run_files((args.group, args.command), args)


if __name__ == "__main__":
    sys.exit(main())
