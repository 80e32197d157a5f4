"""``gind`` command line: vector norms, g-ind norms and the theorem checks.

Exit codes: 0 on success (a negative verdict is still a result), 1 when a
theorem check fails, 2 on bad input.
"""

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import theorems as T
from .core import CLASSICAL_TAGS, gind, ratio, submult_defect
from .errors import (
    BudgetTooSmall,
    ConvergenceFailure,
    DegenerateWitness,
    DimensionMismatch,
    GindError,
    IndexOutOfRange,
    InvalidExponent,
    ParseError,
    SingularMatrix,
    ZeroVector,
)
from .norms import (
    GRAMMAR,
    dual_norm_eval,
    dual_vector,
    load_matrix,
    norm_eval,
    parse_norm_spec,
    spec_to_text,
    vector_from_json,
    vector_to_json,
)
from .report import Witness
from .verify import verify_all

INPUT_ERRORS = (ParseError, DimensionMismatch, InvalidExponent, IndexOutOfRange,
                SingularMatrix, ZeroVector, BudgetTooSmall, OSError, ValueError)

GRAMMAR_HELP = f"norm spec grammar: {GRAMMAR}"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}\n{GRAMMAR_HELP}", file=sys.stderr)
        raise SystemExit(2)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--matrix", action="append", default=[], help="matrix JSON file (repeatable)")
    common.add_argument("--from", dest="from_", action="append", default=[], help="domain norm spec")
    common.add_argument("--to", action="append", default=[], help="codomain norm spec")
    common.add_argument("--n", type=int, default=None, help="dimension when not implied")
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--budget", type=int, default=None)
    common.add_argument("--tol", type=float, default=None, help="override check tolerances")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", type=Path, default=None, help="write the report here")
    common.add_argument("--x", default=None, help="vector as JSON list or path to a JSON file")
    common.add_argument("--oracle", default=None, help=f"matrix norm tag: {', '.join(CLASSICAL_TAGS)}")
    common.add_argument("--real", action="store_true", help="maximize over real vectors only")

    parser = _Parser(prog="gind", description=__doc__.splitlines()[0], epilog=GRAMMAR_HELP)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "vecnorm": "evaluate ||x|| (--from, --x)",
        "dual": "dual vector and dual norm of x (--from, --x)",
        "gind": "bounds on ||A||_{from,to} (--matrix, --from, --to)",
        "ratio": "R = max ||x||_from / ||x||_to (--from, --to, --n)",
        "algebra-check": "is ||.||_{from,to} submultiplicative?",
        "min-scale": "smallest lambda making lambda ||.||_{from,to} an algebra norm",
        "congruent": "gi-congruence of two pairs (--from/--to given twice)",
        "extremal": "extremal ratio witness (--from n1 --to n2 --from n3 --to n4)",
        "unitary-probe": "probe unitary invariance of ||.||_{from,to}",
        "transformed-check": "||A||_{K,L} = ||L A K^-1|| (--matrix A K L)",
        "recover": "recover vector norms from a matrix norm oracle",
        "defect": "sampled submultiplicativity defect (--oracle or --from/--to)",
        "verify-all": "run every theorem check over the test family",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text, epilog=GRAMMAR_HELP)
    return parser


# ---- input helpers ------------------------------------------------------

def _one(values, flag):
    if len(values) != 1:
        raise UsageError(f"{flag} must be given exactly once")
    return values[0]


def _specs(values, flag, count):
    if len(values) != count:
        raise UsageError(f"{flag} must be given {count} time(s), got {len(values)}")
    return [parse_norm_spec(v, base_dir=Path.cwd()) for v in values]


def _vector(text):
    if text is None:
        raise UsageError("--x is required")
    path = Path(text)
    obj = json.loads(path.read_text(encoding="utf-8")) if path.is_file() else json.loads(text)
    return vector_from_json(obj)


def _dim(args, *specs):
    dims = {s.dim for s in specs if s.dim is not None}
    if args.n is not None:
        dims.add(args.n)
    if len(dims) > 1:
        raise DimensionMismatch(f"inconsistent dimensions {sorted(dims)}")
    if not dims:
        raise UsageError("dimension is not implied by the specs; pass --n")
    n = dims.pop()
    if n < 1:
        raise DimensionMismatch("--n must be positive")
    return n


def _count(value, default, flag):
    value = default if value is None else value
    if value < 0:
        raise UsageError(f"{flag} must be >= 0")
    return value


class _Sized:
    """Adapter so a matrix takes part in dimension checks like a spec."""

    def __init__(self, A):
        self.dim = np.asarray(A).shape[0]


# ---- subcommands ----------------------------------------------------------
# each returns (inputs, result, witnesses, method, tolerance, passed)

def _texts(specs):
    return [spec_to_text(s) for s in specs]


def _report_payload(rep, tol):
    if tol is not None:
        rep = rep.with_tolerance(tol)
    result = {"predicted": rep.predicted, "achieved": rep.achieved, "passed": rep.passed,
              "checks": [c.to_json() for c in rep.checks]}
    if rep.verdict is not None:
        result["verdict"] = rep.verdict
    if rep.details:
        result["details"] = rep.details
    return rep, result


def cmd_vecnorm(args):
    (d,) = _specs(args.from_, "--from", 1)
    x = _vector(args.x)
    v = norm_eval(d, x)
    return ({"from": spec_to_text(d), "x": vector_to_json(x)}, {"value": v},
            [Witness("x", x, v, (d,))], None, None, True)


def cmd_dual(args):
    (d,) = _specs(args.from_, "--from", 1)
    x = _vector(args.x)
    dv = dual_vector(d, x)
    result = {"y0": vector_to_json(dv.y0), "attained": dv.attained,
              "dual_norm_of_x": dual_norm_eval(d, x), "dual_norm_of_y0": dual_norm_eval(d, dv.y0)}
    return {"from": spec_to_text(d), "x": vector_to_json(x)}, result, [Witness("y0", dv.y0)], None, None, True


def cmd_gind(args):
    (d,) = _specs(args.from_, "--from", 1)
    (c,) = _specs(args.to, "--to", 1)
    A = load_matrix(_one(args.matrix, "--matrix"))
    _dim(args, d, c, _Sized(A))
    r = gind(A, d, c, args.seed, real=args.real)
    result = {"lower": r.lower, "upper": r.upper, "exact": r.exact}
    return ({"from": spec_to_text(d), "to": spec_to_text(c), "matrix": _one(args.matrix, "--matrix"),
             "real": args.real},
            result, [Witness("x", r.witness, norm_eval(d, r.witness), (d,))], r.method, None, True)


def cmd_ratio(args):
    (i,) = _specs(args.from_, "--from", 1)
    (j,) = _specs(args.to, "--to", 1)
    n = _dim(args, i, j)
    r = ratio(i, j, args.seed, n)
    result = {"value": r.upper, "lower": r.lower, "upper": r.upper}
    return ({"from": spec_to_text(i), "to": spec_to_text(j), "n": n}, result,
            [Witness("x", r.witness)], r.method, None, True)


def _theorem(rep, tol):
    rep, result = _report_payload(rep, tol)
    return rep.inputs, result, list(rep.witnesses), None, rep.tolerance, rep.passed


def cmd_algebra_check(args):
    (d,) = _specs(args.from_, "--from", 1)
    (c,) = _specs(args.to, "--to", 1)
    n = _dim(args, d, c)
    return _theorem(T.algebra_norm_test(d, c, args.seed, n, samples=_count(args.trials, 1000, "--trials")),
                    args.tol)


def cmd_min_scale(args):
    (d,) = _specs(args.from_, "--from", 1)
    (c,) = _specs(args.to, "--to", 1)
    n = _dim(args, d, c)
    rep = T.min_algebra_scale_report(d, c, args.seed, n, samples=_count(args.trials, 500, "--trials"))
    inputs, result, w, m, tol, ok = _theorem(rep, args.tol)
    result["value"] = rep.details["lambda"]
    return inputs, result, w, m, tol, ok


def cmd_congruent(args):
    a1, a2 = _specs(args.from_, "--from", 2)
    b1, b2 = _specs(args.to, "--to", 2)
    n = _dim(args, a1, a2, b1, b2)
    rep = T.congruence_report((a1, b1), (a2, b2), args.seed, n, trials=_count(args.trials, 200, "--trials"))
    return _theorem(rep, args.tol)


def cmd_extremal(args):
    n1, n3 = _specs(args.from_, "--from", 2)
    n2, n4 = _specs(args.to, "--to", 2)
    n = _dim(args, n1, n2, n3, n4)
    rep = T.extremal_ratio_witness(n1, n2, n3, n4, args.seed, n, samples=_count(args.trials, 100, "--trials"))
    return _theorem(rep, args.tol)


def cmd_unitary_probe(args):
    (d,) = _specs(args.from_, "--from", 1)
    (c,) = _specs(args.to, "--to", 1)
    n = _dim(args, d, c)
    rep = T.unitary_invariance_probe(d, c, _count(args.trials, 100, "--trials"), args.seed, n)
    return _theorem(rep, args.tol)


def cmd_transformed_check(args):
    if len(args.matrix) != 3:
        raise UsageError("--matrix must be given three times: A, K, L")
    (d,) = _specs(args.from_, "--from", 1)
    (c,) = _specs(args.to, "--to", 1)
    A, K, L = (load_matrix(p) for p in args.matrix)
    rep = T.transformed_gind_check(A, K, L, d, c, args.seed)
    inputs, result, w, m, tol, ok = _theorem(rep, args.tol)
    inputs = dict(inputs, matrices=args.matrix)
    return inputs, result, w, m, tol, ok


def _oracle(args):
    if args.oracle is not None:
        if args.from_ or args.to:
            raise UsageError("give either --oracle or --from/--to, not both")
        if args.oracle not in CLASSICAL_TAGS:
            raise UsageError(f"--oracle must be one of {', '.join(CLASSICAL_TAGS)}")
        return args.oracle, ()
    (d,) = _specs(args.from_, "--from", 1)
    (c,) = _specs(args.to, "--to", 1)
    return (d, c), (d, c)


def cmd_recover(args):
    if args.oracle is None and not args.from_:
        args.oracle = "S"
    oracle, specs = _oracle(args)
    n = _dim(args, *specs)
    budget = args.budget if args.budget is not None else 10_000
    rec = T.recover_vector_norms(n, oracle, budget, args.seed)
    inputs, result, w, m, tol, ok = _theorem(rec.report, args.tol)
    result["lambda"] = rec.lam
    return inputs, result, w, m, tol, ok


def cmd_defect(args):
    oracle, specs = _oracle(args)
    n = _dim(args, *specs)
    trials = _count(args.trials, 1000, "--trials")
    if trials < 1:
        raise UsageError("--trials must be >= 1")
    est = submult_defect(oracle, n, trials, args.seed)
    name = oracle if isinstance(oracle, str) else _texts(oracle)
    A, B = est.witness_pair
    return ({"norm": name, "n": n, "trials": trials}, {"value": est.value},
            [Witness("A", A), Witness("B", B)], None, None, True)


def cmd_verify_all(args):
    if args.n is None:
        raise UsageError("--n is required")
    reports = verify_all(args.n, args.seed, args.tol)
    result = {"passed": all(r.passed for r in reports),
              "tags": [r.theorem for r in reports],
              "reports": [r.to_json() for r in reports]}
    return {"n": args.n}, result, [], None, args.tol, result["passed"]


COMMANDS = {
    "vecnorm": cmd_vecnorm,
    "dual": cmd_dual,
    "gind": cmd_gind,
    "ratio": cmd_ratio,
    "algebra-check": cmd_algebra_check,
    "min-scale": cmd_min_scale,
    "congruent": cmd_congruent,
    "extremal": cmd_extremal,
    "unitary-probe": cmd_unitary_probe,
    "transformed-check": cmd_transformed_check,
    "recover": cmd_recover,
    "defect": cmd_defect,
    "verify-all": cmd_verify_all,
}


# ---- output ----------------------------------------------------------------

def _to_builtin(obj):
    if isinstance(obj, dict):
        return {str(k): _to_builtin(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_builtin(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return vector_to_json(obj) if obj.ndim == 1 else _to_builtin(obj.tolist())
    return obj


def render_json(payload):
    return json.dumps(_to_builtin(payload), indent=2, sort_keys=True) + "\n"


def _fmt(v):
    return f"{v:.12g}" if isinstance(v, float) else str(v)


def _cfmt(re, im):
    return f"{re:.8g}" if im == 0 else f"{re:.8g}{im:+.8g}j"


def render_text(payload):
    lines = [f"gind {payload['subcommand']}  (seed {payload['seed']})"]
    for k, v in sorted(payload["inputs"].items()):
        if k != "x":
            lines.append(f"  {k}: {v}")
    res = payload["result"]
    if "reports" in res:
        for rep in res["reports"]:
            mark = "PASS" if rep["passed"] else "FAIL"
            lines.append(f"{mark} {rep['theorem']}")
            for c in rep["checks"]:
                if not c["passed"]:
                    lines.append(f"    failed: {c['name']}: predicted {_fmt(c['predicted'])}, "
                                 f"achieved {_fmt(c['achieved'])} ({c['compare']}, tol {c['tolerance']:g})")
        lines.append("all passed" if res["passed"] else "some checks FAILED")
        return "\n".join(lines) + "\n"
    for key in ("value", "lower", "upper", "exact", "verdict", "lambda", "attained",
                "predicted", "achieved", "passed"):
        if key in res:
            lines.append(f"{key}: {_fmt(res[key])}")
    for c in res.get("checks", []):
        mark = "ok  " if c["passed"] else "FAIL"
        lines.append(f"  {mark} {c['name']}: {_fmt(c['achieved'])} vs {_fmt(c['predicted'])}")
    if payload["method"]:
        lines.append(f"method: {payload['method']}")
    for w in payload["witnesses"]:
        if w["kind"] == "vector":
            vals = ", ".join(_cfmt(re, im) for re, im in w["value"])
            lines.append(f"witness {w['name']}: [{vals}]")
        else:
            lines.append(f"witness {w['name']}: {w['value']['rows']}x{w['value']['cols']} matrix")
    return "\n".join(lines) + "\n"


def run(argv=None):
    """Parse ``argv``, run one subcommand, write the report; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        inputs, result, witnesses, method, tol, passed = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"gind {args.command}: error: {exc}\n{GRAMMAR_HELP}", file=sys.stderr)
        return 2
    except (ConvergenceFailure, DegenerateWitness) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except INPUT_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        if isinstance(exc, ParseError):
            print(GRAMMAR_HELP, file=sys.stderr)
        return 2
    except GindError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    payload = {
        "tool_version": __version__,
        "subcommand": args.command,
        "inputs": inputs,
        "seed": args.seed,
        "result": result,
        "witnesses": [w.to_json() for w in witnesses],
        "method": method,
        "tolerance": tol,
        "runtime_ms": round((time.perf_counter() - t0) * 1000.0, 3),
    }
    text = render_json(payload) if args.format == "json" else render_text(payload)
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0 if passed else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
