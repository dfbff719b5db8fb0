"""Command-line front end.

Exit status: 0 on success, 1 when a mathematical claim is falsified or a
counterexample turns up, 2 for malformed input of any kind.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Optional

from . import contraction as C
from ._num import exact
from .errors import FormatError, PBMetricError
from .golden import reproduce_examples
from .picard import certify_rate, fixed_points, iterate
from .pproperty import p_property
from .search import TARGETS, GenConfig, probe
from .serialize import dump, load_map, load_space, to_jsonable, transformed_to_dict
from .space import MetricPair, equivalence_constants, is_ultra, minimal_coefficient, verify_axioms
from .stability import SCHEDULES, StabilityParams, make_schedule, run_perturbed
from .transform import build_h_series, build_pprime, verify_transform_contraction

OK, FALSIFIED, INPUT_ERROR = 0, 1, 2


@dataclass
class CommandOutcome:
    status: int
    text: str
    path: Optional[str] = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise FormatError(f"{self.prog}: {message}", "arguments")


def _point(space, raw: str):
    if not space.exact:
        try:
            x = float(raw)
        except ValueError:
            raise FormatError(f"--from: not a number: {raw!r}", "from") from None
        return x
    for x in space.points:
        if str(x) == raw:
            return x
    raise FormatError(f"--from: {raw!r} is not a point of the space", "from")


def _rational_arg(value, name):
    try:
        return exact(value)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"--{name}: not a number: {value!r}", name) from None


def _lambdas(raw):
    parts = raw.split(",")
    if len(parts) != 5:
        raise FormatError("--lambdas: expected five comma-separated values", "lambdas")
    return [_rational_arg(v, "lambdas") for v in parts]


def _space_map(args):
    space = load_space(args.space)
    return space, load_map(args.map, space)


def cmd_verify(args):
    space = load_space(args.space)
    s = None if args.s is None else _rational_arg(args.s, "s")
    rep = verify_axioms(space, s)
    return (OK if rep.passed else FALSIFIED), {"passed": rep.passed, **to_jsonable(rep)}


def cmd_minimal_s(args):
    space = load_space(args.space)
    value, witness = minimal_coefficient(space, with_witness=True)
    return OK, {"minimal_s": value, "witness": witness}


def cmd_ultra(args):
    v = is_ultra(load_space(args.space))
    return OK, {"ultra": v.holds, "witness": v.witness}


def cmd_equiv(args):
    pair = MetricPair(load_space(args.first), load_space(args.second))
    consts = equivalence_constants(pair)
    if consts is None:
        return OK, {"equivalent": False}
    return OK, {"equivalent": True, "alpha": consts[0], "beta": consts[1]}


def cmd_analyze(args):
    space, T = _space_map(args)
    s = None if args.s is None else _rational_arg(args.s, "s")
    cond = args.condition
    if cond == "banach":
        rep = C.check_banach(space, T)
    elif cond == "power":
        rep = C.check_power_banach(space, T, args.nmax)
    elif cond == "chatterjea":
        rep = C.check_chatterjea(space, T, s)
    elif cond == "ch2":
        rep = C.check_chatterjea_max(space, T, s)
    elif cond == "chka":
        if args.lambdas is None:
            raise FormatError("--lambdas is required for --condition chka", "lambdas")
        rep = C.check_chatterjea_kannan(space, T, _lambdas(args.lambdas), s)
    else:
        rep = C.check_orbit_contraction(space, T)
    return OK, rep


def _trace(args, space, T):
    start = _point(space, args.start) if args.start is not None else space.points[0]
    if not space.exact:
        start = float(start)
    return iterate(space, T, start, args.max_iter, args.tol)


def cmd_iterate(args):
    space, T = _space_map(args)
    tr = _trace(args, space, T)
    return OK, {"verdict": tr.verdict, "iterations": tr.iterations, "fixed_point": tr.fixed_point,
                "self_distance": tr.self_distance, "mode": tr.mode,
                "orbit": tr.orbit if space.exact else tr.orbit[-5:], "b": tr.b}


def cmd_certify(args):
    space, T = _space_map(args)
    tr = _trace(args, space, T)
    cert = certify_rate(tr, _rational_arg(args.mu, "mu"),
                        _rational_arg(args.s, "s") if args.s else space.declared_s)
    return (OK if cert.all_pass else FALSIFIED), {
        "verdict": tr.verdict, "all_pass": cert.all_pass, "mu": cert.mu, "s": cert.s,
        "step_failures": cert.step_failures, "tail_checked": cert.tail_checked,
        "tail_failures": cert.tail_failures}


def cmd_transform(args):
    space, T = _space_map(args)
    K = _rational_arg(args.K, "K")
    lam = _rational_arg(args.lam, "lambda")
    if args.series:
        t = build_h_series(space, T, lam, n=args.power, K=K)
        ok = t.details.get("sandwich_ok", True)
    else:
        t = build_pprime(space, T, args.power, K, lam)
        chk = verify_transform_contraction(t)
        ok = chk.holds and chk.identity_holds and verify_axioms(t.space, space.declared_s).passed
    return (OK if ok else FALSIFIED), transformed_to_dict(t)


def cmd_stability(args):
    space, T = _space_map(args)
    if args.fixed_point is not None:
        q = _point(space, args.fixed_point)
    elif space.exact:
        fp = fixed_points(space, T)
        if fp.unique is None:
            raise FormatError(f"--fixed-point: map has {len(fp)} fixed points; name one",
                              "fixed-point")
        q = fp.unique
    else:
        q = iterate(space, T, space.lo, 10_000, 1e-30).fixed_point
    kw = {}
    if args.schedule == "geometric-noise":
        kw = {"r": args.r, "seed": args.seed}
    elif args.schedule == "constant-offset":
        kw = {"offset": args.r}
    sched = make_schedule(args.schedule, **kw)
    params = None
    if args.lambdas is not None:
        s = _rational_arg(args.s, "s") if args.s else space.declared_s
        lams = _lambdas(args.lambdas)
        params = (StabilityParams.exact(lams, s) if space.exact
                  else StabilityParams(tuple(float(v) for v in lams), float(s)))
    trial = run_perturbed(space, T, q, sched, args.steps, tol=args.tol, params=params)
    status = FALSIFIED if trial.falsifies else OK
    return status, {"fixed_point": q, "verdict": trial.verdict,
                    "drift_vanished": trial.drift_vanished, "converged": trial.a_vanished,
                    "final_drift": trial.raw_drift[-1] if trial.raw_drift else None,
                    "final_distance": trial.a[-1], "recurrence_ok": trial.recurrence_ok,
                    "recurrence_failure": trial.recurrence_failure}


def cmd_pproperty(args):
    space, T = _space_map(args)
    rep = p_property(space, T, args.nmax)
    return (FALSIFIED if rep.falsified else OK), rep


def cmd_search(args):
    cfg = GenConfig(n_points=args.points, trials=args.trials, seed=args.seed,
                    target=args.target, denominator=args.denominator,
                    max_value=args.max_value, n_max=args.nmax)
    rep = probe(cfg)
    return (OK if rep.clean else FALSIFIED), rep


def cmd_examples(args):
    return OK, reproduce_examples(args.which)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pbmetric", description="Fixed-point workbench for partial b-metric spaces.")
    p.add_argument("--out", help="write the report to this file instead of stdout")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_, maps=False):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--out", default=argparse.SUPPRESS)
        sp.add_argument("--format", choices=("text", "structured"), default=argparse.SUPPRESS)
        if maps:
            sp.add_argument("space")
            sp.add_argument("map")
        sp.set_defaults(func=func)
        return sp

    sp = add("verify", cmd_verify, "check the axioms")
    sp.add_argument("space")
    sp.add_argument("--s")
    add("minimal-s", cmd_minimal_s, "least admissible coefficient").add_argument("space")
    add("ultra", cmd_ultra, "partial ultra-metric check").add_argument("space")
    sp = add("equiv", cmd_equiv, "equivalence constants of two metrics")
    sp.add_argument("first")
    sp.add_argument("second")

    sp = add("analyze", cmd_analyze, "minimal contraction constants", maps=True)
    sp.add_argument("--condition", required=True,
                    choices=("banach", "power", "chatterjea", "ch2", "chka", "orbit"))
    sp.add_argument("--s")
    sp.add_argument("--lambdas", help="l1,l2,l3,l4,l5 for --condition chka")
    sp.add_argument("--nmax", type=int, default=4)

    for name, func in (("iterate", cmd_iterate), ("certify", cmd_certify)):
        sp = add(name, func, "Picard iteration" if name == "iterate" else "rate certificate",
                 maps=True)
        sp.add_argument("--from", dest="start")
        sp.add_argument("--max-iter", type=int, default=1000)
        sp.add_argument("--tol", type=float, default=1e-12)
        if name == "certify":
            sp.add_argument("--mu", required=True)
            sp.add_argument("--s")

    sp = add("transform", cmd_transform, "weighted-sum or series metric", maps=True)
    sp.add_argument("--power", type=int, required=True)
    sp.add_argument("--K", required=True)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--series", action="store_true")

    sp = add("stability", cmd_stability, "perturbed Picard orbit", maps=True)
    sp.add_argument("--schedule", choices=sorted(SCHEDULES), default="geometric-noise")
    sp.add_argument("--steps", type=int, default=100)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--fixed-point")
    sp.add_argument("--r", type=float, default=1.0, help="noise size or offset")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--lambdas")
    sp.add_argument("--s")

    sp = add("pproperty", cmd_pproperty, "compare F(T) with F(T^n)", maps=True)
    sp.add_argument("--nmax", type=int)

    sp = add("search", cmd_search, "randomised probe")
    sp.add_argument("--target", choices=TARGETS, required=True)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--points", type=int, default=4)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--denominator", type=int, default=16)
    sp.add_argument("--max-value", type=int, default=4)
    sp.add_argument("--nmax", type=int, default=8)

    sp = add("examples", cmd_examples, "golden reproductions")
    sp.add_argument("--which", choices=("1", "2", "all"), default="all")
    return p


def _nested(v) -> bool:
    if isinstance(v, dict):
        return bool(v)
    return isinstance(v, list) and any(isinstance(e, dict) for e in v)


def _text(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if _nested(v):
                lines += [f"{pad}{k}:", _text(v, indent + 1)]
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}-\n{_text(v, indent + 1)}" if isinstance(v, dict)
                         else f"{pad}- {_inline(v)}" for v in obj)
    return f"{pad}{_inline(obj)}"


def _inline(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(e) for e in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_inline(e)}" for k, e in v.items()) + "}"
    if v is None:
        return "-"
    return str(v)


def run(argv=None) -> CommandOutcome:
    try:
        args = build_parser().parse_args(argv)
        status, payload = args.func(args)
    except FormatError as exc:
        return CommandOutcome(INPUT_ERROR, f"error [{exc.field}]: {exc}")
    except (PBMetricError, ValueError, TypeError, KeyError) as exc:
        return CommandOutcome(INPUT_ERROR, f"error: {exc}")
    data = to_jsonable(payload)
    text = dump(data) if args.format == "structured" else _text(data)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            return CommandOutcome(INPUT_ERROR, f"error [out]: cannot write {args.out}: {exc.strerror}")
        return CommandOutcome(status, text, args.out)
    return CommandOutcome(status, text)


def main(argv=None) -> int:
    out = run(argv)
    if out.status == INPUT_ERROR:
        print(out.text, file=sys.stderr)
    elif out.path is None:
        print(out.text)
    return out.status


if __name__ == "__main__":
    sys.exit(main())
