"""Command line: build instances, run the verification suite, inspect pieces.

Exit status is 0 when every enabled check passes, 1 when a verification
fails and 2 for usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .closure import DEFAULT_NMAX
from .construction import (
    CHECK_NAMES,
    ExampleInstance,
    SuiteOptions,
    build,
    coordinate_names,
    run_suite,
)
from .groebner import Ideal, MonomialOrder, local_membership, normal_form
from .polycore import Polynomial, StructuralError, VariableSet
from .series import endpiece, fixed_series, square_shifted, to_polynomial

MAX_PRECISION = 32


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    d: int = 3
    N: int = 8
    seed: int = 1
    n_max: int = DEFAULT_NMAX
    r_max: int | None = None
    order: MonomialOrder = MonomialOrder("grevlex")
    checks: frozenset[str] | None = None
    out: str | None = None
    format: str = "text"

    def __post_init__(self):
        if self.d < 3:
            raise UsageError(f"--dim must be at least 3 (got {self.d})")
        if not 2 <= self.N <= MAX_PRECISION:
            raise UsageError(f"--precision must be in 2..{MAX_PRECISION} (got {self.N})")
        if self.n_max < 1:
            raise UsageError("--nmax must be positive")
        if self.r_max is not None and not 0 <= self.r_max < self.N:
            raise UsageError(f"--rmax must be below the precision {self.N}")


def _order(tag: str) -> MonomialOrder:
    try:
        return MonomialOrder.parse(tag)
    except StructuralError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _instance_flags(p: argparse.ArgumentParser):
    p.add_argument("--dim", type=int, default=3, help="dimension d >= 3 (h = d - 1)")
    p.add_argument("--precision", type=int, default=8, help="truncation N, 2..32")
    p.add_argument("--seed", type=int, default=1)


def _output_flags(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="write to this file instead of standard output")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="intclosure", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct an instance and write it as JSON")
    _instance_flags(p)
    p.add_argument("--out")

    p = sub.add_parser("verify", help="run the verification suite")
    _instance_flags(p)
    p.add_argument("--instance", help="read the instance from a JSON file instead of building it")
    p.add_argument("--nmax", type=int, default=DEFAULT_NMAX)
    p.add_argument("--rmax", type=int, default=None, help="default min(6, N - 1)")
    p.add_argument("--order", type=_order, default=MonomialOrder("grevlex"),
                   help="grevlex, lex or block:k")
    p.add_argument("--check", action="append", choices=CHECK_NAMES,
                   help="run only this check (repeatable)")
    _output_flags(p)

    p = sub.add_parser("endpieces", help="list endpiece decompositions up to r")
    _instance_flags(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--series-x", action="store_true",
                   help="use the series x for every coordinate instead of generic ones")
    _output_flags(p)

    p = sub.add_parser("membership", help="decide (local) ideal membership")
    p.add_argument("--ideal", required=True, help="ideal JSON file")
    p.add_argument("--element", required=True, help="polynomial JSON file")
    p.add_argument("--local", metavar="VARS",
                   help="comma-separated variables generating the prime to localize at")
    p.add_argument("--witness", action="store_true", help="print the colon ideal basis")
    _output_flags(p)
    return parser


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def cmd_build(args) -> int:
    cfg = RunConfig(args.dim, args.precision, args.seed)
    inst = build(cfg.d, cfg.N, cfg.seed)
    _emit(_dump(inst.to_json()), args.out)
    return 0


def cmd_verify(args) -> int:
    if args.instance:
        try:
            inst = ExampleInstance.from_json(_load_json(args.instance))
        except StructuralError as exc:
            raise UsageError(str(exc)) from None
        d, N, seed = inst.d, inst.N, inst.seed
    else:
        d, N, seed = args.dim, args.precision, args.seed
        inst = None
    cfg = RunConfig(d, N, seed, args.nmax, args.rmax, args.order,
                    frozenset(args.check) if args.check else None, args.out, args.format)
    if inst is None:
        inst = build(cfg.d, cfg.N, cfg.seed)
    cert = run_suite(inst, SuiteOptions(cfg.n_max, cfg.r_max, cfg.order, cfg.checks))
    if cfg.format == "json":
        _emit(_dump(cert.to_json()), cfg.out)
    else:
        _emit(cert.render_text(), cfg.out)
    for rec in cert.failures:
        print(f"FAIL {rec.name}: {rec.message}", file=sys.stderr)
    return 0 if cert.overall == "pass" else 1


def cmd_endpieces(args) -> int:
    cfg = RunConfig(args.dim, args.precision, args.seed)
    if not 1 <= args.r < cfg.N:
        raise UsageError(f"--r must be in 1..{cfg.N - 1}")
    if args.series_x:
        names = coordinate_names(cfg.d)
        base = VariableSet(names)
        h = cfg.d - 1
        elements = [square_shifted(v, fixed_series("x", [1], cfg.N), h, base) for v in names]
        labels = ["f", "g"] if cfg.d == 3 else [f"f_{i}" for i in range(1, h + 1)]
    else:
        inst = build(cfg.d, cfg.N, cfg.seed)
        elements = list(inst.f)
        labels = ["f", "g"] if cfg.d == 3 else [f"f_{i}" for i in range(1, inst.h + 1)]
    heads = ["u", "v"] if cfg.d == 3 else [f"u_{i}" for i in range(1, len(labels) + 1)]
    report = {}
    lines = []
    for label, head, e in zip(labels, heads, elements):
        b = [str(c) for c in e.coeffs[1:]]
        levels = {}
        lines.append(f"{label} = {to_polynomial(e)}")
        for j, c in enumerate(b, start=1):
            lines.append(f"  b_{j} = {c}")
        for r in range(1, args.r + 1):
            dec = endpiece(e, r)
            ok = dec.reassemble(cfg.N) == e
            levels[str(r)] = {
                f"{label}_{r}": str(to_polynomial(dec.endpiece)),
                f"{head}_{r}": str(dec.head),
                "identity": ok,
            }
            lines.append(f"  r={r}: {label}_{r} = {to_polynomial(dec.endpiece)}; "
                         f"{head}_{r} = {dec.head}; "
                         f"{label} = x^{r}*{label}_{r} + {head}_{r}*x + {dec.leading}: "
                         f"{'ok' if ok else 'MISMATCH'}")
        report[label] = {"element": str(to_polynomial(e)), "b": b, "levels": levels}
    if args.format == "json":
        _emit(_dump(report), args.out)
    else:
        _emit("\n".join(lines) + "\n", args.out)
    bad = [lv for rep in report.values() for lv in rep["levels"].values() if not lv["identity"]]
    return 1 if bad else 0


def cmd_membership(args) -> int:
    try:
        I = Ideal.from_json(_load_json(args.ideal))
        p = Polynomial.from_json(_load_json(args.element), I.ring)
        m = None
        if args.local:
            names = [n.strip() for n in args.local.split(",") if n.strip()]
            m = Ideal([I.ring.gen(n) for n in names], I.order, I.ring)
    except StructuralError as exc:
        raise UsageError(str(exc)) from None
    report = {"element": str(p), "ideal": [str(g) for g in I.generators]}
    if m is None:
        member = normal_form(p, I).is_zero()
        report["mode"] = "global"
        colon_gb = None
    else:
        member, Q = local_membership(p, I, m, with_colon=True)
        report["mode"] = "local at (" + ", ".join(args.local.split(",")) + ")"
        colon_gb = [str(g) for g in Q.gb] if Q is not None else []
    report["member"] = member
    if args.witness and colon_gb is not None:
        report["colon_gb"] = colon_gb
    if args.format == "json":
        _emit(_dump(report), args.out)
    else:
        lines = [f"{'member' if member else 'non-member'} ({report['mode']})"]
        if "colon_gb" in report:
            lines.append("colon ideal basis:")
            lines.extend(f"  {g}" for g in colon_gb)
        _emit("\n".join(lines) + "\n", args.out)
    return 0


COMMANDS = {
    "build": cmd_build,
    "verify": cmd_verify,
    "endpieces": cmd_endpieces,
    "membership": cmd_membership,
}


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
