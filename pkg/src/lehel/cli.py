"""Command-line front end.

Exit codes: 0 success, 1 a certificate failed verification, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .chains import Certificate, DegenerateCycle
from .core import (ColouringFormatError, Params, ParamsError, load_colouring, make_colouring,
                   save_colouring)
from .full_cover import CoverError, cover_all_vertices
from .partition import partition_theorem_a, partition_theorem_b
from .verify import ENGINES, BudgetExceeded, brute_force_min_uncovered, sweep, verify_certificate

log = logging.getLogger("lehel")


class UsageError(Exception):
    pass


def _params(args) -> Params:
    return Params(args.n, args.k, args.ell)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def to_dot(cert: Certificate) -> str:
    """Undirected DOT graph: each cycle as a closed chain of its vertex sequence."""
    lines = ["graph certificate {", "  node [shape=circle];"]
    for pos, item in enumerate(cert.items):
        shape = item.cycle
        if isinstance(shape, DegenerateCycle):
            lines.append(f"  subgraph cluster_{pos} {{ label=\"degenerate\"; style=dashed;")
            lines.extend(f"    {v};" for v in shape.vseq)
            lines.append("  }")
            continue
        colour = item.colour.label if item.colour is not None else "black"
        vseq = shape.vseq
        for v in vseq:
            lines.append(f"  {v} [color={colour}];")
        for a, b in zip(vseq, vseq[1:] + vseq[:1]):
            lines.append(f"  {a} -- {b} [color={colour}];")
    for v in sorted(cert.uncovered):
        lines.append(f"  {v} [color=gray, style=dotted];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_gen(args) -> int:
    params = _params(args)
    if args.kind == "random":
        spec = {"kind": "random", "seed": args.seed, "p_red": args.p_red}
    elif args.kind == "split":
        if args.set is None or args.threshold is None:
            raise UsageError("--kind split needs --set and --threshold")
        spec = {"kind": "split", "A": [int(x) for x in args.set.split(",") if x.strip()],
                "t": args.threshold}
    else:
        spec = {"kind": "constant", "colour": args.colour}
    save_colouring(make_colouring(params, spec).materialized(), args.out)
    return 0


def _run_and_check(args, certificate) -> int:
    oracle = load_colouring(args.input)
    try:
        cert = certificate(oracle)
    except CoverError as exc:
        raise UsageError(str(exc)) from exc
    rep = verify_certificate(oracle, cert)
    _emit(cert.to_json(), args.out)
    if args.dot:
        Path(args.dot).write_text(to_dot(cert))
    if not rep.ok:
        for v in rep.violations:
            print(v, file=sys.stderr)
        return 1
    return 0


def cmd_partition(args) -> int:
    engine = partition_theorem_a if args.variant == "a" else partition_theorem_b
    return _run_and_check(args, lambda o: engine(o, check=args.check))


def cmd_cover(args) -> int:
    return _run_and_check(args, lambda o: cover_all_vertices(o, args.variant, check=args.check))


def cmd_verify(args) -> int:
    oracle = load_colouring(args.input)
    try:
        cert = Certificate.from_json(Path(args.cert).read_text())
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"malformed certificate: {exc}") from exc
    bound = args.bound if args.bound == "auto" else int(args.bound)
    rep = verify_certificate(oracle, cert, bound)
    if rep.ok:
        print("ok")
        return 0
    for v in rep.violations:
        print(v, file=sys.stderr)
    return 1


def cmd_brute(args) -> int:
    oracle = load_colouring(args.input)
    value, witness = brute_force_min_uncovered(oracle, budget=args.budget)
    print(json.dumps({"min_uncovered": value, "witness": witness.to_dict()}))
    return 0


def cmd_sweep(args) -> int:
    summary = sweep(_params(args), mode=args.mode, engine=args.engine, count=args.count,
                    seed=args.seed, p_red=args.p_red, jobs=args.jobs, check=args.check,
                    dump_dir=args.dump_dir)
    print(json.dumps(summary))
    return 0 if summary["failures"] == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lehel", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def nke(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--ell", type=int, required=True)

    g = sub.add_parser("gen", help="write a colouring file")
    nke(g)
    g.add_argument("--kind", choices=["random", "split", "const"], required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--p-red", type=float, default=0.5)
    g.add_argument("--set", help="comma-separated vertex set A for split colourings")
    g.add_argument("--threshold", type=int, help="Red iff |e & A| >= threshold")
    g.add_argument("--colour", "--color", default="blue", choices=["blue", "red"])
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    for name, func, help_ in (("partition", cmd_partition, "two-cycle certificate"),
                              ("cover", cmd_cover, "cover every vertex")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--input", required=True)
        p.add_argument("--variant", choices=["a", "b"], default="a")
        p.add_argument("--out")
        p.add_argument("--dot")
        p.add_argument("--check", action="store_true", help="assert invariants on every state")
        p.set_defaults(func=func)

    v = sub.add_parser("verify", help="check a certificate")
    v.add_argument("--input", required=True)
    v.add_argument("--cert", required=True)
    v.add_argument("--bound", default="auto")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("brute", help="exact minimum uncovered count (tiny n)")
    b.add_argument("--input", required=True)
    b.add_argument("--budget", type=int, default=2_000_000)
    b.set_defaults(func=cmd_brute)

    s = sub.add_parser("sweep", help="run engine + verifier over many colourings")
    nke(s)
    s.add_argument("--mode", choices=["exhaustive", "random"], default="random")
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--p-red", type=float, default=0.5)
    s.add_argument("--engine", choices=list(ENGINES), default="a")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--check", action="store_true")
    s.add_argument("--dump-dir")
    s.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "bound", "auto") != "auto":
        try:
            int(args.bound)
        except ValueError:
            print("error: --bound must be an integer or 'auto'", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except (ParamsError, ColouringFormatError, UsageError, BudgetExceeded,
            FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
