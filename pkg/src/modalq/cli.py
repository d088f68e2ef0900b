"""Command-line driver.

Exit codes: 0 success, 1 usage error, 2 enumeration budget exceeded,
3 a verification failed (a "possible" no-broadcast verdict or a failed
selftest).
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass
import json
import logging
import os
import random
import sys

import numpy as np

from . import jsonio
from .broadcast import (
    clone_feasibility,
    overlap_broadcast,
    pairwise_broadcast,
    slice_diamond,
    verify_no_broadcast,
)
from .composite import FactorShape, reduce
from .errors import BudgetExceededError, DomainError, InvariantViolation
from .field import FieldSpec
from .linalg import MatrixF, VectorF, rank, rref
from .subspace import DEFAULT_BUDGET, DiamondTriple, Subspace, find_diamonds, is_diamond, join, meet, span

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_FALSIFIED = 0, 1, 2, 3

log = logging.getLogger("modalq")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    field_spec: str = "2"
    ambient_dim: int = 2
    budget: int = DEFAULT_BUDGET
    output_format: str = "text"
    seed: int = 0
    workers: int = 1
    out: str | None = None

    def __post_init__(self):
        if self.budget < 1:
            raise UsageError("--budget must be >= 1")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")

    @property
    def field(self) -> FieldSpec:
        return FieldSpec.parse(self.field_spec)


class Report:
    """Accumulates text lines and a JSON payload; prints whichever is asked for."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.lines: list[str] = []
        self.data: dict = {}

    def line(self, text: str = ""):
        self.lines.append(text)

    def render(self) -> str:
        if self.cfg.output_format == "json":
            return jsonio.dumps(self.data)
        return "\n".join(self.lines)


def _sub(s: Subspace) -> str:
    return f"{s} (dim {s.dim})"


def _parse_subspace(text: str, cfg: RunConfig, ambient: int | None = None) -> Subspace:
    spec = cfg.field
    m = jsonio.parse_rows(text, spec)
    n = ambient or cfg.ambient_dim
    if m.cols != n:
        raise UsageError(f"rows have length {m.cols}, expected ambient {n}")
    return Subspace(spec, n, m)


# --- subcommands ---


def cmd_demo_distributivity(cfg: RunConfig, args) -> int:
    n = cfg.ambient_dim
    if n < 2:
        raise UsageError("demo-distributivity needs --ambient >= 2")
    spec = cfg.field
    e = np.eye(n, dtype=np.int64)
    a = span([e[0]], n, spec)
    b = span([e[1]], n, spec)
    c = span([(e[0] + e[1])], n, spec)
    lhs = join(c, meet(a, b))
    rhs = meet(join(c, a), join(c, b))
    top = join(a, b)
    name = "V" if top.is_full() else "A∨B"
    fails = lhs != rhs
    rep = Report(cfg)
    rep.line(f"field {spec.label()}, ambient {n}")
    rep.line(f"A = {a}   B = {b}   C = {c}")
    rep.line(f"C∨(A∧B) = {'C' if lhs == c else lhs} (dim {lhs.dim}); "
             f"(C∨A)∧(C∨B) = {name if rhs == top else rhs} (dim {rhs.dim}); "
             f"distributivity {'FAILS' if fails else 'holds'}")
    rep.data = {
        "field": str(spec),
        "ambient": n,
        "A": jsonio.subspace_to_json(a),
        "B": jsonio.subspace_to_json(b),
        "C": jsonio.subspace_to_json(c),
        "lhs": jsonio.subspace_to_json(lhs),
        "rhs": jsonio.subspace_to_json(rhs),
        "distributive": not fails,
    }
    _emit(cfg, rep)
    return EXIT_OK


def cmd_find_diamonds(cfg: RunConfig, args) -> int:
    spec = cfg.field
    ds = find_diamonds(cfg.ambient_dim, spec, args.null_bottom, args.dim, cfg.budget)
    rep = Report(cfg)
    rep.line(f"field {spec.label()}, ambient {cfg.ambient_dim}: {len(ds)} diamond triple(s)"
             + (" with null bottom" if args.null_bottom else ""))
    by_bottom: dict[int, int] = {}
    for i, d in enumerate(ds):
        by_bottom[d.bottom.dim] = by_bottom.get(d.bottom.dim, 0) + 1
        if not args.count_only:
            rep.line(f"[{i}] A = {d.a}  B = {d.b}  C = {d.c}  S = {_sub(d.top)}  R = {_sub(d.bottom)}")
    rep.line("counts by dim R: " + ", ".join(f"{k}: {v}" for k, v in sorted(by_bottom.items())))
    rep.data = {
        "field": str(spec),
        "ambient": cfg.ambient_dim,
        "count": len(ds),
        "counts_by_bottom_dim": {str(k): v for k, v in sorted(by_bottom.items())},
        "diamonds": [] if args.count_only else [jsonio.diamond_to_json(d) for d in ds],
    }
    _emit(cfg, rep)
    return EXIT_OK


def _select_diamonds(cfg: RunConfig, args) -> list[DiamondTriple]:
    spec, n = cfg.field, cfg.ambient_dim
    if args.a or args.b or args.c:
        if not (args.a and args.b and args.c):
            raise UsageError("give all of --a, --b and --c")
        a, b, c = (_parse_subspace(t, cfg) for t in (args.a, args.b, args.c))
        found = is_diamond(a, b, c)
        if found is None:
            raise UsageError("the selected triple is not a diamond")
        ds = [DiamondTriple(a, b, c, *found)]
    else:
        ds = find_diamonds(n, spec, not args.slice, args.dim, cfg.budget)
        if args.slice:
            ds = [d for d in ds if not d.bottom.is_null()]
        if not ds:
            raise UsageError("no matching diamonds in this space")
        if not args.all:
            if not 0 <= args.index < len(ds):
                raise UsageError(f"--index must be in 0..{len(ds) - 1}")
            ds = [ds[args.index]]
    out = []
    for d in ds:
        if not d.bottom.is_null():
            if not args.slice:
                raise UsageError("diamond has a nonzero bottom; pass --slice to verify its null-bottom slice")
            d = slice_diamond(d)
        out.append(d)
    return out


def cmd_no_broadcast_verify(cfg: RunConfig, args) -> int:
    ds = _select_diamonds(cfg, args)
    certs = [verify_no_broadcast(d, workers=cfg.workers, budget=cfg.budget) for d in ds]
    rep = Report(cfg)
    for cert in certs:
        d = cert.diamond
        rep.line(f"A = {d.a}  B = {d.b}  C = {d.c}  (R = {d.bottom})")
        rep.line(f"  candidates A/B/C: {cert.candidate_counts['A']}/{cert.candidate_counts['B']}/"
                 f"{cert.candidate_counts['C']}, triples checked: {cert.candidates_checked}")
        rep.line("  checks: " + ", ".join(f"{k}={'PASS' if v else 'FAIL'}" for k, v in cert.checks.items()))
        rep.line(f"  verdict: {cert.verdict}")
    payload = [jsonio.certificate_to_json(c) for c in certs]
    rep.data = payload[0] if len(payload) == 1 else {"certificates": payload}
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(jsonio.dumps(rep.data) + "\n")
        rep.line(f"certificate written to {cfg.out}")
        print(rep.render() if cfg.output_format == "text" else jsonio.dumps(rep.data))
    else:
        print(rep.render())
    return EXIT_OK if all(c.impossible for c in certs) else EXIT_FALSIFIED


def cmd_broadcast_pair(cfg: RunConfig, args) -> int:
    a = _parse_subspace(args.a, cfg)
    b = _parse_subspace(args.b, cfg)
    ma, mb = pairwise_broadcast(a, b)
    ok = ma.is_valid() and mb.is_valid()
    rep = Report(cfg)
    rep.line(f"A = {a}  B = {b}  A∧B = {meet(a, b)}")
    rep.line(f"M_A = {_sub(ma.state)}")
    rep.line(f"M_B = {_sub(mb.state)}")
    rep.line(f"reduction check: {'PASS' if ok else 'FAIL'}")
    rep.data = {
        "A": jsonio.subspace_to_json(a),
        "B": jsonio.subspace_to_json(b),
        "M_A": jsonio.subspace_to_json(ma.state),
        "M_B": jsonio.subspace_to_json(mb.state),
        "reduction_check": ok,
    }
    _emit(cfg, rep)
    return EXIT_OK if ok else EXIT_FALSIFIED


def cmd_reduce(cfg: RunConfig, args) -> int:
    spec = cfg.field
    shape = FactorShape.parse(args.shape)
    if args.span:
        m = _parse_subspace(args.span, cfg, ambient=shape.total)
    elif args.source:
        text = args.source
        if not text.lstrip().startswith("{"):
            if text == "-":
                text = sys.stdin.read()
            else:
                with open(text, encoding="utf-8") as fh:
                    text = fh.read()
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad JSON at position {exc.pos}: {exc.msg}") from None
        parsed = jsonio.subspace_from_json(obj, spec)
        m = parsed.subspace
    else:
        raise UsageError("give a subspace JSON source or --span ROWS")
    if m.ambient != shape.total:
        raise UsageError(f"subspace ambient {m.ambient} does not match shape {shape}")
    r = reduce(m, shape, args.keep)
    rep = Report(cfg)
    rep.line(f"reduce to factor {args.keep} of {shape}: {_sub(r)}")
    rep.data = jsonio.subspace_to_json(r)
    _emit(cfg, rep)
    return EXIT_OK


def cmd_clone_check(cfg: RunConfig, args) -> int:
    spec = cfg.field
    states = jsonio.parse_rows(args.states, spec).row_vectors()
    d = states[0].dim
    if args.blank:
        blank = VectorF(spec, jsonio.parse_rows(args.blank, spec).data[0])
    else:
        blank = VectorF(spec, np.eye(d, dtype=np.int64)[0])
    res = clone_feasibility(states, blank)
    rep = Report(cfg)
    rep.line(f"states: {', '.join(str(s.tolist()) for s in states)}; blank {blank.tolist()}")
    if res.feasible:
        rep.line("feasible: a linear cloning map exists")
        rep.data = {"feasible": True, "transform": jsonio.encode_rows(spec, res.transform.data)}
    else:
        w = res.witness
        combo = " + ".join(f"{c}·ψ{i}" for c, i in zip(w.coefficients, w.basis))
        rep.line("infeasible")
        rep.line(f"  ψ{w.index} = {combo}")
        rep.line(f"  linearity forces {w.forced.tolist()}, cloning needs {w.desired.tolist()}")
        rep.data = {
            "feasible": False,
            "witness": {
                "index": w.index,
                "basis": list(w.basis),
                "coefficients": [jsonio.encode_entry(spec, c) for c in w.coefficients],
                "forced": jsonio.vector_to_json(w.forced),
                "desired": jsonio.vector_to_json(w.desired),
            },
        }
    _emit(cfg, rep)
    return EXIT_OK


def cmd_selftest(cfg: RunConfig, args) -> int:
    rng = random.Random(cfg.seed)
    results: list[tuple[str, bool]] = []

    def check(name, fn):
        try:
            ok = bool(fn())
        except Exception as exc:  # report and continue
            log.error("%s raised %r", name, exc)
            ok = False
        results.append((name, ok))

    f2, f3, f4 = FieldSpec(2), FieldSpec(3), FieldSpec.builtin(4)

    def field_axioms():
        els = f4.elements()
        return all(a * (b + c) == a * b + a * c for a in els for b in els for c in els) and all(
            a * (1 / a) == f4.one for a in els if not a.is_zero()
        )

    def distributivity():
        e = np.eye(2, dtype=np.int64)
        a, b, c = span([e[0]], 2, f2), span([e[1]], 2, f2), span([e[0] + e[1]], 2, f2)
        return join(c, meet(a, b)) == c and meet(join(c, a), join(c, b)).is_full()

    def bell():
        m = span([[1, 0, 0, 1]], 4, f3)
        shape = FactorShape((2, 2))
        return reduce(m, shape, 1).is_full() and reduce(m, shape, 2).is_full()

    def no_broadcast():
        d = find_diamonds(2, f2, True)[0]
        cert = verify_no_broadcast(d, workers=cfg.workers)
        return cert.impossible and cert.recheck()

    def overlap():
        e = np.eye(3, dtype=np.int64)
        x = span([e[0], e[1]], 3, f2)
        return overlap_broadcast(x, span([e[1]], 3, f2)).is_valid()

    def cloning():
        st = [VectorF(f2, v) for v in ([1, 0], [0, 1], [1, 1])]
        return not clone_feasibility(st, st[0]).feasible and clone_feasibility(st[:2], st[0]).feasible

    def rref_invariance():
        for _ in range(20):
            m = np.array([[rng.randrange(3) for _ in range(4)] for _ in range(3)])
            while True:
                p = np.array([[rng.randrange(3) for _ in range(3)] for _ in range(3)])
                if rank(MatrixF(f3, p)) == 3:
                    break
            lhs = rref(MatrixF(f3, m))[0]
            rhs = rref(MatrixF(f3, p) @ MatrixF(f3, m))[0]
            if lhs != rhs:
                return False
        return True

    check("field axioms GF(4)", field_axioms)
    check("distributivity fails GF(2)^2", distributivity)
    check("Bell reduction GF(3)", bell)
    check("rref basis independence", rref_invariance)
    check("overlap broadcast GF(2)^3", overlap)
    check("no-cloning GF(2)^2", cloning)
    check("no-broadcast GF(2)^2", no_broadcast)
    rep = Report(cfg)
    for name, ok in results:
        rep.line(f"{'PASS' if ok else 'FAIL'}  {name}")
    rep.data = {"seed": cfg.seed, "results": {name: ok for name, ok in results}}
    _emit(cfg, rep)
    return EXIT_OK if all(ok for _, ok in results) else EXIT_FALSIFIED


def _emit(cfg: RunConfig, rep: Report):
    text = rep.render()
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# --- argument parsing ---


def _global_options(parser: argparse.ArgumentParser, suppress: bool):
    def d(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--field", default=d("2"), help="field spec: 2, 3, 4, 2^2:1,1,1 ... (default 2)")
    parser.add_argument("--ambient", type=int, default=d(2), help="ambient dimension (default 2)")
    parser.add_argument("--budget", type=int, default=d(DEFAULT_BUDGET), help="enumeration cap")
    parser.add_argument("--format", choices=("text", "json"), default=d("text"))
    parser.add_argument("--seed", type=int, default=d(0))
    parser.add_argument("--workers", type=int, default=d(os.cpu_count() or 1))
    parser.add_argument("--out", default=d(None), metavar="FILE")
    parser.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modalq", description="Modal quantum theory over finite fields.")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        _global_options(p, suppress=True)
        p.set_defaults(func=func)
        return p

    add("demo-distributivity", cmd_demo_distributivity, "show the distributive law failing")

    p = add("find-diamonds", cmd_find_diamonds, "list diamond (M3) triples of subspaces")
    p.add_argument("--dim", type=int, default=None, help="only triples of this dimension")
    p.add_argument("--null-bottom", action="store_true", help="only triples with common meet 0")
    p.add_argument("--count-only", action="store_true")

    p = add("no-broadcast-verify", cmd_no_broadcast_verify, "certify that a diamond cannot be broadcast")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--c")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--index", type=int, default=0, help="which enumerated diamond (default 0)")
    p.add_argument("--all", action="store_true", help="verify every enumerated diamond")
    p.add_argument("--slice", action="store_true", help="slice nonzero-bottom diamonds first")

    p = add("broadcast-pair", cmd_broadcast_pair, "broadcast two subspaces")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = add("reduce", cmd_reduce, "reduce a composite subspace to one factor")
    p.add_argument("source", nargs="?", help="subspace JSON: inline, a file path, or - for stdin")
    p.add_argument("--span", help="rows spanning the composite subspace instead of JSON")
    p.add_argument("--shape", required=True, help="factor dimensions, e.g. 2x2")
    p.add_argument("--keep", type=int, required=True, help="factor to keep (1-based)")

    p = add("clone-check", cmd_clone_check, "decide whether a linear cloner exists")
    p.add_argument("--states", required=True, help='rows, e.g. "1,0;0,1;1,1"')
    p.add_argument("--blank", help="blank state (default e_0)")

    add("selftest", cmd_selftest, "quick end-to-end checks")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = RunConfig(
            field_spec=args.field,
            ambient_dim=args.ambient,
            budget=args.budget,
            output_format=args.format,
            seed=args.seed,
            workers=args.workers,
            out=args.out,
        )
        cfg.field  # validate the field spec before dispatch
        return args.func(cfg, args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_FALSIFIED


if __name__ == "__main__":
    sys.exit(main())
