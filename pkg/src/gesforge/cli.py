"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 construction precondition
failure, 4 check failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import constructions as C
from . import measures as M
from . import npt
from . import verify
from .errors import ArgumentError, PreconditionError, ResourceError
from .linalg import Bipartition, all_cuts
from .subspaces import Subspace, dumps, encode_vector, loads

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_CHECK = 0, 2, 3, 4
DEFAULT_SEED = 0xA5A5


class InputError(Exception):
    pass


def default_seed() -> int:
    env = os.environ.get("GESFORGE_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env, 0)
    except ValueError:
        raise InputError(f"GESFORGE_SEED={env!r} is not an integer") from None


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def _read_subspace(path: str) -> Subspace:
    try:
        with open(path) as fh:
            return loads(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_cut(text: str, n: int) -> Bipartition:
    try:
        members = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad cut {text!r}; expected comma-separated party indices") from None
    return Bipartition.of(members, n)


def _opt(args) -> M.OptimizerPolicy:
    kw = {"seed": args.seed}
    if getattr(args, "restarts", None) is not None:
        kw["restarts"] = args.restarts
    if getattr(args, "max_iters", None) is not None:
        kw["max_iters"] = args.max_iters
    return M.OptimizerPolicy(**kw)


def _report_dict(cut: Bipartition, rep: M.MeasureReport) -> dict:
    return {
        "cut": cut.label(),
        "value": rep.value,
        "stable": rep.stable,
        "restarts_agreeing": rep.restarts_agreeing,
        "witness_vector": encode_vector(rep.witness_vector.amplitudes),
    }


def cmd_construct(args) -> int:
    spec = _read_json(args.spec_file)
    sub = C.build(spec, M.OptimizerPolicy(seed=args.seed))
    _emit(dumps(sub) + "\n", args.output)
    return EXIT_OK


def cmd_measure(args) -> int:
    sub = _read_subspace(args.subspace_file)
    if sub.n_parties < 2:
        raise InputError("subspace must have at least two parties")
    cuts = [_parse_cut(args.cut, sub.n_parties)] if args.cut else all_cuts(sub.n_parties)
    opt = _opt(args)
    reports = [_report_dict(c, M.subspace_measure_across_cut(sub, c, opt)) for c in cuts]
    out = {"dims": list(sub.dims), "dim": sub.dim, "seed": args.seed, "restarts": opt.restarts,
           "reports": reports, "min": min(r["value"] for r in reports)}
    _emit(json.dumps(out, indent=2) + "\n", args.output)
    return EXIT_OK


def werner_scan_rows(d: int, grid: int, param: str) -> list[tuple[float, float, float, bool]]:
    """Grid over ``(x, y)``; the witness is ``s1 s2 - 1/2`` after converting ``p`` to ``s``."""
    lo, hi = (0.0, 1.0) if param == "s" else (-1.0, 1.0)
    axis = [lo + i * (hi - lo) / (grid - 1) for i in range(grid)]
    conv = (lambda v: v) if param == "s" else (lambda v: C.p_to_s(v, d))
    rows = []
    for x in axis:
        for y in axis:
            wv = conv(x) * conv(y) - 0.5
            rows.append((x, y, wv, wv > 0))
    return rows


def werner_corner(d: int, param: str) -> float:
    return 1 / math.sqrt(2) if param == "s" else C.werner_ge_threshold(d)


def cmd_werner_scan(args) -> int:
    if args.grid < 2:
        raise InputError("--grid must be at least 2")
    if args.d < 2:
        raise InputError("--d must be at least 2")
    rows = werner_scan_rows(args.d, args.grid, args.param)
    corner = werner_corner(args.d, args.param)
    if args.format == "json":
        out = {"d": args.d, "param": args.param, "corner": corner,
               "rows": [{"x": x, "y": y, "witness_value": w, "certified": c} for x, y, w, c in rows]}
        _emit(json.dumps(out, indent=2) + "\n", args.output)
    else:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["x", "y", "witness_value", "certified"])
        for x, y, w, c in rows:
            wr.writerow([_fmt(x), _fmt(y), _fmt(w), "true" if c else "false"])
        _emit(buf.getvalue(), args.output)
    print(f"# square-domain corner ({args.param}): {_fmt(corner)}", file=sys.stderr)
    return EXIT_OK


def cmd_check(args) -> int:
    sub = _read_subspace(args.subspace_file)
    if sub.n_parties < 2:
        raise InputError("subspace must have at least two parties")
    out = {"dims": list(sub.dims), "seed": args.seed, "samples": args.samples}
    ok = True
    if args.npt:
        res = npt.npt_subspace_check(sub, n_samples=args.samples, seed=args.seed)
        out["npt"] = [r.to_dict() for r in res]
        ok &= all(r.passed for r in res)
    if args.distill:
        opt = _opt(args) if args.restarts is not None else M.OptimizerPolicy(restarts=8, seed=args.seed)
        res = npt.distill_subspace_check(sub, n_samples=args.samples, seed=args.seed, opt=opt)
        out["distill"] = [r.to_dict() for r in res]
        ok &= all(r.passed for r in res)
    out["passed"] = bool(ok)
    _emit(json.dumps(out, indent=2) + "\n", args.output)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_verify_paper(args) -> int:
    cfg = verify.SuiteConfig.full(args.seed) if args.full else verify.SuiteConfig.fast(args.seed)
    rows = verify.run_suite(cfg)
    text = verify.render(rows)
    failed = [r for r in rows if not r.passed]
    text += f"{len(rows) - len(failed)}/{len(rows)} checks passed\n"
    _emit(text, args.output)
    return EXIT_OK if not failed else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gesforge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=lambda s: int(s, 0), default=None,
                        help="root seed (default: $GESFORGE_SEED or 0xA5A5)")
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")

    sp = sub.add_parser("construct", help="build a subspace from a construction spec file")
    sp.add_argument("spec_file")
    common(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("measure", help="geometric measure of a subspace per cut")
    sp.add_argument("subspace_file")
    sp.add_argument("--cut", help="comma-separated member parties, e.g. 0,2 (default: all cuts)")
    sp.add_argument("--restarts", type=int)
    sp.add_argument("--max-iters", type=int)
    common(sp)
    sp.set_defaults(func=cmd_measure)

    sp = sub.add_parser("werner-scan", help="witness values for two Werner copies on a grid")
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--grid", type=int, default=21)
    sp.add_argument("--param", choices=("s", "p"), default="s")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    common(sp)
    sp.set_defaults(func=cmd_werner_scan)

    sp = sub.add_parser("check", help="sampled NPT / rank-2 distillability checks on a subspace")
    sp.add_argument("subspace_file")
    sp.add_argument("--npt", action="store_true")
    sp.add_argument("--distill", action="store_true")
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--restarts", type=int)
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("verify-paper", help="run the reproduction suite")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--fast", action="store_true", help="16 restarts, 20 samples (default)")
    g.add_argument("--full", action="store_true", help="64 restarts, 100 samples")
    common(sp)
    sp.set_defaults(func=cmd_verify_paper)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.seed is None:
            args.seed = default_seed()
        if args.command == "check" and not (args.npt or args.distill):
            raise InputError("check needs --npt and/or --distill")
        return args.func(args)
    except PreconditionError as exc:
        print(f"error: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (InputError, ArgumentError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
