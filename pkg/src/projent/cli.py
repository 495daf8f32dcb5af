"""Command-line interface.

Every command writes one JSON object per line to stdout (sorted keys) and a
short human summary to stderr. Exit status: 0 when everything holds or is
feasible, 1 when a violation or infeasible instance turns up, 2 on usage,
parse or precondition errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from typing import Any

from . import __version__
from . import entropy as ent
from . import families as fam_mod
from . import io
from . import lattice as lat
from . import sumsets as ss
from .errors import ProjentError
from .groups import load_catalog
from .search import SearchConfig, run_search

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)


def digest(paths) -> dict:
    out = {}
    for p in paths:
        try:
            with open(p, "rb") as fh:
                out[str(p)] = hashlib.sha256(fh.read()).hexdigest()[:16]
        except OSError as exc:
            raise io.ParseError(p, exc.strerror or str(exc)) from None
    return out


def parse_subset(text: str) -> int:
    try:
        return fam_mod.mask_of(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise UsageError(f"bad subset {text!r}: {exc}") from None


class Run:
    """Collects verdict lines and the exit status for one invocation."""

    def __init__(self, args, inputs=()):
        self.args = args
        self.inputs = digest(inputs)
        self.status = EXIT_OK
        self.quiet = args.json

    def emit(self, verdict: str, payload: dict, command: str | None = None):
        if verdict in ("violated", "infeasible"):
            self.status = EXIT_VIOLATION
        record = {
            "command": command or f"{self.args.group} {self.args.cmd}",
            "inputs": self.inputs,
            "verdict": verdict,
            "payload": payload,
            "seed": self.args.seed,
            "tol": self.args.tol,
            "version": __version__,
        }
        print(dumps(record))

    def say(self, text: str):
        if not self.quiet:
            print(text, file=sys.stderr)


def _report_verdict(ok: bool) -> str:
    return "holds" if ok else "violated"


# family


def cmd_family(args) -> int:
    run = Run(args, [args.file])
    fam = io.load_family(args.file)
    if args.cmd == "sharp":
        sharp = fam_mod.minimal_compression(fam)
        run.emit(
            "ok",
            {"family": io.family_to_json(fam), "sharp": io.family_to_json(sharp),
             "chain": fam_mod.is_chain(sharp)},
        )
        run.say("sharp: " + ", ".join(fam_mod.format_mask(a) for a in sharp.members))
    elif args.cmd == "compress":
        out = fam_mod.elementary_compression(fam, args.i - 1, args.j - 1)
        run.emit(
            "ok",
            {"family": io.family_to_json(fam), "compressed": io.family_to_json(out),
             "potential": [fam_mod.potential(fam), fam_mod.potential(out)]},
        )
        run.say("compressed: " + ", ".join(fam_mod.format_mask(a) for a in out.members))
    elif args.cmd == "check":
        payload = {
            "profile": list(fam_mod.cover_profile(fam)),
            "k": args.k,
            "cover": fam_mod.is_k_cover(fam, args.k),
            "uniform": fam_mod.is_uniform_k_cover(fam, args.k),
            "m": fam.m,
            "potential": fam_mod.potential(fam),
        }
        if args.against:
            other = io.load_family(args.against)
            reach = fam_mod.compresses_to(fam, other)
            payload["compresses_to"] = reach
            payload["relation"] = (
                "equal" if fam == other else "strictly compresses" if reach else "not comparable"
            )
        run.emit("ok", payload)
        run.say(f"profile {payload['profile']}: cover={payload['cover']} uniform={payload['uniform']}")
    return run.status


# entropy


def cmd_entropy(args) -> int:
    files = [args.dist] + list(args.families)
    run = Run(args, files)
    d = io.load_distribution(args.dist)
    fams = [io.load_family(p) for p in args.families]
    tol = args.tol
    need = {"shearer": 1, "mt": 1, "gen1": 2, "gen2": 1, "submod": 0, "box": 0}[args.cmd]
    if len(fams) != need:
        raise UsageError(f"entropy {args.cmd} takes {need} family file(s), got {len(fams)}")
    if args.cmd in ("shearer", "mt") and args.k is None:
        raise UsageError(f"entropy {args.cmd} needs --k")

    if args.cmd == "submod":
        if args.a is None or args.b is None:
            raise UsageError("entropy submod needs --a and --b")
        reports = [ent.check_submodularity(d, parse_subset(args.a), parse_subset(args.b), tol)]
    elif args.cmd == "shearer":
        reports = [ent.verify_shearer(d, fams[0], args.k, tol)]
    elif args.cmd == "mt":
        reports = list(ent.verify_madiman_tetali(d, fams[0], args.k, tol))
    elif args.cmd == "gen1":
        reports = [ent.verify_gen1(d, fams[0], fams[1], tol)]
    elif args.cmd == "gen2":
        reports = [ent.verify_gen2(d, fams[0], tol)]
    else:
        cert = ent.box_certificate(d)
        checks = ent.check_box_certificate(d, cert, tol)
        ok = all(lo.holds and up.holds for _, lo, up in checks)
        worst = min(min(lo.slack, up.slack) for _, lo, up in checks)
        run.emit(
            _report_verdict(ok),
            {"h": list(cert.h), "checks": len(checks), "min_slack": worst,
             "failures": [fam_mod.format_mask(a) for a, lo, up in checks
                          if not (lo.holds and up.holds)]},
        )
        run.say(f"box certificate h={['%.6f' % x for x in cert.h]}; {len(checks)} checks, ok={ok}")
        return run.status

    ok = all(r.holds for r in reports)
    payload = {"reports": [r.as_dict() for r in reports]}
    if len(reports) == 1:
        payload.update(lhs=reports[0].lhs, rhs=reports[0].rhs, slack=reports[0].slack)
    run.emit(_report_verdict(ok), payload)
    for r in reports:
        run.say(f"{r.label}: {r.lhs:.9f} <= {r.rhs:.9f} (slack {r.slack:.3e}) -> {r.verdict}")
    return run.status


# lattice


def _projection_counterexample(args) -> int:
    run = Run(args)
    cx = lat.gen2_projection_counterexample()
    confirmed = cx.lhs_product > cx.rhs_product
    run.emit(
        "counterexample-confirmed" if confirmed else "violated",
        {
            "points": [list(p) for p in cx.points.sorted_points()],
            "family": io.family_to_json(cx.fam_a),
            "sharp": io.family_to_json(cx.fam_b),
            "sizes": cx.sizes,
            "sharp_product": cx.lhs_product,
            "family_product": cx.rhs_product,
        },
    )
    run.say(f"projection products: sharp {cx.lhs_product} > family {cx.rhs_product}")
    return run.status


def cmd_lattice(args) -> int:
    if args.cmd == "fig2":
        return _projection_counterexample(args)
    if args.cmd == "project":
        run = Run(args, [args.file])
        s = io.load_lattice(args.file)
        if args.a is None:
            raise UsageError("lattice project needs --a")
        p = lat.project(s, parse_subset(args.a))
        run.emit("ok", {"projection": io.lattice_to_json(p), "size": len(p)})
        run.say(f"|S_A| = {len(p)}")
        return run.status
    if args.k is None or args.family is None:
        raise UsageError("lattice cover needs a family file and --k")
    run = Run(args, [args.file, args.family])
    s = io.load_lattice(args.file)
    fam = io.load_family(args.family)
    rep = lat.verify_uniform_cover(s, fam, args.k)
    run.emit(_report_verdict(rep.holds), rep.as_dict())
    run.say(f"|S|^k = {rep.lhs} <= {rep.rhs} -> {rep.holds}")
    return run.status


# sumset


def _instance(args, path):
    group = io.load_group(args.group_file) if args.group_file else None
    return io.load_instance(path, group)


def cmd_sumset(args) -> int:
    if args.cmd == "fig2":
        return _projection_counterexample(args)
    if args.cmd == "gymr":
        run = Run(args, [args.file])
        a, bs, c = io.load_gymr(args.file)
        rep = ss.verify_gymr(a, bs, c)
        run.emit(_report_verdict(rep.holds), rep.as_dict())
        rel = "=" if rep.equality else "<=" if rep.holds else ">"
        run.say(f"|A+C|^k = {rep.lhs} {rel} {rep.rhs}")
        return run.status

    files = [args.file] + ([args.family] if args.family else []) + (
        [args.group_file] if args.group_file else []
    )
    run = Run(args, files)
    inst = _instance(args, args.file)
    fam = io.load_family(args.family) if args.family else None
    if args.cmd in ("cover", "marking") and (fam is None or args.k is None):
        raise UsageError(f"sumset {args.cmd} needs a family file and --k")

    if args.cmd == "cover":
        rep = ss.verify_sumset_cover(inst, fam, args.k)
        ok = rep.holds and rep.embedded.holds and rep.containment_ok and rep.box.feasible
        run.emit(_report_verdict(ok), rep.as_dict())
        run.say(f"|S|^k = {rep.lhs} <= {rep.rhs}; box feasible={rep.box.feasible}")
    elif args.cmd == "marking":
        w = ss.marking_algorithm(inst, fam, args.k)
        audit = w.audit()
        run.emit(_report_verdict(all(audit.values())), w.as_dict())
        top, mid, bottom = w.chain()
        run.say(f"k(|S|-1)={top} >= k(|S'|-1)={mid} >= sum(|S_A|-1)={bottom}; audit ok={all(audit.values())}")
    elif args.cmd == "cd":
        cd = ss.verify_cauchy_davenport(inst)
        payload = {"cauchy_davenport": cd.as_dict()}
        ok = cd.holds
        run.say(f"|S|={cd.size}, p={cd.p}, sum(|S_i|-1)={cd.excess} -> {cd.holds}")
        if fam is not None:
            k = args.k if args.k is not None else max(fam_mod.cover_profile(fam))
            cover = ss.verify_additive_cover(inst, fam, k)
            payload["additive_cover"] = cover.as_dict()
            ok = ok and cover.holds
            rel = ">=" if cover.holds else "<"
            run.say(f"k(|S|-1) = {cover.lhs} {rel} {cover.rhs} = sum(|S_A|-1)")
        run.emit(_report_verdict(ok), payload)
    return run.status


# search


def cmd_search(args) -> int:
    groups = load_catalog(args.groups) if args.groups else load_catalog()
    cfg = SearchConfig(
        conjecture=args.conjecture,
        groups=groups,
        n=args.n,
        set_size_max=args.set_size_max,
        seed=args.seed,
        samples=args.samples,
        budget=args.budget,
        value_max=args.value_max,
    )
    status = EXIT_OK
    summary = None
    for record in run_search(cfg):
        if record.get("summary"):
            summary = record
            record = dict(record, seed=args.seed, tol=args.tol, version=__version__)
        elif record.get("feasible") is False:
            status = EXIT_VIOLATION
        print(dumps(record))
    if not args.json:
        print(
            f"conjecture {args.conjecture}: {summary['instances']} instances, "
            f"{summary['feasible']} feasible, {summary['infeasible']} infeasible, "
            f"{summary['errors']} errors",
            file=sys.stderr,
        )
    return status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=ent.DEFAULT_TOL)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--json", action="store_true", help="suppress the stderr summary")

    parser = argparse.ArgumentParser(prog="projent", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    top = parser.add_subparsers(dest="group", required=True)

    p = top.add_parser("family", help="set families and compressions")
    sub = p.add_subparsers(dest="cmd", required=True)
    q = sub.add_parser("sharp", parents=[common])
    q.add_argument("file")
    q = sub.add_parser("compress", parents=[common])
    q.add_argument("--i", type=int, required=True, help="1-based member index")
    q.add_argument("--j", type=int, required=True, help="1-based member index")
    q.add_argument("file")
    q = sub.add_parser("check", parents=[common])
    q.add_argument("--k", type=int, default=1)
    q.add_argument("--against", help="second family; report whether FILE compresses to it")
    q.add_argument("file")
    p.set_defaults(func=cmd_family)

    p = top.add_parser("entropy", help="entropy inequality verifiers")
    sub = p.add_subparsers(dest="cmd", required=True)
    for name in ("submod", "shearer", "mt", "gen1", "gen2", "box"):
        q = sub.add_parser(name, parents=[common])
        q.add_argument("--k", type=int)
        q.add_argument("--a", help="comma-separated subset, e.g. 1,2")
        q.add_argument("--b", help="comma-separated subset")
        q.add_argument("dist")
        q.add_argument("families", nargs="*")
    p.set_defaults(func=cmd_entropy)

    p = top.add_parser("lattice", help="lattice point sets and projections")
    sub = p.add_subparsers(dest="cmd", required=True)
    q = sub.add_parser("project", parents=[common])
    q.add_argument("--a")
    q.add_argument("file")
    q = sub.add_parser("cover", parents=[common])
    q.add_argument("--k", type=int)
    q.add_argument("file")
    q.add_argument("family", nargs="?")
    sub.add_parser("fig2", parents=[common])
    p.set_defaults(func=cmd_lattice)

    p = top.add_parser("sumset", help="sumset inequalities")
    sub = p.add_subparsers(dest="cmd", required=True)
    for name in ("cover", "marking", "cd"):
        q = sub.add_parser(name, parents=[common])
        q.add_argument("--k", type=int)
        q.add_argument("--group", dest="group_file", help="group file overriding the instance's")
        q.add_argument("file")
        q.add_argument("family", nargs="?")
    q = sub.add_parser("gymr", parents=[common])
    q.add_argument("file")
    sub.add_parser("fig2", parents=[common])
    p.set_defaults(func=cmd_sumset)

    p = top.add_parser("search", parents=[common], help="conjecture counterexample search")
    p.add_argument("conjecture", choices=["6.1", "6.2"])
    p.add_argument("--groups", help="catalog JSON; defaults to all groups of order <= 8")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--set-size-max", type=int, default=3)
    p.add_argument("--samples", type=int, default=100, help="instances per group when sampling")
    p.add_argument("--budget", type=int, default=None, help="maximum number of instances")
    p.add_argument("--value-max", type=int, default=10, help="range for free abelian samples")
    p.set_defaults(func=cmd_search, cmd=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    random.seed(args.seed)
    try:
        return args.func(args)
    except (UsageError, ProjentError, IndexError) as exc:
        print(dumps({"verdict": "error", "error": type(exc).__name__, "message": str(exc)}))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
