"""Command line interface: ``hallorbits <group> <command> [options]``.

Exit codes: 0 clean, 1 a check failed, 2 bad arguments or config, 3 bad corpus.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .characters import DixonError, character_degrees
from .config import CapExceeded, load_config
from .harness import (
    CHECKS,
    EXIT_CLEAN,
    EXIT_CONFIG,
    EXIT_CORPUS,
    EXIT_VIOLATION,
    ConfigError,
    CorpusError,
    RunConfig,
    _lemma_record,
    _pair_record,
    load_corpus,
    run_all,
    verify_main_inequality,
)
from .linear import MatrixGroup, check_hypotheses, constructors
from .orbits import fd_csv, fd_scan, qualifying_orbits
from .pisets import PiSet, parse_pi
from .radicals import NotPiSeparable, hall_subgroup


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n"


def _pi(text: str) -> PiSet:
    try:
        return parse_pi(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _d_range(text: str) -> range:
    try:
        if ":" in text:
            lo, hi = text.split(":")
            return range(int(lo), int(hi) + 1)
        return range(int(text), int(text) + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected D or LO:HI, got {text!r}") from None


def _resolve_group(args):
    """(name, group) from --group KIND:a:b or --entry NAME in the corpus."""
    if args.group:
        kind, *params = args.group.split(":")
        try:
            return args.group, constructors(kind, *map(int, params))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad --group {args.group!r}: {exc}") from None
    if not args.entry:
        raise ConfigError("give --entry NAME (from the corpus) or --group KIND:params, e.g. GL:2:3")
    for e in load_corpus(args.corpus, build=False):
        if e.name == args.entry:
            return e.name, e.build()
    raise ConfigError(f"no corpus entry named {args.entry!r}")


def _needs_module(name, G) -> MatrixGroup:
    if not isinstance(G, MatrixGroup):
        raise ConfigError(f"{name} is a permutation group; this check needs a matrix group")
    return G


# -- commands ------------------------------------------------------------------------

def cmd_corpus_run(args) -> int:
    overrides = {
        "corpus": args.corpus, "unit": args.unit, "mode": args.mode, "seed": args.seed,
        "jobs": args.jobs, "out": args.out, "pi_policy": args.pi_policy,
        "checks": tuple(args.checks) if args.checks else None,
        "entries": tuple(args.entry) if args.entry else None,
    }
    if args.config:
        cfg = RunConfig.from_file(args.config, **overrides)
    else:
        cfg = RunConfig(**{k: v for k, v in overrides.items() if v is not None}).validate()
    result = run_all(cfg, log=lambda m: print(m, file=sys.stderr))
    print(f"report: {result.report_path}", file=sys.stderr)
    return result.exit_code


def cmd_corpus_list(args) -> int:
    rows = [{"name": e.name, "kind": e.kind, "order": e.perm_group().order, "description": e.description}
            for e in load_corpus(args.corpus)]
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["name", "kind", "order", "description"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        _emit(args, buf.getvalue())
    else:
        _emit(args, _dump(rows))
    return EXIT_CLEAN


def _record_out(args, rec) -> int:
    if args.format == "csv":
        from .harness import summary_csv

        _emit(args, summary_csv([rec]))
    else:
        _emit(args, _dump(rec.to_dict()))
    return EXIT_VIOLATION if rec.holds is False else EXIT_CLEAN


def cmd_verify_inequality(args) -> int:
    name, G = _resolve_group(args)
    return _record_out(args, verify_main_inequality(G, args.pi, seed=args.seed, name=name))


def cmd_verify_orbits(args) -> int:
    name, G = _resolve_group(args)
    M = _needs_module(name, G)
    hyp = check_hypotheses(M, args.pi, args.mode)
    try:
        H = hall_subgroup(M.perm_group, args.pi, seed=args.seed, name=name)
    except NotPiSeparable as exc:
        print(f"skipped: {exc}", file=sys.stderr)
        return EXIT_CLEAN
    rep = qualifying_orbits(M, H, args.pi, unit=args.unit, mode=args.mode, hypothesis=hyp)
    out = {"entry": name, **rep.to_dict(), "hall_generators": [str(g) for g in H.generators]}
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["entry", "pi", "unit", "total_orbits", "qualifying", "threshold", "threshold_met", "eligible"])
        w.writerow([name, str(rep.pi), rep.unit, rep.total_orbits, rep.qualifying, rep.threshold,
                    rep.threshold_met, hyp.eligible])
        _emit(args, buf.getvalue())
    else:
        _emit(args, _dump(out))
    return EXIT_VIOLATION if hyp.eligible and not rep.threshold_met else EXIT_CLEAN


def cmd_verify_pair(args) -> int:
    name, G = _resolve_group(args)
    return _record_out(args, _pair_record(_needs_module(name, G), args.pi, args.seed, name, args.mode))


def cmd_verify_lemma(args) -> int:
    name, G = _resolve_group(args)
    return _record_out(args, _lemma_record(_needs_module(name, G), PiSet(()), args.seed, name))


def cmd_scan_fd(args) -> int:
    rows = fd_scan(args.p, args.d)
    if args.format == "csv":
        _emit(args, fd_csv(rows))
    else:
        _emit(args, _dump([{"d": r.d, "value": r.value, "sign": r.sign} for r in rows]))
    return EXIT_CLEAN


def cmd_group_info(args) -> int:
    name, G = _resolve_group(args)
    P = G.perm_group if isinstance(G, MatrixGroup) else G
    cd = P.classes
    info = {
        "name": name,
        "order": P.order,
        "degree": P.n,
        "solvable": P.is_solvable(),
        "derived_series": [H.order for H in P.derived_series],
        "chief_factors": [f.order for f in P.chief_factors()],
        "classes": len(cd),
        "class_sizes": list(cd.sizes),
        "exponent": cd.exponent,
    }
    if isinstance(G, MatrixGroup):
        info["module"] = G.space.describe()
        info["fields"] = [{"name": F.name, "poly": list(F.poly)} for F, _ in G.space.components]
    degs = character_degrees(P, seed=args.seed)
    info["character_degrees"] = list(degs.degrees)
    info["dixon_prime"] = degs.ell
    _emit(args, _dump(info))
    return EXIT_CLEAN


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--corpus", help="corpus JSON (default: the shipped corpus)")
    common.add_argument("--config", help="JSON config; caps under the key 'caps'")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=["json", "csv"], default="json")

    target = argparse.ArgumentParser(add_help=False)
    target.add_argument("--entry", help="corpus entry name")
    target.add_argument("--group", help="built-in group KIND:params, e.g. GL:2:3, SL:2:4, Gamma:2:3")

    pi_opt = argparse.ArgumentParser(add_help=False)
    pi_opt.add_argument("--pi", type=_pi, required=True, help="comma separated primes, e.g. 2,3")
    pi_opt.add_argument("--mode", choices=["strict", "lenient"], default="strict")

    parser = argparse.ArgumentParser(prog="hallorbits", description=__doc__.splitlines()[0])
    top = parser.add_subparsers(dest="group_cmd", required=True)

    corpus = top.add_parser("corpus", help="batch runs over a corpus").add_subparsers(dest="cmd", required=True)
    run = corpus.add_parser("run", parents=[common], help="run every check on every entry")
    run.add_argument("--unit", choices=["H", "G"])
    run.add_argument("--mode", choices=["strict", "lenient"])
    run.add_argument("--jobs", type=int)
    run.add_argument("--pi-policy", choices=["all", "explicit"], dest="pi_policy")
    run.add_argument("--checks", nargs="+", choices=CHECKS)
    run.add_argument("--entry", action="append", help="restrict to this entry (repeatable)")
    run.set_defaults(func=cmd_corpus_run, seed=None)
    lst = corpus.add_parser("list", parents=[common], help="list entries and group orders")
    lst.set_defaults(func=cmd_corpus_list)

    verify = top.add_parser("verify", help="single checks").add_subparsers(dest="cmd", required=True)
    v = verify.add_parser("inequality", parents=[common, target], help="|G:O_{pi'pi}(G)|_pi <= b(H)^2")
    v.add_argument("--pi", type=_pi, required=True)
    v.set_defaults(func=cmd_verify_inequality)
    v = verify.add_parser("orbits", parents=[common, target, pi_opt], help="qualifying orbit census on V + V")
    v.add_argument("--unit", choices=["H", "G"], default="H")
    v.set_defaults(func=cmd_verify_orbits)
    v = verify.add_parser("pair", parents=[common, target, pi_opt], help="search for a qualifying pair")
    v.set_defaults(func=cmd_verify_pair)
    v = verify.add_parser("lemma", parents=[common, target], help="regular orbit => small centralizer")
    v.set_defaults(func=cmd_verify_lemma)

    scan = top.add_parser("scan", help="counting-function tables").add_subparsers(dest="cmd", required=True)
    fd = scan.add_parser("fd", parents=[common], help="certified signs of f(d)")
    fd.add_argument("--p", type=int, choices=[2, 3], required=True)
    fd.add_argument("--d", type=_d_range, default=range(1, 65), help="D or LO:HI (default 1:64)")
    fd.set_defaults(func=cmd_scan_fd)

    group = top.add_parser("group", help="group data").add_subparsers(dest="cmd", required=True)
    info = group.add_parser("info", parents=[common, target], help="order, series, classes, degrees")
    info.set_defaults(func=cmd_group_info)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed usage; a bad command line is a config error
        return EXIT_CONFIG if exc.code else 0
    try:
        if args.config and args.func is not cmd_corpus_run:
            try:
                load_config(args.config)
            except (OSError, ValueError, TypeError) as exc:
                raise ConfigError(f"{args.config}: {exc}") from None
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CorpusError as exc:
        print(f"corpus error: {exc}", file=sys.stderr)
        return EXIT_CORPUS
    except (CapExceeded, DixonError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CORPUS


if __name__ == "__main__":
    sys.exit(main())
