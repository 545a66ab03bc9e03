"""Command line entry point: hua5 <subcommand> [options]."""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np
from scipy import fft as sfft

from . import conditions, gauss, hua, report, residues, sieve, spectral
from .arith import InvalidArgument, primes_upto

log = logging.getLogger("hua5")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def read_config(path) -> dict:
    """key = value lines; '#' starts a comment. Keys use flag names."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidArgument(f"{path}:{lineno}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.lstrip("-").replace("-", "_")] = v.strip('"').strip("'")
    return out


def _int_list(s):
    return [int(x) for x in str(s).replace(",", " ").split()]


GLOBAL_DEFAULTS = {"output": "json", "out": None, "threads": 1, "seed": 0,
                   "config": None, "verbose": False}


def _global_options(suppress: bool) -> argparse.ArgumentParser:
    # subcommands accept the global flags too; their defaults are suppressed so
    # a flag given before the subcommand is not overwritten
    g = argparse.ArgumentParser(add_help=False)
    d = (lambda k: argparse.SUPPRESS) if suppress else GLOBAL_DEFAULTS.get
    g.add_argument("--output", choices=("json", "csv"), default=d("output"))
    g.add_argument("--out", metavar="PATH", default=d("out"))
    g.add_argument("--threads", type=int, default=d("threads"))
    g.add_argument("--seed", type=int, default=d("seed"))
    g.add_argument("--config", metavar="FILE", default=d("config"))
    g.add_argument("-v", "--verbose", action="store_true", default=d("verbose"))
    return g


def build_parser(config: dict | None = None) -> argparse.ArgumentParser:
    """Parser for all subcommands; config values replace defaults and make
    required flags optional."""
    common = _global_options(suppress=True)
    p = argparse.ArgumentParser(prog="hua5", parents=[_global_options(suppress=False)],
                                description="Five-prime-squares verification toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="end-to-end check for one target M")
    s.add_argument("--M", type=int, required=True)
    s.add_argument("--w", type=int, default=3)
    s.add_argument("--delta", type=float, default=0.001)
    s.add_argument("--z", type=int, default=None)

    s = sub.add_parser("pseudorandom", parents=[common], help="majorant deviation sweep over w")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--w-sweep", type=_int_list, default=[3, 5, 7, 11])
    s.add_argument("--b", type=int, default=1)
    s.add_argument("--z", type=int, default=50)
    s.add_argument("--delta", type=float, default=0.001)

    s = sub.add_parser("moments", parents=[common], help="restriction moments of a sequence")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--q", type=float, default=4.5)
    s.add_argument("--w", type=int, default=3)
    s.add_argument("--b", type=int, default=1)
    s.add_argument("--z", type=int, default=None)
    s.add_argument("--kind", choices=("a", "v", "random"), default="a")
    s.add_argument("--spectrum-csv", metavar="PATH", default=None)

    s = sub.add_parser("gauss-check", parents=[common], help="closed forms vs direct sums")
    s.add_argument("--c-max", type=int, default=300)

    s = sub.add_parser("sumset-check", parents=[common], help="five-fold residue sumsets")
    s.add_argument("--p-max", type=int, default=199)

    s = sub.add_parser("regularity", parents=[common], help="regularity pair sum")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--beta", type=float, required=True)
    s.add_argument("--kappa", type=float, default=0.0)
    s.add_argument("--w", type=int, default=3)
    s.add_argument("--b", type=int, default=1)
    s.add_argument("--z", type=int, default=None)

    s = sub.add_parser("scan", parents=[common], help="r5(M) over a window of targets")
    s.add_argument("--M0", type=int, default=10 ** 4)
    s.add_argument("--M1", type=int, default=10 ** 6)

    if config:
        for parser in [p, *sub.choices.values()]:
            for action in parser._actions:
                if action.dest in config:
                    action.required = False
                    action.default = config[action.dest]
    return p


def parse_args(argv=None):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    cfg = read_config(known.config) if known.config else {}
    parser = build_parser(cfg)
    args = parser.parse_args(argv)
    if cfg:
        dests = {a.dest for sp in [parser, *parser._subparsers._group_actions[0].choices.values()]
                 for a in sp._actions}
        unknown = set(cfg) - dests
        if unknown:
            parser.error(f"unknown config keys: {', '.join(sorted(unknown))}")
    for k, v in GLOBAL_DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    return args


# ----------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------

def cmd_verify(args):
    rep = hua.verify_hua(args.M, args.w, args.delta, args.z)
    hard = any(c.verdict == "fail" for c in rep.condition_reports) or not rep.consistent
    return rep, "HuaReport", hard


def cmd_pseudorandom(args):
    out = conditions.pseudorandom_sweep(args.N, tuple(args.w_sweep), args.b, args.z, args.delta)
    return out, "PseudorandomSweep", False


def _moment_sequence(args):
    if args.kind == "random":
        rng = np.random.default_rng(args.seed)
        return sieve.WeightedSequence.from_values(rng.integers(0, 2, args.N))
    ctx = residues.build_w_context(args.w, args.b, args.N, z_override=args.z)
    a, v = sieve.build_sequences(ctx)
    return a if args.kind == "a" else v


def cmd_moments(args):
    seq = _moment_sequence(args)
    rep = conditions.check_restriction(seq, args.q)
    if args.spectrum_csv:
        spectral.dft_grid(seq).to_csv(args.spectrum_csv)
    return rep, "ConditionReport", rep.verdict == "fail"


def cmd_gauss(args):
    out = gauss.closed_form_sweep(args.c_max)
    out["tolerance"] = 1e-9
    out["ok"] = out["max_rel_error"] <= 1e-9
    return out, "GaussSweep", not out["ok"]


def cmd_sumset(args):
    primes = [int(p) for p in primes_upto(args.p_max) if p >= 5]
    failures = [p for p in primes if not residues.sumset_cover_check(p)]
    out = {"p_max": args.p_max, "checked": len(primes), "failures": failures}
    return out, "SumsetCheck", bool(failures)


def cmd_regularity(args):
    ctx = residues.build_w_context(args.w, args.b, args.N, z_override=args.z)
    a, _ = sieve.build_sequences(ctx)
    rep = conditions.check_regularity(a, args.beta, args.kappa)
    return rep, "ConditionReport", rep.verdict == "fail"


def cmd_scan(args):
    out = hua.scan_window(args.M0, args.M1)
    out["note"] = "exceptions are an empirical enumeration result"
    return out, "ScanWindow", bool(out["witness_failures"])


COMMANDS = {
    "verify": cmd_verify, "pseudorandom": cmd_pseudorandom, "moments": cmd_moments,
    "gauss-check": cmd_gauss, "sumset-check": cmd_sumset, "regularity": cmd_regularity,
    "scan": cmd_scan,
}


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    except (OSError, InvalidArgument) as exc:
        print(f"hua5: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with sfft.set_workers(max(1, args.threads)):
            result, kind, hard = COMMANDS[args.command](args)
    except (hua.CongruenceError, hua.TargetTooSmall, InvalidArgument,
            residues.NotAResidue, residues.InvalidShift) as exc:
        print(f"hua5: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = report.emit_report(result, args.output, args.out, kind=kind)
    if args.out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return EXIT_FAIL if hard else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
