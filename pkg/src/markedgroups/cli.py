"""Batch front end: ``mgl <verb> [flags]``.

Every verb builds its tables in memory first. Nothing is written until the
whole computation has succeeded, so a budget refusal (exit 2) never leaves
partial output behind. Usage errors exit with 1.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import __version__, grigorchuk, lattice, metric, onerelator, smallcancel, words
from ._budget import BudgetExceeded, default_budget
from .dehn import trace_to_json
from .tables import Table, plotdata

EXIT_OK, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunManifest:
    command: list[str]
    verb: str
    params: dict
    seeds: list[int]
    budget: int
    threads: int
    version: str
    wall_time: float
    outputs: dict[str, str] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=1) + "\n"


@dataclass
class Result:
    """What a verb produced: the main table, extra files, and a console line."""

    table: Table
    files: dict[str, str] = field(default_factory=dict)
    message: str | None = None


def sha256(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _relators(args, m):
    if not args.relators:
        raise UsageError("--relators is required")
    return [words.parse_word(r, m) for r in args.relators.split(",")]


_FLAG = {"m": "-m", "n": "-n", "k": "-k", "q": "-q", "lam": "--lambda", "word": "-w"}


def _need(args, *names):
    missing = [_FLAG[n] for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing required flag(s): " + ", ".join(missing))


def _n_range(args):
    _need(args, "n")
    lo = args.n_min if args.n_min is not None else 1
    if lo > args.n:
        raise UsageError("--n-min exceeds -n")
    return range(lo, args.n + 1)


def _dim_files(table, estimate):
    files = {"plotdata.tsv": plotdata(table)}
    if estimate is not None:
        files["dim.tsv"] = estimate.to_tsv()
    return files


# verbs ---------------------------------------------------------------------

def cmd_ball(args):
    _need(args, "m", "n")
    lo = args.n_min if args.n_min is not None else args.n
    ball = words.enumerate_ball(args.m, args.n, args.budget, args.threads)
    sizes = [0] * (args.n + 1)
    for w in ball.words:
        sizes[len(w)] += 1
    t = Table(f"ball m={args.m}", ["n", "beta"])
    for k in range(lo, args.n + 1):
        t.add(k, sum(sizes[: k + 1]))
    files = {"ball_words.txt": "\n".join(words.format_word(w) for w in ball.words) + "\n"} if args.list else {}
    return Result(t, files)


def cmd_cyc(args):
    _need(args, "m", "n")
    lo = args.n_min if args.n_min is not None else args.n
    t = Table(f"cyc m={args.m}", ["n", "cyc", "ratio"])
    for k in range(max(lo, 1), args.n + 1):
        c = len(words.enumerate_cyc(args.m, k, args.budget, args.threads))
        t.add(k, c, c / (2 * args.m - 1) ** k)
    return Result(t)


def cmd_check_cprime(args):
    _need(args, "m", "lam")
    rels = _relators(args, args.m)
    res = smallcancel.check_c_prime(rels, args.lam)
    t = Table("check-cprime", ["relators", "lambda", "max_piece", "ok", "witness"])
    longest = max(
        smallcancel.max_piece(rels[i], rels[j]) for i in range(len(rels)) for j in range(i, len(rels))
    )
    t.add(",".join(rels), str(args.lam), longest, res.ok, res.witness)
    return Result(t, message="ok" if res.ok else f"violated: piece {res.witness}")


def _presentation(args):
    _need(args, "m", "lam")
    return smallcancel.Presentation(args.m, tuple(_relators(args, args.m)), lam=args.lam)


def cmd_dehn(args):
    _need(args, "word")
    P = _presentation(args)
    w = words.parse_word(args.word, P.m)
    ok, trace = smallcancel.dehn_member(w, P)
    t = Table("dehn", ["word", "accepted", "steps"])
    t.add(words.format_word(w), ok, len(trace))
    return Result(t, {"trace.json": trace_to_json(trace) + "\n"}, "accepted" if ok else "rejected")


def cmd_fingerprint(args):
    _need(args, "n")
    P = _presentation(args)
    fp = smallcancel.closure_fingerprint(P, args.n, budget=args.budget, threads=args.threads)
    t = Table("fingerprint", ["n", "beta", "members"])
    t.add(fp.n, fp.beta, len(fp.members()))
    return Result(t, {"fingerprint.txt": metric.write_fingerprints([fp])})


def cmd_ps_dim(args):
    _need(args, "m", "k", "lam")
    table, est = smallcancel.ps_dimension_experiment(
        args.m, args.k, args.lam, _n_range(args), budget=args.budget, threads=args.threads
    )
    files = _dim_files(table, est)
    if args.samples:
        s = Table("ps-sample", ["n", "samples", "hits", "estimate", "stderr", "seed"])
        for n in _n_range(args):
            r = smallcancel.sample_ps(args.m, args.k, args.lam, n, samples=args.samples, seed=args.seed)
            s.add(n, r.samples, r.hits, r.estimate, r.stderr, r.seed)
        files["ps_sample." + args.format] = s.render(args.format)
    return Result(table, files)


def cmd_ur_dim(args):
    _need(args, "m", "q")
    table, est = onerelator.ur_dimension_experiment(
        args.m, args.q, _n_range(args), budget=args.budget, threads=args.threads
    )
    return Result(table, _dim_files(table, est))


def _omega(text, flag="--omega"):
    if text is None:
        raise UsageError(f"{flag} is required")
    return grigorchuk.OracleSeq.parse(text)


def _grig_word(text):
    s = "".join(text.split())
    return "" if s == "1" else s


def cmd_grig_member(args):
    _need(args, "word")
    omega = _omega(args.omega)
    w = _grig_word(args.word)
    v = grigorchuk.member(w, omega)
    verdict = "accepted" if v.accepted else "rejected"
    t = Table("grig-member", ["word", "omega", "verdict", "depth", "nodes"])
    t.add(words.format_word(w), str(omega), verdict, v.depth, sum(1 for _ in v.tree.walk()))
    return Result(t, message=verdict)


def cmd_grig_fingerprint(args):
    _need(args, "n")
    omega = _omega(args.omega)
    fp = grigorchuk.fingerprint_S(omega, args.n, budget=args.budget, threads=args.threads)
    t = Table("grig-fingerprint", ["omega", "L", "beta", "members"])
    t.add(str(omega), fp.n, fp.beta, len(fp.members()))
    return Result(t, {"fingerprint.txt": metric.write_fingerprints([fp])})


def cmd_grig_prop62(args):
    _need(args, "n")
    o1, o2 = _omega(args.omega), _omega(args.omega2, "--omega2")
    rep = grigorchuk.verify_prop62(o1, o2, args.n, budget=args.budget, threads=args.threads)
    t = Table("grig-prop62", ["omega1", "omega2", "n", "agree", "check", "length", "holds", "separating_word"])
    t.add(str(o1), str(o2), args.n, rep["agree"], rep["check"], rep["length"], rep["holds"],
          rep.get("separating_word"))
    return Result(t)


def cmd_zm_cover(args):
    _need(args, "m", "n")
    lo = args.n_min if args.n_min is not None else args.n
    t = Table(f"zm-cover m={args.m}", ["n", "N", "exact", "bound"])
    for k in range(lo, args.n + 1):
        r = lattice.covering_number_Zm(args.m, k, args.budget)
        t.add(k, r.count, r.exact, r.bound)
    return Result(t)


def cmd_zm_dim(args):
    _need(args, "m")
    table, est = lattice.zm_dimension_experiment(args.m, _n_range(args), args.budget)
    return Result(table, _dim_files(table, est))


def cmd_distance(args):
    if len(args.files) != 2:
        raise UsageError("distance takes two fingerprint files")
    fams = []
    for path in args.files:
        with open(path) as fh:
            fams.append(metric.read_fingerprints(fh.read()))
    t = Table("distance", ["i", "j", "valuation", "distance"])
    for i, A in enumerate(fams[0]):
        for j, B in enumerate(fams[1]):
            v = metric.valuation(A, B)
            t.add(i, j, "inf" if v.infinite else int(v.value), v.describe_distance())
    return Result(t)


def cmd_growth(args):
    _need(args, "m", "n")
    t = Table(f"growth m={args.m}", ["n", "beta", "sigma", "beta_over_n", "growth_rate"])
    for row in metric.growth_stats(args.m, args.n, args.budget):
        t.add(*row)
    return Result(t)


VERBS = {
    "ball": cmd_ball,
    "cyc": cmd_cyc,
    "check-cprime": cmd_check_cprime,
    "dehn": cmd_dehn,
    "fingerprint": cmd_fingerprint,
    "ps-dim": cmd_ps_dim,
    "ur-dim": cmd_ur_dim,
    "grig-member": cmd_grig_member,
    "grig-fingerprint": cmd_grig_fingerprint,
    "grig-prop62": cmd_grig_prop62,
    "zm-cover": cmd_zm_cover,
    "zm-dim": cmd_zm_dim,
    "distance": cmd_distance,
    "growth": cmd_growth,
}


def _lambda(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid rational {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mgl", description="Experiments on spaces of marked groups.")
    p.add_argument("verb", choices=sorted(VERBS))
    p.add_argument("files", nargs="*", help="fingerprint files (distance)")
    p.add_argument("-m", type=int)
    p.add_argument("-n", type=int)
    p.add_argument("--n-min", type=int)
    p.add_argument("-k", type=int)
    p.add_argument("-q", type=int)
    p.add_argument("--lambda", dest="lam", type=_lambda)
    p.add_argument("-w", "--word", dest="word")
    p.add_argument("--relators", help="comma-separated relators")
    p.add_argument("--omega")
    p.add_argument("--omega2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=0, help="ps-dim: Monte Carlo tuples per n")
    p.add_argument("--budget", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")
    p.add_argument("--plotdata", action="store_true", help="print plot data instead of the table")
    p.add_argument("--list", action="store_true", help="ball: also write the enumerated words")
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    t0 = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        if args.budget is None:
            args.budget = default_budget()
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        result = VERBS[args.verb](args)
    except UsageError as e:
        print(f"mgl: error: {e}", file=stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"mgl: refused: {e}", file=stderr)
        return EXIT_BUDGET
    except (ValueError, OSError) as e:
        print(f"mgl: error: {e}", file=stderr)
        return EXIT_USAGE

    main_name = f"{args.verb}.{args.format}"
    outputs = {main_name: result.table.render(args.format), **result.files}
    if args.plotdata:
        if "plotdata.tsv" not in outputs:
            print(f"mgl: error: {args.verb} has no plot data", file=stderr)
            return EXIT_USAGE
        stdout.write(outputs["plotdata.tsv"])
    else:
        stdout.write(outputs[main_name])
        if result.message:
            stdout.write(result.message + "\n")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for name, text in outputs.items():
            with open(os.path.join(args.out, name), "w") as fh:
                fh.write(text)
        params = {k: (str(v) if isinstance(v, Fraction) else v) for k, v in vars(args).items()
                  if k not in ("out", "threads", "budget")}
        manifest = RunManifest(
            command=["mgl", *argv],
            verb=args.verb,
            params=params,
            seeds=[args.seed],
            budget=args.budget,
            threads=args.threads,
            version=__version__,
            wall_time=round(time.perf_counter() - t0, 3),
            outputs={name: sha256(text) for name, text in sorted(outputs.items())},
        )
        with open(os.path.join(args.out, "manifest.json"), "w") as fh:
            fh.write(manifest.to_json())
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
