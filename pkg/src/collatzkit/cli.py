"""Command-line front end.

Standard output carries only results (plain, CSV or JSON); progress and
diagnostics go to standard error.  Exit codes: 0 success, 2 bad usage,
3 orbit unresolved under the step cap, 4 unusable checkpoint.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import analytics, codec, levelsets
from .accel import (
    DEFAULT_WINDOW,
    accel_step,
    accel_total_stopping_time,
    build_window_table,
    c4_witness,
    cached_table,
)
from .orbit import (
    DEFAULT_CAP,
    UnresolvedOrbit,
    curve_params,
    orbit,
    parity_trace,
    stopping_time,
    total_stopping_time,
)
from .scan import Checkpoint, CheckpointError, verify_range

log = logging.getLogger("collatzkit")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNRESOLVED = 3
EXIT_CHECKPOINT = 4


class UsageError(Exception):
    pass


@dataclass
class Output:
    """A result table plus its one-line plain rendering."""

    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)
    plain: str | None = None


def _cell(v: Any) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v)
    return str(v)


def _json_value(v: Any) -> Any:
    if isinstance(v, Fraction):
        return _cell(v)
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def render(out: Output, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(out.columns)
        for row in out.rows:
            writer.writerow([_cell(v) for v in row])
        return buf.getvalue()
    if fmt == "json":
        doc = [dict(zip(out.columns, (_json_value(v) for v in row))) for row in out.rows]
        return json.dumps(doc, indent=2) + "\n"
    if out.plain is not None:
        return out.plain if out.plain.endswith("\n") else out.plain + "\n"
    lines = [" ".join(_cell(v) for v in row) for row in out.rows]
    return "\n".join(lines) + "\n"


def _join(values) -> str:
    return ",".join(_cell(v) for v in values)


def _sigma_or_raise(n: int, cap: int) -> int:
    s = total_stopping_time(n, cap)
    if s is None:
        raise UnresolvedOrbit(n, cap)
    return s


# -- command handlers -------------------------------------------------------


def cmd_orbit(a) -> Output:
    rec = orbit(a.n, a.cap)
    if not rec.resolved:
        raise UnresolvedOrbit(a.n, a.cap)
    rows = [[k, v, p] for k, (v, p) in enumerate(zip(rec.values, rec.parities))]
    return Output(["step", "value", "parity"], rows, _join(rec.values))


def cmd_sigma(a) -> Output:
    s = _sigma_or_raise(a.n, a.cap)
    return Output(["n", "sigma"], [[a.n, s]], str(s))


def cmd_stopping(a) -> Output:
    s = stopping_time(a.n, a.cap)
    if s is None:
        raise UnresolvedOrbit(a.n, a.cap)
    return Output(["n", "stopping_time"], [[a.n, s]], str(s))


def cmd_trace(a) -> Output:
    bits = parity_trace(a.n, a.cap)
    return Output(["step", "parity"], [[k, b] for k, b in enumerate(bits)], _join(bits))


def cmd_curve(a) -> Output:
    i, j = curve_params(a.n, a.cap)
    return Output(["n", "i", "j", "i_le_j"], [[a.n, i, j, i <= j]], f"{i},{j}")


def cmd_table(a) -> Output:
    t = build_window_table(a.window)
    rows = [[j, *t.entry(j), t.affine(j)] for j in range(1 << t.w)]
    plain = "\n".join(f"f_{t.w},{j}(x) = {t.affine(j)}" for j in range(1 << t.w))
    return Output(["residue", "odd_count", "offset", "map"], rows, plain)


def cmd_accel_sigma(a) -> Output:
    s = accel_total_stopping_time(a.n, cached_table(a.window), a.cap)
    if s is None:
        raise UnresolvedOrbit(a.n, a.cap)
    return Output(["n", "window", "sigma"], [[a.n, a.window, s]], str(s))


def cmd_accel_step(a) -> Output:
    v = accel_step(cached_table(a.window), a.n)
    return Output(["n", "window", "value"], [[a.n, a.window, v]], str(v))


def cmd_c4(a) -> Output:
    wit = c4_witness(a.n, a.cap)
    if wit is None:
        raise UnresolvedOrbit(a.n, a.cap)
    m, k = wit
    return Output(["n", "m", "k"], [[a.n, m, k]], f"{m},{k}")


def cmd_verify(a) -> Output:
    if a.lo < 2 or a.hi < a.lo:
        raise UsageError("verify needs 2 <= LO <= HI")
    table = cached_table(a.window)
    ckpt = None
    path = Path(a.checkpoint) if a.checkpoint else None
    if path is not None and path.exists():
        ckpt = Checkpoint.load(path)
        log.info("resuming from %s at %d", path, ckpt.next_unverified)

    def save(c: Checkpoint) -> None:
        if path is not None:
            c.save(path)

    report, ckpt = verify_range(
        a.lo,
        a.hi,
        table,
        ckpt,
        cap=a.cap,
        checkpoint_every=a.checkpoint_every,
        on_checkpoint=save,
        stop_at=a.stop_at,
        threads=a.threads,
    )
    if not ckpt.done:
        log.info("stopped before %d; rerun with the same checkpoint to continue", ckpt.next_unverified)
        return Output(["key", "value"], [["next_unverified", ckpt.next_unverified]],
                      f"incomplete next_unverified={ckpt.next_unverified}")
    text = report.render()
    rows = [line.split("=", 1) for line in text.splitlines()]
    return Output(["key", "value"], rows, text)


def cmd_sk(a) -> Output:
    s = levelsets.level_set(a.k, a.bound)
    return Output(["k", "n"], [[a.k, n] for n in s], _join(s))


def cmd_lambda(a) -> Output:
    pairs = levelsets.enumerate_lambda(a.m)
    rows = [[v, str(rep)] for v, rep in pairs]
    return Output(["value", "tuple"], rows, "\n".join(f"{v} {rep}" for v, rep in pairs))


def cmd_equality(a) -> Output:
    v = levelsets.check_equality(a.m, a.cap)
    row = [a.m, v.lambda_count, v.level_count, v.equal,
           v.lambda_not_in_s, v.s_not_in_lambda]
    plain = f"m={a.m} lambda={v.lambda_count} s={v.level_count} equal={_cell(v.equal)}"
    return Output(["m", "lambda_count", "s_count", "equal", "lambda_not_in_s",
                   "s_not_in_lambda"], [row], plain)


def cmd_rep(a) -> Output:
    rep = levelsets.rep_from_orbit(a.n, a.cap)
    return Output(["n", "tuple"], [[a.n, str(rep)]], str(rep))


def cmd_l1(a) -> Output:
    vals = levelsets.l1_members(a.m)
    return Output(["m", "n"], [[a.m, v] for v in vals], _join(vals))


def cmd_l2(a) -> Output:
    vals = levelsets.l2_odd_members(a.m)
    return Output(["m", "n"], [[a.m, v] for v in vals], _join(vals))


def cmd_tau(a) -> Output:
    t = codec.tau(a.n, a.cap)
    return Output(["n", "tau"], [[a.n, t]], str(t))


def cmd_phi(a) -> Output:
    v = codec.phi(a.n)
    return Output(["n", "phi"], [[a.n, v]], _cell(v))


def cmd_alpha(a) -> Output:
    seq = codec.alpha_sequence(a.m)
    rows = [[k, v] for k, v in enumerate(seq, start=1)]
    return Output(["k", "alpha"], rows, _join(seq))


def cmd_alpha_check(a) -> Output:
    rows = []
    for m in range(a.m, (a.upto or a.m) + 1):
        v = codec.check_alpha_formulas(m)
        rows.append([m, v.alpha1, v.formula1, v.alpha1_matches,
                     v.alpha2, v.formula2, v.alpha2_matches])
    return Output(["m", "alpha1", "floor_formula1", "match1",
                   "alpha2", "floor_formula2", "match2"], rows)


def cmd_phi_s_check(a) -> Output:
    v = codec.check_phi_s_correspondence(a.m)
    rows = [[a.m, k, code, val, target, val == target] for k, code, val, target in v.rows]
    return Output(["m", "k", "code", "phi", "s_k_plus_2", "match"], rows)


def cmd_gamma(a) -> Output:
    g = analytics.gamma(a.n, a.cap)
    return Output(["n", "gamma"], [[a.n, g]], repr(g))


def cmd_an_scan(a) -> Output:
    recs = analytics.an_scan(a.limit, cached_table(a.window), a.cap)
    rows = [[r.seed, r.sigma, r.gamma] for r in recs]
    if a.plot_data:
        return Output(["n", "gamma"], [[r.seed, r.gamma] for r in recs])
    return Output(["seed", "sigma", "gamma"], rows,
                  "\n".join(f"{r.seed} {r.sigma} {r.gamma:.2f}" for r in recs))


def cmd_zeta(a) -> Output:
    if a.plot_data:
        series = analytics.zeta_series(a.m, a.cap)
        return Output(["m", "zeta"], [[m, series[m]] for m in range(2, a.m + 1)])
    z = analytics.zeta(a.m, a.cap)
    log.info("zeta(%d)/%d = %r", a.m, a.m, z / a.m)
    return Output(["m", "zeta", "ratio"], [[a.m, z, z / a.m]], str(z))


def cmd_angle(a) -> Output:
    c = analytics.orbit_angle(a.n, a.cap)
    return Output(["n", "cos_theta"], [[a.n, c]], repr(c))


def cmd_growth(a) -> Output:
    rows = [[r.k, r.count, r.ratio] for r in analytics.level_set_growth(a.K)]
    return Output(["k", "count", "ratio"], rows)


def cmd_candidates(a) -> Output:
    seeds = a.seeds or list(analytics.ROOSENDAAL_CANDIDATES)
    recs, increasing = analytics.candidate_check(seeds, a.cap)
    log.info("gamma increasing along the list: %s", increasing)
    rows = [[r.seed, r.sigma, r.gamma] for r in recs]
    return Output(["seed", "sigma", "gamma"], rows,
                  "\n".join(f"{r.seed} {r.sigma} {r.gamma:.2f}" for r in recs))


def cmd_paper_tables(a) -> Output:
    from .tables import paper_tables

    rows = paper_tables()
    plain = "\n".join(f"{t}: {k} = {v}" for t, k, v in rows)
    return Output(["table", "key", "value"], [list(r) for r in rows], plain)


# -- argument parsing ---------------------------------------------------------


def _nat(text: str) -> int:
    try:
        v = int(text.replace("_", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return v


def _pos(text: str) -> int:
    v = _nat(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _seed2(text: str) -> int:
    v = _nat(text)
    if v < 2:
        raise argparse.ArgumentTypeError(f"must be >= 2: {text!r}")
    return v


COMMANDS: dict[str, tuple[Callable, str, list[tuple]]] = {
    "orbit": (cmd_orbit, "trajectory of a seed down to 1", [("n", _pos)]),
    "sigma": (cmd_sigma, "total stopping time", [("n", _pos)]),
    "stopping": (cmd_stopping, "stopping time (first drop below the seed)", [("n", _seed2)]),
    "trace": (cmd_trace, "parity trace", [("n", _pos)]),
    "curve": (cmd_curve, "(i, j) with 2^sigma = 3^i n + j", [("n", _seed2)]),
    "table": (cmd_table, "window table of affine maps", []),
    "accel-sigma": (cmd_accel_sigma, "total stopping time via window jumps", [("n", _pos)]),
    "accel-step": (cmd_accel_step, "one window jump", [("n", _pos)]),
    "c4": (cmd_c4, "first (m, k) with slope of f_{m,k} below 1", [("n", _seed2)]),
    "verify": (cmd_verify, "checkpointed descent scan over a range", [("lo", _nat), ("hi", _nat)]),
    "sk": (cmd_sk, "level set S_k", [("k", _nat)]),
    "lambda": (cmd_lambda, "brute-force Lambda_m with tuples", [("m", _nat)]),
    "equality": (cmd_equality, "check S_m = Lambda_m", [("m", _nat)]),
    "rep": (cmd_rep, "tuple representation from the orbit", [("n", _pos)]),
    "l1": (cmd_l1, "closed-form l=1 members of S_m", [("m", _nat)]),
    "l2": (cmd_l2, "closed-form odd l=2 members of S_m", [("m", _nat)]),
    "tau": (cmd_tau, "parity-trace code", [("n", _pos)]),
    "phi": (cmd_phi, "rational decoder", [("n", _pos)]),
    "alpha": (cmd_alpha, "alpha sequence of tau(Lambda_m)", [("m", _nat)]),
    "alpha-check": (cmd_alpha_check, "floor formulas for alpha_1, alpha_2", [("m", _nat)]),
    "phi-s-check": (cmd_phi_s_check, "phi(2^m + 2^j) against S_m", [("m", _nat)]),
    "gamma": (cmd_gamma, "scaled total stopping time", [("n", _seed2)]),
    "an-scan": (cmd_an_scan, "running-maximum records of gamma", [("limit", _nat)]),
    "zeta": (cmd_zeta, "count of equal neighbouring total stopping times", [("m", _seed2)]),
    "angle": (cmd_angle, "cosine between orbit vector and its shift", [("n", _seed2)]),
    "growth": (cmd_growth, "level set sizes and ratios", [("K", _nat)]),
    "candidates": (cmd_candidates, "gamma of candidate record seeds", []),
    "paper-tables": (cmd_paper_tables, "every numeric table of the source paper", []),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["plain", "csv", "json"], default="plain")
    common.add_argument("--cap", type=_nat, default=DEFAULT_CAP, help="step cap per orbit")
    common.add_argument("--window", type=_pos, default=DEFAULT_WINDOW, help="window width w")
    common.add_argument("--plot-data", action="store_true",
                        help="emit two-column CSV series for plotting")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="collatzkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (func, help_text, positionals) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, parents=[common])
        for arg, typ in positionals:
            p.add_argument(arg, type=typ)
        p.set_defaults(func=func)
        if name == "verify":
            p.add_argument("--checkpoint", help="checkpoint file; resumed if it exists")
            p.add_argument("--checkpoint-every", type=_pos, default=None)
            p.add_argument("--stop-at", type=_pos, default=None,
                           help="halt before this seed (leaves a checkpoint)")
            p.add_argument("--threads", type=_pos, default=1)
        elif name == "sk":
            p.add_argument("--bound", type=_nat, default=None)
        elif name == "alpha-check":
            p.add_argument("--upto", type=_nat, default=None)
        elif name == "candidates":
            p.add_argument("seeds", type=_seed2, nargs="*")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
    if args.plot_data:
        args.format = "csv"
    try:
        out = args.func(args)
    except UnresolvedOrbit as exc:
        print(f"collatzkit: {exc}", file=sys.stderr)
        return EXIT_UNRESOLVED
    except CheckpointError as exc:
        print(f"collatzkit: checkpoint error: {exc}", file=sys.stderr)
        return EXIT_CHECKPOINT
    except (UsageError, ValueError) as exc:
        print(f"collatzkit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(render(out, args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
