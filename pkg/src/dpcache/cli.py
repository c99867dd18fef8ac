"""Command-line entry point.

Exit codes: 0 all checks pass, 1 a property was violated, 2 usage or I/O
error. Flags may also come from a ``--config`` file of ``key = value`` lines
(keys are flag names without dashes, e.g. ``n = 2``); flags win.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .model import BudgetExceeded, SchemeParams, default_budget
from .private import PrivateScheme, run_episode
from .rates import emit_curves, rate_private, theorem2_report, write_csv
from .verifier import (
    CleartextDemandScheme,
    DroppedBlockScheme,
    WorldPolicy,
    run_fixture,
    verify,
)

DEFAULTS = {
    "n": 2, "k": 2, "t": None, "m": None, "subfile_bits": 1, "seed": 0,
    "worlds": "exhaustive", "budget": None, "out": None, "trials": 100,
    "resolution": None, "negative_control": None, "allow_sampled_fallback": False,
    "witnesses": False,
}


class UsageError(Exception):
    pass


def read_config(path: str) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _settings(args: argparse.Namespace) -> argparse.Namespace:
    config = read_config(args.config) if args.config else {}
    unknown = set(config) - set(DEFAULTS)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    merged = {}
    for key, default in DEFAULTS.items():
        value = getattr(args, key, None)
        if value is None or value is False:
            if key in config:
                raw = config[key]
                if isinstance(default, bool):
                    value = raw.lower() in ("1", "true", "yes")
                elif key in ("m", "worlds", "out", "negative_control"):
                    value = raw
                else:
                    value = int(raw)
            elif value is None:
                value = default
        merged[key] = value
    if merged["budget"] is None:
        merged["budget"] = default_budget()
    return argparse.Namespace(command=args.command, **merged)


def _cache_index(cfg) -> int:
    if cfg.t is not None and cfg.m is not None:
        raise UsageError("give either --t or --m, not both")
    if cfg.m is not None:
        try:
            m = Fraction(cfg.m)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"cannot parse memory {cfg.m!r} as a fraction") from None
        t = m * cfg.k
        if t.denominator != 1:
            raise UsageError(f"K*M = {t} is not an integer; operational commands need M on the 1/K grid")
        return int(t)
    # default M = 1
    return cfg.k if cfg.t is None else cfg.t


def _params(cfg) -> SchemeParams:
    try:
        return SchemeParams(cfg.n, cfg.k, _cache_index(cfg), cfg.subfile_bits)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_rate_table(cfg) -> int:
    cols = emit_curves(cfg.n, cfg.k, cfg.resolution)
    out = Path(cfg.out or f"rate_table_N{cfg.n}_K{cfg.k}.csv")
    try:
        csv_path, exact_path = write_csv(cols, out)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return 2
    rows = len(cols["M"])
    print(f"N={cfg.n} K={cfg.k}: {rows} grid points, M from 0 to {cfg.n}")
    print(f"R_private at M=0: {cols['R_private'][0]}, at M=N: {cols['R_private'][-1]}")
    print(f"wrote {csv_path} and {exact_path}")
    return 0


def cmd_verify(cfg) -> int:
    params = _params(cfg)
    if cfg.negative_control == "cleartext":
        scheme = CleartextDemandScheme(params)
    elif cfg.negative_control == "drop":
        scheme = DroppedBlockScheme(PrivateScheme(params), 0)
    elif cfg.negative_control is None:
        scheme = PrivateScheme(params)
    else:
        raise UsageError(f"unknown negative control {cfg.negative_control!r}")
    try:
        policy = WorldPolicy.parse(cfg.worlds, cfg.seed, cfg.budget)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if policy.mode == "exhaustive" and params.library_bits > cfg.budget:
        if not cfg.allow_sampled_fallback:
            print(f"error: {params.library_bits} library bits exceed the budget of {cfg.budget}; "
                  "use --worlds sampled:<n> or --allow-sampled-fallback", file=sys.stderr)
            return 2
        policy = WorldPolicy("sampled", seed=cfg.seed, budget=cfg.budget)
    report = verify(scheme, policy)
    print(f"N={params.n_files} K={params.n_users} t={params.cache_index} M={params.memory}")
    print(report.render_text())
    if cfg.witnesses:
        for line in report.render_lines():
            print(line)
    return 0 if report.passed else 1


def cmd_example1(cfg) -> int:
    failed = False
    fixture = run_fixture(cfg.budget)
    print(fixture.render_text())
    general = verify(PrivateScheme(SchemeParams(2, 2, 2, 1)), WorldPolicy("exhaustive", budget=cfg.budget))
    print()
    print(general.render_text())
    for rep in (fixture, general):
        if rep.rate != Fraction(2, 3) or not rep.passed:
            failed = True
    print()
    print(f"example 1: {'FAIL' if failed else 'PASS'} (both schemes at rate 2/3, decodable and private)")
    return 1 if failed else 0


def cmd_bounds(cfg) -> int:
    report = theorem2_report(cfg.n, cfg.k)
    print(report.render())
    return 0 if report.passed else 1


def cmd_simulate(cfg) -> int:
    params = _params(cfg)
    expected = rate_private(params.n_files, params.n_users, params.cache_index)
    lines = []
    status = 0
    for i in range(cfg.trials):
        ep = run_episode(params, cfg.seed + i)
        lines.append(ep.record())
        if not all(ep.success) or ep.realized_rate != expected:
            status = 1
    text = "\n".join(lines)
    if cfg.out:
        try:
            Path(cfg.out).write_text(text + "\n")
        except OSError as exc:
            print(f"error: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return 2
    else:
        print(text)
    print(f"{cfg.trials} episodes, expected rate {expected}: {'PASS' if status == 0 else 'FAIL'}")
    return status


COMMANDS = {
    "rate-table": cmd_rate_table,
    "verify": cmd_verify,
    "example1": cmd_example1,
    "bounds": cmd_bounds,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dpcache", description="Demand-private coded caching toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, operational=False):
        p.add_argument("--config", help="key = value file; flags take precedence")
        p.add_argument("--n", type=int, help="number of files N")
        p.add_argument("--k", type=int, help="number of users K")
        if operational:
            p.add_argument("--t", type=int, help="cache index t = K*M")
            p.add_argument("--m", help="memory as a fraction string, e.g. 3/2")
            p.add_argument("--subfile-bits", type=int, help="bits per subfile (default 1)")
            p.add_argument("--seed", type=int, help="base seed (default 0)")
            p.add_argument("--budget", type=int,
                           help="enumeration budget in library bits (default 24 or $DPCACHE_ENUM_BUDGET)")
        p.add_argument("--out", help="output path")

    p = sub.add_parser("rate-table", help="write the rate curves as CSV")
    common(p)
    p.add_argument("--resolution", type=int, help="memory grid denominator (default K)")

    p = sub.add_parser("verify", help="exhaustive decodability and privacy check")
    common(p, operational=True)
    p.add_argument("--worlds", help="exhaustive | fixed | sampled[:count]")
    p.add_argument("--negative-control", choices=["cleartext", "drop"])
    p.add_argument("--allow-sampled-fallback", action="store_true")
    p.add_argument("--witnesses", action="store_true", help="print one JSON line per witness")

    p = sub.add_parser("example1", help="reproduce the N = K = 2 example both ways")
    p.add_argument("--config")
    p.add_argument("--budget", type=int)

    p = sub.add_parser("bounds", help="exact checks of the gap analysis")
    common(p)

    p = sub.add_parser("simulate", help="run seeded episodes of the private scheme")
    common(p, operational=True)
    p.add_argument("--trials", type=int)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _settings(args)
        return COMMANDS[cfg.command](cfg)
    except (UsageError, BudgetExceeded, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
