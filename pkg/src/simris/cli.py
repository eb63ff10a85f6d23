"""Command-line front end.

Subcommands: simulate (channel dumps), rate (rate table over a transmit
power sweep), heatmap (Rx-position rate grid), validate (placement
checks), serve (HTTP facade).

Precedence: built-in defaults < command-line flags < config file; the
SIMRIS_SEED environment variable is the last-resort seed default.

Exit codes: 0 ok, 2 config error, 3 validation violations, 4 I/O error.
"""

from __future__ import annotations

import argparse
import contextlib
import dataclasses
import os
import sys

from . import dumps, metrics
from .channel import realize
from .geometry import validate_scenario
from .runconfig import ConfigError, RunConfig, parse_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VIOLATIONS = 3
EXIT_IO = 4


def _add_scenario_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="INI config file (overrides flags)")
    parser.add_argument("--env", choices=["inh", "umi"], dest="environment")
    parser.add_argument("--freq", type=float, dest="frequency_ghz", help="GHz, 28 or 73")
    parser.add_argument("--wall", choices=["side", "opposite"])
    parser.add_argument("--tx", metavar="X,Y,Z")
    parser.add_argument("--rx", metavar="X,Y,Z")
    parser.add_argument("--ris", metavar="X,Y,Z")
    parser.add_argument("--elements", type=int, metavar="N")
    parser.add_argument("--spacing", type=float, metavar="METERS")
    parser.add_argument(
        "--direct-link", action=argparse.BooleanOptionalAction, dest="direct_link"
    )
    parser.add_argument("--realizations", type=int, metavar="R")
    parser.add_argument("--seed", type=int, metavar="S")
    parser.add_argument("--jobs", type=int, metavar="J")
    parser.add_argument("--format", choices=["csv", "binary"])
    parser.add_argument("--out", metavar="PATH")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simris",
        description="Channel simulator for RIS-assisted mmWave links",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="generate and dump channel realizations")
    _add_scenario_flags(p_sim)

    p_rate = sub.add_parser("rate", help="achievable-rate table over a Pt sweep")
    _add_scenario_flags(p_rate)
    p_rate.add_argument("--pt-dbw-start", type=float, dest="pt_dbw_start")
    p_rate.add_argument("--pt-dbw-stop", type=float, dest="pt_dbw_stop")
    p_rate.add_argument("--pt-dbw-step", type=float, dest="pt_dbw_step")
    p_rate.add_argument("--noise-dbm", type=float, dest="noise_dbm")
    p_rate.add_argument("--profiles", metavar="A,B,...")

    p_heat = sub.add_parser("heatmap", help="rate grid over Rx positions")
    _add_scenario_flags(p_heat)
    p_heat.add_argument("--x-range", metavar="MIN:MAX:N", dest="x_range")
    p_heat.add_argument("--y-range", metavar="MIN:MAX:N", dest="y_range")
    p_heat.add_argument("--rx-height", type=float, dest="rx_height")
    p_heat.add_argument("--profile", choices=list(metrics.PROFILE_RULES))
    p_heat.add_argument("--pt-dbw", type=float, dest="pt_dbw")
    p_heat.add_argument("--noise-dbm", type=float, dest="noise_dbm")

    p_val = sub.add_parser("validate", help="check scenario placement rules")
    _add_scenario_flags(p_val)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--listen", default="127.0.0.1:8000", metavar="HOST:PORT")
    return parser


def _parse_point_flag(name: str, raw: str) -> tuple[float, float, float]:
    parts = raw.split(",")
    if len(parts) != 3:
        raise ConfigError(name, f"expected x,y,z but got {raw!r}")
    try:
        return tuple(float(p) for p in parts)  # type: ignore[return-value]
    except ValueError:
        raise ConfigError(name, f"non-numeric coordinate in {raw!r}")


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    for name in (
        "environment", "frequency_ghz", "wall", "elements", "spacing",
        "direct_link", "realizations", "seed", "jobs", "format", "out",
        "pt_dbw_start", "pt_dbw_stop", "pt_dbw_step", "noise_dbm",
        "rx_height", "profile", "pt_dbw",
    ):
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, name, value)
    for name in ("tx", "rx", "ris"):
        raw = getattr(args, name, None)
        if raw is not None:
            setattr(cfg, name, _parse_point_flag(f"--{name}", raw))
    if getattr(args, "profiles", None):
        cfg.profiles = tuple(p.strip() for p in args.profiles.split(",") if p.strip())
    for axis in ("x", "y"):
        raw = getattr(args, f"{axis}_range", None)
        if raw is not None:
            parts = raw.split(":")
            if len(parts) != 3:
                raise ConfigError(f"--{axis}-range", f"expected MIN:MAX:N, got {raw!r}")
            setattr(cfg, f"{axis}_min", float(parts[0]))
            setattr(cfg, f"{axis}_max", float(parts[1]))
            setattr(cfg, "n" + axis, int(parts[2]))
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = parse_config(fh.read(), base=cfg)
    return cfg


def _resolve(cfg: RunConfig) -> tuple[RunConfig, int]:
    seed = cfg.resolved_seed(os.environ.get("SIMRIS_SEED"))
    return dataclasses.replace(cfg, seed=seed), seed


def _print_violations(violations, file=sys.stderr) -> None:
    for v in violations:
        print(f"{v.code}: {v.message}", file=file)


def cmd_validate(cfg: RunConfig) -> int:
    violations = validate_scenario(cfg.to_scenario())
    if violations:
        _print_violations(violations, file=sys.stdout)
        return EXIT_VIOLATIONS
    print("ok")
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    violations = validate_scenario(cfg.to_scenario())
    if violations:
        _print_violations(violations)
        return EXIT_VIOLATIONS
    cfg, seed = _resolve(cfg)
    channel_cfg = cfg.to_channel_config(seed)
    out = cfg.out or ("channels.bin" if cfg.format == "binary" else "channels.csv")
    writer = dumps.write_binary if cfg.format == "binary" else dumps.write_csv
    writer(
        out,
        cfg.to_dict(seed),
        realize(channel_cfg),
        n=channel_cfg.scenario.n_elements,
        count=channel_cfg.realizations,
        seed=seed,
    )
    print(f"wrote {channel_cfg.realizations} realizations to {out}")
    return EXIT_OK


def _pt_sweep(cfg: RunConfig) -> list[float]:
    sweep = []
    pt = cfg.pt_dbw_start
    while pt <= cfg.pt_dbw_stop + 1e-9:
        sweep.append(round(pt, 9))
        pt += cfg.pt_dbw_step
    return sweep


def cmd_rate(cfg: RunConfig) -> int:
    violations = validate_scenario(cfg.to_scenario())
    if violations:
        _print_violations(violations)
        return EXIT_VIOLATIONS
    cfg, seed = _resolve(cfg)
    for rule in cfg.profiles:
        if rule not in metrics.PROFILE_RULES:
            raise ConfigError("rate.profiles", f"unknown profile rule {rule!r}")
    channel_cfg = cfg.to_channel_config(seed)
    stream = list(realize(channel_cfg))
    noise_watts = metrics.dbm_to_watts(cfg.noise_dbm)

    lines = [
        "# simris rate table",
        f"# seed: {seed}",
        f"# config: {_config_json(cfg, seed)}",
        "profile,pt_dbw,mean_rate_bps_hz,rate_std,rate_stderr,mean_snr_db,realizations",
    ]
    for rule in cfg.profiles:
        for pt_dbw in _pt_sweep(cfg):
            report = metrics.achievable_rate(
                stream, rule, metrics.dbw_to_watts(pt_dbw), noise_watts
            )
            lines.append(
                "%s,%.9g,%.9g,%.9g,%.9g,%.9g,%d"
                % (
                    rule,
                    pt_dbw,
                    report.mean_rate,
                    report.rate_std,
                    report.rate_stderr,
                    report.mean_snr_db,
                    report.count,
                )
            )
    _write_text(cfg.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_heatmap(cfg: RunConfig) -> int:
    cfg, seed = _resolve(cfg)
    channel_cfg = cfg.to_channel_config(seed)
    grid = metrics.RxGrid.regular(
        cfg.x_min, cfg.x_max, cfg.nx, cfg.y_min, cfg.y_max, cfg.ny, cfg.rx_height
    )
    try:
        result = metrics.rate_heatmap(
            channel_cfg,
            grid,
            profile_rule=cfg.profile,
            pt_watts=metrics.dbw_to_watts(cfg.pt_dbw),
            noise_watts=metrics.dbm_to_watts(cfg.noise_dbm),
        )
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VIOLATIONS
    lines = [
        "# simris rate heatmap",
        f"# seed: {seed}",
        f"# config: {_config_json(cfg, seed)}",
        "x,y,mean_rate_bps_hz,rate_std,rate_stderr,mean_snr_db,realizations",
    ]
    for iy, y in enumerate(result.y):
        for ix, x in enumerate(result.x):
            report = result.reports[iy][ix]
            lines.append(
                "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%d"
                % (
                    x,
                    y,
                    report.mean_rate,
                    report.rate_std,
                    report.rate_stderr,
                    report.mean_snr_db,
                    report.count,
                )
            )
    _write_text(cfg.out or "heatmap.csv", "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    host, _, port = args.listen.rpartition(":")
    if not host:
        raise ConfigError("--listen", f"expected HOST:PORT, got {args.listen!r}")
    uvicorn.run(create_app(), host=host, port=int(port))
    return EXIT_OK


def _config_json(cfg: RunConfig, seed: int) -> str:
    import json

    return json.dumps(cfg.to_dict(seed), sort_keys=True)


def _write_text(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "serve":
            return cmd_serve(args)
        cfg = _config_from_args(args)
        if args.command == "validate":
            return cmd_validate(cfg)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "rate":
            return cmd_rate(cfg)
        if args.command == "heatmap":
            return cmd_heatmap(cfg)
        parser.error(f"unknown command {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def console_main() -> None:
    with contextlib.suppress(KeyboardInterrupt):
        sys.exit(main())
    sys.exit(130)


__all__ = ["main", "console_main", "build_parser"]
