"""Command line front end: run sweeps, export constructions, list presets.

Configuration is resolved in three layers, later layers winning: a named
preset, then a key=value config file, then individual command line flags.
"""

from __future__ import annotations

import argparse
import sys

from .construction import export_reliability_csv
from .harness import (
    CONSTRUCTIONS,
    DECODERS,
    EVEN_RULES,
    assemble_config,
    build_code,
    config_to_raw,
    parse_config_file,
    presets,
    run_sweep,
)

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarkit",
        description="Polar-code construction and Monte Carlo BER/FER sweeps",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a BER/FER sweep and emit CSV")
    construct_p = sub.add_parser(
        "construct", help="export a reliability table as index,reliability,class CSV"
    )
    presets_p = sub.add_parser("presets", help="list the named presets")

    for p in (run_p, construct_p):
        p.add_argument("--preset", help="start from a named preset")
        p.add_argument("--config", help="key=value config file; overrides the preset")
        p.add_argument("--out", help="output CSV path (stdout when omitted)")
        p.add_argument("--construction", choices=CONSTRUCTIONS)
        p.add_argument("--even-rule", dest="even_rule", choices=EVEN_RULES)

    run_p.add_argument("--seed", type=int, help="master seed override")
    run_p.add_argument("--threads", type=int, default=1,
                       help="worker processes (results are identical for any count)")
    run_p.add_argument("--decoder", choices=DECODERS)
    run_p.add_argument("--list-size", dest="list_size", type=int)
    run_p.add_argument("--ebno-grid", dest="ebno_grid",
                       help="comma separated Eb/N0 grid in dB")
    run_p.add_argument("--min-frame-errors", dest="min_frame_errors", type=int)
    run_p.add_argument("--max-frames", dest="max_frames", type=int)
    run_p.add_argument("--noiseless", action="store_true", default=None)

    run_p.set_defaults(func=_cmd_run)
    construct_p.set_defaults(func=_cmd_construct)
    presets_p.set_defaults(func=_cmd_presets)
    return parser


def _collect_raw(args) -> dict:
    """Merge preset, config file, and flags into one raw value dict."""
    file_values = parse_config_file(args.config) if args.config else {}
    preset_name = args.preset or file_values.get("preset")
    raw = {}
    if preset_name is not None:
        table = presets()
        if preset_name not in table:
            raise ValueError(
                f"unknown preset {preset_name!r}; available: {', '.join(sorted(table))}"
            )
        raw.update(config_to_raw(table[preset_name]))
    raw.update({k: v for k, v in file_values.items() if k != "preset"})

    overrides = {
        "construction": getattr(args, "construction", None),
        "even_rule": getattr(args, "even_rule", None),
        "decoder": getattr(args, "decoder", None),
        "master_seed": getattr(args, "seed", None),
        "list_size": getattr(args, "list_size", None),
        "ebno_grid_db": getattr(args, "ebno_grid", None),
        "min_frame_errors": getattr(args, "min_frame_errors", None),
        "max_frames": getattr(args, "max_frames", None),
        "noiseless": getattr(args, "noiseless", None),
    }
    for key, value in overrides.items():
        if value is not None:
            raw[key] = value if isinstance(value, str) else str(value).lower()
    return raw


def _cmd_run(args) -> int:
    cfg = assemble_config(_collect_raw(args))
    threads = args.threads if args.threads and args.threads > 0 else 1
    points, csv_text = run_sweep(cfg, out=args.out, workers=threads)
    if args.out is None:
        sys.stdout.write(csv_text)
    else:
        for pt in points:
            print(f"ebno={pt.ebno_db:g} dB  frames={pt.frames}  "
                  f"fer={pt.fer:.3e}  ber={pt.ber:.3e}", file=sys.stderr)
        print(f"wrote {args.out}", file=sys.stderr)
    return 0


def _cmd_construct(args) -> int:
    raw = _collect_raw(args)
    # Construction needs no sweep grid; fall back to the design point so a
    # bare "construct --config" with n/m/k still works.
    if "ebno_grid_db" not in raw:
        raw["ebno_grid_db"] = raw.get("design_snr_db", "0.0")
    cfg = assemble_config(raw)
    _, reliab, mask = build_code(cfg)
    text = export_reliability_csv(reliab, mask, path=args.out)
    if args.out is None:
        sys.stdout.write(text)
    else:
        print(f"wrote {args.out}", file=sys.stderr)
    return 0


def _cmd_presets(args) -> int:
    for name, cfg in presets().items():
        spec = cfg.spec
        crc = cfg.crc_name or "-"
        grid = ",".join(f"{v:g}" for v in cfg.ebno_grid_db)
        print(f"{name:10s} N={spec.N:<4d} M={spec.M:<4d} K={spec.K:<4d} "
              f"{cfg.construction:>14s} {cfg.decoder:>5s} L={cfg.list_size:<2d} "
              f"crc={crc:6s} grid={grid}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
