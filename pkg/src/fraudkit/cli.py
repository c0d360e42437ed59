"""Command-line entry point: ``fraudkit {generate,inspect,run,report}``.

Exit codes: 0 success, 2 config error, 3 data error, 4 training error, 5 I/O error.
``FRAUDKIT_OUT_DIR`` overrides the config's output directory (``--out`` wins over both).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .config import REPORT_FORMATS, ConfigError, PipelineConfig, load_config
from .dataset import DataError, SyntheticSpec, generate_synthetic, load_csv, write_csv
from .metrics import render_report
from .models import TrainingError
from .pipeline import (
    EXIT_CONFIG,
    EXIT_DATA,
    EXIT_IO,
    EXIT_OK,
    EXIT_TRAINING,
    StageError,
    inspect_dataset,
    load_input,
    reports_from_manifest,
    run_pipeline,
    stage_seed,
)


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fraudkit", description="Seeded fraud-detection pipeline.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic imbalanced dataset as CSV")
    g.add_argument("--config", help="take synthetic.* settings and seed from this config")
    g.add_argument("--seed", type=_u64)
    g.add_argument("--out", required=True, help="output CSV path")
    g.add_argument("--n", type=int, dest="n_total")
    g.add_argument("--positive-fraction", type=float)
    g.add_argument("--d", type=int)
    g.add_argument("--separation", type=float, dest="class_mean_separation")
    g.add_argument("--noise", type=float, dest="noise_stddev")

    i = sub.add_parser("inspect", help="summarise a dataset")
    i.add_argument("path", nargs="?", help="CSV file (omit to use the config's input)")
    i.add_argument("--config")
    i.add_argument("--label-column", default=None)
    i.add_argument("--seed", type=_u64)

    r = sub.add_parser("run", help="run the full pipeline")
    r.add_argument("--config", required=True)
    r.add_argument("--seed", type=_u64)
    r.add_argument("--out")
    r.add_argument("--format", choices=REPORT_FORMATS, default="table", help="format printed to stdout")

    rep = sub.add_parser("report", help="re-render the report stored in a run's manifest")
    src = rep.add_mutually_exclusive_group()
    src.add_argument("--out", help="output directory of a previous run")
    src.add_argument("--manifest", help="path to manifest.json")
    rep.add_argument("--config", help="locate the run through the config's out_dir")
    rep.add_argument("--format", choices=REPORT_FORMATS, default="table")
    return p


def _config(args) -> PipelineConfig | None:
    if not getattr(args, "config", None):
        return None
    cfg = load_config(args.config)
    cfg = cfg.with_overrides(seed=getattr(args, "seed", None), out_dir=os.environ.get("FRAUDKIT_OUT_DIR"))
    cfg = cfg.with_overrides(out_dir=getattr(args, "out", None) if args.command in ("run", "report") else None)
    cfg.validate()
    return cfg


def _generate(args) -> int:
    cfg = _config(args)
    spec = cfg.synthetic if cfg else SyntheticSpec()
    overrides = {k: getattr(args, k) for k in
                 ("n_total", "positive_fraction", "d", "class_mean_separation", "noise_stddev")
                 if getattr(args, k) is not None}
    spec = SyntheticSpec(**{**vars(spec), **overrides})
    if args.seed is not None:
        seed = args.seed
    elif cfg is not None:
        seed = stage_seed(cfg.seed, "generate")
    else:
        raise ConfigError("generate needs --seed or --config")
    data = generate_synthetic(spec, seed)
    write_csv(data, args.out)
    print(f"wrote {data.n} rows ({spec.n_positive} positive) to {args.out}")
    return EXIT_OK


def _inspect(args) -> int:
    if args.path:
        data = load_csv(args.path, args.label_column or "Class")
    else:
        cfg = _config(args)
        if cfg is None:
            raise ConfigError("inspect needs a CSV path or --config")
        data = load_input(cfg)
    sys.stdout.write(inspect_dataset(data))
    return EXIT_OK


def _run(args) -> int:
    cfg = _config(args)
    manifest = run_pipeline(cfg)
    reports = reports_from_manifest(manifest)
    sys.stdout.write(render_report(reports, args.format))
    return EXIT_OK


def _report(args) -> int:
    if args.manifest:
        path = args.manifest
    elif args.out:
        path = os.path.join(args.out, "manifest.json")
    else:
        cfg = _config(args)
        if cfg is None:
            raise ConfigError("report needs --out, --manifest or --config")
        path = os.path.join(cfg.out_dir, "manifest.json")
    with open(path) as fh:
        manifest = json.load(fh)
    sys.stdout.write(render_report(reports_from_manifest(manifest), args.format))
    return EXIT_OK


_COMMANDS = {"generate": _generate, "inspect": _inspect, "run": _run, "report": _report}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except StageError as exc:
        print(f"fraudkit: {exc}", file=sys.stderr)
        return exc.exit_code
    except ConfigError as exc:
        print(f"fraudkit: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TrainingError as exc:
        print(f"fraudkit: training error: {exc}", file=sys.stderr)
        return EXIT_TRAINING
    except (DataError, ValueError, KeyError) as exc:
        print(f"fraudkit: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"fraudkit: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
