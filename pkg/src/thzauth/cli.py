"""Command-line entry point: ``thzauth <subcommand> [--config cfg.json] ...``.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numerical
failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import harness
from .harness import ConfigError, ExperimentConfig
from .numerics import NumericalError

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4


def _common(p: argparse.ArgumentParser, sweeps: bool = True) -> None:
    p.add_argument("--config", type=Path, help="JSON experiment config")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", type=Path, help="output CSV path (default: stdout)")
    p.add_argument("--absorption", type=Path, help="k-table or line-catalog CSV")
    if sweeps:
        p.add_argument("--snr-db", type=float, nargs="+")
        p.add_argument("--pfa", type=float, nargs="+")
        p.add_argument("--full", action="store_true", help="paper scale: 1e5 deployment realizations")
        p.add_argument("--realizations", type=int)
        p.add_argument("--workers", type=int)
        p.add_argument("--eve-loss-mode", choices=harness.EVE_LOSS_MODES)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thzauth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("pathloss", help="path loss over a frequency x distance grid")
    _common(p, sweeps=False)
    p.add_argument("--frequency-hz", type=float, nargs="+")
    p.add_argument("--distance-m", type=float, nargs="+")

    p = sub.add_parser("error-vs-snr", help="false alarm and missed detection vs SNR")
    _common(p)
    p.add_argument("--epsilon", type=float, nargs="+", help="fixed thresholds in dB instead of --pfa")

    p = sub.add_parser("roc", help="ROC families (Pd and Pmc vs Pfa), one table per SNR")
    _common(p)
    p.add_argument("-m", type=int, help="number of Alice nodes")
    p.add_argument("-n", type=int, help="number of Eve nodes")
    p.add_argument("--alpha", type=float)

    p = sub.add_parser("hmm-compare", help="hypothesis test vs Viterbi slot accuracy")
    _common(p)
    p.add_argument("--epsilon", type=float, dest="hmm_epsilon")
    p.add_argument("--emission", choices=harness.HMM_EMISSION_MODES, dest="hmm_emission")

    p = sub.add_parser("txid", help="ML vs GMM transmitter identification vs noise variance")
    _common(p)
    p.add_argument("--sigma2", type=float, nargs="+")
    return parser


def load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_json(args.config) if args.config else ExperimentConfig()
    over = {
        "seed": args.seed,
        "absorption": str(args.absorption) if args.absorption else None,
    }
    for name in ("snr_db", "pfa", "realizations", "workers", "eve_loss_mode", "epsilon", "hmm_epsilon",
                 "hmm_emission", "sigma2", "m", "n", "alpha"):
        if hasattr(args, name):
            over[name] = getattr(args, name)
    cfg = cfg.with_overrides(**over)
    if getattr(args, "full", False):
        cfg = cfg.full_scale()
    return cfg


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def run(args) -> None:
    cfg = load_config(args)
    out = args.out if args.out is not None else (Path(cfg.out) if cfg.out else None)
    if args.cmd == "pathloss":
        freqs = args.frequency_hz or [cfg.frequency_hz]
        dists = args.distance_m or list(np.round(np.linspace(0.05, 1.4, 28), 6))
        _emit(harness.pathloss_grid(cfg, freqs, dists), out)
    elif args.cmd == "error-vs-snr":
        _emit(harness.run_error_vs_snr(cfg).to_csv(), out)
    elif args.cmd == "roc":
        tables = harness.run_roc(cfg)
        if out is None:
            for t in tables.values():
                sys.stdout.write(f"# {t.label}\n{t.to_csv()}")
        elif len(tables) == 1:
            next(iter(tables.values())).to_csv(out)
        else:
            for snr, t in tables.items():
                t.to_csv(out.with_name(f"{out.stem}_snr{snr:g}{out.suffix or '.csv'}"))
    elif args.cmd == "hmm-compare":
        _emit(harness.run_hmm_compare(cfg).to_csv(), out)
    elif args.cmd == "txid":
        _emit(harness.run_txid(cfg).to_csv(), out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        run(args)
    except (ConfigError, ValueError) as exc:
        print(f"thzauth: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"thzauth: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NumericalError as exc:
        print(f"thzauth: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
