"""Command-line entry point: ``bchardy {verify,boundary-scan,hilbert,represent}``."""
from __future__ import annotations

import argparse
import sys
import warnings

from .experiments import EXPERIMENTS, ConfigError, load_config, parse_grid, run_experiment, write_report

_EPILOG = """\
outputs (in --out):
  report.json        config echo, verdict per check, the invariant each
                     check instantiates, table file names; deterministic
  timing.json        wall-clock runtime (kept apart so reports stay byte-stable)
  <table>.csv        one per table; floats written with 17 significant digits

tables:
  verify         one per suite: check, quantity, value, threshold, verdict
  boundary-scan  boundary_scan: function, r, error_p
  hilbert        pv_fft: theta, pv_re, pv_im, fft_re, fft_im, abs_diff
                 ratios: index, numerator, denominator, ratio, norm (p <= 1)
                         or index, ratio (p = 2); summary: p, max_ratio
  represent      round_trip: function, n, max_abs, tolerance
                 gates: function, k, residual, threshold
                 kernel_form: function, n, max_abs, tolerance (n >= 2)

config keys (JSON object; unknown keys are errors):
  seed, grid, radii, p, q, gamma, n, corpus, tolerances, suites,
  n_points, n_items, experiment

environment:
  BCHARDY_THREADS    cap on worker threads (default 1)

exit codes: 0 all checks pass, 1 some check fails, 2 configuration error
"""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bchardy",
        description="Verification suites and experiments for bicomplex Hardy classes.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", default=f"out-{name}", help="output directory (default: out-<command>)")
        p.add_argument("--seed", type=int, help="overrides the config seed")
        p.add_argument("--grid", help="quadrature grid NRxNT, e.g. 64x512 (overrides the config)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.command)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("--seed must be non-negative")
            cfg.seed = args.seed
        if args.grid is not None:
            cfg.grid = parse_grid(args.grid)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", category=RuntimeWarning)
        report = run_experiment(cfg)
    path = write_report(report, args.out)
    for check, verdict in sorted(report.verdicts.items()):
        print(f"{verdict:<13} {check}")
    print(f"report: {path}")
    return 0 if report.all_pass else 1


if __name__ == "__main__":
    sys.exit(main())
