#!/usr/bin/env python3
"""Reproduce the headline loss thresholds for both analyzer schemes.

Runs the default boosted (p_c_total = 0.693, sizes 3/5/7) and standard
(p_c_total = 0.4905, sizes 5/7/9) scans at 20000 shots per grid point and
writes a scan CSV plus a threshold summary JSON per scheme.
"""

import argparse
import time
from pathlib import Path

from bellfusion import (
    Scheme,
    default_scan_config,
    estimate_threshold,
    run_scan,
    write_scan_csv,
    write_threshold_json,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--shots", type=int, default=20_000)
    parser.add_argument("--seed", type=int, default=2026)
    parser.add_argument("--workers", type=int, default=4)
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for scheme in (Scheme.BOOSTED, Scheme.STANDARD):
        started = time.perf_counter()
        config = default_scan_config(
            scheme, shots=args.shots, seed=args.seed, workers=args.workers
        )
        scan = run_scan(config)
        estimate = estimate_threshold(scan)
        write_scan_csv(scan, out_dir / f"scan_{scheme.value}.csv")
        write_threshold_json(estimate, out_dir / f"threshold_{scheme.value}.json")
        if estimate.crossed:
            summary = f"p_loss_star={estimate.p_loss_star:.6g}"
            if estimate.ci_low is not None:
                summary += f" ci95=[{estimate.ci_low:.6g}, {estimate.ci_high:.6g}]"
        else:
            summary = "no crossing"
        elapsed = time.perf_counter() - started
        print(
            f"{scheme.value}: p_c_total={config.p_c_total} {summary} "
            f"({elapsed:.0f}s)"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
