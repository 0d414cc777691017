"""Command-line front end for the analyzer and fusion-network simulations.

Subcommands:

* ``bsm-stats``: ideal analyzer statistics, or measured ones from a counts
  file supplied with ``--input``.
* ``classify-table``: export a scheme's click-pattern classification table
  as deterministic JSON.
* ``pnr``: analytic vs sampled distinct-detector routing probability.
* ``threshold``: loss-threshold scan with CSV/JSON artifacts.

Exit codes: 0 on success (including a scan without a crossing), 2 on usage
errors, 1 on runtime failures.  All stochastic output is fixed by ``--seed``
and independent of the worker count.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .bsm import (
    BellKind,
    BsmMetrics,
    ClassificationTable,
    Scheme,
    Verdict,
    derive_classification_table,
    empirical_metrics,
    ideal_metrics,
)
from .detection import routing_probability
from .fbqc.encoding import COMPOSITIONS
from .fbqc.lattice import GEOMETRIES
from .fbqc.threshold import (
    default_scan_config,
    estimate_threshold,
    run_scan,
    write_scan_csv,
    write_scan_json,
    write_threshold_json,
)
from .modes import FockState, validate_fock_state
from .uncertainty import BatchUncertainty, batch_uncertainty

# Default worker count when neither --workers nor the config file sets one.
WORKERS_ENV_VAR = "BELLFUSION_WORKERS"

THRESHOLD_CONFIG_KEYS = frozenset(
    {
        "scheme",
        "p_c_total",
        "p_loss",
        "sizes",
        "shots",
        "seed",
        "geometry",
        "composition",
        "workers",
        "out",
        "format",
        "threshold_out",
    }
)


class UsageError(Exception):
    """Bad invocation detected after argparse; mapped to exit code 2."""


def _fmt(value: Optional[float]) -> str:
    if value is None:
        return "n/a"
    return format(value, ".8g")


def _parse_float_grid(text: str) -> Tuple[float, ...]:
    """Grid flag syntax: comma list ``a,b,c`` or inclusive ``start:stop:step``."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(
                "range grids take the form start:stop:step"
            )
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise argparse.ArgumentTypeError("grid step must be positive")
        if stop < start:
            raise argparse.ArgumentTypeError("grid stop must be at least start")
        values = []
        current = start
        while current <= stop + 1e-12:
            values.append(round(current, 12))
            current += step
        return tuple(values)
    try:
        return tuple(float(token) for token in text.split(",") if token.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad float grid {text!r}") from exc


def _parse_int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(token) for token in text.split(",") if token.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _write_text(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


# ---------------------------------------------------------------------------
# bsm-stats


def _parse_pattern(raw) -> FockState:
    if isinstance(raw, (list, tuple)):
        values = [int(v) for v in raw]
    else:
        cleaned = str(raw).replace("(", "").replace(")", "")
        values = [int(token) for token in cleaned.split(",") if token.strip()]
    pattern = tuple(values)
    validate_fock_state(pattern)
    return pattern


def _load_counts(path: str):
    """Read a counts file: pooled counts and optional per-kind batches.

    Schema: ``{"counts": {kind: {pattern: count}}, "batches": {kind:
    [{pattern: count}, ...]}}`` where a pattern is a comma-separated list of
    the eight mode occupations.  Kinds present only under ``batches`` get
    their pooled counts by summation.
    """
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise ValueError("counts file must hold a JSON object")
    counts: Dict[BellKind, Dict[FockState, int]] = {}
    batches: Dict[BellKind, List[Dict[FockState, int]]] = {}
    for key, table in raw.get("counts", {}).items():
        kind = BellKind(key)
        counts[kind] = {_parse_pattern(p): int(c) for p, c in table.items()}
    for key, batch_list in raw.get("batches", {}).items():
        kind = BellKind(key)
        batches[kind] = [
            {_parse_pattern(p): int(c) for p, c in batch.items()}
            for batch in batch_list
        ]
        if kind not in counts:
            pooled: Dict[FockState, int] = {}
            for batch in batches[kind]:
                for pattern, count in batch.items():
                    pooled[pattern] = pooled.get(pattern, 0) + count
            counts[kind] = pooled
    if not counts:
        raise ValueError(f"{path} holds neither counts nor batches")
    return counts, batches


def _verdict_tag(verdict: Verdict) -> str:
    if verdict.bell is not None:
        return f"{verdict.label.value}({verdict.bell.value})"
    return verdict.label.value


def _metrics_json(metrics: BsmMetrics) -> dict:
    per_kind = {}
    for kind in BellKind:
        per_kind[kind.value] = {
            "p_c": metrics.p_success[kind],
            "p_f": metrics.p_misidentify[kind],
            "ambiguous": metrics.ambiguous_fraction[kind],
            "failure": metrics.failure_fraction[kind],
            "mdf": metrics.discrimination_fidelity[kind],
            "d": metrics.tv_distance[kind],
        }
    return {
        "p_c_total": metrics.p_c_total,
        "p_f_total": metrics.p_f_total,
        "discrimination_fidelity_total": metrics.discrimination_fidelity_total,
        "tv_distance_avg": metrics.tv_distance_avg,
        "per_kind": per_kind,
    }


def _uncertainty_json(uncertainty: BatchUncertainty) -> dict:
    return {
        "n_batches": uncertainty.n_batches,
        "sigma_p_success": uncertainty.sigma_p_success,
        "sigma_p_misidentify": uncertainty.sigma_p_misidentify,
        "sigma_discrimination_fidelity": uncertainty.sigma_discrimination_fidelity,
    }


def _print_metrics(metrics: BsmMetrics, kinds: Sequence[BellKind]) -> None:
    print(f"p_c_total: {_fmt(metrics.p_c_total)}")
    print(f"p_f_total: {_fmt(metrics.p_f_total)}")
    print(
        "avg discrimination fidelity: "
        f"{_fmt(metrics.discrimination_fidelity_total)}"
    )
    print(f"avg tv distance: {_fmt(metrics.tv_distance_avg)}")
    header = (
        f"{'kind':<10} {'p_c':<11} {'p_f':<11} {'ambiguous':<11} "
        f"{'failure':<11} {'mdf':<11} {'d':<11}"
    )
    print(header)
    for kind in kinds:
        print(
            f"{kind.value:<10} "
            f"{_fmt(metrics.p_success[kind]):<11} "
            f"{_fmt(metrics.p_misidentify[kind]):<11} "
            f"{_fmt(metrics.ambiguous_fraction[kind]):<11} "
            f"{_fmt(metrics.failure_fraction[kind]):<11} "
            f"{_fmt(metrics.discrimination_fidelity[kind]):<11} "
            f"{_fmt(metrics.tv_distance[kind]):<11}"
        )


def _print_distributions(
    table: ClassificationTable, kinds: Sequence[BellKind]
) -> None:
    for kind in kinds:
        print(f"patterns ({kind.value}):")
        for pattern in sorted(table.distributions[kind]):
            probability = table.distributions[kind][pattern]
            if probability <= 0:
                continue
            label = _verdict_tag(table.classify(pattern))
            joined = ",".join(str(n) for n in pattern)
            print(f"  {joined}  p={_fmt(probability)}  {label}")


def cmd_bsm_stats(args: argparse.Namespace) -> int:
    scheme = Scheme(args.scheme)
    table = derive_classification_table(scheme)
    uncertainties: Dict[BellKind, BatchUncertainty] = {}
    if args.input:
        counts, batches = _load_counts(args.input)
        metrics = empirical_metrics(counts, table)
        for kind, kind_batches in batches.items():
            uncertainties[kind] = batch_uncertainty(
                kind_batches, table=table, kind=kind
            )
        source = f"counts from {args.input}"
    else:
        metrics = ideal_metrics(table)
        source = "ideal analyzer"
    kinds = [BellKind(args.kind)] if args.kind else list(BellKind)

    print(f"scheme: {scheme.value}")
    print(f"source: {source}")
    _print_metrics(metrics, kinds)
    if not args.input:
        _print_distributions(table, kinds)
    for kind in kinds:
        if kind in uncertainties:
            u = uncertainties[kind]
            print(
                f"batch uncertainty ({kind.value}, {u.n_batches} batches): "
                f"sigma_p_c={_fmt(u.sigma_p_success)} "
                f"sigma_p_f={_fmt(u.sigma_p_misidentify)} "
                f"sigma_mdf={_fmt(u.sigma_discrimination_fidelity)}"
            )

    if args.out:
        payload = {
            "scheme": scheme.value,
            "source": source,
            "metrics": _metrics_json(metrics),
        }
        if not args.input:
            payload["distributions"] = {
                kind.value: [
                    {
                        "pattern": list(pattern),
                        "probability": table.distributions[kind][pattern],
                        "verdict": _verdict_tag(table.classify(pattern)),
                    }
                    for pattern in sorted(table.distributions[kind])
                    if table.distributions[kind][pattern] > 0
                ]
                for kind in kinds
            }
        if uncertainties:
            payload["uncertainty"] = {
                kind.value: _uncertainty_json(u)
                for kind, u in uncertainties.items()
            }
        _write_text(args.out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
        print(f"report written: {args.out}")
    return 0


# ---------------------------------------------------------------------------
# classify-table


def cmd_classify_table(args: argparse.Namespace) -> int:
    scheme = Scheme(args.scheme)
    table = derive_classification_table(scheme)
    entries = []
    for pattern in sorted(table.support):
        verdict = table.classify(pattern)
        probabilities = {
            kind.value: table.distributions[kind][pattern]
            for kind in BellKind
            if table.distributions[kind].get(pattern, 0.0) > 0
        }
        entries.append(
            {
                "pattern": list(pattern),
                "verdict": verdict.label.value,
                "bell": verdict.bell.value if verdict.bell else None,
                "probabilities": probabilities,
            }
        )
    payload = {
        "scheme": scheme.value,
        "n_patterns": len(entries),
        "entries": entries,
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        _write_text(args.out, text)
        print(f"table written: {args.out} ({len(entries)} patterns)")
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# pnr


def cmd_pnr(args: argparse.Namespace) -> int:
    analytic = routing_probability(args.n, args.k)
    rng = np.random.default_rng(args.seed)
    landings = rng.integers(0, args.k, size=(args.trials, args.n))
    landings.sort(axis=1)
    if args.n <= 1:
        distinct = np.ones(args.trials, dtype=bool)
    else:
        distinct = (np.diff(landings, axis=1) != 0).all(axis=1)
    estimate = float(distinct.mean())
    stderr = math.sqrt(estimate * (1.0 - estimate) / args.trials)
    print(f"routing probability, n={args.n} photons over k={args.k} detectors")
    print(f"analytic: {_fmt(analytic)}")
    print(
        f"sampled:  {_fmt(estimate)} +/- {_fmt(stderr)}  "
        f"({args.trials} trials, seed {args.seed})"
    )
    return 0


# ---------------------------------------------------------------------------
# threshold


def _load_threshold_config(path: str) -> dict:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise UsageError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed config file {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise UsageError("config file must hold a JSON object")
    unknown = set(raw) - THRESHOLD_CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return raw


def _config_grid(raw) -> Tuple[float, ...]:
    if isinstance(raw, (list, tuple)):
        return tuple(float(v) for v in raw)
    return _parse_float_grid(str(raw))


def _config_sizes(raw) -> Tuple[int, ...]:
    if isinstance(raw, (list, tuple)):
        return tuple(int(v) for v in raw)
    return _parse_int_list(str(raw))


def cmd_threshold(args: argparse.Namespace) -> int:
    config_file = _load_threshold_config(args.config) if args.config else {}

    def setting(key: str, flag_value, parse=None):
        # CLI flags override the config file, which overrides scheme defaults
        if flag_value is not None:
            return flag_value
        if key in config_file:
            raw = config_file[key]
            return parse(raw) if parse else raw
        return None

    scheme = Scheme(setting("scheme", args.scheme) or Scheme.BOOSTED)
    overrides = {}
    p_c_total = setting("p_c_total", args.p_c_total)
    if p_c_total is not None:
        overrides["p_c_total"] = float(p_c_total)
    grid = setting("p_loss", args.p_loss, parse=_config_grid)
    if grid is not None:
        overrides["p_loss_values"] = grid
    sizes = setting("sizes", args.sizes, parse=_config_sizes)
    if sizes is not None:
        overrides["sizes"] = sizes
    shots = setting("shots", args.shots)
    if shots is not None:
        overrides["shots"] = int(shots)
    seed = setting("seed", args.seed)
    if seed is not None:
        overrides["seed"] = int(seed)
    geometry = setting("geometry", args.geometry)
    if geometry is not None:
        overrides["geometry"] = str(geometry)
    composition = setting("composition", args.composition)
    if composition is not None:
        overrides["composition"] = str(composition)
    workers = setting("workers", args.workers)
    if workers is None:
        workers = os.environ.get(WORKERS_ENV_VAR, "1")
    overrides["workers"] = int(workers)

    out_format = setting("format", args.format) or "csv"
    if out_format not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {out_format!r}")
    out_path = setting("out", args.out)
    threshold_path = setting("threshold_out", args.threshold_out)

    try:
        scan_config = default_scan_config(scheme, **overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    scan = run_scan(scan_config)
    estimate = estimate_threshold(scan)

    if out_path:
        if out_format == "csv":
            write_scan_csv(scan, out_path)
        else:
            write_scan_json(scan, out_path)
    if threshold_path:
        write_threshold_json(estimate, threshold_path)

    print(f"scheme: {scan_config.scheme.value}")
    print(f"p_c_total: {_fmt(scan_config.p_c_total)}")
    print(
        "sizes: "
        + ",".join(str(s) for s in scan_config.sizes)
        + f"  shots: {scan_config.shots}  seed: {scan_config.seed}"
    )
    print(
        f"geometry: {scan_config.geometry}  "
        f"composition: {scan_config.composition}  workers: {scan_config.workers}"
    )
    print("p_loss grid: " + ", ".join(_fmt(p) for p in scan_config.p_loss_values))
    if out_path:
        print(f"scan written: {out_path}")
    if estimate.crossed:
        line = f"p_loss_star: {_fmt(estimate.p_loss_star)}"
        if estimate.ci_low is not None:
            line += f"  ci95: [{_fmt(estimate.ci_low)}, {_fmt(estimate.ci_high)}]"
        line += "  crossing sizes: " + ",".join(
            str(s) for s in estimate.crossing_sizes
        )
        print(line)
    else:
        print("p_loss_star: no crossing")
    if threshold_path:
        print(f"threshold summary written: {threshold_path}")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellfusion",
        description=(
            "Bell-state analyzer simulation and fusion-network loss thresholds"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    stats = sub.add_parser(
        "bsm-stats", help="analyzer output statistics and quality metrics"
    )
    stats.add_argument(
        "--scheme", required=True, choices=[s.value for s in Scheme]
    )
    pick = stats.add_mutually_exclusive_group()
    pick.add_argument("--kind", choices=[k.value for k in BellKind])
    pick.add_argument(
        "--all", action="store_true", help="report every Bell kind (default)"
    )
    stats.add_argument(
        "--input", help="JSON counts file; batches enable uncertainty output"
    )
    stats.add_argument("--out", help="optional JSON report path")
    stats.set_defaults(func=cmd_bsm_stats)

    table = sub.add_parser(
        "classify-table", help="export a click-pattern classification table"
    )
    table.add_argument(
        "--scheme", required=True, choices=[s.value for s in Scheme]
    )
    table.add_argument("--out", help="output JSON path (default: stdout)")
    table.set_defaults(func=cmd_classify_table)

    pnr = sub.add_parser(
        "pnr", help="distinct-detector routing probability, analytic vs sampled"
    )
    pnr.add_argument("n", type=_nonnegative_int, help="photon count")
    pnr.add_argument("k", type=_positive_int, help="detectors per mode")
    pnr.add_argument("--trials", type=_positive_int, default=100_000)
    pnr.add_argument("--seed", type=int, default=2026)
    pnr.set_defaults(func=cmd_pnr)

    threshold = sub.add_parser(
        "threshold", help="loss-threshold scan and crossing estimate"
    )
    threshold.add_argument("--scheme", choices=[s.value for s in Scheme])
    threshold.add_argument(
        "--config", help="JSON config file; explicit flags override it"
    )
    threshold.add_argument("--p-c-total", type=float)
    threshold.add_argument(
        "--p-loss",
        type=_parse_float_grid,
        help="comma list (a,b,c) or inclusive range (start:stop:step)",
    )
    threshold.add_argument("--sizes", type=_parse_int_list)
    threshold.add_argument("--shots", type=_positive_int)
    threshold.add_argument("--seed", type=int)
    threshold.add_argument("--geometry", choices=list(GEOMETRIES))
    threshold.add_argument("--composition", choices=list(COMPOSITIONS))
    threshold.add_argument(
        "--workers",
        type=_positive_int,
        help=f"parallel processes (default: ${WORKERS_ENV_VAR} or 1)",
    )
    threshold.add_argument("--out", help="scan output path")
    threshold.add_argument("--format", choices=("csv", "json"))
    threshold.add_argument("--threshold-out", help="threshold summary JSON path")
    threshold.set_defaults(func=cmd_threshold)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
