"""Loss-threshold scans: grid runs, crossing estimation, stable output files."""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from io import TextIOBase
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..bsm import Scheme
from .encoding import (
    COMPOSITION_BLOCK,
    COMPOSITIONS,
    encoded_fusion_model,
    physical_fusion_model,
)
from .lattice import GEOMETRIES, GEOMETRY_SIX_RING, build_lattice
from .montecarlo import PointResult, run_point

# Operating points measured for the two analyzer schemes (lossless success
# probability of one physical fusion) and the scan defaults built around them.
BOOSTED_OPERATING_P_C = 0.693
STANDARD_OPERATING_P_C = 0.4905

BOOSTED_DEFAULT_SIZES = (3, 5, 7)
STANDARD_DEFAULT_SIZES = (5, 7, 9)
BOOSTED_DEFAULT_GRID = (0.010, 0.0115, 0.013, 0.0145, 0.016, 0.0175, 0.019)
STANDARD_DEFAULT_GRID = (0.0025, 0.00325, 0.004, 0.00475, 0.0055, 0.00625, 0.007)

DEFAULT_SHOTS = 20000
DEFAULT_SEED = 2026
DEFAULT_BOOTSTRAP = 200

# First line of every scan CSV; bump the version when columns change.
SCAN_CSV_SCHEMA_COMMENT = "# scan-csv schema 1"

SCAN_CSV_COLUMNS = (
    "p_c_total",
    "p_loss",
    "lattice_size",
    "shots",
    "rate_primal",
    "rate_dual",
    "rate_combined",
    "stderr",
)


@dataclass(frozen=True)
class ScanConfig:
    """Everything that defines one threshold scan, in one place."""

    p_c_total: float
    scheme: Scheme = Scheme.BOOSTED
    p_loss_values: Tuple[float, ...] = BOOSTED_DEFAULT_GRID
    sizes: Tuple[int, ...] = BOOSTED_DEFAULT_SIZES
    shots: int = DEFAULT_SHOTS
    seed: int = DEFAULT_SEED
    geometry: str = GEOMETRY_SIX_RING
    composition: str = COMPOSITION_BLOCK
    workers: int = 1

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_c_total <= 1.0:
            raise ValueError("p_c_total must be in [0, 1]")
        if len(self.p_loss_values) == 0:
            raise ValueError("need at least one p_loss value")
        if any(not 0.0 <= p <= 1.0 for p in self.p_loss_values):
            raise ValueError("p_loss values must be in [0, 1]")
        if len(self.sizes) == 0 or any(s < 2 for s in self.sizes):
            raise ValueError("sizes must all be at least 2")
        if self.shots < 1:
            raise ValueError("shots must be positive")
        if self.geometry not in GEOMETRIES:
            raise ValueError(f"geometry must be one of {GEOMETRIES}")
        if self.composition not in COMPOSITIONS:
            raise ValueError(f"composition must be one of {COMPOSITIONS}")
        if self.workers < 1:
            raise ValueError("workers must be positive")
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        object.__setattr__(
            self, "p_loss_values", tuple(sorted(float(p) for p in self.p_loss_values))
        )
        object.__setattr__(self, "sizes", tuple(sorted(int(s) for s in self.sizes)))


def default_scan_config(scheme: Scheme, **overrides) -> ScanConfig:
    """Scan defaults for one analyzer scheme's measured operating point."""
    scheme = Scheme(scheme)
    if scheme is Scheme.BOOSTED:
        base = dict(
            p_c_total=BOOSTED_OPERATING_P_C,
            scheme=scheme,
            p_loss_values=BOOSTED_DEFAULT_GRID,
            sizes=BOOSTED_DEFAULT_SIZES,
        )
    else:
        base = dict(
            p_c_total=STANDARD_OPERATING_P_C,
            scheme=scheme,
            p_loss_values=STANDARD_DEFAULT_GRID,
            sizes=STANDARD_DEFAULT_SIZES,
        )
    base.update(overrides)
    return ScanConfig(**base)


@dataclass(frozen=True)
class ScanResult:
    config: ScanConfig
    points: Tuple[PointResult, ...]

    def point(self, size: int, p_loss: float) -> PointResult:
        for p in self.points:
            if p.size == size and p.p_loss == p_loss:
                return p
        raise KeyError(f"no point for size={size}, p_loss={p_loss}")


def _point_rng(seed: int, size_index: int, point_index: int) -> np.random.Generator:
    sequence = np.random.SeedSequence(
        entropy=seed, spawn_key=(size_index, point_index)
    )
    return np.random.default_rng(sequence)


def _scan_point(args) -> PointResult:
    (
        p_c_total,
        scheme,
        geometry,
        composition,
        size,
        size_index,
        p_loss,
        point_index,
        shots,
        seed,
    ) = args
    lattice = build_lattice(size, geometry=geometry)
    physical = physical_fusion_model(p_c_total, p_loss, scheme)
    model = encoded_fusion_model(physical, composition)
    rng = _point_rng(seed, size_index, point_index)
    return run_point(
        lattice, model, shots, rng, p_c_total=p_c_total, p_loss=p_loss
    )


def run_scan(config: ScanConfig) -> ScanResult:
    """Run every (size, p_loss) grid point of the scan.

    Each point draws from its own seed sequence derived from (seed,
    size index, point index), so results are identical for any worker count
    and any execution order.
    """
    tasks = []
    for size_index, size in enumerate(config.sizes):
        for point_index, p_loss in enumerate(config.p_loss_values):
            tasks.append(
                (
                    config.p_c_total,
                    config.scheme,
                    config.geometry,
                    config.composition,
                    size,
                    size_index,
                    p_loss,
                    point_index,
                    config.shots,
                    config.seed,
                )
            )
    if config.workers == 1:
        points = [_scan_point(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            points = list(pool.map(_scan_point, tasks, chunksize=1))
    ordered = tuple(sorted(points, key=lambda p: (p.size, p.p_loss)))
    return ScanResult(config=config, points=ordered)


@dataclass(frozen=True)
class ThresholdEstimate:
    """Crossing of the two largest sizes' failure-rate curves, if any."""

    p_c_total: float
    p_loss_star: Optional[float]
    ci_low: Optional[float]
    ci_high: Optional[float]
    sizes: Tuple[int, ...]
    shots: int
    crossing_sizes: Tuple[int, int]

    @property
    def crossed(self) -> bool:
        return self.p_loss_star is not None


def _crossing_from_rates(
    p_values: Sequence[float],
    rates_small: Sequence[float],
    rates_big: Sequence[float],
) -> Optional[float]:
    """Crossing of log-rate curves by linear interpolation, None if absent.

    Grid points where either rate is zero carry no log-scale information and
    are skipped.
    """
    usable = [
        (p, math.log(rs), math.log(rb))
        for p, rs, rb in zip(p_values, rates_small, rates_big)
        if rs > 0.0 and rb > 0.0
    ]
    for (p_a, small_a, big_a), (p_b, small_b, big_b) in zip(usable, usable[1:]):
        gap_a = big_a - small_a
        gap_b = big_b - small_b
        if gap_a == 0.0:
            return p_a
        if gap_a * gap_b < 0.0:
            t = gap_a / (gap_a - gap_b)
            return p_a + t * (p_b - p_a)
    if usable and usable[-1][2] == usable[-1][1]:
        return usable[-1][0]
    return None


def estimate_threshold(
    scan: ScanResult, bootstrap: int = DEFAULT_BOOTSTRAP
) -> ThresholdEstimate:
    """Threshold from the combined-failure crossing of the two largest sizes.

    The confidence interval comes from a parametric bootstrap: each point's
    failure count is resampled binomially, the crossing is recomputed, and
    the 2.5/97.5 percentiles of the surviving estimates are reported.
    """
    sizes = scan.config.sizes
    if len(sizes) < 2:
        raise ValueError("threshold estimation needs at least two lattice sizes")
    small, big = sizes[-2], sizes[-1]
    p_values = list(scan.config.p_loss_values)
    rates_small = [scan.point(small, p).rate_combined for p in p_values]
    rates_big = [scan.point(big, p).rate_combined for p in p_values]
    star = _crossing_from_rates(p_values, rates_small, rates_big)

    ci_low = ci_high = None
    if star is not None and bootstrap > 0:
        shots = scan.config.shots
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=scan.config.seed, spawn_key=(1_000_003,))
        )
        resampled: List[float] = []
        for _ in range(bootstrap):
            boot_small = rng.binomial(shots, rates_small) / shots
            boot_big = rng.binomial(shots, rates_big) / shots
            boot_star = _crossing_from_rates(p_values, boot_small, boot_big)
            if boot_star is not None:
                resampled.append(boot_star)
        if resampled:
            ci_low = float(np.percentile(resampled, 2.5))
            ci_high = float(np.percentile(resampled, 97.5))
    return ThresholdEstimate(
        p_c_total=scan.config.p_c_total,
        p_loss_star=star,
        ci_low=ci_low,
        ci_high=ci_high,
        sizes=sizes,
        shots=scan.config.shots,
        crossing_sizes=(small, big),
    )


def _format_number(value: float) -> str:
    return format(value, ".10g")


def scan_rows(scan: ScanResult) -> List[Tuple[str, ...]]:
    rows = []
    for point in scan.points:
        rows.append(
            (
                _format_number(point.p_c_total),
                _format_number(point.p_loss),
                str(point.size),
                str(point.shots),
                _format_number(point.rate_primal),
                _format_number(point.rate_dual),
                _format_number(point.rate_combined),
                _format_number(point.stderr),
            )
        )
    return rows


def write_scan_csv(scan: ScanResult, destination: Union[str, Path, TextIOBase]) -> None:
    """Write the scan as CSV with stable row order and number formatting."""
    lines = [SCAN_CSV_SCHEMA_COMMENT, ",".join(SCAN_CSV_COLUMNS)]
    for row in scan_rows(scan):
        lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    if isinstance(destination, (str, Path)):
        Path(destination).write_text(text, encoding="utf-8", newline="\n")
    else:
        destination.write(text)


def scan_to_json_dict(scan: ScanResult) -> dict:
    return {
        "p_c_total": scan.config.p_c_total,
        "scheme": scan.config.scheme.value,
        "geometry": scan.config.geometry,
        "composition": scan.config.composition,
        "seed": scan.config.seed,
        "points": [
            {
                "p_loss": point.p_loss,
                "lattice_size": point.size,
                "shots": point.shots,
                "rate_primal": point.rate_primal,
                "rate_dual": point.rate_dual,
                "rate_combined": point.rate_combined,
                "stderr": point.stderr,
            }
            for point in scan.points
        ],
    }


def write_scan_json(scan: ScanResult, destination: Union[str, Path, TextIOBase]) -> None:
    text = json.dumps(scan_to_json_dict(scan), indent=2, sort_keys=True) + "\n"
    if isinstance(destination, (str, Path)):
        Path(destination).write_text(text, encoding="utf-8", newline="\n")
    else:
        destination.write(text)


def threshold_to_json_dict(estimate: ThresholdEstimate) -> dict:
    return {
        "p_c_total": estimate.p_c_total,
        "p_loss_star": estimate.p_loss_star,
        "ci_low": estimate.ci_low,
        "ci_high": estimate.ci_high,
        "sizes": list(estimate.sizes),
        "shots": estimate.shots,
    }


def write_threshold_json(
    estimate: ThresholdEstimate, destination: Union[str, Path, TextIOBase]
) -> None:
    text = json.dumps(threshold_to_json_dict(estimate), indent=2, sort_keys=True) + "\n"
    if isinstance(destination, (str, Path)):
        Path(destination).write_text(text, encoding="utf-8", newline="\n")
    else:
        destination.write(text)
