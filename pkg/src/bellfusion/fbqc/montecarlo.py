"""Monte Carlo estimation of logical failure rates on the fusion network.

Every encoded fusion draws an outcome category; lost parities erase the
corresponding edges (XX on the primal graph, ZZ on the dual), and each erased
edge's measurement value is randomized, flipping with probability one half.
Both graphs are peeled independently; a run fails logically when the residual
error wraps the correlation surface of either graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .decoding import decode_batch
from .encoding import EncodedFusionModel
from .lattice import FusionNetworkLattice

# Shots are sampled in fixed-size chunks so the random stream is independent
# of worker scheduling; changing this constant changes sampled results.
SHOT_CHUNK = 2048

CATEGORY_BOTH = 0
CATEGORY_XX_ONLY = 1
CATEGORY_ZZ_ONLY = 2
CATEGORY_NEITHER = 3


def _category_thresholds(model: EncodedFusionModel) -> np.ndarray:
    cumulative = np.cumsum(
        [model.p_both, model.p_xx_only, model.p_zz_only, model.p_neither]
    )
    cumulative[-1] = 1.0  # guard against rounding in the final bin
    return cumulative


def _sample_categories(
    thresholds: np.ndarray, shape, rng: np.random.Generator
) -> np.ndarray:
    return np.searchsorted(thresholds, rng.random(shape), side="right").astype(np.int8)


def _erasures_from_categories(categories: np.ndarray):
    primal = (categories == CATEGORY_ZZ_ONLY) | (categories == CATEGORY_NEITHER)
    dual = (categories == CATEGORY_XX_ONLY) | (categories == CATEGORY_NEITHER)
    return primal, dual


@dataclass(frozen=True)
class Shot:
    """One sampled network state, kept around for inspection and tests."""

    categories: np.ndarray
    primal_erased: np.ndarray
    dual_erased: np.ndarray
    primal_flips: np.ndarray
    dual_flips: np.ndarray
    primal_syndrome: np.ndarray
    dual_syndrome: np.ndarray


def sample_shot(
    lattice: FusionNetworkLattice,
    model: EncodedFusionModel,
    rng: np.random.Generator,
) -> Shot:
    """Draw one shot: fusion categories, edge erasures, flips, syndromes."""
    n = lattice.n_fusions
    categories = _sample_categories(_category_thresholds(model), n, rng)
    primal_erased, dual_erased = _erasures_from_categories(categories)
    primal_flips = primal_erased & (rng.random(n) < 0.5)
    dual_flips = dual_erased & (rng.random(n) < 0.5)
    return Shot(
        categories=categories,
        primal_erased=primal_erased,
        dual_erased=dual_erased,
        primal_flips=primal_flips,
        dual_flips=dual_flips,
        primal_syndrome=lattice.primal.boundary_nodes(primal_flips),
        dual_syndrome=lattice.dual.boundary_nodes(dual_flips),
    )


@dataclass(frozen=True)
class PointResult:
    """Failure statistics of one (lattice size, loss rate) grid point."""

    p_c_total: float
    p_loss: float
    size: int
    shots: int
    failures_primal: int
    failures_dual: int
    failures_combined: int

    @property
    def rate_primal(self) -> float:
        return self.failures_primal / self.shots

    @property
    def rate_dual(self) -> float:
        return self.failures_dual / self.shots

    @property
    def rate_combined(self) -> float:
        return self.failures_combined / self.shots

    @property
    def stderr(self) -> float:
        """Binomial standard error of the combined failure rate."""
        rate = self.rate_combined
        return math.sqrt(rate * (1.0 - rate) / self.shots)


def run_point(
    lattice: FusionNetworkLattice,
    model: EncodedFusionModel,
    shots: int,
    rng: np.random.Generator,
    p_c_total: float = float("nan"),
    p_loss: float = float("nan"),
) -> PointResult:
    """Estimate logical failure rates over ``shots`` independent samples."""
    if shots < 1:
        raise ValueError("shots must be positive")
    thresholds = _category_thresholds(model)
    n = lattice.n_fusions
    failures_primal = failures_dual = failures_combined = 0
    remaining = shots
    while remaining > 0:
        chunk = min(SHOT_CHUNK, remaining)
        categories = _sample_categories(thresholds, (chunk, n), rng)
        primal_erased, dual_erased = _erasures_from_categories(categories)
        primal_flips = primal_erased & (rng.random((chunk, n)) < 0.5)
        dual_flips = dual_erased & (rng.random((chunk, n)) < 0.5)
        fail_primal, ok_primal = decode_batch(lattice.primal, primal_erased, primal_flips)
        fail_dual, ok_dual = decode_batch(lattice.dual, dual_erased, dual_flips)
        if not (ok_primal.all() and ok_dual.all()):
            raise RuntimeError("decoder reported an invalid correction; engine bug")
        failures_primal += int(fail_primal.sum())
        failures_dual += int(fail_dual.sum())
        failures_combined += int((fail_primal | fail_dual).sum())
        remaining -= chunk
    return PointResult(
        p_c_total=p_c_total,
        p_loss=p_loss,
        size=lattice.size,
        shots=shots,
        failures_primal=failures_primal,
        failures_dual=failures_dual,
        failures_combined=failures_combined,
    )


def logical_error_rate(
    lattice: FusionNetworkLattice,
    model: EncodedFusionModel,
    shots: int,
    rng: Union[int, np.random.Generator],
) -> float:
    """Combined logical failure rate; convenience wrapper around run_point."""
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(rng)
    return run_point(lattice, model, shots, rng).rate_combined
