"""Batch-based statistical uncertainties for analyzer metrics.

Repeated acquisition batches give a per-pattern count spread; first-order
error propagation turns that spread into uncertainties on the derived
probabilities.  Pattern counts are treated as independent, which is the usual
leading-order approximation for multinomial data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .bsm import BellKind, ClassificationTable, VerdictLabel
from .modes import FockState


@dataclass(frozen=True)
class BatchUncertainty:
    """Count spread across batches and propagated metric uncertainties.

    ``sigma_counts`` is the population standard deviation of each pattern's
    per-batch count.  The metric fields are standard errors of the pooled
    estimate and are present only when a classification context was supplied.
    """

    n_batches: int
    sigma_counts: Dict[FockState, float]
    sigma_p_success: Optional[float] = None
    sigma_p_misidentify: Optional[float] = None
    sigma_discrimination_fidelity: Optional[float] = None


def _count_matrix(
    batches: Sequence[Mapping[FockState, int]]
) -> Tuple[List[FockState], List[List[float]]]:
    patterns = sorted({tuple(p) for batch in batches for p in batch})
    matrix = []
    for batch in batches:
        row = []
        for pattern in patterns:
            count = batch.get(pattern, 0)
            if count < 0:
                raise ValueError("counts must be nonnegative")
            row.append(float(count))
        matrix.append(row)
    return patterns, matrix


def batch_uncertainty(
    batches: Sequence[Mapping[FockState, int]],
    table: Optional[ClassificationTable] = None,
    kind: Optional[BellKind] = None,
) -> BatchUncertainty:
    """Uncertainty estimates from per-batch pattern counts.

    With just the batches, returns the per-pattern population standard
    deviation sqrt(mean((N - mean(N))^2)).  Given a classification table and
    a Bell kind, additionally propagates the count spread (as the standard
    error sigma/sqrt(n) of the batch mean) to that kind's success and
    misidentification probabilities and to the discrimination fidelity.
    """
    if len(batches) < 2:
        raise ValueError("need at least two batches to estimate a spread")
    if (table is None) != (kind is None):
        raise ValueError("table and kind must be supplied together")
    patterns, matrix = _count_matrix(batches)
    n = len(matrix)
    sigma_counts: Dict[FockState, float] = {}
    means: Dict[FockState, float] = {}
    for col, pattern in enumerate(patterns):
        values = [matrix[row][col] for row in range(n)]
        mean = sum(values) / n
        variance = sum((v - mean) ** 2 for v in values) / n
        means[pattern] = mean
        sigma_counts[pattern] = math.sqrt(variance)
    if table is None:
        return BatchUncertainty(n_batches=n, sigma_counts=sigma_counts)

    kind = BellKind(kind)
    # Pooled-metric gradients; failure patterns are discarded just as in
    # empirical_metrics, so they carry no weight.
    kept = [p for p in patterns if table.classify(p).label is not VerdictLabel.FAILURE]
    total = sum(means[p] for p in kept)
    if total <= 0:
        raise ValueError("batches contain no classifiable counts")
    correct = sum(
        means[p]
        for p in kept
        if table.classify(p).label is VerdictLabel.IDENTIFIED
        and table.classify(p).bell is kind
    )
    wrong = sum(
        means[p]
        for p in kept
        if table.classify(p).label is VerdictLabel.IDENTIFIED
        and table.classify(p).bell is not kind
    )
    p_success = correct / total
    p_mis = wrong / total

    var_success = 0.0
    var_mis = 0.0
    var_fidelity = 0.0
    identified_total = correct + wrong
    for pattern in kept:
        sigma_mean = sigma_counts[pattern] / math.sqrt(n)
        verdict = table.classify(pattern)
        in_correct = verdict.label is VerdictLabel.IDENTIFIED and verdict.bell is kind
        in_wrong = verdict.label is VerdictLabel.IDENTIFIED and verdict.bell is not kind
        grad_success = ((1.0 if in_correct else 0.0) - p_success) / total
        grad_mis = ((1.0 if in_wrong else 0.0) - p_mis) / total
        var_success += (grad_success * sigma_mean) ** 2
        var_mis += (grad_mis * sigma_mean) ** 2
        if identified_total > 0:
            grad_fid = (
                (1.0 if in_correct else 0.0) * wrong
                - (1.0 if in_wrong else 0.0) * correct
            ) / identified_total**2
            var_fidelity += (grad_fid * sigma_mean) ** 2
    sigma_fid = math.sqrt(var_fidelity) if identified_total > 0 else None
    return BatchUncertainty(
        n_batches=n,
        sigma_counts=sigma_counts,
        sigma_p_success=math.sqrt(var_success),
        sigma_p_misidentify=math.sqrt(var_mis),
        sigma_discrimination_fidelity=sigma_fid,
    )
