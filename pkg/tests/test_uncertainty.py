"""Batch count spreads and first-order error propagation vs a bootstrap."""

import math

import numpy as np
import pytest

from bellfusion.bsm import BellKind, VerdictLabel
from bellfusion.uncertainty import batch_uncertainty


def mixture_batches(table, kind_main, kind_leak, leak, batch_shots, n_batches, rng):
    """Sample batches from (1-leak)*dist[main] + leak*dist[leak]."""
    main = table.distributions[kind_main]
    other = table.distributions[kind_leak]
    patterns = sorted(set(main) | set(other))
    probs = np.array(
        [(1 - leak) * main.get(p, 0.0) + leak * other.get(p, 0.0) for p in patterns]
    )
    probs = probs / probs.sum()
    batches = []
    for _ in range(n_batches):
        draws = rng.multinomial(batch_shots, probs)
        batches.append({p: int(c) for p, c in zip(patterns, draws) if c})
    return batches


def pooled_success_probability(batches, table, kind):
    correct = total = 0
    for batch in batches:
        for pattern, count in batch.items():
            verdict = table.classify(pattern)
            if verdict.label is VerdictLabel.FAILURE:
                continue
            total += count
            if verdict.label is VerdictLabel.IDENTIFIED and verdict.bell is kind:
                correct += count
    return correct / total


def pooled_fidelity(batches, table, kind):
    correct = wrong = 0
    for batch in batches:
        for pattern, count in batch.items():
            verdict = table.classify(pattern)
            if verdict.label is not VerdictLabel.IDENTIFIED:
                continue
            if verdict.bell is kind:
                correct += count
            else:
                wrong += count
    return correct / (correct + wrong)


class TestSigmaCounts:
    def test_two_batch_worked_example(self):
        batches = [{(1, 1): 3}, {(1, 1): 5}]
        result = batch_uncertainty(batches)
        assert result.sigma_counts[(1, 1)] == pytest.approx(1.0)
        assert result.n_batches == 2

    def test_absent_pattern_counts_as_zero(self):
        batches = [{(0,): 4}, {}]
        result = batch_uncertainty(batches)
        assert result.sigma_counts[(0,)] == pytest.approx(2.0)

    def test_constant_counts_have_zero_sigma(self):
        batches = [{(0,): 7}] * 5
        result = batch_uncertainty(batches)
        assert result.sigma_counts[(0,)] == 0.0

    def test_requires_two_batches(self):
        with pytest.raises(ValueError):
            batch_uncertainty([{(0,): 1}])

    def test_rejects_negative_counts(self):
        with pytest.raises(ValueError):
            batch_uncertainty([{(0,): -1}, {(0,): 1}])

    def test_metric_fields_absent_without_table(self):
        result = batch_uncertainty([{(0,): 3}, {(0,): 5}])
        assert result.sigma_p_success is None
        assert result.sigma_discrimination_fidelity is None


class TestPropagationAgainstBootstrap:
    def test_success_probability_sigma(self, boosted_table, rng):
        kind = BellKind.PHI_PLUS
        batches = mixture_batches(
            boosted_table, kind, BellKind.PSI_PLUS, 0.1, 400, 25, rng
        )
        result = batch_uncertainty(batches, boosted_table, kind)

        boot = []
        for _ in range(1500):
            resampled = [batches[i] for i in rng.integers(0, len(batches), len(batches))]
            boot.append(pooled_success_probability(resampled, boosted_table, kind))
        sigma_boot = float(np.std(boot))
        assert result.sigma_p_success == pytest.approx(sigma_boot, rel=0.2)

    def test_fidelity_sigma(self, boosted_table, rng):
        kind = BellKind.PHI_PLUS
        batches = mixture_batches(
            boosted_table, kind, BellKind.PSI_MINUS, 0.15, 400, 25, rng
        )
        result = batch_uncertainty(batches, boosted_table, kind)

        boot = []
        for _ in range(1500):
            resampled = [batches[i] for i in rng.integers(0, len(batches), len(batches))]
            boot.append(pooled_fidelity(resampled, boosted_table, kind))
        sigma_boot = float(np.std(boot))
        assert result.sigma_discrimination_fidelity == pytest.approx(sigma_boot, rel=0.2)

    def test_zero_spread_batches_give_zero_sigma(self, standard_table):
        pattern = next(iter(standard_table.identified_patterns(BellKind.PSI_PLUS)))
        batches = [{pattern: 10}] * 4
        result = batch_uncertainty(batches, standard_table, BellKind.PSI_PLUS)
        assert result.sigma_p_success == pytest.approx(0.0, abs=1e-15)

    def test_requires_kind_with_table(self, standard_table):
        with pytest.raises(ValueError):
            batch_uncertainty([{(0,): 1}, {(0,): 2}], standard_table, None)
