"""Detection-chain model: photon loss and pseudo-number-resolving readout.

Real detectors are lossy threshold devices.  Number resolution is approximated
by splitting each mode over k single-photon detectors (a 1-to-k splitter
tree), which undercounts whenever two photons land on the same detector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np

from .modes import FockState, validate_fock_state

# photons traversing a fusion: two signal photons, plus two ancilla photons
# in the boosted scheme
N_SIGNAL_PHOTONS = 2
N_ANCILLA_PHOTONS_BOOSTED = 2


@dataclass(frozen=True)
class LossChannel:
    """Uniform per-photon survival model; each photon is lost with p_loss."""

    p_loss: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_loss <= 1.0:
            raise ValueError(f"p_loss must be in [0, 1], got {self.p_loss}")


def apply_loss(
    pattern: FockState, channel: LossChannel, rng: np.random.Generator
) -> FockState:
    """Drop each photon independently with probability ``channel.p_loss``."""
    pattern = validate_fock_state(pattern, n_modes=len(tuple(pattern)))
    if channel.p_loss == 0.0:
        return pattern
    survivors = tuple(
        int(rng.binomial(occ, 1.0 - channel.p_loss)) if occ else 0 for occ in pattern
    )
    return survivors


def erasure_probability(p_loss: float, n_signal: int = 2, n_ancilla: int = 0) -> float:
    """Probability that a fusion loses at least one of its photons.

    A fusion is erased when any of its ``n_signal + n_ancilla`` photons fails
    to arrive: 1 - (1 - p_loss)^(n_signal + n_ancilla).
    """
    if not 0.0 <= p_loss <= 1.0:
        raise ValueError(f"p_loss must be in [0, 1], got {p_loss}")
    if n_signal < 0 or n_ancilla < 0:
        raise ValueError("photon counts must be nonnegative")
    return 1.0 - (1.0 - p_loss) ** (n_signal + n_ancilla)


@dataclass(frozen=True)
class SplitterBank:
    """Pseudo-number-resolving readout: k threshold detectors per mode."""

    k: int = 7

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"k must be a positive int, got {self.k!r}")


def routing_probability(n: int, k: int) -> float:
    """Probability that n photons entering a 1-to-k splitter all separate.

    Each photon independently picks one of k detectors, so all-distinct has
    probability k! / ((k - n)! * k^n).  Exact: computed as a rational and
    rounded once.  Zero when n > k; one when n <= 1.
    """
    if not isinstance(n, int) or not isinstance(k, int):
        raise ValueError("photon and detector counts must be ints")
    if n < 0:
        raise ValueError(f"photon count must be nonnegative, got {n}")
    if k < 1:
        raise ValueError(f"detector count must be positive, got {k}")
    if n > k:
        return 0.0
    if n <= 1:
        return 1.0
    return float(Fraction(math.factorial(k), math.factorial(k - n) * k**n))


def ppnr_correction(pattern: FockState, k: int = 7) -> float:
    """Inverse probability that the pattern is read out faithfully.

    Multiplying observed rates by this weight undoes the pseudo-PNR
    undercounting bias: weight = prod_i 1 / routing_probability(n_i, k).
    """
    pattern = validate_fock_state(pattern, n_modes=len(tuple(pattern)))
    weight = 1.0
    for occ in pattern:
        if occ > k:
            raise ValueError(
                f"{occ} photons cannot be resolved by {k} detectors in one mode"
            )
        weight /= routing_probability(occ, k)
    return weight


def sample_detector_clicks(
    pattern: FockState, bank: SplitterBank, rng: np.random.Generator
) -> Tuple[Tuple[bool, ...], ...]:
    """Per-mode, per-detector click pattern for one readout of ``pattern``.

    Each photon lands on a uniformly random detector behind its mode's
    splitter; a detector clicks if it receives one photon or more.
    """
    pattern = validate_fock_state(pattern, n_modes=len(tuple(pattern)))
    clicks = []
    for occ in pattern:
        mode_clicks = [False] * bank.k
        if occ:
            for detector in rng.integers(0, bank.k, size=occ):
                mode_clicks[detector] = True
        clicks.append(tuple(mode_clicks))
    return tuple(clicks)


def observed_pattern(clicks: Tuple[Tuple[bool, ...], ...]) -> FockState:
    """Photon counts as inferred from threshold clicks (undercounts bunching)."""
    return tuple(sum(mode_clicks) for mode_clicks in clicks)


def sample_pseudo_pnr(
    pattern: FockState, bank: SplitterBank, rng: np.random.Generator
) -> FockState:
    """One-shot pseudo-PNR readout: true pattern in, observed counts out."""
    return observed_pattern(sample_detector_clicks(pattern, bank, rng))
