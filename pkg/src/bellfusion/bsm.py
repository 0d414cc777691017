"""Bell-state analyzers: the two-photon scheme and the ancilla-boosted scheme.

Both schemes interfere the input photons in the four-port DFT multiport
(lifted to polarization) and classify the resulting photon-count pattern.
The standard scheme sends in just the two signal photons and distinguishes
only the two antisymmetric Bell states; the boosted scheme adds an ancilla
Bell pair on ports 3 and 4, which lifts the total success probability from
1/2 to 3/4 by splitting the remaining ambiguous pattern class in half.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Mapping, Optional, Set, Tuple

from .modes import FockState, PhotonicState, fock_from_modes, mode_index, tensor
from .optics import (
    Interferometer,
    dft4,
    extend_to_polarization,
    output_distribution,
)

SQRT_HALF = 2 ** -0.5

# A Bell kind counts as present in a pattern when its probability there
# exceeds this; patterns with exactly one kind present identify that kind.
POSITIVE_EPS = 1e-12


class BellKind(str, Enum):
    PSI_PLUS = "psi_plus"
    PSI_MINUS = "psi_minus"
    PHI_PLUS = "phi_plus"
    PHI_MINUS = "phi_minus"

    def __str__(self) -> str:
        return self.value


class Scheme(str, Enum):
    STANDARD = "standard"
    BOOSTED = "boosted"

    def __str__(self) -> str:
        return self.value


def bell_state(kind: BellKind, ports: Tuple[int, int] = (1, 2)) -> PhotonicState:
    """Polarization Bell state of two photons on the given spatial ports."""
    p1, p2 = ports
    if p1 == p2:
        raise ValueError("Bell pair needs two distinct ports")
    kind = BellKind(kind)
    h1, v1 = mode_index(p1, "H"), mode_index(p1, "V")
    h2, v2 = mode_index(p2, "H"), mode_index(p2, "V")
    if kind is BellKind.PSI_PLUS:
        terms = {fock_from_modes(h1, v2): SQRT_HALF, fock_from_modes(v1, h2): SQRT_HALF}
    elif kind is BellKind.PSI_MINUS:
        terms = {fock_from_modes(h1, v2): SQRT_HALF, fock_from_modes(v1, h2): -SQRT_HALF}
    elif kind is BellKind.PHI_PLUS:
        terms = {fock_from_modes(h1, h2): SQRT_HALF, fock_from_modes(v1, v2): SQRT_HALF}
    else:
        terms = {fock_from_modes(h1, h2): SQRT_HALF, fock_from_modes(v1, v2): -SQRT_HALF}
    return PhotonicState(terms)


def ancilla_state() -> PhotonicState:
    """The boosting resource: a symmetric HH+VV pair on ports 3 and 4."""
    return bell_state(BellKind.PHI_PLUS, ports=(3, 4))


def build_input(kind: BellKind, scheme: Scheme) -> PhotonicState:
    """Full interferometer input for measuring ``kind`` under ``scheme``."""
    signal = bell_state(kind, ports=(1, 2))
    if Scheme(scheme) is Scheme.STANDARD:
        return signal
    return tensor(signal, ancilla_state())


def scheme_interferometer(scheme: Scheme) -> Interferometer:
    """The polarization-lifted four-port DFT; shared by both schemes.

    The standard scheme leaves ports 3 and 4 dark, which makes the multiport
    act as a conventional two-photon analyzer on ports 1 and 2.
    """
    Scheme(scheme)
    return Interferometer(extend_to_polarization(dft4()))


class VerdictLabel(str, Enum):
    IDENTIFIED = "identified"
    AMBIGUOUS = "ambiguous"
    FAILURE = "failure"


@dataclass(frozen=True)
class Verdict:
    """Classification of one detected photon-count pattern."""

    label: VerdictLabel
    bell: Optional[BellKind] = None

    def __post_init__(self) -> None:
        if self.label is VerdictLabel.IDENTIFIED and self.bell is None:
            raise ValueError("identified verdict needs a Bell kind")
        if self.label is not VerdictLabel.IDENTIFIED and self.bell is not None:
            raise ValueError("only identified verdicts carry a Bell kind")

    @staticmethod
    def identified(bell: BellKind) -> "Verdict":
        return Verdict(VerdictLabel.IDENTIFIED, BellKind(bell))

    @staticmethod
    def ambiguous() -> "Verdict":
        return Verdict(VerdictLabel.AMBIGUOUS)

    @staticmethod
    def failure() -> "Verdict":
        return Verdict(VerdictLabel.FAILURE)


@dataclass(frozen=True)
class ClassificationTable:
    """Ideal output distributions per Bell kind plus the pattern verdicts."""

    scheme: Scheme
    distributions: Mapping[BellKind, Mapping[FockState, float]]
    verdicts: Mapping[FockState, Verdict]

    def classify(self, pattern: FockState) -> Verdict:
        """Verdict for a pattern; anything outside the table is a failure."""
        return self.verdicts.get(tuple(pattern), Verdict.failure())

    @property
    def support(self) -> Set[FockState]:
        return set(self.verdicts)

    def identified_patterns(self, kind: BellKind) -> Set[FockState]:
        kind = BellKind(kind)
        return {
            p
            for p, v in self.verdicts.items()
            if v.label is VerdictLabel.IDENTIFIED and v.bell is kind
        }

    def success_probability(self, kind: BellKind) -> float:
        kind = BellKind(kind)
        dist = self.distributions[kind]
        return sum(dist.get(p, 0.0) for p in self.identified_patterns(kind))


def derive_classification_table(scheme: Scheme) -> ClassificationTable:
    """Build the pattern-verdict table by exact simulation of all four inputs."""
    scheme = Scheme(scheme)
    interferometer = scheme_interferometer(scheme)
    distributions: Dict[BellKind, Dict[FockState, float]] = {}
    for kind in BellKind:
        dist = output_distribution(build_input(kind, scheme), interferometer)
        distributions[kind] = dist.as_dict()
    support: Set[FockState] = set()
    for dist in distributions.values():
        support |= set(dist)
    verdicts: Dict[FockState, Verdict] = {}
    for pattern in support:
        present = [
            kind
            for kind in BellKind
            if distributions[kind].get(pattern, 0.0) > POSITIVE_EPS
        ]
        if len(present) == 1:
            verdicts[pattern] = Verdict.identified(present[0])
        elif present:
            verdicts[pattern] = Verdict.ambiguous()
    return ClassificationTable(scheme, distributions, verdicts)


def mdf(p_correct: float, p_wrong: float) -> Optional[float]:
    """Discrimination fidelity p_correct / (p_correct + p_wrong).

    Returns None when both probabilities vanish (the ratio is undefined for a
    state the analyzer never claims to identify).
    """
    if p_correct < 0 or p_wrong < 0:
        raise ValueError("probabilities must be nonnegative")
    total = p_correct + p_wrong
    if total == 0:
        return None
    return p_correct / total


def total_variation_distance(
    f: Mapping[FockState, float], q: Mapping[FockState, float]
) -> float:
    """Half the L1 distance between two distributions over patterns."""
    for name, dist in (("first", f), ("second", q)):
        total = sum(dist.values())
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"{name} distribution sums to {total}, expected 1")
    keys = set(f) | set(q)
    return 0.5 * sum(abs(f.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


@dataclass(frozen=True)
class BsmMetrics:
    """Per-kind and aggregate analyzer quality figures."""

    scheme: Scheme
    p_success: Dict[BellKind, float]
    p_misidentify: Dict[BellKind, float]
    ambiguous_fraction: Dict[BellKind, float]
    failure_fraction: Dict[BellKind, float]
    discrimination_fidelity: Dict[BellKind, Optional[float]]
    tv_distance: Dict[BellKind, float]
    p_c_total: float
    p_f_total: float

    @property
    def discrimination_fidelity_total(self) -> Optional[float]:
        return mdf(self.p_c_total, self.p_f_total)

    @property
    def tv_distance_avg(self) -> float:
        return sum(self.tv_distance.values()) / len(self.tv_distance)


def _metrics_from_distributions(
    scheme: Scheme,
    table: ClassificationTable,
    dists: Mapping[BellKind, Mapping[FockState, float]],
    failure_fraction: Mapping[BellKind, float],
) -> BsmMetrics:
    p_success: Dict[BellKind, float] = {}
    p_mis: Dict[BellKind, float] = {}
    ambiguous: Dict[BellKind, float] = {}
    fidelity: Dict[BellKind, Optional[float]] = {}
    tv: Dict[BellKind, float] = {}
    for kind in BellKind:
        dist = dists[kind]
        correct = wrong = ambig = 0.0
        for pattern, prob in dist.items():
            verdict = table.classify(pattern)
            if verdict.label is VerdictLabel.IDENTIFIED:
                if verdict.bell is kind:
                    correct += prob
                else:
                    wrong += prob
            elif verdict.label is VerdictLabel.AMBIGUOUS:
                ambig += prob
        p_success[kind] = correct
        p_mis[kind] = wrong
        ambiguous[kind] = ambig
        fidelity[kind] = mdf(correct, wrong)
        tv[kind] = total_variation_distance(dist, table.distributions[kind])
    return BsmMetrics(
        scheme=scheme,
        p_success=p_success,
        p_misidentify=p_mis,
        ambiguous_fraction=ambiguous,
        failure_fraction=dict(failure_fraction),
        discrimination_fidelity=fidelity,
        tv_distance=tv,
        p_c_total=sum(p_success.values()) / len(p_success),
        p_f_total=sum(p_mis.values()) / len(p_mis),
    )


def ideal_metrics(table: ClassificationTable) -> BsmMetrics:
    """Metrics of the noiseless analyzer itself (TV distances are zero)."""
    zero = {kind: 0.0 for kind in BellKind}
    return _metrics_from_distributions(
        table.scheme, table, table.distributions, zero
    )


def empirical_metrics(
    counts: Mapping[BellKind, Mapping[FockState, int]], table: ClassificationTable
) -> BsmMetrics:
    """Metrics from observed pattern counts, one count table per Bell kind.

    Patterns classified as failures (e.g. loss-corrupted ones outside the
    table) are discarded and reported via ``failure_fraction``; the remaining
    counts are renormalized before computing probabilities and TV distances.
    """
    freqs: Dict[BellKind, Dict[FockState, float]] = {}
    failure_fraction: Dict[BellKind, float] = {}
    for kind in BellKind:
        kind_counts = counts.get(kind, {})
        total = sum(kind_counts.values())
        if total <= 0:
            raise ValueError(f"no counts recorded for {kind}")
        if any(c < 0 for c in kind_counts.values()):
            raise ValueError("counts must be nonnegative")
        kept = {
            tuple(p): c
            for p, c in kind_counts.items()
            if table.classify(p).label is not VerdictLabel.FAILURE
        }
        kept_total = sum(kept.values())
        failure_fraction[kind] = 1.0 - kept_total / total
        if kept_total == 0:
            raise ValueError(f"every recorded pattern for {kind} was a failure")
        freqs[kind] = {p: c / kept_total for p, c in kept.items()}
    return _metrics_from_distributions(table.scheme, table, freqs, failure_fraction)
