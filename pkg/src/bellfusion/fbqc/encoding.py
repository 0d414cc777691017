"""Encoded fusions on (2,2)-Shor-encoded qubits.

An encoded fusion tries to measure the two joint parities XX and ZZ between
two encoded qubits.  It consists of four physical fusions (sites A..D); each
site either succeeds (yields both of its single-qubit X and Z parities),
fails (yields only the parity its failure basis keeps), or is erased by
photon loss (yields nothing).  The encoding stabilizers let the lost parities
be reconstructed from the surviving sites in many outcome combinations.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Sequence, Tuple

from ..bsm import Scheme
from ..detection import N_ANCILLA_PHOTONS_BOOSTED, N_SIGNAL_PHOTONS, erasure_probability

N_FUSION_SITES = 4

# Parity LOST when the physical fusion at each site fails.  Alternating the
# failure basis across the four sites is what makes single-site failures
# recoverable: a site that loses ZZ sits next to one that keeps it.
FAILURE_BASIS: Tuple[str, ...] = ("ZZ", "XX", "ZZ", "XX")


class FusionOutcome(str, Enum):
    SUCCESS = "success"
    FAILURE = "failure"
    ERASED = "erased"


class EncodedParities(str, Enum):
    """Which encoded parities an encoded fusion delivered."""

    BOTH = "both"
    XX_ONLY = "xx_only"
    ZZ_ONLY = "zz_only"
    NEITHER = "neither"


def recovered_parities(outcomes: Sequence[FusionOutcome]) -> Tuple[bool, bool]:
    """(xx_recovered, zz_recovered) for one four-site outcome combination.

    Derived from the stabilizer structure of the (2,2) encoding with the
    alternating failure basis above:

    * XX survives a site-A erasure iff site B succeeded (and symmetrically
      C/D), because B's success supplies the X parity the stabilizer needs.
    * ZZ needs a full success on A with B not erased, or the same on the C/D
      pair; a failed A or C has lost its Z parity for good.
    """
    if len(outcomes) != N_FUSION_SITES:
        raise ValueError(f"need {N_FUSION_SITES} outcomes, got {len(outcomes)}")
    a, b, c, d = (FusionOutcome(o) for o in outcomes)
    erased = FusionOutcome.ERASED
    success = FusionOutcome.SUCCESS
    xx = (a is not erased or b is success) and (c is not erased or d is success)
    zz = (a is success and b is not erased) or (c is success and d is not erased)
    return xx, zz


def parities_to_category(xx: bool, zz: bool) -> EncodedParities:
    if xx and zz:
        return EncodedParities.BOTH
    if xx:
        return EncodedParities.XX_ONLY
    if zz:
        return EncodedParities.ZZ_ONLY
    return EncodedParities.NEITHER


@dataclass(frozen=True)
class PhysicalFusionModel:
    """Outcome statistics of one physical fusion attempt.

    ``p_success`` is conditional on the fusion not being erased; ``p_erasure``
    is the probability that photon loss wipes the attempt out entirely.
    """

    p_success: float
    p_erasure: float

    def __post_init__(self) -> None:
        for name, value in (("p_success", self.p_success), ("p_erasure", self.p_erasure)):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")

    @property
    def p_failure(self) -> float:
        return 1.0 - self.p_success


def physical_fusion_model(
    p_c_total: float, p_loss: float, scheme: Scheme = Scheme.BOOSTED
) -> PhysicalFusionModel:
    """Physical fusion statistics for a given analyzer and loss rate.

    The erasure probability counts every photon the fusion consumes: the two
    signal photons, plus the two ancilla photons when the analyzer is boosted.
    """
    n_ancilla = N_ANCILLA_PHOTONS_BOOSTED if Scheme(scheme) is Scheme.BOOSTED else 0
    return PhysicalFusionModel(
        p_success=p_c_total,
        p_erasure=erasure_probability(p_loss, N_SIGNAL_PHOTONS, n_ancilla),
    )


@dataclass(frozen=True)
class EncodedFusionModel:
    """Category distribution of one encoded fusion."""

    p_both: float
    p_xx_only: float
    p_zz_only: float
    p_neither: float

    def __post_init__(self) -> None:
        probs = (self.p_both, self.p_xx_only, self.p_zz_only, self.p_neither)
        if any(p < -1e-12 for p in probs):
            raise ValueError("category probabilities must be nonnegative")
        total = sum(probs)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"category probabilities sum to {total}, expected 1")

    @property
    def p_xx_lost(self) -> float:
        """Erasure probability on the primal decoding graph."""
        return self.p_zz_only + self.p_neither

    @property
    def p_zz_lost(self) -> float:
        """Erasure probability on the dual decoding graph."""
        return self.p_xx_only + self.p_neither

    def as_dict(self) -> Dict[str, float]:
        return {
            "both": self.p_both,
            "xx_only": self.p_xx_only,
            "zz_only": self.p_zz_only,
            "neither": self.p_neither,
        }


# How site-level erasures compose into the encoded outcome:
#   "site"  - every site draws success/failure/erasure independently and the
#             stabilizer recovery table is applied verbatim.
#   "block" - the four sites share their photon budget; losing any photon
#             erases the whole encoded fusion, and recovery only differentiates
#             outcomes when all four sites survive.
COMPOSITION_SITE = "site"
COMPOSITION_BLOCK = "block"
COMPOSITIONS = (COMPOSITION_SITE, COMPOSITION_BLOCK)


def encoded_fusion_model(
    physical: PhysicalFusionModel, composition: str = COMPOSITION_BLOCK
) -> EncodedFusionModel:
    """Category probabilities of an encoded fusion built from four sites."""
    if composition not in COMPOSITIONS:
        raise ValueError(f"composition must be one of {COMPOSITIONS}")
    e = physical.p_erasure
    s = physical.p_success
    f = physical.p_failure
    if composition == COMPOSITION_BLOCK:
        survive = (1.0 - e) ** N_FUSION_SITES
        # with all sites alive, XX is always recoverable and ZZ is lost
        # exactly when both ZZ-carrying sites (A and C) fail
        p_xx_only = survive * f * f
        return EncodedFusionModel(
            p_both=survive - p_xx_only,
            p_xx_only=p_xx_only,
            p_zz_only=0.0,
            p_neither=1.0 - survive,
        )

    site_probs = {
        FusionOutcome.SUCCESS: (1.0 - e) * s,
        FusionOutcome.FAILURE: (1.0 - e) * f,
        FusionOutcome.ERASED: e,
    }
    totals = {category: 0.0 for category in EncodedParities}
    outcomes = list(FusionOutcome)
    for a in outcomes:
        for b in outcomes:
            for c in outcomes:
                for d in outcomes:
                    weight = (
                        site_probs[a] * site_probs[b] * site_probs[c] * site_probs[d]
                    )
                    if weight == 0.0:
                        continue
                    xx, zz = recovered_parities((a, b, c, d))
                    totals[parities_to_category(xx, zz)] += weight
    return EncodedFusionModel(
        p_both=totals[EncodedParities.BOTH],
        p_xx_only=totals[EncodedParities.XX_ONLY],
        p_zz_only=totals[EncodedParities.ZZ_ONLY],
        p_neither=totals[EncodedParities.NEITHER],
    )
