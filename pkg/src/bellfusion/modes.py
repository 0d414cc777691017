"""Mode bookkeeping and photonic states for a four-port dual-rail interferometer.

Spatial ports are numbered 1..4 and each carries two polarization modes, H and
V.  The flattened mode index is spatial-major with H before V, so a four-port
device has eight optical modes indexed 0..7.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, Mapping, Tuple

N_PORTS = 4
N_POLARIZATIONS = 2
N_MODES = N_PORTS * N_POLARIZATIONS

HORIZONTAL = "H"
VERTICAL = "V"
POLARIZATIONS = (HORIZONTAL, VERTICAL)

# Occupation-number tuple over the flattened modes.
FockState = Tuple[int, ...]

NORMALIZATION_ATOL = 1e-10


@dataclass(frozen=True)
class ModeLabel:
    """One optical mode: a spatial port in 1..4 plus a polarization H or V."""

    port: int
    polarization: str

    def __post_init__(self) -> None:
        if not isinstance(self.port, int) or not 1 <= self.port <= N_PORTS:
            raise ValueError(f"port must be an int in 1..{N_PORTS}, got {self.port!r}")
        if self.polarization not in POLARIZATIONS:
            raise ValueError(
                f"polarization must be one of {POLARIZATIONS}, got {self.polarization!r}"
            )

    @property
    def index(self) -> int:
        """Flattened mode index (spatial-major, H before V)."""
        return 2 * (self.port - 1) + (0 if self.polarization == HORIZONTAL else 1)


def mode_index(port: int, polarization: str) -> int:
    """Flattened index of the mode at ``port`` with the given polarization."""
    return ModeLabel(port, polarization).index


def mode_label(index: int) -> ModeLabel:
    """Inverse of :func:`mode_index`."""
    if not isinstance(index, int) or not 0 <= index < N_MODES:
        raise ValueError(f"mode index must be in 0..{N_MODES - 1}, got {index!r}")
    return ModeLabel(index // 2 + 1, POLARIZATIONS[index % 2])


def validate_fock_state(state: FockState, n_modes: int = N_MODES) -> FockState:
    """Check that ``state`` is a tuple of ``n_modes`` nonnegative ints."""
    state = tuple(state)
    if len(state) != n_modes:
        raise ValueError(f"expected {n_modes} modes, got {len(state)}")
    for occ in state:
        if not isinstance(occ, int) or occ < 0:
            raise ValueError(f"occupations must be nonnegative ints, got {occ!r}")
    return state


def vacuum(n_modes: int = N_MODES) -> FockState:
    return (0,) * n_modes


def fock_from_modes(*indices: int, n_modes: int = N_MODES) -> FockState:
    """Fock state with one photon added per listed mode index (repeats stack)."""
    occ = [0] * n_modes
    for idx in indices:
        if not 0 <= idx < n_modes:
            raise ValueError(f"mode index {idx} out of range for {n_modes} modes")
        occ[idx] += 1
    return tuple(occ)


def photon_number(state: FockState) -> int:
    return sum(state)


class PhotonicState:
    """Pure state as complex amplitudes over Fock states.

    The amplitudes must describe a normalized state; the squared norm has to
    equal 1 within ``NORMALIZATION_ATOL``.  Terms with amplitude exactly zero
    are dropped.
    """

    def __init__(self, amplitudes: Mapping[FockState, complex], n_modes: int = N_MODES):
        cleaned: Dict[FockState, complex] = {}
        for raw_state, amp in amplitudes.items():
            state = validate_fock_state(raw_state, n_modes)
            amp = complex(amp)
            if amp != 0:
                cleaned[state] = cleaned.get(state, 0) + amp
        if not cleaned:
            raise ValueError("state must have at least one nonzero amplitude")
        norm_sq = sum(abs(a) ** 2 for a in cleaned.values())
        if abs(norm_sq - 1.0) > NORMALIZATION_ATOL:
            raise ValueError(f"state is not normalized: |amplitude|^2 sums to {norm_sq}")
        self._amplitudes = cleaned
        self._n_modes = n_modes

    @property
    def n_modes(self) -> int:
        return self._n_modes

    @property
    def amplitudes(self) -> Dict[FockState, complex]:
        return dict(self._amplitudes)

    def amplitude(self, state: FockState) -> complex:
        return self._amplitudes.get(tuple(state), 0j)

    def terms(self) -> Iterator[Tuple[FockState, complex]]:
        return iter(self._amplitudes.items())

    def __len__(self) -> int:
        return len(self._amplitudes)

    def __repr__(self) -> str:
        parts = ", ".join(f"{s}: {a:.4g}" for s, a in sorted(self._amplitudes.items()))
        return f"PhotonicState({{{parts}}})"


def tensor(a: PhotonicState, b: PhotonicState) -> PhotonicState:
    """Combine two states living on the same mode register.

    Occupations add term by term, so the factors must not overlap: every term
    of ``a`` must be vacuum on the modes ``b`` populates and vice versa.
    """
    if a.n_modes != b.n_modes:
        raise ValueError("tensor factors must use the same number of modes")
    occupied_a = set()
    for state, _ in a.terms():
        occupied_a.update(i for i, occ in enumerate(state) if occ)
    occupied_b = set()
    for state, _ in b.terms():
        occupied_b.update(i for i, occ in enumerate(state) if occ)
    if occupied_a & occupied_b:
        raise ValueError(f"tensor factors overlap on modes {sorted(occupied_a & occupied_b)}")
    combined: Dict[FockState, complex] = {}
    for state_a, amp_a in a.terms():
        for state_b, amp_b in b.terms():
            key = tuple(x + y for x, y in zip(state_a, state_b))
            combined[key] = combined.get(key, 0) + amp_a * amp_b
    return PhotonicState(combined, a.n_modes)
