"""Exact Fock-space evolution through passive linear-optical interferometers.

A unitary ``U`` acts on creation operators as ``a_in[i] -> sum_j U[j, i] a_out[j]``
(rows index output modes, columns index input modes).  The transition amplitude
between occupation states S and T is the permanent of the submatrix of U built
by repeating column i S[i] times and row j T[j] times, divided by
``sqrt(prod(S!) * prod(T!))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Dict, Sequence

import numpy as np

from .modes import FockState, PhotonicState, photon_number

UNITARITY_ATOL = 1e-12
PROBABILITY_SUM_ATOL = 1e-10
PRUNE_EPS = 1e-14

# Ryser's formula walks all 2^n column subsets; beyond this size the exact
# permanent is not practical and callers almost certainly made a mistake.
MAX_PERMANENT_DIM = 24


def permanent(matrix: np.ndarray) -> complex:
    """Permanent of a square complex matrix (Ryser's formula, Gray-code order).

    Runs in O(2^n * n).  The empty 0x0 matrix has permanent 1.
    """
    a = np.asarray(matrix, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        return 1 + 0j
    if n > MAX_PERMANENT_DIM:
        raise ValueError(f"refusing exact permanent of {n}x{n} matrix")
    row_sum = np.zeros(n, dtype=np.complex128)
    gray = 0
    total = 0j
    for k in range(1, 1 << n):
        new_gray = k ^ (k >> 1)
        changed_bit = new_gray ^ gray
        col = changed_bit.bit_length() - 1
        if new_gray & changed_bit:
            row_sum += a[:, col]
        else:
            row_sum -= a[:, col]
        gray = new_gray
        term = np.prod(row_sum)
        # Subset size flips parity each Gray step, so (-1)^|S| == (-1)^k.
        total += term if k % 2 == 0 else -term
    return complex(total * ((-1) ** n))


def is_unitary(matrix: np.ndarray, atol: float = UNITARITY_ATOL) -> bool:
    a = np.asarray(matrix, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return bool(np.allclose(a @ a.conj().T, np.eye(a.shape[0]), atol=atol, rtol=0))


@dataclass(frozen=True)
class Interferometer:
    """Wrapper for a mode-space unitary, validated on construction."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=np.complex128)
        if not is_unitary(mat):
            raise ValueError("interferometer matrix is not unitary within tolerance")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0]


def dft4() -> np.ndarray:
    """The 4x4 discrete-Fourier-transform multiport used by the boosted scheme."""
    i = 1j
    mat = np.array(
        [
            [1, 1, 1, 1],
            [1, -1, -i, i],
            [1, -1, i, -i],
            [1, 1, -1, -1],
        ],
        dtype=np.complex128,
    )
    return mat / 2.0


def balanced_beam_splitter() -> np.ndarray:
    """Symmetric 50:50 beam splitter on two modes."""
    return np.array([[1, 1j], [1j, 1]], dtype=np.complex128) / math.sqrt(2.0)


def extend_to_polarization(spatial_unitary: np.ndarray) -> np.ndarray:
    """Lift an n-port spatial unitary to 2n polarization-resolved modes.

    The device is polarization-preserving: H and V components each see the
    same spatial unitary and never mix.  Mode ordering is spatial-major with
    H before V, matching :mod:`bellfusion.modes`.
    """
    u = np.asarray(spatial_unitary, dtype=np.complex128)
    if not is_unitary(u):
        raise ValueError("spatial unitary fails the unitarity check")
    n = u.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    out[0::2, 0::2] = u
    out[1::2, 1::2] = u
    return out


class OutputDistribution:
    """Probabilities over output Fock states; must sum to 1 within tolerance."""

    def __init__(self, probabilities: Dict[FockState, float]):
        total = sum(probabilities.values())
        if abs(total - 1.0) > PROBABILITY_SUM_ATOL:
            raise ValueError(f"probabilities sum to {total}, expected 1")
        if any(p < 0 for p in probabilities.values()):
            raise ValueError("probabilities must be nonnegative")
        self._probs = {s: p for s, p in probabilities.items() if p > PRUNE_EPS}

    def probability(self, state: FockState) -> float:
        return self._probs.get(tuple(state), 0.0)

    def items(self):
        return self._probs.items()

    def support(self):
        return set(self._probs)

    def as_dict(self) -> Dict[FockState, float]:
        return dict(self._probs)

    def __len__(self) -> int:
        return len(self._probs)


def transition_amplitude(
    unitary: np.ndarray, input_state: FockState, output_state: FockState
) -> complex:
    """Amplitude <T|U|S> for occupation states S -> T under ``unitary``."""
    if photon_number(input_state) != photon_number(output_state):
        return 0j
    rows = [j for j, occ in enumerate(output_state) for _ in range(occ)]
    cols = [i for i, occ in enumerate(input_state) for _ in range(occ)]
    sub = np.asarray(unitary)[np.ix_(rows, cols)]
    norm = math.sqrt(
        math.prod(math.factorial(occ) for occ in input_state)
        * math.prod(math.factorial(occ) for occ in output_state)
    )
    return permanent(sub) / norm


def output_distribution(
    state: PhotonicState, interferometer: Interferometer
) -> OutputDistribution:
    """Exact photon-counting distribution after the interferometer.

    Amplitudes from different input terms are summed coherently per output
    state before squaring.
    """
    m = interferometer.n_modes
    if state.n_modes != m:
        raise ValueError(
            f"state has {state.n_modes} modes but interferometer has {m}"
        )
    u = interferometer.matrix
    terms_by_number: Dict[int, list] = {}
    for fock, amp in state.terms():
        terms_by_number.setdefault(photon_number(fock), []).append((fock, amp))

    probs: Dict[FockState, float] = {}
    for n_photons, terms in terms_by_number.items():
        for combo in combinations_with_replacement(range(m), n_photons):
            occ = [0] * m
            for mode in combo:
                occ[mode] += 1
            out_state = tuple(occ)
            amp = 0j
            for in_state, in_amp in terms:
                amp += in_amp * transition_amplitude(u, in_state, out_state)
            p = abs(amp) ** 2
            if p > PRUNE_EPS:
                probs[out_state] = probs.get(out_state, 0.0) + p
    return OutputDistribution(probs)


def hom_coincidence_probability(distinguishable: bool) -> float:
    """Two-photon coincidence probability after a balanced beam splitter.

    One photon enters each port.  Indistinguishable photons bunch and the
    coincidence probability vanishes; fully distinguishable photons behave
    classically and coincide half the time.
    """
    u = balanced_beam_splitter()
    if distinguishable:
        # No interference: route each photon independently.
        return float(
            abs(u[0, 0]) ** 2 * abs(u[1, 1]) ** 2 + abs(u[1, 0]) ** 2 * abs(u[0, 1]) ** 2
        )
    amp = transition_amplitude(u, (1, 1), (1, 1))
    return float(abs(amp) ** 2)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random unitary via QR of a complex Gaussian matrix."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases
