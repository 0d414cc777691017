"""Independent oracles used to cross-check the implementation.

Everything here is deliberately written with a different algorithm than the
package code: brute-force permutation sums, symbolic polynomial expansion,
GF(2) linear algebra, and exhaustive search.  Slow but obviously correct on
small instances.
"""

from __future__ import annotations

import itertools
import math
from typing import Dict, Iterable, List, Sequence, Set, Tuple

import numpy as np


def naive_permanent(matrix: np.ndarray) -> complex:
    """Permanent by direct sum over all permutations.  O(n! * n)."""
    a = np.asarray(matrix, dtype=np.complex128)
    n = a.shape[0]
    if n == 0:
        return 1 + 0j
    total = 0j
    for perm in itertools.permutations(range(n)):
        prod = 1 + 0j
        for row, col in enumerate(perm):
            prod *= a[row, col]
        total += prod
    return total


def polynomial_output_distribution(
    terms: Iterable[Tuple[Tuple[int, ...], complex]], unitary: np.ndarray
) -> Dict[Tuple[int, ...], float]:
    """Photon-counting distribution by symbolic creation-operator substitution.

    Each input term ``(S, c)`` is the normalized occupation ket with amplitude
    ``c``.  Substituting every input creation operator with its image under the
    unitary and expanding gives a polynomial in output creation operators;
    the probability of the occupation T is ``|coeff(T)|^2 * prod(T!)``.
    """
    u = np.asarray(unitary, dtype=np.complex128)
    m = u.shape[0]
    poly: Dict[Tuple[int, ...], complex] = {}
    for occupations, amp in terms:
        term_poly: Dict[Tuple[int, ...], complex] = {tuple([0] * m): complex(amp)}
        norm = math.sqrt(math.prod(math.factorial(n) for n in occupations))
        term_poly[tuple([0] * m)] /= norm
        for in_mode, count in enumerate(occupations):
            for _ in range(count):
                new_poly: Dict[Tuple[int, ...], complex] = {}
                for exponents, coeff in term_poly.items():
                    for out_mode in range(m):
                        factor = u[out_mode, in_mode]
                        if factor == 0:
                            continue
                        key = list(exponents)
                        key[out_mode] += 1
                        key_t = tuple(key)
                        new_poly[key_t] = new_poly.get(key_t, 0j) + coeff * factor
                term_poly = new_poly
        for exponents, coeff in term_poly.items():
            poly[exponents] = poly.get(exponents, 0j) + coeff
    dist: Dict[Tuple[int, ...], float] = {}
    for exponents, coeff in poly.items():
        weight = math.prod(math.factorial(n) for n in exponents)
        p = abs(coeff) ** 2 * weight
        if p > 1e-15:
            dist[exponents] = dist.get(exponents, 0.0) + p
    return dist


# ---------------------------------------------------------------------------
# GF(2) stabilizer oracle for the encoded-fusion recovery table.
# ---------------------------------------------------------------------------

def _gf2_span_contains(generators: List[int], target: int) -> bool:
    """Membership of ``target`` in the GF(2) span of bitmask ``generators``."""
    basis: List[int] = []
    for gen in generators:
        for b in basis:
            gen = min(gen, gen ^ b)
        if gen:
            basis.append(gen)
            basis.sort(reverse=True)
    for b in basis:
        target = min(target, target ^ b)
    return target == 0


def stabilizer_recovery_oracle(
    outcomes: Sequence[str], failure_basis: Sequence[str]
) -> Tuple[bool, bool]:
    """Which encoded parities survive, from first-principles linear algebra.

    Four physical fusion sites A..D carry one qubit each.  Bits 0..3 of a mask
    are X on sites A..D and bits 4..7 are Z.  The encoding stabilizers are
    X_A X_B, X_C X_D and Z_A Z_B Z_C Z_D; the encoded parities are
    XX = X_A X_C and ZZ = Z_A Z_B.  A successful fusion site yields both its X
    and Z, a failed site yields only the operator its failure basis keeps, and
    an erased site yields nothing.  A parity is recovered iff it lies in the
    GF(2) span of yielded operators plus stabilizers.
    """
    if len(outcomes) != 4 or len(failure_basis) != 4:
        raise ValueError("need outcomes and failure basis for exactly 4 sites")
    x = lambda i: 1 << i
    z = lambda i: 1 << (4 + i)
    generators = [x(0) | x(1), x(2) | x(3), z(0) | z(1) | z(2) | z(3)]
    for i, outcome in enumerate(outcomes):
        if outcome == "success":
            generators.append(x(i))
            generators.append(z(i))
        elif outcome == "failure":
            # the failure basis names the parity that is LOST at this site
            if failure_basis[i] == "ZZ":
                generators.append(x(i))
            elif failure_basis[i] == "XX":
                generators.append(z(i))
            else:
                raise ValueError(f"bad failure basis {failure_basis[i]!r}")
        elif outcome != "erased":
            raise ValueError(f"bad outcome {outcome!r}")
    xx_target = x(0) | x(2)
    zz_target = z(0) | z(1)
    return (
        _gf2_span_contains(generators, xx_target),
        _gf2_span_contains(generators, zz_target),
    )


# ---------------------------------------------------------------------------
# Exhaustive decoding oracle for small graphs.
# ---------------------------------------------------------------------------

def edge_boundary(edges: Sequence[Tuple[int, int]], num_nodes: int, subset: int) -> int:
    """Node-parity bitmask of the edge subset given as a bitmask."""
    parity = 0
    for idx, (a, b) in enumerate(edges):
        if subset >> idx & 1:
            parity ^= 1 << a
            parity ^= 1 << b
    return parity


def exhaustive_min_weight_corrections(
    edges: Sequence[Tuple[int, int]],
    num_nodes: int,
    syndrome: int,
    erased: int,
) -> Tuple[int, List[int]]:
    """All minimum-weight corrections for the syndrome, by brute force.

    Weight counts only unerased edges.  Returns ``(weight, corrections)`` with
    corrections as edge bitmasks; the list is empty when no subset matches the
    syndrome (impossible on connected graphs with even syndrome weight).
    """
    n_edges = len(edges)
    best_weight = None
    best: List[int] = []
    for subset in range(1 << n_edges):
        if edge_boundary(edges, num_nodes, subset) != syndrome:
            continue
        weight = bin(subset & ~erased).count("1")
        if best_weight is None or weight < best_weight:
            best_weight = weight
            best = [subset]
        elif weight == best_weight:
            best.append(subset)
    return (best_weight if best_weight is not None else -1, best)


def surface_parity_mask(subset: int, surface: int) -> int:
    return bin(subset & surface).count("1") & 1
