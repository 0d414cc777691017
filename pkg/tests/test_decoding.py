"""Decoder correctness against exhaustive minimum-weight oracles."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellfusion.fbqc.decoding import (
    boundary,
    correction_weight,
    decode,
    decode_batch,
    logical_failure,
    matching_correction,
    peel_correction,
)
from bellfusion.fbqc.lattice import DecodingGraph, cubic_graph, diluted_cubic_graph
from oracles import (
    edge_boundary,
    exhaustive_min_weight_corrections,
    surface_parity_mask,
)


def ring_graph(n=4):
    edges = [(i, (i + 1) % n) for i in range(n)]
    surface = [False] * (n - 1) + [True]
    return DecodingGraph(n, np.array(edges), np.array(surface))


def torus_2x2():
    """2x2 periodic grid: 4 nodes, 8 edges (parallel pairs), 12-edge budget."""
    edges = []
    surface = []
    n = 2
    for y in range(n):
        for x in range(n):
            u = x + n * y
            edges.append((u, (x + 1) % n + n * y))
            surface.append(False)
            edges.append((u, x + n * ((y + 1) % n)))
            surface.append(y == n - 1)
    return DecodingGraph(4, np.array(edges), np.array(surface))


def mask_to_int(mask):
    out = 0
    for i, bit in enumerate(mask):
        if bit:
            out |= 1 << i
    return out


def int_to_mask(value, n):
    return np.array([(value >> i) & 1 for i in range(n)], dtype=bool)


def syndrome_to_int(syndrome):
    out = 0
    for i, bit in enumerate(syndrome):
        if bit:
            out |= 1 << i
    return out


def assert_failure_counts_match_oracle(graph, decoder):
    """Exhaustive check of a minimum-weight decoder on graphs under 12 edges.

    For each erasure pattern and every flip subset inside it, the decoder
    must produce a boundary-exact correction of oracle-minimal weight; its
    logical-failure indicator must equal the oracle's whenever every
    minimum-weight correction agrees on the surface parity; and per erasure
    the total number of logical failures must equal the count computed with
    the oracle's own minimum-weight corrections (it is the same for every
    minimum-weight decoder).
    """
    edges = [tuple(int(x) for x in e) for e in graph.edges]
    n_edges = len(edges)
    surface_int = mask_to_int(graph.surface)
    oracle_cache = {}
    for erasure_int in range(1 << n_edges):
        erased = int_to_mask(erasure_int, n_edges)
        decoder_failures = 0
        oracle_failures = 0
        flip_edges = [i for i in range(n_edges) if erased[i]]
        for k in range(1 << len(flip_edges)):
            flips_int = 0
            for pos, edge_id in enumerate(flip_edges):
                if (k >> pos) & 1:
                    flips_int |= 1 << edge_id
            flips = int_to_mask(flips_int, n_edges)
            syndrome = graph.boundary_nodes(flips)
            correction = decoder(graph, syndrome, erased)
            assert correction is not None
            assert np.array_equal(graph.boundary_nodes(correction), syndrome)
            failed = logical_failure(graph, flips, correction)
            decoder_failures += failed

            syndrome_int = syndrome_to_int(syndrome)
            key = (erasure_int, syndrome_int)
            if key not in oracle_cache:
                oracle_cache[key] = exhaustive_min_weight_corrections(
                    edges, graph.num_nodes, syndrome_int, erasure_int
                )
            weight, witnesses = oracle_cache[key]
            assert correction_weight(correction, erased) == weight
            parities = {
                surface_parity_mask(flips_int ^ witness, surface_int)
                for witness in witnesses
            }
            if len(parities) == 1:
                assert failed == parities.pop()
            oracle_failures += surface_parity_mask(
                flips_int ^ witnesses[0], surface_int
            )
        assert decoder_failures == oracle_failures


class TestPeelOnToyGraphs:
    @pytest.mark.parametrize("graph_factory", [ring_graph, torus_2x2])
    def test_failure_counts_match_oracle_for_every_erasure(self, graph_factory):
        assert_failure_counts_match_oracle(graph_factory(), peel_correction)

    def test_infeasible_syndrome_returns_none(self):
        graph = ring_graph(4)
        syndrome = np.array([True, False, True, False])
        erased = np.zeros(4, dtype=bool)
        assert peel_correction(graph, syndrome, erased) is None

    def test_syndrome_outside_erasure_returns_none(self):
        graph = ring_graph(6)
        erased = np.array([True, True, False, False, False, False])
        syndrome = np.zeros(6, dtype=bool)
        syndrome[4] = syndrome[5] = True
        assert peel_correction(graph, syndrome, erased) is None


class TestMatchingOnToyGraphs:
    @pytest.mark.parametrize("graph_factory", [ring_graph, torus_2x2])
    def test_achieves_exhaustive_minimum_weight(self, graph_factory, rng):
        graph = graph_factory()
        edges = [tuple(int(x) for x in e) for e in graph.edges]
        n_edges = len(edges)
        for _ in range(150):
            flips = rng.random(n_edges) < 0.4
            erased = rng.random(n_edges) < 0.3
            syndrome = graph.boundary_nodes(flips)
            correction = matching_correction(graph, syndrome, erased)
            assert np.array_equal(graph.boundary_nodes(correction), syndrome)
            oracle_weight, _ = exhaustive_min_weight_corrections(
                edges,
                graph.num_nodes,
                syndrome_to_int(syndrome),
                mask_to_int(erased),
            )
            assert correction_weight(correction, erased) == oracle_weight

    def test_empty_syndrome_gives_empty_correction(self):
        graph = torus_2x2()
        correction = matching_correction(graph, np.zeros(4, dtype=bool))
        assert not correction.any()

    def test_odd_syndrome_rejected(self):
        graph = ring_graph(4)
        syndrome = np.array([True, False, False, False])
        with pytest.raises(ValueError):
            matching_correction(graph, syndrome)

    def test_matching_on_cubic_graph_matches_flip_weight_bound(self, rng):
        graph = cubic_graph(3)
        flips = rng.random(graph.n_edges) < 0.05
        syndrome = graph.boundary_nodes(flips)
        correction = matching_correction(graph, syndrome)
        assert np.array_equal(graph.boundary_nodes(correction), syndrome)
        # minimum weight can never exceed the weight of the flips themselves
        assert correction.sum() <= flips.sum()


class TestDecodeDispatch:
    def test_uses_peeling_inside_erasure(self, rng):
        graph = diluted_cubic_graph(3)
        erased = rng.random(graph.n_edges) < 0.3
        flips = erased & (rng.random(graph.n_edges) < 0.5)
        syndrome = graph.boundary_nodes(flips)
        correction = decode(graph, syndrome, erased)
        assert np.array_equal(graph.boundary_nodes(correction), syndrome)
        assert correction_weight(correction, erased) == 0

    def test_falls_back_to_matching(self, rng):
        graph = cubic_graph(3)
        flips = rng.random(graph.n_edges) < 0.04
        erased = np.zeros(graph.n_edges, dtype=bool)
        syndrome = graph.boundary_nodes(flips)
        correction = decode(graph, syndrome, erased)
        assert np.array_equal(graph.boundary_nodes(correction), syndrome)

    def test_boundary_helper_matches_graph_method(self, rng):
        graph = cubic_graph(3)
        mask = rng.random(graph.n_edges) < 0.2
        assert np.array_equal(boundary(graph, mask), graph.boundary_nodes(mask))


class TestLogicalFailure:
    def test_full_ring_is_a_wrapping_cycle(self):
        graph = ring_graph(5)
        flips = np.ones(5, dtype=bool)
        correction = np.zeros(5, dtype=bool)
        assert logical_failure(graph, flips, correction) is True

    def test_trivial_plaquette_does_not_wrap(self):
        graph = cubic_graph(3)
        n = 3
        mask = np.zeros(graph.n_edges, dtype=bool)
        ring = {
            frozenset((0, 1)),
            frozenset((1, 1 + n)),
            frozenset((n, 1 + n)),
            frozenset((0, n)),
        }
        for edge_id, (u, v) in enumerate(graph.edges):
            if frozenset((int(u), int(v))) in ring:
                mask[edge_id] = True
        assert logical_failure(graph, mask, np.zeros(graph.n_edges, dtype=bool)) is False

    def test_z_line_wraps(self):
        n = 3
        graph = cubic_graph(n)
        mask = np.zeros(graph.n_edges, dtype=bool)
        for edge_id, (u, v) in enumerate(graph.edges):
            if u % n == 0 and (u // n) % n == 0 and v % n == 0 and (v // n) % n == 0:
                mask[edge_id] = True
        assert logical_failure(graph, mask, np.zeros(graph.n_edges, dtype=bool)) is True


class TestDecodeBatch:
    def test_matches_single_shot_decoding(self, rng):
        graph = diluted_cubic_graph(3)
        shots = 200
        erased = rng.random((shots, graph.n_edges)) < 0.25
        flips = erased & (rng.random((shots, graph.n_edges)) < 0.5)
        fail, ok = decode_batch(graph, erased, flips)
        assert ok.all()
        for shot in range(shots):
            syndrome = graph.boundary_nodes(flips[shot])
            correction = peel_correction(graph, syndrome, erased[shot])
            assert correction is not None
            expected = logical_failure(graph, flips[shot], correction)
            assert bool(fail[shot]) == expected

    def test_flags_syndromes_outside_erasure(self):
        graph = ring_graph(4)
        erased = np.zeros((1, 4), dtype=bool)
        flips = np.zeros((1, 4), dtype=bool)
        flips[0, 0] = True  # flip on an unerased edge: peeling must refuse
        fail, ok = decode_batch(graph, erased, flips)
        assert not ok[0]

    def test_rejects_mismatched_shapes(self):
        graph = ring_graph(4)
        with pytest.raises(ValueError):
            decode_batch(graph, np.zeros((2, 3), dtype=bool), np.zeros((2, 3), dtype=bool))

    def test_zero_noise_never_fails(self):
        graph = diluted_cubic_graph(3)
        shots = 50
        erased = np.zeros((shots, graph.n_edges), dtype=bool)
        flips = np.zeros((shots, graph.n_edges), dtype=bool)
        fail, ok = decode_batch(graph, erased, flips)
        assert ok.all()
        assert not fail.any()


class TestHypothesisRandomGraphs:
    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_peel_and_matching_agree_with_oracle(self, data):
        n_nodes = data.draw(st.integers(2, 5), label="nodes")
        # random connected graph: spanning tree plus up to 4 extra edges
        edges = []
        for node in range(1, n_nodes):
            parent = data.draw(st.integers(0, node - 1), label=f"parent{node}")
            edges.append((parent, node))
        n_extra = data.draw(st.integers(0, 4), label="extra")
        for i in range(n_extra):
            a = data.draw(st.integers(0, n_nodes - 1), label=f"a{i}")
            b = data.draw(st.integers(0, n_nodes - 1), label=f"b{i}")
            if a != b:
                edges.append((min(a, b), max(a, b)))
        n_edges = len(edges)
        surface_bits = data.draw(
            st.integers(0, (1 << n_edges) - 1), label="surface"
        )
        graph = DecodingGraph(
            n_nodes, np.array(edges), int_to_mask(surface_bits, n_edges)
        )
        erased_int = data.draw(st.integers(0, (1 << n_edges) - 1), label="erased")
        erased = int_to_mask(erased_int, n_edges)
        flip_int = data.draw(st.integers(0, (1 << n_edges) - 1), label="flips")
        flips = int_to_mask(flip_int, n_edges)
        syndrome = graph.boundary_nodes(flips)

        correction = decode(graph, syndrome, erased)
        assert np.array_equal(graph.boundary_nodes(correction), syndrome)
        oracle_weight, _ = exhaustive_min_weight_corrections(
            edges, n_nodes, syndrome_to_int(syndrome), erased_int
        )
        assert correction_weight(correction, erased) == oracle_weight
