"""Decoding graphs for the fusion network.

Each encoded fusion is an edge in two separate syndrome graphs (primal and
dual); resource-state stabilizers are the nodes.  Logical failure along the
periodic z direction is monitored through a fixed correlation surface: the
layer of z edges that wrap from the last slice back to the first.  Any edge
set with empty node boundary crosses that layer an even number of times
exactly when its net z winding is zero, so odd overlap with the surface flags
a wrapping (logical) cycle.

Two geometries are provided:

* ``cubic``: the plain periodic cubic graph, n^3 nodes of degree 6.
* ``six-ring``: an effective model of the six-ring fusion network's syndrome
  graphs: the cubic graph with a quenched, deterministic 12.6% bond dilution.
  The dilution fraction is calibrated so that the graph's erasure-percolation
  point sits where the network's measured loss thresholds imply it must
  (close to 0.285, against 0.2488 for the undiluted cubic graph).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

# Quenched dilution of the effective six-ring geometry, in thousandths, and
# the salt for its deterministic edge-removal hash.  Frozen after calibration;
# changing either changes every scan result.
SIX_RING_DILUTION_MILLI = 126
SIX_RING_SALT = 31337

GEOMETRY_CUBIC = "cubic"
GEOMETRY_SIX_RING = "six-ring"
GEOMETRIES = (GEOMETRY_CUBIC, GEOMETRY_SIX_RING)

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    """Deterministic 64-bit mixer; fixed constants, platform independent."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D4D08CB82A44E5) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


class DecodingGraph:
    """Static syndrome graph: nodes, edges, and the correlation surface."""

    def __init__(
        self,
        num_nodes: int,
        edges: np.ndarray,
        surface: np.ndarray,
    ):
        edges = np.asarray(edges, dtype=np.int32)
        if edges.ndim != 2 or edges.shape[1] != 2:
            raise ValueError("edges must be an (E, 2) array")
        if edges.size and (edges.min() < 0 or edges.max() >= num_nodes):
            raise ValueError("edge endpoints out of range")
        surface = np.asarray(surface, dtype=bool)
        if surface.shape != (edges.shape[0],):
            raise ValueError("surface mask must have one entry per edge")
        self.num_nodes = int(num_nodes)
        self.edges = edges
        self.surface = surface
        self.edges.setflags(write=False)
        self.surface.setflags(write=False)

        # CSR adjacency: for node v, incident edge ids are
        # adj_edge[adj_ptr[v]:adj_ptr[v+1]] and the far endpoints adj_nbr[...]
        counts = np.bincount(edges.ravel(), minlength=num_nodes)
        self.adj_ptr = np.zeros(num_nodes + 1, dtype=np.int64)
        np.cumsum(counts, out=self.adj_ptr[1:])
        self.adj_edge = np.zeros(2 * len(edges), dtype=np.int32)
        self.adj_nbr = np.zeros(2 * len(edges), dtype=np.int32)
        cursor = self.adj_ptr[:-1].copy()
        for edge_id, (u, v) in enumerate(edges):
            self.adj_edge[cursor[u]] = edge_id
            self.adj_nbr[cursor[u]] = v
            cursor[u] += 1
            self.adj_edge[cursor[v]] = edge_id
            self.adj_nbr[cursor[v]] = u
            cursor[v] += 1
        for arr in (self.adj_ptr, self.adj_edge, self.adj_nbr):
            arr.setflags(write=False)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.adj_ptr)

    def boundary_nodes(self, edge_mask: np.ndarray) -> np.ndarray:
        """Node parity (syndrome) of an edge subset: True at odd endpoints."""
        edge_mask = np.asarray(edge_mask, dtype=bool)
        if edge_mask.shape != (self.n_edges,):
            raise ValueError("edge mask must have one entry per edge")
        endpoints = self.edges[edge_mask].ravel()
        counts = np.bincount(endpoints, minlength=self.num_nodes)
        return (counts & 1).astype(bool)

    def surface_parity(self, edge_mask: np.ndarray) -> int:
        """Parity of the overlap with the correlation surface (0 or 1)."""
        edge_mask = np.asarray(edge_mask, dtype=bool)
        return int(np.count_nonzero(edge_mask & self.surface) & 1)


def _cubic_edge_list(
    n: int, dilution_milli: int = 0, salt: int = 0
) -> Tuple[np.ndarray, np.ndarray]:
    """Periodic cubic edge list with optional quenched hash dilution.

    Edge order is deterministic: node-major (x fastest) with the +x, +y, +z
    edges of each node consecutive.  An edge is dropped when the mixed hash of
    its (coordinates, axis, salt) key falls below the dilution fraction.
    """
    if n < 2:
        raise ValueError(f"lattice size must be at least 2, got {n}")
    if not 0 <= dilution_milli < 1000:
        raise ValueError("dilution must be in [0, 1000) thousandths")
    steps = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    edges = []
    surface = []
    for z in range(n):
        for y in range(n):
            for x in range(n):
                u = x + n * (y + n * z)
                for axis, (dx, dy, dz) in enumerate(steps):
                    if dilution_milli:
                        key = (((x * 1000003 + y) * 1000003 + z) * 8 + axis) ^ salt
                        if _splitmix64(key) % 1000 < dilution_milli:
                            continue
                    v = (
                        (x + dx) % n
                        + n * (((y + dy) % n) + n * ((z + dz) % n))
                    )
                    edges.append((u, v))
                    surface.append(axis == 2 and z == n - 1)
    return np.array(edges, dtype=np.int32), np.array(surface, dtype=bool)


def cubic_graph(n: int) -> DecodingGraph:
    """Plain periodic cubic decoding graph: n^3 nodes, 3n^3 edges, degree 6."""
    edges, surface = _cubic_edge_list(n)
    return DecodingGraph(n**3, edges, surface)


def diluted_cubic_graph(
    n: int,
    dilution_milli: int = SIX_RING_DILUTION_MILLI,
    salt: int = SIX_RING_SALT,
) -> DecodingGraph:
    """Cubic decoding graph with deterministic quenched bond dilution."""
    edges, surface = _cubic_edge_list(n, dilution_milli, salt)
    return DecodingGraph(n**3, edges, surface)


@dataclass(frozen=True)
class FusionNetworkLattice:
    """Primal and dual decoding graphs of one fusion network.

    Encoded fusion i is edge i in both graphs: the primal edge is erased when
    the fusion loses its XX parity and the dual edge when it loses ZZ.  The
    two graphs are structurally identical but decode independent noise.
    """

    size: int
    geometry: str
    primal: DecodingGraph = field(repr=False)
    dual: DecodingGraph = field(repr=False)

    @property
    def n_fusions(self) -> int:
        return self.primal.n_edges


def build_lattice(size: int, geometry: str = GEOMETRY_CUBIC) -> FusionNetworkLattice:
    """Fusion-network decoding graphs with n^3 unit cells per graph."""
    if geometry not in GEOMETRIES:
        raise ValueError(f"geometry must be one of {GEOMETRIES}, got {geometry!r}")
    if geometry == GEOMETRY_CUBIC:
        graph = cubic_graph(size)
    else:
        graph = diluted_cubic_graph(size, SIX_RING_DILUTION_MILLI, SIX_RING_SALT)
    # identical structure; noise on the two graphs is sampled independently
    return FusionNetworkLattice(size=size, geometry=geometry, primal=graph, dual=graph)
