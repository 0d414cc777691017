"""Erasure-aware decoders for the fusion-network syndrome graphs.

The Monte Carlo engine only ever sees pure erasure noise: flipped edges are a
subset of the erased ones, so a zero-weight correction supported on the
erasure always exists and a linear-time peeling decoder finds a minimum-weight
one.  A matching decoder (0/1 edge weights, blossom algorithm) covers the
general case where the syndrome is not confined to the erasure.

All corrections are returned as boolean edge masks and are verified to
reproduce the requested syndrome exactly.
"""

from __future__ import annotations

from collections import deque
from typing import Optional, Tuple

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap

from .lattice import DecodingGraph


@njit(cache=True)
def _find(parent: np.ndarray, a: int) -> int:
    root = a
    while parent[root] != root:
        root = parent[root]
    while parent[a] != root:
        nxt = parent[a]
        parent[a] = root
        a = nxt
    return root


@njit(cache=True)
def _peel_one(
    num_nodes: int,
    edge_u: np.ndarray,
    edge_v: np.ndarray,
    erased: np.ndarray,
    syndrome: np.ndarray,
) -> Tuple[np.ndarray, bool]:
    """Zero-weight correction inside the erasure, or feasible=False.

    Builds a spanning forest of the erased subgraph, checks that every
    component holds an even number of syndrome nodes, then peels leaves,
    pushing syndrome toward the interior.
    """
    n_edges = edge_u.shape[0]
    correction = np.zeros(n_edges, np.bool_)
    parent = np.empty(num_nodes, np.int32)
    for i in range(num_nodes):
        parent[i] = i
    tree = np.empty(max(num_nodes - 1, 1), np.int32)
    n_tree = 0
    for e in range(n_edges):
        if erased[e]:
            root_u = _find(parent, edge_u[e])
            root_v = _find(parent, edge_v[e])
            if root_u != root_v:
                parent[root_v] = root_u
                tree[n_tree] = e
                n_tree += 1

    parity = np.zeros(num_nodes, np.uint8)
    for i in range(num_nodes):
        if syndrome[i]:
            parity[_find(parent, i)] ^= 1
    for i in range(num_nodes):
        if parity[i]:
            return correction, False

    deg = np.zeros(num_nodes, np.int32)
    for j in range(n_tree):
        e = tree[j]
        deg[edge_u[e]] += 1
        deg[edge_v[e]] += 1
    ptr = np.zeros(num_nodes + 1, np.int64)
    for i in range(num_nodes):
        ptr[i + 1] = ptr[i] + deg[i]
    fill = ptr[:-1].copy()
    adj_edge = np.empty(2 * n_tree, np.int32)
    adj_nbr = np.empty(2 * n_tree, np.int32)
    for j in range(n_tree):
        e = tree[j]
        u = edge_u[e]
        v = edge_v[e]
        adj_edge[fill[u]] = e
        adj_nbr[fill[u]] = v
        fill[u] += 1
        adj_edge[fill[v]] = e
        adj_nbr[fill[v]] = u
        fill[v] += 1

    live_deg = deg.copy()
    removed = np.zeros(n_edges, np.bool_)
    residual = syndrome.copy()
    stack = np.empty(num_nodes, np.int32)
    top = 0
    for i in range(num_nodes):
        if live_deg[i] == 1:
            stack[top] = i
            top += 1
    cursor = ptr[:-1].copy()
    while top > 0:
        top -= 1
        leaf = stack[top]
        if live_deg[leaf] != 1:
            continue
        pos = cursor[leaf]
        e = -1
        nbr = -1
        while pos < ptr[leaf + 1]:
            cand = adj_edge[pos]
            if not removed[cand]:
                e = cand
                nbr = adj_nbr[pos]
                break
            pos += 1
        cursor[leaf] = pos
        if e < 0:
            continue
        removed[e] = True
        live_deg[leaf] -= 1
        live_deg[nbr] -= 1
        if residual[leaf]:
            correction[e] = True
            residual[leaf] = False
            residual[nbr] = not residual[nbr]
        if live_deg[nbr] == 1:
            stack[top] = nbr
            top += 1
    for i in range(num_nodes):
        if residual[i]:
            return correction, False
    return correction, True


@njit(cache=True)
def _decode_batch(
    num_nodes: int,
    edge_u: np.ndarray,
    edge_v: np.ndarray,
    surface: np.ndarray,
    erased: np.ndarray,
    flips: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray]:
    """Peel every shot and report (logical_failure, decode_ok) per shot."""
    n_shots = erased.shape[0]
    n_edges = edge_u.shape[0]
    fail = np.zeros(n_shots, np.bool_)
    ok = np.ones(n_shots, np.bool_)
    for b in range(n_shots):
        syndrome = np.zeros(num_nodes, np.bool_)
        for e in range(n_edges):
            if flips[b, e]:
                syndrome[edge_u[e]] = not syndrome[edge_u[e]]
                syndrome[edge_v[e]] = not syndrome[edge_v[e]]
        correction, feasible = _peel_one(
            num_nodes, edge_u, edge_v, erased[b], syndrome
        )
        if not feasible:
            ok[b] = False
            continue
        check = np.zeros(num_nodes, np.bool_)
        parity = False
        for e in range(n_edges):
            if correction[e]:
                check[edge_u[e]] = not check[edge_u[e]]
                check[edge_v[e]] = not check[edge_v[e]]
            if surface[e] and (correction[e] != flips[b, e]):
                parity = not parity
        for i in range(num_nodes):
            if check[i] != syndrome[i]:
                ok[b] = False
                break
        fail[b] = parity
    return fail, ok


def _as_edge_mask(graph: DecodingGraph, mask: np.ndarray, name: str) -> np.ndarray:
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (graph.n_edges,):
        raise ValueError(f"{name} must be a boolean mask over {graph.n_edges} edges")
    return mask


def _as_syndrome(graph: DecodingGraph, syndrome: np.ndarray) -> np.ndarray:
    syndrome = np.asarray(syndrome, dtype=bool)
    if syndrome.shape != (graph.num_nodes,):
        raise ValueError(f"syndrome must mark {graph.num_nodes} nodes")
    return syndrome


def boundary(graph: DecodingGraph, edge_mask: np.ndarray) -> np.ndarray:
    """Syndrome generated by an edge set: nodes with odd incidence."""
    return graph.boundary_nodes(_as_edge_mask(graph, edge_mask, "edge mask"))


def peel_correction(
    graph: DecodingGraph, syndrome: np.ndarray, erased: np.ndarray
) -> Optional[np.ndarray]:
    """Zero-weight correction within the erasure, or None when impossible."""
    syndrome = _as_syndrome(graph, syndrome)
    erased = _as_edge_mask(graph, erased, "erased")
    correction, feasible = _peel_one(
        graph.num_nodes,
        graph.edges[:, 0],
        graph.edges[:, 1],
        erased,
        syndrome,
    )
    return correction if feasible else None


def _zero_one_bfs(graph: DecodingGraph, source: int, erased: np.ndarray):
    """Distances with erased edges free, plus the predecessor edge of each node."""
    dist = np.full(graph.num_nodes, np.iinfo(np.int64).max, dtype=np.int64)
    pred_edge = np.full(graph.num_nodes, -1, dtype=np.int64)
    pred_node = np.full(graph.num_nodes, -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        node = queue.popleft()
        base = dist[node]
        for slot in range(graph.adj_ptr[node], graph.adj_ptr[node + 1]):
            edge = int(graph.adj_edge[slot])
            nbr = int(graph.adj_nbr[slot])
            weight = 0 if erased[edge] else 1
            cand = base + weight
            if cand < dist[nbr]:
                dist[nbr] = cand
                pred_edge[nbr] = edge
                pred_node[nbr] = node
                if weight == 0:
                    queue.appendleft(nbr)
                else:
                    queue.append(nbr)
    return dist, pred_edge, pred_node


def matching_correction(
    graph: DecodingGraph, syndrome: np.ndarray, erased: Optional[np.ndarray] = None
) -> np.ndarray:
    """Minimum-weight correction via pairwise matching of syndrome nodes.

    Edge weights are 0 on erased edges and 1 elsewhere, so the result uses as
    few unerased edges as possible.  Works for any syndrome with even parity
    per connected component.
    """
    import networkx as nx

    syndrome = _as_syndrome(graph, syndrome)
    if erased is None:
        erased = np.zeros(graph.n_edges, dtype=bool)
    erased = _as_edge_mask(graph, erased, "erased")
    marked = np.flatnonzero(syndrome)
    correction = np.zeros(graph.n_edges, dtype=bool)
    if len(marked) == 0:
        return correction
    if len(marked) % 2:
        raise ValueError("syndrome has odd total parity; no correction exists")

    searches = {}
    for node in marked:
        searches[int(node)] = _zero_one_bfs(graph, int(node), erased)

    unreachable = np.iinfo(np.int64).max
    pairing_graph = nx.Graph()
    pairing_graph.add_nodes_from(int(n) for n in marked)
    for i, a in enumerate(marked):
        dist_a = searches[int(a)][0]
        for b in marked[i + 1 :]:
            d = dist_a[int(b)]
            if d == unreachable:
                continue
            pairing_graph.add_edge(int(a), int(b), weight=int(d))
    pairs = nx.min_weight_matching(pairing_graph)
    if 2 * len(pairs) != len(marked):
        raise ValueError("syndrome nodes cannot be fully paired; check parity")

    for a, b in pairs:
        _, pred_edge, pred_node = searches[a]
        node = b
        while node != a:
            edge = int(pred_edge[node])
            if edge < 0:
                raise RuntimeError("path reconstruction failed")
            correction[edge] = not correction[edge]
            node = int(pred_node[node])
    return correction


def decode(
    graph: DecodingGraph, syndrome: np.ndarray, erased: np.ndarray
) -> np.ndarray:
    """Correction for one shot: peeling when possible, matching otherwise.

    The returned correction always satisfies boundary(correction) == syndrome.
    """
    syndrome = _as_syndrome(graph, syndrome)
    erased = _as_edge_mask(graph, erased, "erased")
    correction = peel_correction(graph, syndrome, erased)
    if correction is None:
        correction = matching_correction(graph, syndrome, erased)
    achieved = graph.boundary_nodes(correction)
    if not np.array_equal(achieved, syndrome):
        raise RuntimeError("decoder produced a correction with the wrong boundary")
    return correction


def correction_weight(correction: np.ndarray, erased: np.ndarray) -> int:
    """Number of unerased edges a correction uses."""
    correction = np.asarray(correction, dtype=bool)
    erased = np.asarray(erased, dtype=bool)
    return int(np.count_nonzero(correction & ~erased))


def logical_failure(
    graph: DecodingGraph, flips: np.ndarray, correction: np.ndarray
) -> bool:
    """Whether the residual flips + correction wraps the correlation surface."""
    flips = _as_edge_mask(graph, flips, "flips")
    correction = _as_edge_mask(graph, correction, "correction")
    return bool(graph.surface_parity(flips ^ correction))


def decode_batch(
    graph: DecodingGraph, erased: np.ndarray, flips: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Peel a batch of shots; returns (logical_failure, decode_ok) arrays.

    ``decode_ok`` is False when the syndrome escaped the erasure (cannot
    happen for shots drawn from the erasure model) or the internal boundary
    verification failed; callers treat any False as a hard error.
    """
    erased = np.ascontiguousarray(erased, dtype=bool)
    flips = np.ascontiguousarray(flips, dtype=bool)
    if erased.ndim != 2 or erased.shape[1] != graph.n_edges:
        raise ValueError("erased must be (shots, n_edges)")
    if flips.shape != erased.shape:
        raise ValueError("flips must match erased in shape")
    return _decode_batch(
        graph.num_nodes,
        graph.edges[:, 0],
        graph.edges[:, 1],
        graph.surface,
        erased,
        flips,
    )
