"""Structural advantage measures derived from access estimates.

A node's access signature is its row of the p matrix (self entry fixed at 1).
Broadcast advantage is the minimum signature entry, influence advantage the
mean (self term included, which shifts every node identically). Welfare is
the minimum pairwise access in the whole graph, equal to the minimum
broadcast; the pair attaining it is the access-diameter pair.

Control advantage for a node c compares access estimates with and without c.
The removal run keeps the node count and simply drops c's incident edges, so
both runs share every remaining edge's coin stream; estimates are exactly
coupled and removing a leaf yields exactly zero control.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph
from .sampler import (
    AccessEstimate,
    build_ensemble,
    exact_access_oracle,
    validate_alpha,
)


def broadcast_all(est: AccessEstimate) -> np.ndarray:
    """Per-node minimum off-diagonal access probability."""
    if est.n < 2:
        raise ValueError("broadcast needs at least 2 nodes")
    p = est.p
    np.fill_diagonal(p, np.inf)
    return p.min(axis=1)


def influence_all(est: AccessEstimate) -> np.ndarray:
    """Per-node mean signature entry, self term p_ii = 1 included."""
    return est.counters.sum(axis=1, dtype=np.int64) / (float(est.R) * est.n)


def welfare(est: AccessEstimate) -> tuple[float, tuple[int, int]]:
    """Minimum pairwise access and the lexicographically smallest attaining
    pair (u, v), u < v."""
    if est.n < 2:
        raise ValueError("welfare needs at least 2 nodes")
    c = est.counters.copy()
    np.fill_diagonal(c, np.iinfo(np.int32).max)
    # row-major argmin of a symmetric matrix is the lexicographically
    # smallest minimizing pair
    flat = int(np.argmin(c))
    u, v = divmod(flat, est.n)
    if u > v:
        u, v = v, u
    return float(c[u, v]) / est.R, (u, v)


def _exact_broadcast(p: np.ndarray) -> np.ndarray:
    q = p.copy()
    np.fill_diagonal(q, np.inf)
    return q.min(axis=1)


@dataclass(frozen=True)
class ControlReport:
    """Access-centrality outputs for one removed node."""

    node: int
    cent_star: float
    max_pair_control: float
    raw_sum: float


def _without_node(g: Graph, c: int) -> Graph:
    """Same node set with c's incident edges removed (keeps dense ids, so
    the remaining edges draw identical coins and estimates stay coupled)."""
    keep = (g.eu != c) & (g.ev != c)
    pairs = list(zip(g.eu[keep].tolist(), g.ev[keep].tolist()))
    return Graph(
        n=g.n,
        eu=g.eu[keep],
        ev=g.ev[keep],
        orig_ids=g.orig_ids,
        label_map=g.label_map,
        edge_set=frozenset(pairs),
        ingest=g.ingest,
    )


def access_centrality(
    g: Graph,
    alpha: float,
    c: int,
    R: int = 10_000,
    seed: int = 0,
    exact: bool = False,
    workers: int = 1,
) -> ControlReport:
    """Control advantage of node c over the other pairs' access.

    For every pair (j, k) avoiding c, pair control is the lost fraction
    clamp((p_jk - p'_jk) / p_jk, 0, 1) where p' comes from the graph without
    c. cent_star is the mean over the C(n-1, 2) eligible pairs; the
    unnormalized sum is also reported. Pairs with p_jk = 0 contribute 0.
    With exact=True the enumeration oracle replaces sampling (small m only).
    """
    alpha = validate_alpha(alpha)
    if g.n < 3:
        raise ValueError("control needs at least 3 nodes")
    if not (0 <= c < g.n):
        raise ValueError(f"node {c} out of range")
    g_removed = _without_node(g, c)
    if exact:
        p = exact_access_oracle(g, alpha)
        p_removed = exact_access_oracle(g_removed, alpha)
    else:
        _, est = build_ensemble(g, alpha, R, seed, workers=workers)
        _, est_removed = build_ensemble(g_removed, alpha, R, seed, workers=workers)
        p = est.p
        p_removed = est_removed.p

    others = np.array([i for i in range(g.n) if i != c])
    iu, ju = np.triu_indices(len(others), k=1)
    pj = p[others[iu], others[ju]]
    pr = p_removed[others[iu], others[ju]]
    nonzero = pj > 0
    ratio = np.zeros(len(pj))
    ratio[nonzero] = (pj[nonzero] - pr[nonzero]) / pj[nonzero]
    clamped = np.clip(ratio, 0.0, 1.0)
    n_pairs = len(pj)
    return ControlReport(
        node=c,
        cent_star=float(clamped.sum() / n_pairs),
        max_pair_control=float(clamped.max()) if n_pairs else 0.0,
        raw_sum=float(clamped.sum()),
    )


@dataclass(frozen=True)
class AdvantageReport:
    """Per-node broadcast and influence vectors (dense node order)."""

    broadcast: np.ndarray
    influence: np.ndarray


def advantage_report(est: AccessEstimate) -> AdvantageReport:
    return AdvantageReport(broadcast=broadcast_all(est), influence=influence_all(est))


def write_advantage_csv(
    report: AdvantageReport,
    orig_ids: np.ndarray,
    path: str,
    control: dict[int, ControlReport] | None = None,
) -> None:
    """CSV "node,broadcast,influence[,cent_star,max_pair_control]"."""
    with_control = control is not None
    with open(path, "w", encoding="utf-8") as fh:
        if with_control:
            fh.write("node,broadcast,influence,cent_star,max_pair_control\n")
        else:
            fh.write("node,broadcast,influence\n")
        for d in range(len(orig_ids)):
            base = (
                f"{int(orig_ids[d])},{report.broadcast[d]:.6f},{report.influence[d]:.6f}"
            )
            if with_control:
                rep = control[d]
                fh.write(f"{base},{rep.cent_star:.6f},{rep.max_pair_control:.6f}\n")
            else:
                fh.write(base + "\n")
