"""Greedy edge-addition strategies for welfare maximization.

All strategies add up to k edges to a connected graph, one step at a time,
and share one coupled sample ensemble that is updated incrementally (never
rebuilt), so the recorded welfare trajectory is non-decreasing by
construction.

Strategy catalog (selection rule per step):
  rand        both endpoints drawn uniformly from the seeded stream
  bc-chord    edge directly between the pair with minimum estimated access
  bc-one      the worse-off endpoint of that pair is wired to the center
  bc-both     both endpoints wired to the center (2 edges per step)
  infl        the node with minimum influence is wired to the center
  diam-chord  edge between a pair at maximum BFS distance
  diam-both   both endpoints of that pair wired to the center (2 edges)

The center is the node with maximum broadcast in the initial estimate and
stays fixed for the whole run. Collisions (candidate edge already present,
or a self-loop) are resolved by two rules: center-targeting strategies walk
down the initial-broadcast order until a non-neighbor is found (recording a
skipped step if none exists); chord and random strategies redraw one
endpoint, chosen by the seeded stream, until the edge is legal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .advantage import broadcast_all
from .graphs import Graph
from .sampler import AccessEstimate, SampleEnsemble, add_edge_incremental, build_ensemble

HEURISTIC_KINDS = (
    "rand",
    "bc-chord",
    "bc-one",
    "bc-both",
    "infl",
    "diam-chord",
    "diam-both",
)
_CENTER_KINDS = {"bc-one", "bc-both", "infl", "diam-both"}
_PAIRED_KINDS = {"bc-both", "diam-both"}


@dataclass
class StepRecord:
    """One augmentation step: edges added and post-step welfare metrics."""

    step: int
    edges: list[tuple[int, int]]
    welfare: float
    min_broadcast: float
    min_influence: float
    events: list[str] = field(default_factory=list)


@dataclass
class InterventionTrace:
    kind: str
    k: int
    alpha: float
    R: int
    seed: int
    center: int | None
    steps: list[StepRecord] = field(default_factory=list)
    early_termination: str | None = None

    @property
    def edges_added(self) -> list[tuple[int, int]]:
        return [e for rec in self.steps for e in rec.edges]


def select_center(est: AccessEstimate) -> int:
    """Node with maximum broadcast; ties to the lowest id. Computed once on
    the initial estimate and frozen for the run."""
    return int(np.argmax(broadcast_all(est)))


@dataclass
class _RunState:
    """Mutable view of the augmented graph during a run."""

    n: int
    edge_set: set[tuple[int, int]]
    adj: list[set[int]]

    @classmethod
    def from_graph(cls, g: Graph) -> "_RunState":
        adj: list[set[int]] = [set() for _ in range(g.n)]
        for u, v in g.edge_set:
            adj[u].add(v)
            adj[v].add(u)
        return cls(n=g.n, edge_set=set(g.edge_set), adj=adj)

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self.edge_set

    def add(self, u: int, v: int) -> None:
        if u > v:
            u, v = v, u
        self.edge_set.add((u, v))
        self.adj[u].add(v)
        self.adj[v].add(u)

    def is_complete(self) -> bool:
        return len(self.edge_set) == self.n * (self.n - 1) // 2


def resolve_collision(
    kind: str,
    candidate: tuple[int, int],
    state: _RunState,
    broadcast_order: np.ndarray,
    rng: np.random.Generator,
) -> tuple[int, int] | None:
    """Turn an illegal candidate edge into a legal one, or None to skip.

    Center-targeting kinds keep the non-center endpoint u and walk down the
    initial-broadcast order (second-highest onwards) to the first
    non-neighbor of u; if u is adjacent to everything the step is skipped.
    Chord/random kinds redraw one endpoint (side picked by the seeded
    stream) until the edge is legal.
    """
    u, v = candidate
    if kind in _CENTER_KINDS:
        for w in broadcast_order[1:]:
            w = int(w)
            if w != u and not state.has_edge(u, w):
                return (u, w) if u < w else (w, u)
        return None
    while u == v or state.has_edge(u, v):
        side = int(rng.integers(2))
        fresh = int(rng.integers(state.n))
        if side == 0:
            u = fresh
        else:
            v = fresh
    return (u, v) if u < v else (v, u)


def _min_pair_candidate(est: AccessEstimate) -> tuple[int, int]:
    c = est.counters.copy()
    np.fill_diagonal(c, np.iinfo(np.int32).max)
    flat = int(np.argmin(c))
    i, j = divmod(flat, est.n)
    return (i, j) if i < j else (j, i)


def _diameter_pair(state: _RunState) -> tuple[int, int]:
    eu = np.array([e[0] for e in sorted(state.edge_set)], dtype=np.int64)
    ev = np.array([e[1] for e in sorted(state.edge_set)], dtype=np.int64)
    ones = np.ones(2 * len(eu), dtype=np.int8)
    g = csr_matrix(
        (ones, (np.concatenate([eu, ev]), np.concatenate([ev, eu]))),
        shape=(state.n, state.n),
    )
    d = shortest_path(g, method="D", directed=False, unweighted=True)
    flat = int(np.argmax(d))
    i, j = divmod(flat, state.n)
    return (i, j) if i < j else (j, i)


def _current_broadcast(est: AccessEstimate) -> np.ndarray:
    c = est.counters.copy()
    np.fill_diagonal(c, np.iinfo(np.int32).max)
    return c.min(axis=1)


def run_augmentation(
    g: Graph,
    kind: str,
    k: int,
    alpha: float,
    R: int,
    seed: int,
    workers: int = 1,
    on_step: Callable[[int, int, AccessEstimate], None] | None = None,
) -> tuple[InterventionTrace, Graph]:
    """Run one strategy for budget k and return (trace, augmented graph).

    The ensemble is built once (O(R m)) and every added edge costs O(R n)
    via incremental update. The whole trace is a deterministic function of
    (graph, kind, k, alpha, R, seed), independent of worker count.
    ``on_step`` is called after each recorded step with (step index, total
    edges added, current estimate).
    """
    if kind not in HEURISTIC_KINDS:
        raise ValueError(f"unknown heuristic kind {kind!r}")
    if k < 0:
        raise ValueError(f"budget k must be non-negative, got {k}")
    if kind in _PAIRED_KINDS and k % 2 != 0:
        raise ValueError(f"{kind} adds edges in pairs and needs an even budget, got k={k}")
    if g.is_complete():
        raise ValueError("graph is already complete")

    ens, est = build_ensemble(g, alpha, R, seed, workers=workers)
    b0 = broadcast_all(est)
    center = select_center(est)
    # initial-broadcast order, descending, ties to the lower id; frozen
    broadcast_order = np.lexsort((np.arange(g.n), -b0))
    rng = np.random.default_rng([seed, 0x61757874])

    trace = InterventionTrace(
        kind=kind,
        k=k,
        alpha=alpha,
        R=R,
        seed=seed,
        center=center if kind in _CENTER_KINDS else None,
    )
    state = _RunState.from_graph(g)
    n_steps = k // 2 if kind in _PAIRED_KINDS else k
    added_total = 0

    for step in range(n_steps):
        if state.is_complete():
            trace.early_termination = "graph became complete"
            break
        events: list[str] = []
        added_now: list[tuple[int, int]] = []

        if kind == "rand":
            raw = [(int(rng.integers(state.n)), int(rng.integers(state.n)))]
        elif kind == "bc-chord":
            raw = [_min_pair_candidate(est)]
        elif kind == "bc-one":
            i, j = _min_pair_candidate(est)
            bc = _current_broadcast(est)
            u = i if bc[i] <= bc[j] else j
            raw = [(u, center)]
        elif kind == "bc-both":
            i, j = _min_pair_candidate(est)
            raw = [(i, center), (j, center)]
        elif kind == "infl":
            sums = est.counters.sum(axis=1, dtype=np.int64)
            u = int(np.argmin(sums))
            raw = [(u, center)]
        elif kind == "diam-chord":
            raw = [_diameter_pair(state)]
        else:  # diam-both
            i, j = _diameter_pair(state)
            raw = [(i, center), (j, center)]

        for cand in raw:
            cu, cv = cand
            if cu == cv or state.has_edge(cu, cv):
                resolved = resolve_collision(kind, cand, state, broadcast_order, rng)
            else:
                resolved = (cu, cv) if cu < cv else (cv, cu)
            if resolved is None:
                events.append(f"skipped: node {cand[0]} adjacent to all candidates")
                continue
            add_edge_incremental(ens, est, resolved)
            state.add(*resolved)
            added_now.append(resolved)
            added_total += 1

        c = est.counters
        mask_min = c.copy()
        np.fill_diagonal(mask_min, np.iinfo(np.int32).max)
        w = float(mask_min.min()) / R
        min_b = float(mask_min.min(axis=1).min()) / R
        min_i = float(c.sum(axis=1, dtype=np.int64).min()) / (float(R) * g.n)
        trace.steps.append(
            StepRecord(
                step=step,
                edges=added_now,
                welfare=w,
                min_broadcast=min_b,
                min_influence=min_i,
                events=events,
            )
        )
        if on_step is not None:
            on_step(step, added_total, est)

    augmented = g.with_edges(trace.edges_added)
    return trace, augmented


def write_trace_csv(trace: InterventionTrace, orig_ids: np.ndarray, path: str) -> None:
    """CSV "step,u,v,welfare,min_broadcast,min_influence", one row per added
    edge (original ids); paired strategies emit two rows per step sharing
    the post-step metric values."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("step,u,v,welfare,min_broadcast,min_influence\n")
        for rec in trace.steps:
            for u, v in rec.edges:
                fh.write(
                    f"{rec.step},{int(orig_ids[u])},{int(orig_ids[v])},"
                    f"{rec.welfare:.6f},{rec.min_broadcast:.6f},{rec.min_influence:.6f}\n"
                )
