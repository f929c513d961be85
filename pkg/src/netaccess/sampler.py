"""All-pairs information-access estimation via coupled live-edge sampling.

For undirected cascades with a uniform transmission probability alpha, the
set of nodes a seed informs is exactly the seed's connected component in the
random subgraph that keeps each edge independently with probability alpha.
One ensemble of R such subgraphs therefore estimates every pairwise access
probability at once: p_ij is the fraction of samples in which i and j land
in the same component.

The live/dead coin for (sample r, edge e) is a pure function of
(seed, r, canonical edge key), so ensembles are coupled: adding an edge can
only merge components, never split them, and an incrementally updated
ensemble is bit-identical to one rebuilt from scratch on the larger graph.

Counter accumulation (build time) follows a per-sample mode switch: when the
component structure is fragmented (sum of squared component sizes at most
n^2/2) co-occurrence is counted directly inside each component; otherwise
almost everything sits in one giant component and it is cheaper to count the
complement (nodes outside the giant) and convert at the end. Counters are
32-bit, so R must stay below 2**31.
"""
from __future__ import annotations

import concurrent.futures
import struct
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .graphs import Graph

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_BLOCK = 512
ORACLE_EDGE_CAP = 20

ESTIMATE_MAGIC = b"ACE1"


def _mix64(z: np.ndarray | np.uint64) -> np.ndarray:
    """SplitMix64 finalizer; stateless 64-bit mixing."""
    z = np.asarray(z, dtype=np.uint64).copy()
    with np.errstate(over="ignore"):
        z ^= z >> np.uint64(30)
        z *= _M1
        z ^= z >> np.uint64(27)
        z *= _M2
        z ^= z >> np.uint64(31)
    return z


def _edge_hashes(seed: int, eu: np.ndarray, ev: np.ndarray) -> np.ndarray:
    """Per-edge 64-bit base hash from the seed and canonical (u, v) key."""
    key = (eu.astype(np.uint64) << np.uint64(32)) | ev.astype(np.uint64)
    return _mix64(_mix64(np.uint64(seed)) ^ _mix64(key))


def _live_rows(edge_hash: np.ndarray, r_lo: int, r_hi: int, alpha: float) -> np.ndarray:
    """Boolean (r_hi-r_lo, m) live matrix for samples r_lo..r_hi-1."""
    ridx = np.arange(r_lo + 1, r_hi + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        h = _mix64(edge_hash[None, :] + _GOLDEN * ridx[:, None])
    return (h >> np.uint64(11)) * 2.0 ** -53 < alpha


def validate_alpha(alpha: float) -> float:
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in the open interval (0,1), got {alpha}")
    return float(alpha)


@dataclass
class SampleEnsemble:
    """R coupled live-edge samples stored as per-sample component labels.

    ``labels[r]`` assigns each node its component label in sample r (label
    values are arbitrary but consistent within a row). ``edges`` tracks the
    current canonical edge set so incremental insertion can reject
    duplicates.
    """

    n: int
    R: int
    seed: int
    alpha: float
    labels: np.ndarray
    edges: set[tuple[int, int]]


@dataclass
class AccessEstimate:
    """Symmetric co-occurrence counters; p_ij = counters_ij / R, p_ii = 1."""

    n: int
    R: int
    counters: np.ndarray

    @property
    def p(self) -> np.ndarray:
        return self.counters / float(self.R)

    def off_diagonal_mask(self) -> np.ndarray:
        return ~np.eye(self.n, dtype=bool)


def _accumulate_block(
    n: int,
    edge_hash: np.ndarray,
    eu: np.ndarray,
    ev: np.ndarray,
    alpha: float,
    r_lo: int,
    r_hi: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Process one block of samples.

    Returns (partial direct/complement counters, per-node outside-giant
    counts, component labels for the block, number of complement-mode rows).
    All pieces combine across blocks by integer addition, so the result is
    independent of block scheduling.
    """
    b = r_hi - r_lo
    live = _live_rows(edge_hash, r_lo, r_hi, alpha)
    rows, cols = np.nonzero(live)
    # disjoint union of the b live subgraphs in one sparse matrix
    off = rows * n
    g = coo_matrix(
        (np.ones(len(rows), dtype=np.int8), (off + eu[cols], off + ev[cols])),
        shape=(b * n, b * n),
    )
    _, flat = connected_components(g, directed=False)
    flat = flat.astype(np.int32)
    sizes = np.bincount(flat)
    lab = flat.reshape(b, n)

    same = np.zeros((n, n), dtype=np.int32)
    row_out = np.zeros(n, dtype=np.int32)
    rc = 0
    half = n * n / 2
    for r in range(b):
        lrow = lab[r]
        counts = sizes[lrow]
        if int(counts.sum()) <= half:
            # fragmented sample: count pairs inside each component directly
            order = np.argsort(lrow, kind="stable")
            svals = lrow[order]
            bounds = np.flatnonzero(np.diff(svals)) + 1
            for mem in np.split(order, bounds):
                if len(mem) > 1:
                    same[np.ix_(mem, mem)] += 1
        else:
            # giant-component sample: count the complement and convert later
            giant_label = lrow[int(np.argmax(counts))]
            rest = np.flatnonzero(lrow != giant_label)
            rc += 1
            row_out[rest] += 1
            if len(rest):
                lr = lrow[rest]
                eq = (lr[:, None] == lr[None, :]).astype(np.int32)
                same[np.ix_(rest, rest)] += eq + 1
    return same, row_out, lab, rc


def build_ensemble(
    g: Graph,
    alpha: float,
    R: int,
    seed: int,
    workers: int = 1,
) -> tuple[SampleEnsemble, AccessEstimate]:
    """Build R live-edge samples and the resulting access counters.

    Cost is O(R m) for coins plus near-linear component labeling per sample.
    Results are bit-identical for any ``workers`` value: blocks are disjoint
    and partial counters merge by integer addition.
    """
    alpha = validate_alpha(alpha)
    if R < 1:
        raise ValueError(f"R must be at least 1, got {R}")
    if R >= 2**31:
        raise ValueError("R must fit 32-bit counters (R < 2**31)")
    n = g.n
    edge_hash = _edge_hashes(seed, g.eu, g.ev)
    blocks = [(lo, min(lo + _BLOCK, R)) for lo in range(0, R, _BLOCK)]

    def run(block: tuple[int, int]):
        return _accumulate_block(n, edge_hash, g.eu, g.ev, alpha, block[0], block[1])

    if workers > 1 and len(blocks) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(b) for b in blocks]

    same = np.zeros((n, n), dtype=np.int64)
    row_out = np.zeros(n, dtype=np.int64)
    rc = 0
    labels = np.empty((R, n), dtype=np.int32)
    for (lo, hi), (psame, pout, plab, prc) in zip(blocks, parts):
        same += psame
        row_out += pout
        rc += prc
        labels[lo:hi] = plab

    counters = same + (rc - row_out[:, None] - row_out[None, :])
    np.fill_diagonal(counters, R)
    counters = counters.astype(np.int32)
    ens = SampleEnsemble(
        n=n, R=R, seed=seed, alpha=alpha, labels=labels, edges=set(g.edge_set)
    )
    return ens, AccessEstimate(n=n, R=R, counters=counters)


def add_edge_incremental(
    ens: SampleEnsemble, est: AccessEstimate, e: tuple[int, int]
) -> tuple[SampleEnsemble, AccessEstimate]:
    """Insert edge e into every sample whose coin is live; O(R n) worst case.

    In each live sample where the endpoints lie in different components the
    components merge and every cross pair's counter increments. Counters are
    therefore non-decreasing, and the updated state equals a from-scratch
    build on the augmented graph with the same seed (same coin function).
    Mutates and returns (ens, est).
    """
    u, v = e
    if u > v:
        u, v = v, u
    if u == v:
        raise ValueError(f"self-loop ({u},{v})")
    if not (0 <= u < ens.n and 0 <= v < ens.n):
        raise ValueError(f"edge ({u},{v}) out of range for n={ens.n}")
    if (u, v) in ens.edges:
        raise ValueError(f"edge ({u},{v}) already present")

    eh = _edge_hashes(ens.seed, np.array([u]), np.array([v]))
    live = _live_rows(eh, 0, ens.R, ens.alpha)[:, 0]
    lab = ens.labels
    merge_rows = np.flatnonzero(live & (lab[:, u] != lab[:, v]))
    counters = est.counters
    for r in merge_rows.tolist():
        lrow = lab[r]
        la = lrow[u]
        lb = lrow[v]
        side_a = np.flatnonzero(lrow == la)
        side_b = np.flatnonzero(lrow == lb)
        counters[np.ix_(side_a, side_b)] += 1
        counters[np.ix_(side_b, side_a)] += 1
        # relabel the smaller side to keep the row consistent
        if len(side_a) < len(side_b):
            lrow[side_a] = lb
        else:
            lrow[side_b] = la
    ens.edges.add((u, v))
    return ens, est


def exact_access_oracle(g: Graph, alpha: float, cap: int = ORACLE_EDGE_CAP) -> np.ndarray:
    """Exact p matrix by enumerating all 2^m live-edge subsets.

    Access probability computation is #P-hard in general, so this is gated
    at m <= cap edges. Exact to floating precision.
    """
    alpha = validate_alpha(alpha)
    m = g.m
    if m > cap:
        raise ValueError(f"exact oracle refuses m={m} > cap={cap} edges")
    n = g.n
    n_masks = 1 << m
    live = np.zeros((n_masks, m), dtype=bool)
    masks = np.arange(n_masks, dtype=np.uint32)
    for e in range(m):
        live[:, e] = (masks >> np.uint32(e)) & np.uint32(1) == 1
    labels = np.tile(np.arange(n, dtype=np.int32), (n_masks, 1))
    # min-label propagation over live edges until fixpoint
    eu = g.eu
    ev = g.ev
    while True:
        changed = False
        for e in range(m):
            u, v = int(eu[e]), int(ev[e])
            rows = live[:, e]
            lu = labels[rows, u]
            lv = labels[rows, v]
            mn = np.minimum(lu, lv)
            if (lu != mn).any() or (lv != mn).any():
                changed = True
                labels[rows, u] = mn
                labels[rows, v] = mn
        if not changed:
            break
    k = live.sum(axis=1)
    weights = alpha ** k * (1.0 - alpha) ** (m - k)
    p = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            pij = float(weights[labels[:, i] == labels[:, j]].sum())
            p[i, j] = pij
            p[j, i] = pij
    return p


def stability_check(
    g: Graph,
    alpha: float,
    R: int,
    reps: int,
    base_seed: int,
    workers: int = 1,
) -> tuple[float, float]:
    """Estimate reps times with consecutive seeds and measure fluctuation.

    Returns (max_dev, mean_dev): the maximum and the mean, over all node
    pairs, of the max-minus-min estimate across repetitions.
    """
    if reps < 2:
        raise ValueError(f"reps must be at least 2, got {reps}")
    pmin = None
    pmax = None
    for rep in range(reps):
        _, est = build_ensemble(g, alpha, R, base_seed + rep, workers=workers)
        p = est.p
        pmin = p if pmin is None else np.minimum(pmin, p)
        pmax = p if pmax is None else np.maximum(pmax, p)
    off = ~np.eye(g.n, dtype=bool)
    dev = (pmax - pmin)[off]
    return float(dev.max()), float(dev.mean())


def write_access_csv(est: AccessEstimate, orig_ids: np.ndarray, path: str) -> None:
    """CSV "i,j,p" over original ids with i<j, 6 decimal digits."""
    n = est.n
    iu, ju = np.triu_indices(n, k=1)
    p = est.counters[iu, ju] / float(est.R)
    oi = orig_ids[iu]
    oj = orig_ids[ju]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("i,j,p\n")
        for a, b, val in zip(oi.tolist(), oj.tolist(), p.tolist()):
            fh.write(f"{a},{b},{val:.6f}\n")


def save_estimate(est: AccessEstimate, orig_ids: np.ndarray, alpha: float, seed: int, path: str) -> None:
    """Binary dump: magic 'ACE1', then little-endian header
    (version u32, n u32, R u32, alpha f64, seed u64), original ids as u32[n],
    and the strict upper triangle of the counters as u32, row-major."""
    n = est.n
    if len(orig_ids) and int(orig_ids.max()) >= 2**32:
        raise ValueError("original ids above 2**32-1 do not fit the binary format")
    iu, ju = np.triu_indices(n, k=1)
    tri = est.counters[iu, ju].astype("<u4")
    with open(path, "wb") as fh:
        fh.write(ESTIMATE_MAGIC)
        fh.write(struct.pack("<IIIdQ", 1, n, est.R, alpha, seed))
        fh.write(orig_ids.astype("<u4").tobytes())
        fh.write(tri.tobytes())


def load_estimate(path: str) -> tuple[AccessEstimate, np.ndarray, float, int]:
    """Read a binary dump; returns (estimate, orig_ids, alpha, seed)."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != ESTIMATE_MAGIC:
            raise ValueError(f"not an access-estimate file: bad magic {magic!r}")
        version, n, R, alpha, seed = struct.unpack("<IIIdQ", fh.read(28))
        if version != 1:
            raise ValueError(f"unsupported estimate file version {version}")
        orig_ids = np.frombuffer(fh.read(4 * n), dtype="<u4").astype(np.int64)
        cnt = fh.read(4 * (n * (n - 1) // 2))
    tri = np.frombuffer(cnt, dtype="<u4").astype(np.int32)
    counters = np.zeros((n, n), dtype=np.int32)
    iu, ju = np.triu_indices(n, k=1)
    counters[iu, ju] = tri
    counters[ju, iu] = tri
    np.fill_diagonal(counters, R)
    return AccessEstimate(n=n, R=R, counters=counters), orig_ids, alpha, seed
