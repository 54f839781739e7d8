"""Simulators for each analyzed random process, with the statistic of the
matching theorem and a pass/fail verdict against its tail bound.

Determinism contract: every trial draws from its own generator, derived as
``numpy.random.default_rng((master_seed, trial_index))`` — SeedSequence
hash-mixes the pair, so identical (master_seed, trial_index) replays
bit-identically and distinct indices give independent streams.  Trials are
independent; aggregation is commutative (counts and histograms), so results
do not depend on execution order.  ENCBOUND_THREADS caps the trial pool.
"""

from __future__ import annotations

import math
import os
import time
from bisect import bisect_left, insort
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from . import bounds
from .ledger import TailBound
from .satfix import CnfFormula, gen_bounded_overlap_cnf, moser_solve
from .witnesses import find_clique_or_is

E = math.e


@dataclass(frozen=True)
class RngSpec:
    """Per-trial RNG derivation from a single master seed."""

    master_seed: int

    def stream(self, trial_index: int) -> np.random.Generator:
        return np.random.default_rng((self.master_seed, trial_index))


def _spec(rng) -> RngSpec:
    return rng if isinstance(rng, RngSpec) else RngSpec(int(rng))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("ENCBOUND_THREADS", "1")))
    except ValueError:
        return 1


def run_trials(worker, trials: int, spec: RngSpec) -> list:
    """worker(trial_index, generator) -> per-trial result, in index order."""
    if _threads() <= 1:
        return [worker(i, spec.stream(i)) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=_threads()) as ex:
        return list(ex.map(lambda i: worker(i, spec.stream(i)), range(trials)))


@dataclass(frozen=True)
class ExperimentReport:
    experiment: str
    params: dict
    trials: int
    seed: int | None
    exceed_count: int
    empirical_prob: float
    bound: TailBound | None
    mc_stderr: float
    verdict: str
    extras: dict = field(default_factory=dict)
    wall_ms: float = 0.0

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "params": dict(self.params),
            "trials": self.trials,
            "seed": self.seed,
            "exceed_count": self.exceed_count,
            "empirical_prob": self.empirical_prob,
            "bound": self.bound.to_dict() if self.bound else None,
            "threshold": self.bound.threshold if self.bound else None,
            "mc_stderr": self.mc_stderr,
            "asymptotic": self.bound.asymptotic if self.bound else True,
            "verdict": self.verdict,
            "extras": dict(self.extras),
            "wall_ms": self.wall_ms,
        }


def _report(
    experiment: str,
    params: dict,
    trials: int,
    seed: int | None,
    exceed: int,
    bound: TailBound | None,
    extras: dict,
    t0: float,
    exact: bool = False,
) -> ExperimentReport:
    p_hat = exceed / trials if trials else 0.0
    stderr = 0.0 if exact else math.sqrt(p_hat * (1 - p_hat) / trials) if trials else 0.0
    if bound is None or bound.asymptotic:
        verdict = "asymptotic-info"
    elif p_hat <= bound.probability + 3 * stderr:
        verdict = "pass"
    else:
        verdict = "fail"
    return ExperimentReport(
        experiment=experiment,
        params=params,
        trials=trials,
        seed=seed,
        exceed_count=exceed,
        empirical_prob=p_hat,
        bound=bound,
        mc_stderr=stderr,
        verdict=verdict,
        extras=extras,
        wall_ms=(time.perf_counter() - t0) * 1000,
    )


# ---------------------------------------------------------------------------
# Runs of ones.


def _count_without_run(n: int, t: int) -> int:
    """Strings of length n with no run of t ones, by DP on current run length."""
    state = [0] * t  # state[r] = strings ending in exactly r trailing ones
    state[0] = 1
    for _ in range(n):
        nxt = [0] * t
        nxt[0] = sum(state)  # append a zero
        for r in range(t - 1):
            nxt[r + 1] = state[r]  # append a one
        state = nxt
    return sum(state)


def sim_runs(n: int, t: int, trials: int | None = None, rng=0) -> ExperimentReport:
    """Bad event: the random n-bit string contains a run of >= t ones.

    trials=None runs the exhaustive mode (n <= 30): the exact count over all
    2^n strings via the run-length DP.
    """
    t0 = time.perf_counter()
    if not 1 <= t <= n:
        raise ValueError("need 1 <= t <= n")
    s = max(0.0, t - math.log2(n))
    bound = bounds.runs_threshold(n, s)
    params = {"n": n, "t": t}
    if trials is None:
        if n > 30:
            raise ValueError("exhaustive mode requires n <= 30")
        exceed = (1 << n) - _count_without_run(n, t)
        extras = {
            "mode": "exhaustive",
            "exact_prob": str(Fraction(exceed, 1 << n)),
        }
        return _report("runs", params, 1 << n, None, exceed, bound, extras, t0, exact=True)
    spec = _spec(rng)

    def worker(_, g):
        bits = g.integers(0, 2, size=n, dtype=np.uint8)
        c = np.cumsum(bits)
        window = c[t - 1 :].copy()
        window[1:] -= c[: n - t]
        return bool(window.max() == t)

    hits = run_trials(worker, trials, spec)
    return _report("runs", params, trials, spec.master_seed, sum(hits),
                   bound, {"mode": "monte-carlo"}, t0)


# ---------------------------------------------------------------------------
# Balls in urns.


def _urns_bound(n: int, t: int) -> TailBound:
    # valid savings at this t: s = t log(t/e) - log n (vacuous below 3 balls)
    s = t * math.log2(t / E) - math.log2(n) if t >= 3 else -math.inf
    prob = min(1.0, 2.0 ** -s) if s > -math.inf else 1.0
    return TailBound(
        theorem="urns",
        params={"n": n, "t": t},
        threshold=t,
        savings_s=s,
        probability=prob,
        clamped=s < 0,
    )


def sim_urns(n: int, t: int, trials: int | None = None, rng=0) -> ExperimentReport:
    """Bad event: some urn receives more than t of the n uniform balls.

    trials=None enumerates all n^n assignments exactly (n <= 6).
    """
    t0 = time.perf_counter()
    if n < 1 or t < 0:
        raise ValueError("need n >= 1, t >= 0")
    bound = _urns_bound(n, t)
    params = {"n": n, "t": t}
    if trials is None:
        if n > 6:
            raise ValueError("exhaustive mode requires n <= 6")
        exceed = 0
        for b in product(range(n), repeat=n):
            if max(Counter(b).values()) > t:
                exceed += 1
        extras = {"mode": "exhaustive", "exact_prob": str(Fraction(exceed, n**n))}
        return _report("urns", params, n**n, None, exceed, bound, extras, t0, exact=True)
    spec = _spec(rng)

    def worker(_, g):
        return bool(np.bincount(g.integers(0, n, size=n), minlength=n).max() > t)

    hits = run_trials(worker, trials, spec)
    return _report("urns", params, trials, spec.master_seed, sum(hits),
                   bound, {"mode": "monte-carlo"}, t0)


# ---------------------------------------------------------------------------
# Linear probing.


def sim_linear_probing(
    n: int, c: float, trials: int = 10**4, rng=0, s: float = 2.0
) -> ExperimentReport:
    """Hash n keys into ceil(c n) slots by linear probing and measure the
    block (maximal occupied interval) containing a designated key plus its
    search cost.  The designated key is the last one inserted, so its probe
    sequence sees the full table; the block-size distribution is the same
    for every fixed key.

    Bad event, when c > e: the block has size exactly t for t from
    linear_probing_threshold(c, s).
    """
    t0 = time.perf_counter()
    if c <= 1:
        raise ValueError("need c > 1")
    m = math.ceil(c * n)
    bound = bounds.linear_probing_threshold(c, s) if c > E else None
    t = bound.threshold if bound else None
    spec = _spec(rng)
    params = {"n": n, "c": c, "s": s, "m": m}

    def worker(idx, g):
        h = g.integers(0, m, size=n)
        table = [-1] * m
        for key in range(n):
            pos = h[key]
            while table[pos] != -1:
                pos = pos + 1 if pos + 1 < m else 0
            table[pos] = key
        pos0 = pos  # slot of the designated (last-inserted) key
        # block containing key 0: extend to the empty slots on either side
        lo = pos0
        while table[lo - 1 if lo else m - 1] != -1:
            lo = lo - 1 if lo else m - 1
            if lo == pos0:  # full table cannot happen for c > 1
                break
        size = 0
        pos = lo
        while table[pos] != -1:
            size += 1
            pos = pos + 1 if pos + 1 < m else 0
        search = (pos0 - h[n - 1]) % m + 1
        if idx == 0:  # findability invariant, checked once
            for key in range(n):
                p = h[key]
                while table[p] != key:
                    if table[p] == -1:
                        raise AssertionError(f"key {key} not findable")
                    p = p + 1 if p + 1 < m else 0
        return size, search

    results = run_trials(worker, trials, spec)
    sizes = [r[0] for r in results]
    hist = Counter(sizes)
    exceed = hist.get(t, 0) if t is not None else 0
    extras = {
        "block_size_hist": {str(k): v for k, v in sorted(hist.items())},
        "mean_search_time": sum(r[1] for r in results) / trials,
        "mean_block_size": sum(sizes) / trials,
        "expected_search_bound": bounds.linear_probing_expected_search(c)
        if c > E
        else None,
    }
    return _report("linear-probing", params, trials, spec.master_seed,
                   exceed, bound, extras, t0)


# ---------------------------------------------------------------------------
# Cuckoo hashing.


class _UnionFind:
    def __init__(self):
        self.parent: dict[int, int] = {}
        self.edges: dict[int, int] = {}
        self.verts: dict[int, int] = {}

    def find(self, x: int) -> int:
        if x not in self.parent:
            self.parent[x] = x
            self.edges[x] = 0
            self.verts[x] = 1
            return x
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def add_edge(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            self.edges[ra] += 1
            return
        if self.verts[ra] < self.verts[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.verts[ra] += self.verts[rb]
        self.edges[ra] += self.edges[rb] + 1

    def components(self):
        for x in self.parent:
            if self.parent[x] == x:
                yield self.verts[x], self.edges[x]


def _graph_has_excess(h, g, m: int) -> bool:
    """Does the cuckoo graph of (h, g) contain a component with more edges
    than vertices?  (Exact criterion for unavoidable insertion failure.)"""
    uf = _UnionFind()
    for a, b in zip(h, g):
        uf.add_edge(int(a), m + int(b))
    return any(e > v for v, e in uf.components())


def sim_cuckoo(
    n: int,
    maxloop: int | None = None,
    trials: int = 10**3,
    rng=0,
    s: float = 20.0,
    k1: float = 4.0,
    k2: float = 1.0,
) -> ExperimentReport:
    """Cuckoo hashing with two tables of size m = 2n.

    Bad event: the initial hash functions force a rehash (their cuckoo graph
    has a component with more edges than vertices, or the insertion loop hits
    maxloop).  Rehash resamples all hash values and rebuilds from scratch;
    50 consecutive failures abort the trial (reported, never silent).
    """
    t0 = time.perf_counter()
    m = 2 * n
    if maxloop is None:
        maxloop = math.ceil(4 * math.log2(n)) + 10 if n > 1 else 10
    bound = bounds.cuckoo_tails(n, s, k1=k1, k2=k2)
    step_cap = 2 * bound.threshold
    spec = _spec(rng)
    params = {"n": n, "m": m, "maxloop": maxloop, "s": s}

    def insert_all(h, g):
        """Returns (max_steps, failed_key) — failed_key None on success."""
        A = [-1] * m
        B = [-1] * m
        worst = 0
        for key in range(n):
            x, steps = key, 0
            placed = False
            for _ in range(maxloop):
                pos = h[x]
                x, A[pos] = A[pos], x
                steps += 1
                if x == -1:
                    placed = True
                    break
                pos = g[x]
                x, B[pos] = B[pos], x
                steps += 1
                if x == -1:
                    placed = True
                    break
            if not placed:
                return worst, key
            worst = max(worst, steps)
        return worst, None

    def worker(_, g_rng):
        h = g_rng.integers(0, m, size=n)
        g = g_rng.integers(0, m, size=n)
        excess = _graph_has_excess(h, g, m)
        rehashes = 0
        capped = False
        while True:
            worst, failed = insert_all(h, g)
            if failed is None:
                break
            rehashes += 1
            if rehashes > 50:
                capped = True
                break
            h = g_rng.integers(0, m, size=n)
            g = g_rng.integers(0, m, size=n)
        return excess, rehashes, worst, capped

    results = run_trials(worker, trials, spec)
    rehash_trials = sum(1 for r in results if r[1] > 0)
    total_rehashes = sum(r[1] for r in results)
    max_steps = max(r[2] for r in results)
    extras = {
        "excess_component_trials": sum(1 for r in results if r[0]),
        "rehash_trials": rehash_trials,
        "total_rehashes": total_rehashes,
        "rehash_freq": rehash_trials / trials,
        "fitted_k2": rehash_trials / trials * n,
        "max_insertion_steps": max_steps,
        "step_cap_2t": step_cap,
        "step_cap_violations": sum(1 for r in results if r[2] > step_cap),
        "capped_trials": sum(1 for r in results if r[3]),
    }
    return _report("cuckoo", params, trials, spec.master_seed,
                   rehash_trials, bound, extras, t0)


# ---------------------------------------------------------------------------
# 2-choice hashing.


def sim_two_choice(
    n: int, c: float, trials: int = 10**3, rng=0, s: float = 2.0,
    k: float = 0.0, d: float = 3.0,
) -> ExperimentReport:
    """Each ball goes to the less-loaded of two uniform urns out of
    ceil(c n); ties take the first (h) urn.

    Bad event (bound comparison only for c > 8, asymptotic): the two-choice
    multigraph has a component larger than the component threshold.
    """
    t0 = time.perf_counter()
    if c <= 0 or n < 1:
        raise ValueError("need c > 0, n >= 1")
    m = math.ceil(c * n)
    bound = bounds.two_choice_thresholds(n, c, s, k=k, d=d) if c > 8 and n >= 4 else None
    comp_threshold = bound.params["component_threshold"] if bound else None
    load_threshold = bound.params["maxload_threshold"] if bound else None
    spec = _spec(rng)
    params = {"n": n, "c": c, "m": m, "s": s}

    def worker(_, g_rng):
        h = g_rng.integers(0, m, size=n)
        g = g_rng.integers(0, m, size=n)
        loads = np.zeros(m, dtype=np.int64)
        uf = _UnionFind()
        for i in range(n):
            a, b = h[i], g[i]
            loads[a if loads[a] <= loads[b] else b] += 1
            uf.add_edge(int(a), int(b))
        comps = list(uf.components())
        largest = max(v for v, _ in comps)
        excess = any(e > v for v, e in comps)
        return int(loads.max()), largest, excess

    results = run_trials(worker, trials, spec)
    max_loads = [r[0] for r in results]
    exceed = (
        sum(1 for r in results if r[1] > comp_threshold) if bound else 0
    )
    loglog = math.ceil(math.log2(math.log2(n))) if n >= 4 else 0
    extras = {
        "max_load_hist": {str(kk): v for kk, v in sorted(Counter(max_loads).items())},
        "fitted_d": max(max_loads) - loglog,
        "maxload_exceed": sum(1 for v in max_loads if load_threshold and v > load_threshold),
        "largest_component_max": max(r[1] for r in results),
        "excess_component_trials": sum(1 for r in results if r[2]),
    }
    return _report("two-choice", params, trials, spec.master_seed,
                   exceed, bound, extras, t0)


# ---------------------------------------------------------------------------
# Bipartite expanders.


def expander_k1_violation_prob(n: int) -> float:
    """Exact probability that some left vertex of the random 3-left-regular
    bipartite multigraph has fewer than 2 distinct neighbours: each vertex
    fails iff its three uniform picks coincide, probability 1/n^2."""
    return 1 - (1 - 1 / n**2) ** n


def _expander_violation(masks: list[int], k: int) -> bool:
    """Is there a size-k left set A' with |N(A')| < (3/2) k?"""
    limit = (3 * k - 1) // 2  # largest integer below 1.5 k
    frontier = [((v,), masks[v]) for v in range(len(masks))
                if bin(masks[v]).count("1") <= limit]
    for _ in range(k - 1):
        nxt = []
        for verts, union in frontier:
            for w in range(verts[-1] + 1, len(masks)):
                u = union | masks[w]
                if bin(u).count("1") <= limit:
                    nxt.append((verts + (w,), u))
        frontier = nxt
        if not frontier:
            return False
    return bool(frontier)


def sim_expander(
    n: int, alpha: float | None = None, trials: int = 10**3, kmax: int = 3, rng=0
) -> ExperimentReport:
    """Sample 3-left-regular random bipartite multigraphs on n + n vertices
    and exhaustively test (3/2)-expansion of every left set of size up to
    min(kmax, floor(alpha n)); kmax <= 4.
    """
    t0 = time.perf_counter()
    if not 1 <= kmax <= 4:
        raise ValueError("need 1 <= kmax <= 4")
    if alpha is None:
        alpha = bounds.expander_alpha_threshold()
    kcap = min(kmax, int(alpha * n)) if alpha * n >= 1 else kmax
    spec = _spec(rng)
    params = {"n": n, "alpha": alpha, "kmax": kmax, "kcap": kcap}

    def worker(_, g):
        picks = g.integers(0, n, size=(n, 3)).tolist()
        masks = [(1 << a) | (1 << b) | (1 << c) for a, b, c in picks]
        return tuple(_expander_violation(masks, kk) for kk in range(1, kcap + 1))

    results = run_trials(worker, trials, spec)
    per_k = {kk: sum(1 for r in results if r[kk - 1]) for kk in range(1, kcap + 1)}
    exceed = sum(1 for r in results if any(r))
    union_prob = min(
        1.0, sum(bounds.expander_savings(n, kk).probability for kk in range(1, kcap + 1))
    )
    bound = TailBound(
        theorem="expander-union",
        params={"n": n, "kcap": kcap},
        threshold=kcap,
        savings_s=-math.log2(union_prob) if union_prob > 0 else math.inf,
        probability=union_prob,
        asymptotic=True,
    )
    extras = {
        "violations_by_k": {str(kk): v for kk, v in per_k.items()},
        "k1_oracle_prob": expander_k1_violation_prob(n),
        "k1_empirical": per_k.get(1, 0) / trials,
    }
    return _report("expander", params, trials, spec.master_seed,
                   exceed, bound, extras, t0)


# ---------------------------------------------------------------------------
# Permutation statistics: inversions, records, BST height, Find.


def _bst_stats(perm) -> tuple[int, int]:
    """(inversions, BST height) in one pass.

    The parent of each inserted value is whichever of its current
    predecessor/successor was inserted later, giving depth without building
    the tree; the inversion count falls out of the same bisect position.
    """
    seen: list[int] = []
    depth: dict[int, int] = {}
    order: dict[int, int] = {}
    inv = 0
    height = 0
    for t_i, v in enumerate(perm):
        pos = bisect_left(seen, v)
        inv += len(seen) - pos
        pred = seen[pos - 1] if pos else None
        succ = seen[pos] if pos < len(seen) else None
        if pred is None and succ is None:
            d = 0
        elif pred is None:
            d = depth[succ] + 1
        elif succ is None:
            d = depth[pred] + 1
        else:
            parent = pred if order[pred] > order[succ] else succ
            d = depth[parent] + 1
        depth[v] = d
        order[v] = t_i
        height = max(height, d)
        insort(seen, v)
    return inv, height


def _find_comparisons(perm: np.ndarray, k: int) -> int:
    """Comparison count of Find(k, sigma) with first-element pivots."""
    arr = perm
    comparisons = 0
    while len(arr) > 1:
        p = arr[0]
        comparisons += len(arr) - 1
        less = arr[arr < p]
        if k <= len(less):
            arr = less
        elif k == len(less) + 1:
            break
        else:
            k -= len(less) + 1
            arr = arr[arr > p]
    return comparisons


def sim_permutation_stats(
    n: int,
    trials: int = 10**4,
    rng=0,
    c_records: float = 3.0,
    c_bst: float = 9.943483,
    alpha: float = 0.05,
) -> ExperimentReport:
    """Uniform permutations of {1..n}: inversion count, record count, BST
    height under sequential insertion, and Find comparison count for a
    uniformly random rank.

    The headline exceed count is "at least c_records log n records"; all
    bounds here hide constants, so the verdict is asymptotic-info.
    """
    t0 = time.perf_counter()
    if n < 1:
        raise ValueError("need n >= 1")
    logn = math.log2(n) if n > 1 else 1.0
    rec_threshold = c_records * logn
    bst_threshold = c_bst * logn
    inv_threshold = alpha * n * n - n + 2
    spec = _spec(rng)
    params = {"n": n, "c_records": c_records, "c_bst": c_bst, "alpha": alpha}

    def worker(_, g):
        perm = g.permutation(n) + 1
        records = int((np.maximum.accumulate(perm) == perm).sum())
        inv, height = _bst_stats(perm.tolist())
        k = int(g.integers(1, n + 1))
        comps = _find_comparisons(perm, k)
        return inv, records, height, comps

    results = run_trials(worker, trials, spec)
    rec_exceed = sum(1 for r in results if r[1] >= rec_threshold)
    bound = bounds.records_tail(n, c_records) if c_records > 2 and n >= 4 else None
    extras = {
        "records_threshold": rec_threshold,
        "bst_threshold": bst_threshold,
        "bst_exceed": sum(1 for r in results if r[2] > bst_threshold),
        "bst_height_max": max(r[2] for r in results),
        "inversions_threshold": inv_threshold,
        "inversions_low_count": sum(1 for r in results if r[0] <= inv_threshold),
        "inversions_bound_prob": bounds.inversions_tail(n, alpha).probability
        if 0 < alpha < 1 / E**2 and n >= 2
        else None,
        "find_mean_ratio": sum(r[3] for r in results) / trials / n,
        "find_max_ratio": max(r[3] for r in results) / n,
        "mean_inversions": sum(r[0] for r in results) / trials,
        "mean_records": sum(r[1] for r in results) / trials,
    }
    return _report("permutation-stats", params, trials, spec.master_seed,
                   rec_exceed, bound, extras, t0)


# ---------------------------------------------------------------------------
# G(n, p): Ramsey-type clique/IS frequencies, and triangles.


def _adjacency_bits(g: np.random.Generator, n: int) -> str:
    e = math.comb(n, 2)
    return "".join("1" if b else "0" for b in g.integers(0, 2, size=e))


def sim_gnp(
    n: int,
    mode: str,
    params: dict | None = None,
    trials: int | None = None,
    rng=0,
) -> ExperimentReport:
    """mode="ramsey": frequency of a clique or independent set of size t in
    G(n, 1/2) (n <= 24; exhaustive over all graphs when trials=None, n <= 5).

    mode="triangles": frequency of a triangle in G(n, c/n), against the
    exact upper bound Pr <= c^3.
    """
    t0 = time.perf_counter()
    params = dict(params or {})
    if mode == "ramsey":
        if n > 24:
            raise ValueError("ramsey mode requires n <= 24")
        s = float(params.get("s", 2.0))
        bound = bounds.ramsey_threshold(n, s)
        t = int(params.get("t", bound.threshold))
        rparams = {"n": n, "mode": mode, "t": t, "s": s}
        e = math.comb(n, 2)
        if trials is None:
            if n > 5:
                raise ValueError("exhaustive ramsey mode requires n <= 5")
            exceed = 0
            for graph in range(1 << e):
                bits = format(graph, f"0{e}b")
                if find_clique_or_is(bits, n, t) is not None:
                    exceed += 1
            extras = {"mode": "exhaustive",
                      "exact_prob": str(Fraction(exceed, 1 << e))}
            return _report("gnp-ramsey", rparams, 1 << e, None, exceed,
                           bound, extras, t0, exact=True)
        spec = _spec(rng)

        def worker(_, g):
            return find_clique_or_is(_adjacency_bits(g, n), n, t) is not None

        hits = run_trials(worker, trials, spec)
        return _report("gnp-ramsey", rparams, trials, spec.master_seed,
                       sum(hits), bound, {"mode": "monte-carlo"}, t0)

    if mode == "triangles":
        c = float(params.get("c", 0.2))
        if trials is None:
            raise ValueError("triangles mode is Monte Carlo only")
        bound = bounds.triangle_bounds(n, c)
        p = c / n
        e = math.comb(n, 2)
        pairs = list(combinations(range(n), 2))
        spec = _spec(rng)

        def worker(_, g):
            count = g.binomial(e, p)
            idx = g.choice(e, size=count, replace=False)
            adj: dict[int, set[int]] = {}
            edges = []
            for i in idx:
                u, v = pairs[i]
                adj.setdefault(u, set()).add(v)
                adj.setdefault(v, set()).add(u)
                edges.append((u, v))
            return any(adj[u] & adj[v] for u, v in edges)

        hits = run_trials(worker, trials, spec)
        extras = {"p": p, "lower_no_triangle": bound.params["lower_no_triangle"]}
        return _report("gnp-triangles", {"n": n, "mode": mode, "c": c},
                       trials, spec.master_seed, sum(hits), bound, extras, t0)

    raise ValueError(f"unknown mode {mode!r}; expected 'ramsey' or 'triangles'")


# ---------------------------------------------------------------------------
# Torus percolation.


class _BudgetExhausted(Exception):
    pass


def _torus_edges(r: int) -> list[tuple[int, int]]:
    edges = []
    for i in range(r):
        for j in range(r):
            v = i * r + j
            edges.append((v, i * r + (j + 1) % r))
            edges.append((v, ((i + 1) % r) * r + j))
    return edges


def _two_core(adj: dict[int, set[int]]) -> dict[int, set[int]]:
    adj = {v: set(ns) for v, ns in adj.items()}
    queue = [v for v, ns in adj.items() if len(ns) < 2]
    while queue:
        v = queue.pop()
        if v not in adj:
            continue
        for w in adj.pop(v):
            ns = adj.get(w)
            if ns is not None:
                ns.discard(v)
                if len(ns) < 2:
                    queue.append(w)
    return adj


def _has_long_cycle(adj: dict[int, set[int]], min_len: float, budget: int) -> bool:
    """Search the 2-core for a simple cycle of length >= min_len; raises
    _BudgetExhausted when the node budget runs out (inconclusive)."""
    core = _two_core(adj)
    remaining = [budget]
    on_path: set[int] = set()

    def dfs(start: int, v: int, depth: int) -> bool:
        remaining[0] -= 1
        if remaining[0] <= 0:
            raise _BudgetExhausted
        for w in core[v]:
            if w == start and depth >= 3 and depth >= min_len:
                return True
            if w not in on_path and w > start:  # cycles keyed to min vertex
                on_path.add(w)
                if dfs(start, w, depth + 1):
                    return True
                on_path.discard(w)
        return False

    for start in core:
        on_path.clear()
        on_path.add(start)
        if dfs(start, start, 1):
            return True
    return False


def sim_percolation(
    root_n: int,
    p: float,
    max_len: float | None = None,
    trials: int = 10**3,
    rng=0,
    s: float = 4.0,
    node_budget: int = 200000,
) -> ExperimentReport:
    """Keep each edge of the root_n x root_n torus grid independently with
    probability p; look for a simple cycle of length >= L and record the two
    largest component sizes.

    L is max_len when given, otherwise the percolation_cycle_tail threshold
    at savings s (which needs p < 1/3).  Cycle search exhausting its budget
    counts as inconclusive, never as absence.
    """
    t0 = time.perf_counter()
    if root_n < 3:
        raise ValueError("need root_n >= 3")
    n = root_n * root_n
    bound = bounds.percolation_cycle_tail(n, p, s) if 0 < p < 1 / 3 else None
    if max_len is None:
        if bound is None:
            raise ValueError("max_len is required when p >= 1/3")
        max_len = bound.threshold
    edges = _torus_edges(root_n)
    spec = _spec(rng)
    params = {"root_n": root_n, "n": n, "p": p, "min_cycle_len": max_len, "s": s}

    def worker(_, g):
        keep = g.random(len(edges)) < p
        adj: dict[int, set[int]] = {}
        uf = _UnionFind()
        for (u, v), k in zip(edges, keep):
            if k:
                adj.setdefault(u, set()).add(v)
                adj.setdefault(v, set()).add(u)
                uf.add_edge(u, v)
        sizes = sorted((vv for vv, _ in uf.components()), reverse=True)
        largest = sizes[0] if sizes else 0
        second = sizes[1] if len(sizes) > 1 else 0
        try:
            found = _has_long_cycle(adj, max_len, node_budget)
            return found, False, largest, second
        except _BudgetExhausted:
            return False, True, largest, second

    results = run_trials(worker, trials, spec)
    exceed = sum(1 for r in results if r[0])
    inconclusive = sum(1 for r in results if r[1])
    extras = {
        "inconclusive": inconclusive,
        "largest_component_mean": sum(r[2] for r in results) / trials,
        "second_component_mean": sum(r[3] for r in results) / trials,
        "second_component_max": max(r[3] for r in results),
        "log2_sq_n": math.log2(n) ** 2,
    }
    return _report("percolation", params, trials, spec.master_seed,
                   exceed, bound, extras, t0)


# ---------------------------------------------------------------------------
# Moser's solver at scale.


def sim_moser(
    k: int, m: int, r: int, trials: int = 100, rng=0, s: float = 30.0
) -> ExperimentReport:
    """Per trial: draw a bounded-overlap formula, run the resampling solver,
    verify the returned assignment independently, and compare the fix count
    against the moser_tail threshold."""
    t0 = time.perf_counter()
    if not bounds.moser_degree_valid(k, r):
        raise ValueError(f"need r < 2^(k-3); got k={k}, r={r}")
    bound = bounds.moser_tail(m, s)
    spec = _spec(rng)
    params = {"k": k, "m": m, "r": r, "s": s}

    def worker(_, g):
        phi = gen_bounded_overlap_cnf(k, m, r, g)
        assignment, fix_count, stats = moser_solve(phi, g)
        if not phi.satisfied(assignment):
            raise AssertionError("solver returned a non-satisfying assignment")
        return fix_count, stats.max_depth

    results = run_trials(worker, trials, spec)
    exceed = sum(1 for r_ in results if r_[0] >= bound.threshold)
    extras = {
        "max_fix_count": max(r_[0] for r_ in results),
        "mean_fix_count": sum(r_[0] for r_ in results) / trials,
        "max_depth": max(r_[1] for r_ in results),
        "all_satisfying": True,
    }
    return _report("moser", params, trials, spec.master_seed,
                   exceed, bound, extras, t0)
