"""Monte Carlo for large decks: stopping times, coupon processes, features.

Replicas are processed in fixed-size chunks.  Chunk ``c`` draws from the
Philox stream ``(seed, c)``, so results depend only on the seed and the
replica count, never on the number of worker threads.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import permutations
from math import ceil
from typing import Any, Callable, Sequence

import numpy as np
from scipy import stats

from . import _backend
from .bounds import biased_time_scale, fixed_point_window
from .config import thread_count
from .shuffles import ShuffleSpec, make_rng

__all__ = [
    "CHUNK",
    "Estimate",
    "estimate",
    "simulate_sst",
    "sst_states",
    "sst_uniformity",
    "sst_tail_check",
    "coupon_rate",
    "coupon_process",
    "coupon_hitting_times",
    "coupon_tail_check",
    "simulate_decks",
    "collected_counts",
    "coupon_domination_check",
    "empirical_tv_feature",
    "summary_stats",
    "run_manifest",
]

CHUNK = 1 << 14

SST_KINDS = ("OST", "OST_biased", "B_OST", "TTR")
DECK_KINDS = ("OST", "OST_biased", "RT", "B_OST", "B_OST_biased", "B_RT")


# ---------------------------------------------------------------------------
# chunked execution


def _chunks(replicas: int) -> list[tuple[int, int]]:
    out = []
    start = 0
    stream = 0
    while start < replicas:
        size = min(CHUNK, replicas - start)
        out.append((stream, size))
        start += size
        stream += 1
    return out


def _run_chunks(fn: Callable[[np.random.Generator, int], Any], replicas: int, seed: int,
                threads: int | None = None) -> list:
    """``fn(rng, size)`` per chunk, results in chunk order."""
    jobs = _chunks(replicas)
    workers = thread_count(threads)

    def one(job):
        stream, size = job
        return fn(make_rng(seed, stream), size)

    if workers <= 1 or len(jobs) <= 1:
        return [one(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, jobs))


# ---------------------------------------------------------------------------
# estimates


@dataclass(frozen=True)
class Estimate:
    """A binomial proportion with its standard error and Wilson 95% interval."""

    hits: int
    trials: int
    p: float
    sigma: float
    ci_low: float
    ci_high: float

    def as_row(self) -> list:
        return [self.hits, self.trials, repr(self.p), repr(self.sigma), repr(self.ci_low), repr(self.ci_high)]


def estimate(hits: int, trials: int) -> Estimate:
    p = hits / trials
    ci = stats.binomtest(int(hits), int(trials)).proportion_ci(0.95, method="wilson")
    return Estimate(int(hits), int(trials), p, math.sqrt(p * (1 - p) / trials), float(ci.low), float(ci.high))


def _null_sigma(bound: float, trials: int) -> float:
    b = min(max(bound, 0.0), 1.0)
    return math.sqrt(b * (1 - b) / trials)


def summary_stats(samples: np.ndarray, quantiles: Sequence[float] = (0.05, 0.25, 0.5, 0.75, 0.95)) -> dict:
    x = np.asarray(samples, dtype=np.float64)
    out = {"count": int(x.size), "mean": float(x.mean()), "variance": float(x.var(ddof=1)) if x.size > 1 else 0.0}
    for q in quantiles:
        out[f"q{q:g}"] = float(np.quantile(x, q))
    return out


# ---------------------------------------------------------------------------
# hand draws


def _right_probs(spec: ShuffleSpec) -> np.ndarray | None:
    if spec.kind in ("OST_biased", "B_OST_biased"):
        w = np.array([float(spec.weight(j)) for j in range(1, spec.n + 1)])
        return w / w.sum()
    return None


def _hands(spec: ShuffleSpec, rng: np.random.Generator, size: tuple[int, int]):
    """0-based (right, left, flip) arrays for ``size = (replicas, steps)``."""
    n = spec.n
    kind = spec.kind
    if kind == "RT" or kind == "B_RT":
        right = rng.integers(0, n, size=size, dtype=np.int64)
        left = rng.integers(0, n, size=size, dtype=np.int64)
    else:
        probs = _right_probs(spec)
        if probs is None:
            right = rng.integers(0, n, size=size, dtype=np.int64)
        else:
            right = rng.choice(n, size=size, p=probs).astype(np.int64)
        left = np.floor(rng.random(size) * (right + 1)).astype(np.int64)
        np.minimum(left, right, out=left)
    if kind.startswith("B_"):
        flip = (rng.random(size) < 0.5).astype(np.uint8)
    else:
        flip = np.zeros(size, dtype=np.uint8)
    return right, left, flip


def _fresh_decks(spec: ShuffleSpec, size: int):
    n = spec.n
    decks = np.tile(np.arange(1, n + 1, dtype=np.int64), (size, 1))
    faces = np.ones((size, n if spec.kind.startswith("B_") else 0), dtype=np.int8)
    return decks, faces


# ---------------------------------------------------------------------------
# strong stationary times


def _check_sst(spec: ShuffleSpec) -> None:
    if spec.kind not in SST_KINDS:
        raise ValueError(f"no strong stationary time for {spec.kind}")
    if spec.kind == "OST_biased" and (spec.alpha is None or float(spec.alpha) > 0):
        raise ValueError("the right-hand stopping time is strong stationary only for alpha <= 0")


def _geometric_cover(n: int, rng: np.random.Generator, size: int) -> np.ndarray:
    """Coupon collector with equal probabilities: sum of Geom(k/n), k = 1..n."""
    p = np.arange(1, n + 1) / n
    return rng.geometric(p, size=(size, n)).sum(axis=1).astype(np.int64)


def _stepped_cover(spec: ShuffleSpec, rng: np.random.Generator, size: int, block: int | None = None) -> np.ndarray:
    """First time the right hand has chosen every position, drawing step by step."""
    n = spec.n
    probs = _right_probs(spec)
    block = block or max(64, 2 * n)
    seen = np.zeros((size, n), dtype=np.uint8)
    remaining = np.full(size, n, dtype=np.int64)
    hit = np.zeros(size, dtype=np.int64)
    t0 = 0
    while True:
        active = np.flatnonzero(remaining > 0)
        if active.size == 0:
            return hit
        if probs is None:
            draws = rng.integers(0, n, size=(active.size, block), dtype=np.int64)
        else:
            draws = rng.choice(n, size=(active.size, block), p=probs).astype(np.int64)
        sub_seen = np.ascontiguousarray(seen[active])
        sub_rem = np.ascontiguousarray(remaining[active])
        sub_hit = np.ascontiguousarray(hit[active])
        _backend.cover_update(sub_seen, sub_rem, sub_hit, draws, t0)
        seen[active] = sub_seen
        remaining[active] = sub_rem
        hit[active] = sub_hit
        t0 += block


def _ttr_geometric(n: int, rng: np.random.Generator, size: int) -> np.ndarray:
    """1 + sum_{i=1}^{n-1} Geom(i/n): the original bottom card rising, then inserted."""
    if n == 1:
        return np.ones(size, dtype=np.int64)
    p = np.arange(1, n) / n
    return rng.geometric(p, size=(size, n - 1)).sum(axis=1).astype(np.int64) + 1


def _ttr_stepped(n: int, rng: np.random.Generator, size: int) -> np.ndarray:
    """Track the original bottom card's position under top-to-random insertions."""
    pos = np.full(size, n, dtype=np.int64)
    hit = np.zeros(size, dtype=np.int64)
    active = np.arange(size)
    t = 0
    while active.size:
        t += 1
        k = rng.integers(1, n + 1, size=active.size)
        at_top = pos[active] == 1
        hit[active[at_top]] = t
        move = ~at_top & (k >= pos[active])
        pos[active[move]] -= 1
        active = active[~at_top]
    return hit


def simulate_sst(spec: ShuffleSpec, replicas: int = 10_000, seed: int = 0, method: str = "auto",
                 threads: int | None = None) -> np.ndarray:
    """Samples of the strong stationary time T.

    One-sided shuffles: the first time the right hand has chosen every
    position.  Top-to-random: the first insertion of the original bottom
    card.  ``method`` is ``geometric`` (sum of holding times; equal
    probabilities only), ``steps`` (draw by draw) or ``auto``.
    """
    _check_sst(spec)
    n = spec.n
    if method not in ("auto", "geometric", "steps"):
        raise ValueError("method must be auto, geometric or steps")
    weighted = _right_probs(spec) is not None
    if method == "geometric" and weighted:
        raise ValueError("holding-time sampling needs equal right-hand probabilities")
    use_geo = method == "geometric" or (method == "auto" and not weighted)
    if spec.kind == "TTR":
        fn = (lambda rng, size: _ttr_geometric(n, rng, size)) if use_geo else (lambda rng, size: _ttr_stepped(n, rng, size))
    elif use_geo:
        fn = lambda rng, size: _geometric_cover(n, rng, size)  # noqa: E731
    else:
        fn = lambda rng, size: _stepped_cover(spec, rng, size)  # noqa: E731
    return np.concatenate(_run_chunks(fn, replicas, seed, threads))


def _deck_code(decks: np.ndarray, faces: np.ndarray) -> np.ndarray:
    """Injective integer code of each row's state (deck plus faces)."""
    n = decks.shape[1]
    code = np.zeros(decks.shape[0], dtype=np.int64)
    for k in range(n):
        code = code * n + (decks[:, k] - 1)
    if faces.shape[1]:
        for k in range(n):
            code = code * 2 + (faces[:, k] < 0)
    return code


def _all_codes(spec: ShuffleSpec) -> np.ndarray:
    n = spec.n
    perms = np.array(list(permutations(range(1, n + 1))), dtype=np.int64)
    if not spec.kind.startswith("B_"):
        return np.sort(_deck_code(perms, np.zeros((len(perms), 0), dtype=np.int8)))
    signs = np.array(list(np.ndindex(*(2,) * n)), dtype=np.int8)
    decks = np.repeat(perms, len(signs), axis=0)
    faces = np.tile(1 - 2 * signs, (len(perms), 1)).astype(np.int8)
    return np.sort(_deck_code(decks, faces))


def _ttr_apply(decks: np.ndarray, rows: np.ndarray, k: np.ndarray) -> None:
    """Insert the top card (column 0) of each row at 1-based position k."""
    n = decks.shape[1]
    for pos in range(1, n + 1):
        sel = rows[k == pos]
        if sel.size == 0:
            continue
        idx = list(range(1, pos)) + [0] + list(range(pos, n))
        decks[sel] = decks[sel][:, idx]


def _sst_state_chunk(spec: ShuffleSpec, rng: np.random.Generator, size: int):
    n = spec.n
    decks, faces = _fresh_decks(spec, size)
    if spec.kind == "TTR":
        pos = np.full(size, n, dtype=np.int64)
        hit = np.zeros(size, dtype=np.int64)
        active = np.arange(size)
        t = 0
        while active.size:
            t += 1
            k = rng.integers(1, n + 1, size=active.size)
            at_top = pos[active] == 1
            move = ~at_top & (k >= pos[active])
            _ttr_apply(decks, active, k)
            hit[active[at_top]] = t
            pos[active[move]] -= 1
            active = active[~at_top]
        return hit, _deck_code(decks, faces)
    block = max(32, 4 * n)
    seen = np.zeros((size, n), dtype=np.uint8)
    remaining = np.full(size, n, dtype=np.int64)
    hit = np.zeros(size, dtype=np.int64)
    t0 = 0
    while True:
        active = np.flatnonzero(remaining > 0)
        if active.size == 0:
            return hit, _deck_code(decks, faces)
        right, left, flip = _hands(spec, rng, (active.size, block))
        sub_seen = np.ascontiguousarray(seen[active])
        sub_rem = np.ascontiguousarray(remaining[active])
        sub_hit = np.ascontiguousarray(hit[active])
        _backend.cover_update(sub_seen, sub_rem, sub_hit, right, t0)
        # steps after the stopping time become no-ops
        done_at = np.where(sub_hit > 0, sub_hit - t0, block)
        late = np.arange(block)[None, :] >= done_at[:, None]
        left = np.where(late, right, left)
        flip = np.where(late, 0, flip).astype(np.uint8)
        sub_decks = np.ascontiguousarray(decks[active])
        sub_faces = np.ascontiguousarray(faces[active])
        _backend.apply_swaps(sub_decks, sub_faces, np.ascontiguousarray(right), np.ascontiguousarray(left),
                             np.ascontiguousarray(flip))
        decks[active] = sub_decks
        faces[active] = sub_faces
        seen[active] = sub_seen
        remaining[active] = sub_rem
        hit[active] = sub_hit
        t0 += block


def sst_states(spec: ShuffleSpec, replicas: int, seed: int = 0, threads: int | None = None):
    """``(T, state code)`` per replica, the state read at the stopping time."""
    _check_sst(spec)
    parts = _run_chunks(lambda rng, size: _sst_state_chunk(spec, rng, size), replicas, seed, threads)
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


@dataclass(frozen=True)
class ChiSquare:
    statistic: float
    pvalue: float
    categories: int
    replicas: int
    alpha: float

    @property
    def passed(self) -> bool:
        return self.pvalue >= self.alpha


def sst_uniformity(spec: ShuffleSpec, replicas: int = 1_000_000, seed: int = 0, alpha: float = 0.001,
                   condition: Callable[[np.ndarray], np.ndarray] | None = None,
                   threads: int | None = None) -> ChiSquare:
    """Chi-square test that the state at T is uniform over the whole group.

    ``condition`` optionally keeps only replicas whose T satisfies it.
    """
    times, codes = sst_states(spec, replicas, seed, threads)
    if condition is not None:
        codes = codes[condition(times)]
    universe = _all_codes(spec)
    idx = np.searchsorted(universe, codes)
    if np.any(universe[np.minimum(idx, len(universe) - 1)] != codes):
        raise AssertionError("simulated state outside the group")
    counts = np.bincount(idx, minlength=len(universe))
    res = stats.chisquare(counts)
    return ChiSquare(float(res.statistic), float(res.pvalue), len(universe), int(codes.size), alpha)


@dataclass(frozen=True)
class TailRow:
    c: float
    threshold: float
    estimate: Estimate
    bound: float
    slack: float

    @property
    def ok(self) -> bool:
        return self.estimate.p <= self.bound + self.slack


def sst_tail_check(spec: ShuffleSpec, c_grid: Sequence[float] = (0.5, 1.0, 2.0), replicas: int = 100_000,
                   seed: int = 0, method: str = "auto", threads: int | None = None,
                   times: np.ndarray | None = None) -> list[TailRow]:
    """``P(T > t_n (log n + c)) <= e^-c`` plus three binomial standard errors.

    ``t_n`` is n for the unbiased shuffles and the biased time scale
    otherwise.  The standard error is taken at the bound.
    """
    n = spec.n
    if times is None:
        times = simulate_sst(spec, replicas, seed, method, threads)
    scale = biased_time_scale(n, spec.alpha) if spec.kind == "OST_biased" else float(n)
    rows = []
    for c in c_grid:
        threshold = scale * (math.log(n) + c)
        est = estimate(int(np.count_nonzero(times > threshold)), int(times.size))
        bound = math.exp(-c)
        rows.append(TailRow(float(c), threshold, est, bound, 3 * _null_sigma(bound, times.size)))
    return rows


# ---------------------------------------------------------------------------
# coupon process


def coupon_rate(n: int, m: float, alpha=None) -> float:
    """Per-uncollected-card rate r: the +1 step has probability r (n/m - M)."""
    if alpha is None or alpha == 0:
        return 1.0 / n
    a = float(alpha)
    if a < 1:
        total = math.fsum(j ** a for j in range(1, n + 1))
        return (m / (m - 1)) ** (1 - a) * n ** a / total
    return math.fsum(j ** (a - 1) for j in range(1, n + 1)) / math.fsum(j ** a for j in range(1, n + 1))


def _coupon_setup(n: int, m: float, alpha) -> tuple[float, int, float]:
    if m < 2:
        raise ValueError("m must be at least 2")
    r = coupon_rate(n, m, alpha)
    target = ceil(n / m)
    start_move = r * (n / m) * m / (m - 1)
    if start_move > 1 + 1e-12:
        raise ValueError(f"step probability {start_move:.4g} exceeds 1 for n={n}, m={m}, alpha={alpha}")
    return r, target, n / m


def coupon_process(n: int, m: float, alpha=None, t_max: int = 1000,
                   rng: np.random.Generator | None = None, seed: int = 0) -> np.ndarray:
    """One trajectory ``M^0..M^t_max`` of the counting process, absorbed at ceil(n/m)."""
    r, target, cap = _coupon_setup(n, m, alpha)
    rng = make_rng(seed) if rng is None else rng
    u = rng.random(t_max)
    path = np.zeros(t_max + 1, dtype=np.int64)
    cur = 0
    for t in range(t_max):
        if cur < target:
            p1 = r * (cap - cur)
            p2 = p1 / (m - 1)
            if u[t] < p2:
                cur = min(cur + 2, target)
            elif u[t] < p2 + p1:
                cur += 1
        path[t + 1] = cur
    return path


def coupon_paths(n: int, m: float, alpha, t_max: int, replicas: int, seed: int = 0) -> np.ndarray:
    """``replicas`` trajectories as a ``(replicas, t_max + 1)`` array."""
    r, target, cap = _coupon_setup(n, m, alpha)

    def chunk(rng, size):
        out = np.zeros((size, t_max + 1), dtype=np.int64)
        cur = np.zeros(size, dtype=np.int64)
        for t in range(t_max):
            u = rng.random(size)
            live = cur < target
            p1 = r * (cap - cur)
            p2 = p1 / (m - 1)
            two = live & (u < p2)
            one = live & ~two & (u < p2 + p1)
            cur = np.minimum(cur + 2 * two + one, target)
            out[:, t + 1] = cur
        return out

    return np.concatenate(_run_chunks(chunk, replicas, seed))


def coupon_hitting_times(n: int, m: float, alpha=None, replicas: int = 100_000, seed: int = 0,
                         threads: int | None = None) -> np.ndarray:
    """Absorption times of the counting process via geometric holding times.

    In state M the process moves with probability ``q = r (n/m - M) m/(m-1)``
    and the move is +2 with probability ``1/m``.
    """
    r, target, cap = _coupon_setup(n, m, alpha)

    def chunk(rng, size):
        cur = np.zeros(size, dtype=np.int64)
        total = np.zeros(size, dtype=np.int64)
        active = np.arange(size)
        while active.size:
            q = r * (cap - cur[active]) * m / (m - 1)
            total[active] += rng.geometric(np.clip(q, 1e-300, 1.0))
            jump = 1 + (rng.random(active.size) < 1.0 / m)
            cur[active] = np.minimum(cur[active] + jump, target)
            active = active[cur[active] < target]
        return total

    return np.concatenate(_run_chunks(chunk, replicas, seed, threads))


def coupon_tail_check(n: int, c: float = 4.0, replicas: int = 100_000, seed: int = 0, alpha=None,
                      m: float | None = None, threads: int | None = None) -> TailRow:
    """``P(hit <= n log n - n log log n - c n) <= pi^2 / (6 (c-2)^2)`` plus 3 sigma."""
    if c <= 2:
        raise ValueError("c must exceed 2")
    m = math.log(n) if m is None else m
    times = coupon_hitting_times(n, m, alpha, replicas, seed, threads)
    threshold = n * math.log(n) - n * math.log(math.log(n)) - c * n
    est = estimate(int(np.count_nonzero(times <= threshold)), int(times.size))
    bound = math.pi ** 2 / (6 * (c - 2) ** 2)
    return TailRow(float(c), threshold, est, bound, 3 * _null_sigma(bound, times.size))


# ---------------------------------------------------------------------------
# full decks


def simulate_decks(spec: ShuffleSpec, t: int, replicas: int, seed: int = 0, threads: int | None = None):
    """Decks (and faces) after t steps; position k of a row holds that card."""
    if spec.kind not in DECK_KINDS:
        raise ValueError(f"deck simulation supports {DECK_KINDS}")

    def chunk(rng, size):
        decks, faces = _fresh_decks(spec, size)
        step = max(1, min(t, 256))
        done = 0
        while done < t:
            k = min(step, t - done)
            right, left, flip = _hands(spec, rng, (size, k))
            _backend.apply_swaps(decks, faces, right, left, flip)
            done += k
        return decks, faces

    parts = _run_chunks(chunk, replicas, seed, threads)
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def _window_fixed(decks: np.ndarray, faces: np.ndarray, window: range) -> np.ndarray:
    cols = np.array([p - 1 for p in window])
    fixed = decks[:, cols] == np.array(list(window))[None, :]
    if faces.shape[1]:
        fixed &= faces[:, cols] > 0
    return fixed.any(axis=1)


@dataclass(frozen=True)
class FeatureEstimate:
    t: int
    m: float
    window: tuple[int, int]
    estimate: Estimate


def empirical_tv_feature(spec: ShuffleSpec, t: int, replicas: int = 100_000, m: float = 2.0, seed: int = 0,
                         where: str = "top", uniform: bool = False,
                         threads: int | None = None) -> FeatureEstimate:
    """Estimate ``P^t(F)`` for F = {at least one fixed point in the window V_n}.

    With ``uniform=True`` the decks are uniform samples instead, estimating
    ``pi(F)``.
    """
    n = spec.n
    window = fixed_point_window(n, m, where)
    if uniform:
        signed = spec.kind.startswith("B_")

        def chunk(rng, size):
            decks = rng.permuted(np.tile(np.arange(1, n + 1, dtype=np.int64), (size, 1)), axis=1)
            faces = (1 - 2 * rng.integers(0, 2, size=(size, n))).astype(np.int8) if signed else np.ones((size, 0), np.int8)
            return _window_fixed(decks, faces, window)

        hits = np.concatenate(_run_chunks(chunk, replicas, seed, threads))
    else:
        decks, faces = simulate_decks(spec, t, replicas, seed, threads)
        hits = _window_fixed(decks, faces, window)
    return FeatureEstimate(t, m, (window.start, window.stop - 1), estimate(int(hits.sum()), replicas))


def collected_counts(spec: ShuffleSpec, m: float, t_max: int, replicas: int, seed: int = 0) -> np.ndarray:
    """Cards initially in V_n touched by either hand, after t = 0..t_max steps."""
    n = spec.n
    window = fixed_point_window(n, m)
    in_window = np.zeros(n + 1, dtype=bool)
    in_window[list(window)] = True

    def chunk(rng, size):
        decks, faces = _fresh_decks(spec, size)
        touched = np.zeros((size, n + 1), dtype=bool)
        out = np.zeros((size, t_max + 1), dtype=np.int64)
        rows = np.arange(size)
        right, left, flip = _hands(spec, rng, (size, max(t_max, 1)))
        for t in range(t_max):
            touched[rows, decks[rows, right[:, t]]] = True
            touched[rows, decks[rows, left[:, t]]] = True
            _backend.apply_swaps(decks, faces, np.ascontiguousarray(right[:, t:t + 1]),
                                 np.ascontiguousarray(left[:, t:t + 1]), np.ascontiguousarray(flip[:, t:t + 1]))
            out[:, t + 1] = (touched & in_window[None, :]).sum(axis=1)
        return out

    return np.concatenate(_run_chunks(chunk, replicas, seed))


@dataclass
class DominationReport:
    n: int
    m: float
    t_max: int
    replicas: int
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def coupon_domination_check(n: int, m: float = 2.0, t_max: int = 40, replicas: int = 20_000,
                            seed: int = 0) -> DominationReport:
    """Compare tails ``P(M^t >= k)`` and ``P(collected^t >= k)`` for every t and k.

    Both processes run from the same seed.  The counting process must
    dominate within three standard errors of the difference.
    """
    spec = ShuffleSpec("OST", n)
    real = collected_counts(spec, m, t_max, replicas, seed)
    coupon = coupon_paths(n, m, None, t_max, replicas, seed)
    target = ceil(n / m)
    report = DominationReport(n, m, t_max, replicas)
    for t in range(t_max + 1):
        for k in range(1, target + 1):
            pm = float(np.mean(coupon[:, t] >= k))
            pc = float(np.mean(real[:, t] >= k))
            sigma = math.sqrt((pm * (1 - pm) + pc * (1 - pc)) / replicas)
            if pc > pm + 3 * sigma:
                report.violations.append({"t": t, "k": k, "coupon": pm, "collected": pc, "sigma": sigma})
    return report


# ---------------------------------------------------------------------------
# manifests


MANIFEST_KINDS = ("sst_tail", "sst_uniformity", "coupon_tail", "feature", "coupon_domination")


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def run_manifest(manifest: dict | str, threads: int | None = None) -> str:
    """Run one experiment description and return its CSV.

    Keys: ``experiment`` (one of MANIFEST_KINDS), ``shuffle`` (spec JSON
    object), ``seed``, ``replicas`` and the experiment's own grid
    (``c_grid``, ``t_grid``, ``c``, ``m``, ``n``, ``alpha``, ``method``).
    """
    if isinstance(manifest, str):
        manifest = json.loads(manifest)
    kind = manifest.get("experiment")
    if kind not in MANIFEST_KINDS:
        raise ValueError(f"experiment must be one of {MANIFEST_KINDS}")
    seed = int(manifest.get("seed", 0))
    replicas = int(manifest.get("replicas", 10_000))
    spec = ShuffleSpec.from_json(manifest["shuffle"]) if "shuffle" in manifest else None
    rows: list[list] = []
    if kind == "sst_tail":
        times = simulate_sst(spec, replicas, seed, manifest.get("method", "auto"), threads)
        stats_ = summary_stats(times)
        rows.append(["statistic", "value"])
        rows.extend([k, repr(v) if isinstance(v, float) else v] for k, v in stats_.items())
        rows.append([])
        rows.append(["c", "threshold", "hits", "trials", "p", "sigma", "ci_low", "ci_high", "bound", "ok"])
        for r in sst_tail_check(spec, manifest.get("c_grid", (0.5, 1.0, 2.0)), times=times):
            rows.append([r.c, repr(r.threshold)] + r.estimate.as_row() + [repr(r.bound), r.ok])
    elif kind == "sst_uniformity":
        res = sst_uniformity(spec, replicas, seed, float(manifest.get("alpha", 0.001)), threads=threads)
        rows.append(["statistic", "pvalue", "categories", "replicas", "passed"])
        rows.append([repr(res.statistic), repr(res.pvalue), res.categories, res.replicas, res.passed])
    elif kind == "coupon_tail":
        n = int(manifest["n"])
        m = manifest.get("m")
        rows.append(["c", "threshold", "hits", "trials", "p", "sigma", "ci_low", "ci_high", "bound", "ok"])
        for c in manifest.get("c_grid", [manifest.get("c", 4.0)]):
            r = coupon_tail_check(n, float(c), replicas, seed, manifest.get("alpha"), m, threads)
            rows.append([r.c, repr(r.threshold)] + r.estimate.as_row() + [repr(r.bound), r.ok])
    elif kind == "feature":
        m = float(manifest.get("m", 2.0))
        rows.append(["t", "window_low", "window_high", "hits", "trials", "p", "sigma", "ci_low", "ci_high"])
        for t in manifest.get("t_grid", [0]):
            f = empirical_tv_feature(spec, int(t), replicas, m, seed, manifest.get("where", "top"), threads=threads)
            rows.append([t, f.window[0], f.window[1]] + f.estimate.as_row())
    else:
        rep = coupon_domination_check(int(manifest["n"]), float(manifest.get("m", 2.0)),
                                      int(manifest.get("t_max", 40)), replicas, seed)
        rows.append(["n", "m", "t_max", "replicas", "violations", "passed"])
        rows.append([rep.n, rep.m, rep.t_max, rep.replicas, len(rep.violations), rep.passed])
    return _csv(rows)


def manifest_echo(manifest: dict) -> str:
    """Canonical JSON of a manifest (sorted keys), for provenance files."""
    return json.dumps(manifest, sort_keys=True, indent=2) + "\n"


def tail_rows_dict(rows: list[TailRow]) -> list[dict]:
    return [dict(asdict(r), ok=r.ok) for r in rows]
