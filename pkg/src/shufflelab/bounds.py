"""Spectral upper bounds and event-based lower bounds on mixing.

Upper bounds come from the reversible l2 inequality
``4 |P^t - pi|_TV^2 <= sum_{nontrivial} beta^(2t)``; lower bounds from a
single event ``F`` via ``|P^t(F) - pi(F)| <= |P^t - pi|_TV``.  Powers are
taken in log space so that ``t ~ n log n`` does not underflow.
"""
from __future__ import annotations

import csv
import io
import math
from fractions import Fraction
from functools import lru_cache
from math import ceil, comb, factorial
from typing import Iterable, Sequence

from .config import LIMITS, CapExceeded
from .exact_engine import evolve, tv_distance, uniform
from .shuffles import ShuffleSpec
from .spectra import EigenCatalog, build_catalog, ost_eig, power_sum
from .tableaux import diag_sum, dimension, partitions_of, special_tableau

__all__ = [
    "log_power_sum",
    "l2_sum",
    "l2_upper_bound",
    "relaxed_ost_sum",
    "relaxed_ost_bound",
    "exact_tableau_sum",
    "dimension_bound_check",
    "diag_bound_check",
    "first_row_bound_check",
    "fixed_point_window",
    "fixed_point_event",
    "fixed_point_lower_bound",
    "biased_time_scale",
    "bound_rows",
    "bounds_csv",
]


def log_power_sum(terms: Iterable[tuple[float, float]], t: float) -> float:
    """``log sum_k mult_k |x_k|^(2t)`` with a max shift and ``math.fsum``.

    Zero bases contribute only at t == 0 (``0^0 = 1``).
    """
    logs = []
    for mult, x in terms:
        if mult <= 0:
            continue
        x = abs(float(x))
        if x == 0.0:
            if t == 0:
                logs.append(math.log(mult))
            continue
        logs.append(math.log(mult) + 2.0 * t * math.log(x))
    if not logs:
        return -math.inf
    top = max(logs)
    return top + math.log(math.fsum(math.exp(v - top) for v in logs))


def _nontrivial(catalog: EigenCatalog) -> list[tuple[float, float]]:
    """Catalog as (multiplicity, eigenvalue) with one copy of the eigenvalue 1 removed."""
    terms = [(float(e.multiplicity), e.eigenvalue) for e in catalog.entries]
    for k, (m, x) in enumerate(terms):
        if x == 1:
            terms[k] = (m - 1, x)
            return terms
    raise ValueError("catalog has no trivial eigenvalue 1")


def l2_sum(catalog: EigenCatalog, t: float) -> float:
    """``sum_{nontrivial} mult * eig^(2t)``."""
    return math.exp(log_power_sum(_nontrivial(catalog), t))


def l2_upper_bound(catalog: EigenCatalog, t: float) -> float:
    """Total-variation bound ``(1/2) sqrt(sum_{nontrivial} mult * eig^(2t))``."""
    return 0.5 * math.exp(0.5 * log_power_sum(_nontrivial(catalog), t))


@lru_cache(maxsize=64)
def _relaxed_terms(n: int) -> tuple[tuple[float, float], ...]:
    if n > LIMITS.partitions:
        raise CapExceeded(f"n={n} exceeds the partition cap {LIMITS.partitions}")
    terms: list[tuple[float, float]] = [(1.0, float(2 * sum(Fraction(1, j) for j in range(1, n + 1)) / n - 1))]
    for lam in partitions_of(n):
        if lam == (n,):
            continue
        e = ost_eig(special_tableau(lam, "row"), n)
        if e >= 0:
            terms.append((2.0 * dimension(lam) ** 2, float(e)))
    return tuple(terms)


def relaxed_ost_sum(n: int, t: float) -> float:
    """``eig(T_(1^n))^(2t) + 2 sum d^2 eig(T_lam^row)^(2t)`` over lam with eig >= 0."""
    return math.exp(log_power_sum(_relaxed_terms(n), t))


def relaxed_ost_bound(n: int, t: float) -> float:
    """Total-variation bound ``(1/2) sqrt(relaxed_ost_sum)`` for the unbiased OST."""
    return 0.5 * math.exp(0.5 * log_power_sum(_relaxed_terms(n), t))


def exact_tableau_sum(n: int, t: float) -> float:
    """The unrelaxed l2 sum for the unbiased OST, tableau by tableau."""
    return l2_sum(build_catalog(ShuffleSpec("OST", n)), t)


def dimension_bound_check(n: int, k: int) -> bool:
    """``sum_{lam_1 = n-k} d_lam^2 <= C(n,k)^2 k!``."""
    if n > LIMITS.partitions:
        raise CapExceeded(f"n={n} exceeds the partition cap {LIMITS.partitions}")
    lhs = sum(dimension(lam) ** 2 for lam in partitions_of(n) if lam[0] == n - k)
    return lhs <= comb(n, k) ** 2 * factorial(k)


def diag_bound_check(lam: Sequence[int]) -> bool:
    """Both upper bounds on ``2 Diag(lam)`` in terms of the first row."""
    lam = tuple(lam)
    n = sum(lam)
    l1 = lam[0] if lam else 0
    d2 = 2 * diag_sum(lam)
    ok = d2 <= (l1 - 1) * n
    if 2 * l1 >= n:
        ok = ok and d2 <= (n - 1) * n - 2 * (n - l1) * (l1 + 1)
    return ok


def first_row_bound_check(lam: Sequence[int]) -> bool:
    """Random-transposition eigenvalue against its first-row bounds."""
    lam = tuple(lam)
    n = sum(lam)
    l1 = lam[0]
    e = Fraction(n + 2 * diag_sum(lam), n * n)
    ok = e <= Fraction(l1, n)
    if 4 * l1 >= 3 * n:
        ok = ok and e <= 1 - Fraction(2 * (l1 + 1) * (n - l1), n * n)
    return ok


def fixed_point_window(n: int, m: float, where: str = "top") -> range:
    """Positions of the window V_n holding ``ceil(n/m)`` cards."""
    if m <= 1:
        raise ValueError("m must exceed 1")
    size = min(n, ceil(n / m))
    if where == "top":
        return range(n - size + 1, n + 1)
    if where == "bottom":
        return range(1, size + 1)
    raise ValueError("where must be 'top' or 'bottom'")


def fixed_point_event(spec: ShuffleSpec, m: float, where: str = "top") -> list[bool]:
    """Membership of each group element in F = {at least one fixed point in V_n}.

    For signed permutations a fixed point must also keep its face.
    """
    if spec.group_kind == "cyclic":
        raise ValueError("fixed-point events are defined for card shuffles only")
    window = list(fixed_point_window(spec.n, m, where))
    return [any(g(i) == i for i in window) for g in spec.group().elements]


def fixed_point_lower_bound(spec: ShuffleSpec, t: int | Sequence[int], m: float = 2.0,
                            where: str = "top", exact: bool | None = None):
    """``|P^t(F) - pi(F)|`` for the fixed-point event; one value or a list."""
    group = spec.group()
    if group.size > LIMITS.dense_spectrum:
        raise CapExceeded(f"group of order {group.size} exceeds cap {LIMITS.dense_spectrum}")
    mask = fixed_point_event(spec, m, where)
    exact = spec.exact if exact is None else exact
    pi_f = Fraction(sum(mask), group.size)
    grid = [t] if isinstance(t, int) else list(t)
    wanted = set(grid)
    out: dict[int, object] = {}
    for step, d in evolve(spec, max(grid), exact):
        if step in wanted:
            if d.exact:
                p = Fraction(sum(int(a) for a, f in zip(d.num, mask) if f), d.den)
                out[step] = abs(p - pi_f)
            else:
                p = float(d.values[mask].sum())
                out[step] = abs(p - float(pi_f))
    values = [out[s] for s in grid]
    return values[0] if isinstance(t, int) else values


def biased_time_scale(n: int, alpha) -> float:
    """``N_alpha(n) / n^alpha`` for alpha <= 1 and ``N_alpha / N_(alpha-1)`` above."""
    if n < 1:
        raise ValueError("n must be positive")
    if alpha is None:
        alpha = 0
    if isinstance(alpha, int) or (isinstance(alpha, Fraction) and alpha.denominator == 1):
        a = int(alpha)
        if a <= 1:
            return float(power_sum(n, a) / Fraction(n) ** a)
        return float(power_sum(n, a) / power_sum(n, a - 1))
    a = float(alpha)
    total = math.fsum(j ** a for j in range(1, n + 1))
    if a <= 1:
        return total / n ** a
    return total / math.fsum(j ** (a - 1) for j in range(1, n + 1))


def bound_rows(spec: ShuffleSpec, t_grid: Sequence[int], m: float = 2.0, with_exact: bool | None = None):
    """Rows ``(t, exact_tv, l2_bound, relaxed_bound, lower_bound)``; missing entries are None."""
    grid = sorted(set(int(t) for t in t_grid))
    catalog = build_catalog(spec)
    small = spec.group().size <= LIMITS.dense_spectrum
    if with_exact is None:
        with_exact = small
    exact_tv: dict[int, float] = {}
    lower: dict[int, float] = {}
    if with_exact and grid:
        pi = uniform(spec, exact=True)
        mask = fixed_point_event(spec, m)
        pi_f = sum(mask) / len(mask)
        wanted = set(grid)
        for step, d in evolve(spec, grid[-1], exact=False):
            if step in wanted:
                exact_tv[step] = tv_distance(d, pi)
                lower[step] = abs(float(d.values[mask].sum()) - pi_f)
    rows = []
    for t in grid:
        relaxed = relaxed_ost_bound(spec.n, t) if spec.kind == "OST" else None
        rows.append((t, exact_tv.get(t), l2_upper_bound(catalog, t), relaxed, lower.get(t)))
    return rows


def bounds_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "exact_tv", "l2_bound", "relaxed_bound", "lower_bound"])
    for row in rows:
        w.writerow([row[0]] + ["" if x is None else repr(float(x)) for x in row[1:]])
    return buf.getvalue()
