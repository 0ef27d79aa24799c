"""Exact evolution of a shuffle on a small group.

Distributions are dense vectors over the canonical group order.  In exact
mode they hold integer numerators over a shared denominator, so repeated
convolution never loses precision; in float mode they are ``float64`` arrays
and the convolution runs through the compiled kernel.
"""
from __future__ import annotations

import csv
import io
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from . import _backend
from .config import LIMITS, CapExceeded
from .group_core import GroupIndex
from .shuffles import ShuffleSpec, support

__all__ = [
    "DenseDistribution",
    "delta_identity",
    "uniform",
    "from_spec",
    "step",
    "evolve",
    "tv_distance",
    "sep_distance",
    "distance_curve",
    "mixing_time",
    "transition_matrix",
    "brute_force_spectrum",
    "deduplicate",
    "is_reversible",
    "curve_csv",
]


class DenseDistribution:
    """A probability vector indexed by ``group``'s canonical order."""

    __slots__ = ("group", "num", "den", "values")

    def __init__(self, group: GroupIndex, *, num=None, den: int | None = None, values=None) -> None:
        self.group = group
        if values is not None:
            self.values = np.asarray(values, dtype=np.float64)
            self.num = None
            self.den = None
        else:
            self.num = np.asarray(num, dtype=object)
            self.den = int(den)
            self.values = None
        if self.size != group.size:
            raise ValueError("distribution length does not match the group")

    @property
    def exact(self) -> bool:
        return self.num is not None

    @property
    def size(self) -> int:
        return len(self.num) if self.num is not None else len(self.values)

    def probabilities(self) -> list:
        if self.exact:
            return [Fraction(int(a), self.den) for a in self.num]
        return [float(v) for v in self.values]

    def as_float(self) -> np.ndarray:
        if self.exact:
            return np.array([int(a) / self.den for a in self.num], dtype=np.float64)
        return self.values

    def to_float(self) -> "DenseDistribution":
        return DenseDistribution(self.group, values=self.as_float())

    def __getitem__(self, g):
        i = self.group.index(g)
        if self.exact:
            return Fraction(int(self.num[i]), self.den)
        return float(self.values[i])

    def total(self):
        if self.exact:
            return Fraction(int(sum(self.num)), self.den)
        return float(self.values.sum())

    def _reduced(self) -> "DenseDistribution":
        g = self.den
        for a in self.num:
            g = gcd(g, int(a))
            if g == 1:
                return self
        return DenseDistribution(self.group, num=self.num // g, den=self.den // g)

    def __repr__(self) -> str:
        mode = "exact" if self.exact else "float"
        return f"DenseDistribution({self.group.kind}, n={self.group.n}, {mode})"


def _group_of(group_or_spec) -> GroupIndex:
    if isinstance(group_or_spec, ShuffleSpec):
        return group_or_spec.group()
    return group_or_spec


def delta_identity(group_or_spec, exact: bool = True) -> DenseDistribution:
    group = _group_of(group_or_spec)
    i = group.index(group.identity())
    if exact:
        num = np.zeros(group.size, dtype=object)
        num[:] = 0
        num[i] = 1
        return DenseDistribution(group, num=num, den=1)
    v = np.zeros(group.size)
    v[i] = 1.0
    return DenseDistribution(group, values=v)


def uniform(group_or_spec, exact: bool = True) -> DenseDistribution:
    group = _group_of(group_or_spec)
    if exact:
        num = np.empty(group.size, dtype=object)
        num[:] = 1
        return DenseDistribution(group, num=num, den=group.size)
    return DenseDistribution(group, values=np.full(group.size, 1.0 / group.size))


class _Operator:
    """Cached left-multiplication tables and weights for one spec."""

    _cache: dict = {}

    def __init__(self, spec: ShuffleSpec) -> None:
        group = spec.group()
        supp = support(spec)
        self.group = group
        self.exact = spec.exact
        self.table = np.array(group.left_table([g for g, _ in supp]), dtype=np.int64)
        self.table = np.ascontiguousarray(self.table)
        self.probs = np.array([float(p) for _, p in supp], dtype=np.float64)
        if self.exact:
            fr = [Fraction(p) for _, p in supp]
            self.den = lcm(*(f.denominator for f in fr)) if fr else 1
            self.weights = [int(f * self.den) for f in fr]

    @classmethod
    def of(cls, spec: ShuffleSpec) -> "_Operator":
        op = cls._cache.get(spec)
        if op is None:
            op = cls(spec)
            cls._cache[spec] = op
        return op


def from_spec(spec: ShuffleSpec, exact: bool | None = None) -> DenseDistribution:
    """The one-step distribution P itself."""
    return step(delta_identity(spec, exact=spec.exact if exact is None else exact), spec)


def step(d: DenseDistribution, spec: ShuffleSpec) -> DenseDistribution:
    """One convolution step: ``(P * d)(g) = sum_h P(g h^-1) d(h)``."""
    op = _Operator.of(spec)
    if d.group is not op.group:
        if (d.group.kind, d.group.n) != (op.group.kind, op.group.n):
            raise ValueError("distribution and shuffle live on different groups")
    if d.exact and op.exact:
        out = np.empty(d.size, dtype=object)
        out[:] = 0
        for row, w in zip(op.table, op.weights):
            out[row] += w * d.num
        return DenseDistribution(d.group, num=out, den=d.den * op.den)._reduced()
    values = np.ascontiguousarray(d.as_float())
    return DenseDistribution(d.group, values=_backend.convolve_float(values, op.table, op.probs))


def evolve(spec: ShuffleSpec, t_max: int, exact: bool | None = None) -> Iterable[tuple[int, DenseDistribution]]:
    """Yield ``(t, P^t)`` for t = 0..t_max, starting from the identity."""
    exact = spec.exact if exact is None else exact
    d = delta_identity(spec, exact=exact)
    yield 0, d
    for t in range(1, t_max + 1):
        d = step(d, spec)
        yield t, d


def _check_pair(mu: DenseDistribution, nu: DenseDistribution) -> None:
    if (mu.group.kind, mu.group.n) != (nu.group.kind, nu.group.n):
        raise ValueError("distributions live on different groups")


def tv_distance(mu: DenseDistribution, nu: DenseDistribution, exact: bool = False):
    """Half the l1 distance.  ``exact=True`` returns a Fraction when possible."""
    _check_pair(mu, nu)
    if exact and mu.exact and nu.exact:
        den = lcm(mu.den, nu.den)
        a, b = den // mu.den, den // nu.den
        total = sum(abs(int(x) * a - int(y) * b) for x, y in zip(mu.num, nu.num))
        return Fraction(total, 2 * den)
    return 0.5 * float(np.abs(mu.as_float() - nu.as_float()).sum())


def sep_distance(mu: DenseDistribution, pi: DenseDistribution | None = None, exact: bool = False):
    """``max_h (1 - mu(h) / pi(h))`` with pi the uniform distribution."""
    if pi is not None:
        _check_pair(mu, pi)
        probs = pi.probabilities()
        if any(p != probs[0] for p in probs):
            raise ValueError("separation distance is taken against the uniform distribution")
    size = mu.group.size
    if exact and mu.exact:
        return 1 - Fraction(int(min(mu.num)) * size, mu.den)
    return float(1.0 - size * float(mu.as_float().min()))


def distance_curve(spec: ShuffleSpec, t_max: int, exact: bool | None = None, exact_values: bool = False):
    """Rows ``(t, d_tv(t), d_sep(t))`` for t = 0..t_max from the identity."""
    pi = uniform(spec, exact=True)
    rows = []
    for t, d in evolve(spec, t_max, exact):
        rows.append((t, tv_distance(d, pi, exact=exact_values), sep_distance(d, exact=exact_values)))
    return rows


def mixing_time(spec: ShuffleSpec, eps: float, distance: str = "tv", t_max: int = 1000, exact: bool | None = None):
    """Smallest t <= t_max with d(t) <= eps, or None."""
    if distance not in ("tv", "sep"):
        raise ValueError("distance must be 'tv' or 'sep'")
    pi = uniform(spec, exact=True)
    for t, d in evolve(spec, t_max, exact):
        if distance == "tv":
            value = tv_distance(d, pi, exact=d.exact)
        else:
            value = sep_distance(d, exact=d.exact)
        if value <= eps:
            return t
    return None


def transition_matrix(spec: ShuffleSpec, exact: bool = False, cap: int | None = None):
    """Row g, column h holds P(h g^-1)."""
    op = _Operator.of(spec)
    size = op.group.size
    limit = LIMITS.dense_spectrum if cap is None else cap
    if size > limit:
        raise CapExceeded(f"group of order {size} exceeds dense cap {limit}")
    rows = np.arange(size)
    if exact:
        if not op.exact:
            raise ValueError("spec has non-rational weights")
        m = [[Fraction(0)] * size for _ in range(size)]
        fr = [Fraction(w, op.den) for w in op.weights]
        for row, p in zip(op.table, fr):
            for g in range(size):
                m[g][row[g]] += p
        return m
    m = np.zeros((size, size))
    for row, p in zip(op.table, op.probs):
        m[rows, row] += p
    return m


def is_reversible(spec: ShuffleSpec) -> bool:
    """pmf(g) == pmf(g^-1) for every element."""
    group = spec.group()
    probs = dict(support(spec))
    return all(probs.get(group.inverse(g), 0) == p for g, p in probs.items())


def brute_force_spectrum(spec: ShuffleSpec, cap: int | None = None) -> np.ndarray:
    """All eigenvalues of the (symmetric) transition matrix, descending."""
    if not is_reversible(spec):
        raise ValueError(f"{spec} is not reversible; its spectrum need not be real")
    m = transition_matrix(spec, cap=cap)
    eig = np.linalg.eigvalsh(m)
    return eig[::-1].copy()


def deduplicate(values: Sequence[float], tol: float = 1e-9) -> list[tuple[float, int]]:
    """Group a descending multiset into ``(value, multiplicity)`` pairs."""
    out: list[tuple[float, int]] = []
    for v in sorted(values, reverse=True):
        if out and abs(out[-1][0] - v) <= tol:
            out[-1] = (out[-1][0], out[-1][1] + 1)
        else:
            out.append((float(v), 1))
    return out


def curve_csv(rows) -> str:
    """CSV of distance rows; exact rows gain ``p/q`` columns next to the floats."""
    rows = list(rows)
    exact = any(isinstance(x, Fraction) for row in rows for x in row[1:])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["t", "d_tv", "d_sep"]
    if exact:
        header += ["d_tv_exact", "d_sep_exact"]
    w.writerow(header)
    for t, tv, sep in rows:
        line = [t, repr(float(tv)), repr(float(sep))]
        if exact:
            line += [str(Fraction(tv)), str(Fraction(sep))]
        w.writerow(line)
    return buf.getvalue()
