"""Partitions, bi-partitions and standard (bi-)tableaux.

Partitions are plain tuples of positive, non-increasing integers.  Rows and
columns are indexed from 1, so the box ``(i, j)`` has content ``j - i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterator, Sequence

from .config import LIMITS, CapExceeded
from .group_core import BiPartition

Partition = tuple[int, ...]

__all__ = [
    "Partition",
    "BiPartition",
    "Tableau",
    "StandardTableau",
    "BiTableau",
    "star_partition",
    "as_partition",
    "as_bipartition",
    "partitions_of",
    "bipartitions_of",
    "dominates",
    "bi_dominates",
    "transpose",
    "bi_transpose",
    "tableau_transpose",
    "diag_sum",
    "boxes",
    "enumerate_syt",
    "dimension",
    "enumerate_bi_syt",
    "bi_dimension",
    "is_horizontal_strip",
    "is_desarrangement",
    "desarrangement_count",
    "special_tableau",
    "add_box_children",
    "contains",
]


def as_partition(parts: Sequence[int]) -> Partition:
    """Normalise a sequence to a partition, dropping trailing zeros."""
    p = [int(x) for x in parts]
    while p and p[-1] == 0:
        p.pop()
    if any(x <= 0 for x in p) or any(a < b for a, b in zip(p, p[1:])):
        raise ValueError(f"not a partition: {tuple(parts)}")
    return tuple(p)


def as_bipartition(value) -> BiPartition:
    if isinstance(value, BiPartition):
        return value
    first, second = value
    return BiPartition(as_partition(first), as_partition(second))


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[Partition, ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_of(n: int) -> list[Partition]:
    """All partitions of n, largest first part first (reverse lexicographic)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return list(_partitions(n, n))


def bipartitions_of(n: int) -> list[BiPartition]:
    """All bi-partitions of n, ordered by decreasing size of the first component."""
    out = []
    for k in range(n, -1, -1):
        for a in partitions_of(k):
            for b in partitions_of(n - k):
                out.append(BiPartition(a, b))
    return out


def _prefix(p: Partition, length: int) -> list[int]:
    sums, s = [], 0
    for i in range(length):
        s += p[i] if i < len(p) else 0
        sums.append(s)
    return sums


def dominates(lam: Sequence[int], mu: Sequence[int]) -> bool:
    lam, mu = as_partition(lam), as_partition(mu)
    if sum(lam) != sum(mu):
        raise ValueError("dominance needs partitions of the same size")
    length = max(len(lam), len(mu))
    return all(a >= b for a, b in zip(_prefix(lam, length), _prefix(mu, length)))


def bi_dominates(lam, mu) -> bool:
    lam, mu = as_bipartition(lam), as_bipartition(mu)
    if lam.size != mu.size:
        raise ValueError("dominance needs bi-partitions of the same size")
    a, b = sum(lam.first), sum(mu.first)
    if a != b:
        return a > b
    return dominates(lam.first, mu.first) and dominates(lam.second, mu.second)


def transpose(lam: Sequence[int]) -> Partition:
    lam = as_partition(lam)
    if not lam:
        return ()
    return tuple(sum(1 for part in lam if part >= j) for j in range(1, lam[0] + 1))


def bi_transpose(lam) -> BiPartition:
    lam = as_bipartition(lam)
    return BiPartition(transpose(lam.second), transpose(lam.first))


def boxes(lam: Sequence[int]) -> Iterator[tuple[int, int]]:
    for i, part in enumerate(lam, start=1):
        for j in range(1, part + 1):
            yield i, j


def diag_sum(lam: Sequence[int]) -> int:
    return sum(j - i for i, j in boxes(as_partition(lam)))


def contains(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """True when the diagram of mu sits inside the diagram of lam."""
    if len(mu) > len(lam):
        return False
    return all(m <= l for m, l in zip(mu, lam))


@dataclass(frozen=True, slots=True)
class Tableau:
    """A filling of a Young diagram by distinct positive integers.

    No monotonicity is required; the diagonal-wise filling is of this kind.
    """

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(v) for v in r) for r in self.rows if len(r) > 0)
        object.__setattr__(self, "rows", rows)
        as_partition([len(r) for r in rows])
        vals = [v for r in rows for v in r]
        if len(set(vals)) != len(vals) or any(v <= 0 for v in vals):
            raise ValueError("tableau entries must be distinct positive integers")

    @property
    def shape(self) -> Partition:
        return tuple(len(r) for r in self.rows)

    @property
    def n(self) -> int:
        return sum(len(r) for r in self.rows)

    def values(self) -> list[int]:
        return [v for r in self.rows for v in r]

    def covers_range(self) -> bool:
        return sorted(self.values()) == list(range(1, self.n + 1))

    def __call__(self, i: int, j: int) -> int:
        return self.rows[i - 1][j - 1]

    def get(self, i: int, j: int) -> int | None:
        if 1 <= i <= len(self.rows) and 1 <= j <= len(self.rows[i - 1]):
            return self.rows[i - 1][j - 1]
        return None

    def cells(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(i, j, value)`` for every box."""
        for i, r in enumerate(self.rows, start=1):
            for j, v in enumerate(r, start=1):
                yield i, j, v

    def reading_word(self) -> tuple[int, ...]:
        return tuple(self.values())

    def path(self) -> list[int]:
        """Row indices in which boxes 1, 2, ..., n were added."""
        where = {v: i for i, _, v in self.cells()}
        return [where[v] for v in sorted(where)]

    def __str__(self) -> str:
        return "/".join(",".join(map(str, r)) for r in self.rows) or "()"


@dataclass(frozen=True, slots=True)
class StandardTableau(Tableau):
    """A tableau increasing along rows and down columns."""

    def __post_init__(self) -> None:
        Tableau.__post_init__(self)
        rows = self.rows
        if any(a >= b for r in rows for a, b in zip(r, r[1:])):
            raise ValueError("rows must increase")
        for upper, lower in zip(rows, rows[1:]):
            if any(lower[j] <= upper[j] for j in range(len(lower))):
                raise ValueError("columns must increase")


@dataclass(frozen=True, slots=True)
class BiTableau:
    first: StandardTableau
    second: StandardTableau

    def __post_init__(self) -> None:
        vals = self.first.values() + self.second.values()
        if sorted(vals) != list(range(1, len(vals) + 1)):
            raise ValueError("bi-tableau values must cover 1..n exactly once")

    @property
    def shape(self) -> BiPartition:
        return BiPartition(self.first.shape, self.second.shape)

    @property
    def n(self) -> int:
        return self.first.n + self.second.n

    def path(self) -> list[tuple[int, int]]:
        """``(component, row)`` for the boxes holding 1, 2, ..., n."""
        where = {v: (1, i) for i, _, v in self.first.cells()}
        where.update({v: (2, i) for i, _, v in self.second.cells()})
        return [where[v] for v in sorted(where)]

    def __str__(self) -> str:
        return f"[{self.first} | {self.second}]"


def tableau_transpose(t: StandardTableau) -> StandardTableau:
    shape = transpose(t.shape)
    rows = [[t(i, j) for i in range(1, shape[j - 1] + 1)] for j in range(1, len(shape) + 1)]
    return StandardTableau(tuple(tuple(r) for r in rows))


def add_box_children(shape) -> list:
    """Shapes one box larger.

    For a partition returns ``(row, child)`` pairs; for a bi-partition returns
    ``(row, component, child)`` triples.  Rows are 1-based.
    """
    if isinstance(shape, BiPartition):
        out = []
        for i, child in add_box_children(shape.first):
            out.append((i, 1, BiPartition(child, shape.second)))
        for i, child in add_box_children(shape.second):
            out.append((i, 2, BiPartition(shape.first, child)))
        return out
    lam = as_partition(shape)
    out = []
    for i in range(len(lam) + 1):
        cur = lam[i] if i < len(lam) else 0
        above = lam[i - 1] if i > 0 else None
        if above is None or cur < above:
            child = list(lam) + ([0] if i == len(lam) else [])
            child[i] += 1
            out.append((i + 1, tuple(child)))
    return out


def _removable_rows(lam: Partition) -> list[int]:
    return [i for i in range(len(lam)) if i == len(lam) - 1 or lam[i] > lam[i + 1]]


@lru_cache(maxsize=None)
def _dimension(lam: Partition) -> int:
    if sum(lam) <= 1:
        return 1
    total = 0
    for i in _removable_rows(lam):
        child = list(lam)
        child[i] -= 1
        total += _dimension(as_partition(child))
    return total


def dimension(lam: Sequence[int]) -> int:
    """Number of standard Young tableaux of shape lam (branching recursion)."""
    return _dimension(as_partition(lam))


def _check_cap(n: int, cap: int | None) -> None:
    limit = LIMITS.syt if cap is None else cap
    if n > limit:
        raise CapExceeded(f"tableau enumeration of size {n} exceeds cap {limit}")


def enumerate_syt(lam: Sequence[int], cap: int | None = None) -> list[StandardTableau]:
    """All standard Young tableaux of shape lam, sorted by row reading word."""
    lam = as_partition(lam)
    n = sum(lam)
    _check_cap(n, cap)
    rows: list[list[int]] = [[] for _ in lam]
    out: list[StandardTableau] = []

    def place(v: int) -> None:
        if v > n:
            out.append(StandardTableau(tuple(tuple(r) for r in rows)))
            return
        for i, part in enumerate(lam):
            length = len(rows[i])
            if length < part and (i == 0 or len(rows[i - 1]) > length):
                rows[i].append(v)
                place(v + 1)
                rows[i].pop()

    place(1)
    out.sort(key=lambda t: t.reading_word())
    return out


def _relabel(t: StandardTableau, labels: Sequence[int]) -> StandardTableau:
    return StandardTableau(tuple(tuple(labels[v - 1] for v in r) for r in t.rows))


def enumerate_bi_syt(lam, cap: int | None = None) -> list[BiTableau]:
    lam = as_bipartition(lam)
    n = lam.size
    _check_cap(n, cap)
    k = sum(lam.first)
    firsts = enumerate_syt(lam.first, cap=max(n, 0) if cap is None else cap)
    seconds = enumerate_syt(lam.second, cap=max(n, 0) if cap is None else cap)
    out = []
    for chosen in combinations(range(1, n + 1), k):
        rest = [v for v in range(1, n + 1) if v not in set(chosen)]
        for t1 in firsts:
            for t2 in seconds:
                out.append(BiTableau(_relabel(t1, chosen), _relabel(t2, rest)))
    return out


def bi_dimension(lam) -> int:
    lam = as_bipartition(lam)
    return comb(lam.size, sum(lam.first)) * dimension(lam.first) * dimension(lam.second)


def is_horizontal_strip(lam: Sequence[int], mu: Sequence[int]) -> bool:
    lam, mu = as_partition(lam), as_partition(mu)
    if not contains(lam, mu):
        raise ValueError(f"{mu} is not contained in {lam}")
    return all(lam[i + 1] <= (mu[i] if i < len(mu) else 0) for i in range(len(lam) - 1))


def is_desarrangement(t: StandardTableau) -> bool:
    second = t.get(1, 2)
    if second is None:
        return t.n % 2 == 0
    return second % 2 == 1


@lru_cache(maxsize=None)
def _desarrangement_count(lam: Partition) -> int:
    return sum(1 for t in enumerate_syt(lam, cap=max(sum(lam), LIMITS.syt)) if is_desarrangement(t))


def desarrangement_count(lam: Sequence[int]) -> int:
    return _desarrangement_count(as_partition(lam))


_KIND_ALIASES = {
    "row": "row", "row_wise": "row", "→": "row", "->": "row",
    "column": "column", "column_wise": "column", "↓": "column", "v": "column",
    "diagonal": "diagonal", "diagonal_wise": "diagonal", "↘": "diagonal", "\\": "diagonal",
}


def special_tableau(lam: Sequence[int], kind: str) -> Tableau:
    """Row-wise, column-wise or diagonal-wise filling of lam.

    The row and column fillings are standard.  The diagonal filling walks the
    diagonals in increasing content, each from top to bottom, and is in
    general not column-increasing, so it is returned as a plain ``Tableau``.
    """
    lam = as_partition(lam)
    try:
        kind = _KIND_ALIASES[kind]
    except KeyError:
        raise ValueError(f"unknown special tableau kind {kind!r}") from None
    cells = list(boxes(lam))
    if kind == "row":
        order = cells
    elif kind == "column":
        order = sorted(cells, key=lambda c: (c[1], c[0]))
    else:
        order = sorted(cells, key=lambda c: (c[1] - c[0], c[0]))
    rows = [[0] * part for part in lam]
    for v, (i, j) in enumerate(order, start=1):
        rows[i - 1][j - 1] = v
    cls = Tableau if kind == "diagonal" else StandardTableau
    return cls(tuple(tuple(r) for r in rows))


def star_partition(n: int, k: int) -> Partition:
    """As many rows of length n - k as fit, then the remainder."""
    if not 0 <= k < n:
        raise ValueError("need 0 <= k < n")
    width = n - k
    full, rest = divmod(n, width)
    return (width,) * full + ((rest,) if rest else ())
