"""Closed-form eigenvalue catalogs indexed by partitions and tableaux.

Every formula returns an exact ``Fraction`` when the weights are rational.
A catalog lists ``(index, eigenvalue, multiplicity)`` triples whose
multiplicities add up to the group order.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Any, Callable, Sequence

from .group_core import BiPartition, Permutation, SignedPermutation
from .shuffles import ShuffleSpec, pmf
from .tableaux import (
    BiTableau,
    Tableau,
    as_bipartition,
    as_partition,
    bi_dimension,
    bipartitions_of,
    contains,
    desarrangement_count,
    diag_sum,
    dimension,
    dominates,
    enumerate_bi_syt,
    enumerate_syt,
    is_horizontal_strip,
    partitions_of,
    special_tableau,
    star_partition,
    tableau_transpose,
)

Number = Any

__all__ = [
    "EigenCatalog",
    "CatalogEntry",
    "Weight",
    "ost_eig",
    "biased_ost_eig",
    "rt_eig",
    "rtr_eig",
    "brt_eig",
    "bost_eig",
    "build_catalog",
    "group_order",
    "rtr_pairs",
    "eig_order_checks",
    "harmonic",
    "power_sum",
]


def harmonic(n: int) -> Fraction:
    return sum((Fraction(1, j) for j in range(1, n + 1)), Fraction(0))


def power_sum(n: int, alpha) -> Number:
    """N_alpha(n) = sum_{j<=n} j^alpha, exact for integer alpha."""
    return Weight.power(alpha).total(n)


class Weight:
    """A positive weight function w on positions 1, 2, ...."""

    def __init__(self, fn: Callable[[int], Number], label: str = "w") -> None:
        self.fn = fn
        self.label = label

    def __call__(self, j: int) -> Number:
        return self.fn(j)

    def total(self, n: int) -> Number:
        return sum((self.fn(j) for j in range(1, n + 1)), Fraction(0))

    @classmethod
    def power(cls, alpha) -> "Weight":
        if alpha is None:
            return cls(lambda j: Fraction(1), "1")
        if isinstance(alpha, float) and alpha.is_integer():
            alpha = int(alpha)
        if isinstance(alpha, int):
            return cls(lambda j: Fraction(j) ** alpha, f"j^{alpha}")
        a = float(alpha)
        return cls(lambda j: float(j) ** a, f"j^{a}")

    @classmethod
    def coerce(cls, weight) -> "Weight":
        """Accept None (w = 1), an exponent, a spec, a table or a callable."""
        if weight is None:
            return cls.power(None)
        if isinstance(weight, Weight):
            return weight
        if isinstance(weight, ShuffleSpec):
            return cls(weight.weight, str(weight))
        if isinstance(weight, (int, float, Fraction)):
            return cls.power(weight)
        if callable(weight):
            return cls(weight)
        table = tuple(weight)
        return cls(lambda j: table[j - 1], "table")


def _filling_sum(t: Tableau, w: Weight, shift: int) -> Number:
    total = Fraction(0)
    for i, j, v in t.cells():
        total += (j - i + shift) * w(v) / v
    return total


def ost_eig(t: Tableau, n: int | None = None) -> Fraction:
    """(1/n) * sum over boxes of (j - i + 1) / T(i, j)."""
    n = t.n if n is None else n
    if n == 0:
        return Fraction(0)
    return _filling_sum(t, Weight.power(None), 1) / n


def biased_ost_eig(t: Tableau, weight=None, n: int | None = None) -> Number:
    """(1/N_w) * sum over boxes of (j - i + 1) w(T(i, j)) / T(i, j)."""
    w = Weight.coerce(weight)
    n = t.n if n is None else n
    return _filling_sum(t, w, 1) / w.total(n)


def rt_eig(lam: Sequence[int], n: int | None = None) -> Fraction:
    lam = as_partition(lam)
    n = sum(lam) if n is None else n
    if sum(lam) != n:
        raise ValueError("partition size must equal n")
    return Fraction(n + 2 * diag_sum(lam), n * n)


def rtr_eig(lam: Sequence[int], mu: Sequence[int]) -> Fraction:
    lam, mu = as_partition(lam), as_partition(mu)
    if not contains(lam, mu) or not is_horizontal_strip(lam, mu):
        raise ValueError(f"{lam}/{mu} is not a horizontal strip")
    n = sum(lam)
    m = sum(mu)
    return Fraction(comb(n + 1, 2) - comb(m + 1, 2) + diag_sum(lam) - diag_sum(mu), n * n)


def brt_eig(lam, n: int | None = None) -> Fraction:
    lam = as_bipartition(lam)
    n = lam.size if n is None else n
    if lam.size != n:
        raise ValueError("bi-partition size must equal n")
    num = 2 * sum(lam.first) + 4 * diag_sum(lam.first) + 4 * diag_sum(lam.second)
    return Fraction(num, 2 * n * n)


def bost_eig(t: BiTableau, weight=None, n: int | None = None) -> Number:
    w = Weight.coerce(weight)
    n = t.n if n is None else n
    return (_filling_sum(t.first, w, 1) + _filling_sum(t.second, w, 0)) / w.total(n)


@dataclass(frozen=True)
class CatalogEntry:
    index: Any
    eigenvalue: Number
    multiplicity: int

    def index_str(self) -> str:
        idx = self.index
        if isinstance(idx, BiPartition):
            return f"{_pstr(idx.first)}/{_pstr(idx.second)}"
        if isinstance(idx, tuple) and len(idx) == 2 and all(isinstance(x, tuple) for x in idx):
            return f"{_pstr(idx[0])}/{_pstr(idx[1])}"
        if isinstance(idx, tuple):
            return _pstr(idx)
        return str(idx)


    def shape_str(self) -> str:
        idx = self.index
        if isinstance(idx, (Tableau, BiTableau)):
            shape = idx.shape
        elif isinstance(idx, tuple) and len(idx) == 2 and all(isinstance(x, tuple) for x in idx):
            shape = idx[0]  # random-to-random pair (lam, mu)
        else:
            shape = idx
        if isinstance(shape, BiPartition):
            return f"{_pstr(shape.first)}/{_pstr(shape.second)}"
        return _pstr(shape) if isinstance(shape, tuple) else str(shape)


def _pstr(p: tuple) -> str:
    return "(" + ",".join(map(str, p)) + ")"


def _identity(spec: ShuffleSpec):
    if spec.group_kind == "symmetric":
        return Permutation.identity(spec.n)
    if spec.group_kind == "hyperoctahedral":
        return SignedPermutation.identity(spec.n)
    return 0


@dataclass
class EigenCatalog:
    spec: ShuffleSpec
    entries: list[CatalogEntry]
    group_order: int
    notes: list[str] = field(default_factory=list)

    def total_multiplicity(self) -> int:
        return sum(e.multiplicity for e in self.entries)

    def trace(self) -> Number:
        return sum((e.multiplicity * e.eigenvalue for e in self.entries), Fraction(0))

    def expected_trace(self) -> Number:
        return self.group_order * pmf(self.spec, _identity(self.spec))

    def multiset(self) -> list[float]:
        out = []
        for e in self.entries:
            out.extend([float(e.eigenvalue)] * e.multiplicity)
        return sorted(out, reverse=True)

    def count_ok(self) -> bool:
        return self.total_multiplicity() == self.group_order

    def trace_ok(self) -> bool:
        if self.spec.exact:
            return self.trace() == self.expected_trace()
        return abs(float(self.trace()) - float(self.expected_trace())) <= 1e-9 * self.group_order

    def to_csv(self, exact: bool = True) -> str:
        """Columns index, shape, eigenvalue, [exact], multiplicity."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "shape", "eigenvalue"] + (["exact"] if exact else []) + ["multiplicity"])
        for e in self.entries:
            row = [e.index_str(), e.shape_str(), repr(float(e.eigenvalue))]
            if exact:
                row.append(str(e.eigenvalue) if isinstance(e.eigenvalue, Fraction) else "")
            w.writerow(row + [e.multiplicity])
        return buf.getvalue()


def rtr_pairs(n: int) -> list[tuple[tuple, tuple]]:
    """Pairs (lam, mu) with lam a partition of n and lam/mu a horizontal strip."""
    out = []
    for lam in partitions_of(n):
        for m in range(n + 1):
            for mu in partitions_of(m):
                if contains(lam, mu) and is_horizontal_strip(lam, mu):
                    out.append((lam, mu))
    return out


def group_order(spec: ShuffleSpec) -> int:
    n = spec.n
    kind = spec.group_kind
    if kind == "symmetric":
        return factorial(n)
    if kind == "hyperoctahedral":
        return 2 ** n * factorial(n)
    return n


def build_catalog(spec: ShuffleSpec) -> EigenCatalog:
    """Eigenvalues of the shuffle from the tableau formulas."""
    n = spec.n
    kind = spec.kind
    order = group_order(spec)
    entries: list[CatalogEntry] = []
    notes: list[str] = []
    if kind in ("OST", "OST_biased"):
        w = Weight.coerce(spec) if kind == "OST_biased" else Weight.power(None)
        for lam in partitions_of(n):
            d = dimension(lam)
            for t in enumerate_syt(lam):
                entries.append(CatalogEntry(t, biased_ost_eig(t, w, n), d))
    elif kind == "RT":
        for lam in partitions_of(n):
            entries.append(CatalogEntry(lam, rt_eig(lam, n), dimension(lam) ** 2))
    elif kind == "RTR":
        for lam, mu in rtr_pairs(n):
            mult = dimension(lam) * desarrangement_count(mu)
            if mult:
                entries.append(CatalogEntry((lam, mu), rtr_eig(lam, mu), mult))
        found = sum(e.multiplicity for e in entries)
        deficit = order - found
        notes.append(f"strip pairs account for {found} of {order} eigenvalues; remainder {deficit}")
        if deficit > 0:
            entries.append(CatalogEntry("kernel", Fraction(0), deficit))
        elif deficit < 0:
            notes.append("strip pairs over-count the group order")
    elif kind == "B_RT":
        for lam in bipartitions_of(n):
            entries.append(CatalogEntry(lam, brt_eig(lam, n), bi_dimension(lam) ** 2))
    elif kind in ("B_OST", "B_OST_biased"):
        w = Weight.coerce(spec) if kind == "B_OST_biased" else Weight.power(None)
        for lam in bipartitions_of(n):
            d = bi_dimension(lam)
            for t in enumerate_bi_syt(lam):
                entries.append(CatalogEntry(t, bost_eig(t, w, n), d))
    else:
        raise ValueError(f"no eigenvalue formula for {kind}")
    return EigenCatalog(spec, entries, order, notes)


def _as_weight_with_alpha(weight) -> tuple[Weight, float | None]:
    if isinstance(weight, ShuffleSpec):
        return Weight.coerce(weight), (None if weight.alpha is None else float(weight.alpha))
    if weight is None:
        return Weight.power(None), 0.0
    if isinstance(weight, (int, float, Fraction)):
        return Weight.power(weight), float(weight)
    return Weight.coerce(weight), None


def eig_order_checks(n: int, weight=None, shapes: Sequence[Sequence[int]] | None = None) -> dict:
    """Check the tableau ordering lemmas for every partition of n.

    Returns ``{name: {"passed": bool, "checked": int, "witnesses": [...]}}``.
    The ordering used depends on the exponent: for alpha <= 1 the row
    filling is largest and the column filling smallest, for alpha >= 1 the
    order flips.  Dominance monotonicity is checked only for alpha <= 1 and
    the diagonal-filling bounds only for alpha >= 1.
    """
    w, alpha = _as_weight_with_alpha(weight)
    lams = [as_partition(s) for s in shapes] if shapes is not None else partitions_of(n)
    total = w.total(n)
    report: dict[str, dict] = {}

    def record(name: str, ok: bool, witness) -> None:
        r = report.setdefault(name, {"passed": True, "checked": 0, "witnesses": []})
        r["checked"] += 1
        if not ok:
            r["passed"] = False
            if len(r["witnesses"]) < 10:
                r["witnesses"].append(witness)

    def eig(t: Tableau):
        return _filling_sum(t, w, 1) / total

    two_n = 2 * sum((w(j) / j for j in range(1, n + 1)), Fraction(0)) / total
    row = {lam: eig(special_tableau(lam, "row")) for lam in lams}
    col = {lam: eig(special_tableau(lam, "column")) for lam in lams}
    for lam in lams:
        for t in enumerate_syt(lam):
            e = eig(t)
            if alpha is None or alpha <= 1:
                record("column<=T<=row", col[lam] <= e <= row[lam], (lam, str(t)))
            if alpha is None or alpha >= 1:
                record("row<=T<=column", row[lam] <= e <= col[lam], (lam, str(t)))
            record("transpose_sum", e + eig(tableau_transpose(t)) == two_n, (lam, str(t)))
    if alpha is None or alpha <= 1:
        for lam in lams:
            for mu in lams:
                if lam != mu and dominates(lam, mu):
                    record("dominance_row", row[lam] >= row[mu], (lam, mu))
                    record("dominance_column", col[lam] >= col[mu], (lam, mu))
    if alpha is None or alpha >= 1:
        for lam in lams:
            k = n - lam[0]
            star = star_partition(n, k)
            bound = eig(special_tableau(star, "diagonal"))
            record("column<=star_diagonal", col[lam] <= bound, (lam, star))
    for k in range(1, n - 1):
        star = star_partition(n, k)
        diag = special_tableau(star, "diagonal")
        for i, j, v in diag.cells():
            record("box_index", n * (j - i + 1) <= (n - k) * v, (star, (i, j)))
    return report
