"""Shuffle families as probability measures on S_n, B_n and Z_n.

A :class:`ShuffleSpec` names a family and a deck size.  Biased families carry
a weight, either an exponent ``alpha`` with ``w(j) = j**alpha`` or an explicit
table ``w(1), ..., w(n)``.  Integer exponents and rational tables give exact
``Fraction`` probabilities; anything else falls back to floats.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Any, Sequence

import numpy as np

from .group_core import (
    GroupIndex,
    Permutation,
    SignedPermutation,
    enumerate_group,
    inverse,
)

KINDS = (
    "RT", "TTR", "RTT", "RTR", "OST", "OST_biased",
    "B_RT", "B_OST", "B_OST_biased", "cyclic_simple", "cyclic_lazy",
)
BIASED = frozenset({"OST_biased", "B_OST_biased"})
SIGNED = frozenset({"B_RT", "B_OST", "B_OST_biased"})
CYCLIC = frozenset({"cyclic_simple", "cyclic_lazy"})
REVERSIBLE = frozenset({"RT", "RTR", "OST", "OST_biased", "B_RT", "B_OST", "B_OST_biased",
                        "cyclic_simple", "cyclic_lazy"})

Number = Any  # Fraction or float

__all__ = [
    "ShuffleSpec", "KINDS", "pmf", "support", "support_dict", "sample", "cyclic_walk_pmf",
    "algebra_scale", "algebra_element", "transposition", "move_card", "top_to_random_cycle",
    "make_rng", "group_kind",
]


def _as_weight(x) -> Number:
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return float(x)


@dataclass(frozen=True)
class ShuffleSpec:
    kind: str
    n: int
    alpha: float | int | None = None
    weights: tuple | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown shuffle kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("deck size must be at least 1")
        biased = self.kind in BIASED
        if biased and (self.alpha is None) == (self.weights is None):
            raise ValueError(f"{self.kind} needs exactly one of alpha or weights")
        if not biased and (self.alpha is not None or self.weights is not None):
            raise ValueError(f"{self.kind} takes no weight")
        if self.alpha is not None:
            a = self.alpha
            if isinstance(a, float) and a.is_integer():
                object.__setattr__(self, "alpha", int(a))
        if self.weights is not None:
            w = tuple(_as_weight(x) for x in self.weights)
            if len(w) != self.n:
                raise ValueError("weight table must have length n")
            if any(x <= 0 for x in w):
                raise ValueError("weights must be strictly positive")
            object.__setattr__(self, "weights", w)

    @property
    def exact(self) -> bool:
        """True when every probability is a rational number."""
        if self.alpha is not None:
            return isinstance(self.alpha, int)
        if self.weights is not None:
            return all(isinstance(x, Fraction) for x in self.weights)
        return True

    @property
    def group_kind(self) -> str:
        return group_kind(self.kind)

    @property
    def reversible(self) -> bool:
        return self.kind in REVERSIBLE

    def group(self) -> GroupIndex:
        return enumerate_group(self.n, self.group_kind)

    def weight(self, j: int) -> Number:
        """w(j); identically 1 for unbiased families."""
        if self.weights is not None:
            return self.weights[j - 1]
        if self.alpha is not None:
            if isinstance(self.alpha, int):
                return Fraction(j) ** self.alpha
            return float(j) ** float(self.alpha)
        return Fraction(1)

    def weight_total(self, n: int | None = None) -> Number:
        """N_w(n) = w(1) + ... + w(n)."""
        n = self.n if n is None else n
        return sum((self.weight(j) for j in range(1, n + 1)), Fraction(0))

    def with_n(self, n: int) -> "ShuffleSpec":
        if self.weights is not None:
            raise ValueError("cannot resize an explicit weight table")
        return ShuffleSpec(self.kind, n, self.alpha, None)

    def to_json(self) -> str:
        obj: dict[str, Any] = {"kind": self.kind, "n": self.n}
        if self.alpha is not None:
            obj["alpha"] = self.alpha
        if self.weights is not None:
            obj["weights"] = [str(x) if isinstance(x, Fraction) else x for x in self.weights]
        return json.dumps(obj, sort_keys=True)

    @classmethod
    def from_json(cls, text: str | dict) -> "ShuffleSpec":
        obj = json.loads(text) if isinstance(text, str) else dict(text)
        unknown = set(obj) - {"kind", "n", "alpha", "weights"}
        if unknown:
            raise ValueError(f"unknown shuffle fields: {sorted(unknown)}")
        weights = obj.get("weights")
        return cls(
            kind=obj["kind"],
            n=int(obj["n"]),
            alpha=obj.get("alpha"),
            weights=tuple(weights) if weights is not None else None,
        )

    def __str__(self) -> str:
        extra = ""
        if self.alpha is not None:
            extra = f", alpha={self.alpha}"
        elif self.weights is not None:
            extra = ", weights=" + ",".join(map(str, self.weights))
        return f"{self.kind}(n={self.n}{extra})"


def group_kind(kind: str) -> str:
    if kind in SIGNED:
        return "hyperoctahedral"
    if kind in CYCLIC:
        return "cyclic"
    return "symmetric"


def transposition(n: int, i: int, j: int) -> Permutation:
    if i == j:
        return Permutation.identity(n)
    return Permutation.from_cycles(n, (i, j))


def top_to_random_cycle(n: int, k: int) -> Permutation:
    """The cycle (k k-1 ... 1): the top card goes to position k."""
    return Permutation.from_cycles(n, tuple(range(k, 0, -1)))


def move_card(n: int, i: int, j: int) -> Permutation:
    """Take the card in position i and reinsert it at position j."""
    order = list(range(1, n + 1))
    card = order.pop(i - 1)
    order.insert(j - 1, card)
    imgs = [0] * n
    for pos, c in enumerate(order, start=1):
        imgs[c - 1] = pos
    return Permutation(tuple(imgs))


def _flip(n: int, flips: Sequence[int], eta: Permutation) -> SignedPermutation:
    return SignedPermutation.from_parts(flips, eta)


def _raw_support(spec: ShuffleSpec) -> dict:
    n = spec.n
    out: dict = {}

    def add(g, p) -> None:
        out[g] = out.get(g, 0) + p

    kind = spec.kind
    if kind in ("OST", "OST_biased"):
        total = spec.weight_total()
        for j in range(1, n + 1):
            p = spec.weight(j) / (total * j)
            for i in range(1, j + 1):
                add(transposition(n, i, j), p)
    elif kind == "RT":
        add(Permutation.identity(n), Fraction(1, n))
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                add(transposition(n, i, j), Fraction(2, n * n))
    elif kind == "TTR":
        for k in range(1, n + 1):
            add(top_to_random_cycle(n, k), Fraction(1, n))
    elif kind == "RTT":
        for k in range(1, n + 1):
            add(inverse(top_to_random_cycle(n, k)), Fraction(1, n))
    elif kind == "RTR":
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                add(move_card(n, i, j), Fraction(1, n * n))
    elif kind == "B_RT":
        e = Permutation.identity(n)
        add(_flip(n, [], e), Fraction(1, 2 * n))
        for i in range(1, n + 1):
            add(_flip(n, [i], e), Fraction(1, 2 * n * n))
            for j in range(i + 1, n + 1):
                t = transposition(n, i, j)
                add(_flip(n, [], t), Fraction(1, n * n))
                add(_flip(n, [i, j], t), Fraction(1, n * n))
    elif kind in ("B_OST", "B_OST_biased"):
        total = spec.weight_total()
        for j in range(1, n + 1):
            p = spec.weight(j) / (2 * total * j)
            for i in range(1, j + 1):
                t = transposition(n, i, j)
                add(_flip(n, [], t), p)
                add(_flip(n, sorted({i, j}), t), p)
    elif kind == "cyclic_simple":
        add(1 % n, Fraction(1, 2))
        add((-1) % n, Fraction(1, 2))
    elif kind == "cyclic_lazy":
        add(0, Fraction(1, 2))
        add(1 % n, Fraction(1, 4))
        add((-1) % n, Fraction(1, 4))
    else:  # pragma: no cover - guarded by ShuffleSpec
        raise ValueError(f"unknown shuffle kind {kind!r}")
    return {g: p for g, p in out.items() if p != 0}


@lru_cache(maxsize=256)
def _support_cached(spec: ShuffleSpec) -> tuple:
    raw = _raw_support(spec)
    group_kind_ = spec.group_kind
    if group_kind_ == "cyclic":
        return tuple(sorted(raw.items()))

    def key(item):
        g = item[0]
        return tuple((abs(v), v < 0) for v in g.images)

    return tuple(sorted(raw.items(), key=key))


def support(spec: ShuffleSpec) -> list[tuple[Any, Number]]:
    """Positive-mass elements with their probabilities, in canonical order."""
    return list(_support_cached(spec))


def support_dict(spec: ShuffleSpec) -> dict:
    return dict(_support_cached(spec))


def pmf(spec: ShuffleSpec, g) -> Number:
    if spec.group_kind == "cyclic":
        g = int(g) % spec.n
    elif g.n != spec.n:
        raise ValueError("element size does not match the shuffle")
    return support_dict(spec).get(g, Fraction(0) if spec.exact else 0.0)


def cyclic_walk_pmf(spec: ShuffleSpec) -> dict[int, Number]:
    if spec.kind not in CYCLIC:
        raise ValueError("cyclic_walk_pmf needs a cyclic kind")
    return support_dict(spec)


def algebra_scale(spec: ShuffleSpec) -> Number:
    """Factor turning the probability measure into its integral-ish algebra element.

    OST uses n, the random transposition and random-to-random shuffles use
    n^2, the signed random transposition uses 2n^2 and every weighted
    one-sided family uses N_w(n).
    """
    n = spec.n
    kind = spec.kind
    if kind in ("OST", "TTR", "RTT"):
        return Fraction(n)
    if kind in ("RT", "RTR"):
        return Fraction(n * n)
    if kind == "B_RT":
        return Fraction(2 * n * n)
    if kind in ("OST_biased", "B_OST", "B_OST_biased"):
        return spec.weight_total()
    return Fraction(1)


def algebra_element(spec: ShuffleSpec) -> list[tuple[Any, Number]]:
    """The scaled group-algebra element ``scale * sum_g P(g) g``."""
    scale = algebra_scale(spec)
    return [(g, p * scale) for g, p in support(spec)]


def make_rng(seed: int | None = None, stream: int = 0) -> np.random.Generator:
    """Counter-based generator; ``stream`` selects an independent substream."""
    ss = np.random.SeedSequence(seed, spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(ss))


def _right_hand_probs(spec: ShuffleSpec) -> np.ndarray:
    w = np.array([float(spec.weight(j)) for j in range(1, spec.n + 1)])
    return w / w.sum()


def sample(spec: ShuffleSpec, rng: np.random.Generator):
    """Draw one group element from the shuffle's distribution."""
    n = spec.n
    kind = spec.kind
    if kind in ("OST", "OST_biased", "B_OST", "B_OST_biased"):
        if kind in ("OST", "B_OST"):
            j = int(rng.integers(1, n + 1))
        else:
            j = int(rng.choice(n, p=_right_hand_probs(spec))) + 1
        i = int(rng.integers(1, j + 1))
        t = transposition(n, i, j)
        if kind.startswith("B_"):
            flips = sorted({i, j}) if rng.random() < 0.5 else []
            return _flip(n, flips, t)
        return t
    if kind == "RT":
        i, j = (int(x) for x in rng.integers(1, n + 1, size=2))
        return transposition(n, i, j)
    if kind == "TTR":
        return top_to_random_cycle(n, int(rng.integers(1, n + 1)))
    if kind == "RTT":
        return inverse(top_to_random_cycle(n, int(rng.integers(1, n + 1))))
    if kind == "RTR":
        i, j = (int(x) for x in rng.integers(1, n + 1, size=2))
        return move_card(n, i, j)
    if kind == "B_RT":
        i, j = (int(x) for x in rng.integers(1, n + 1, size=2))
        coin = rng.random() < 0.5
        t = transposition(n, i, j)
        return _flip(n, sorted({i, j}) if coin else [], t)
    if kind == "cyclic_simple":
        return 1 % n if rng.random() < 0.5 else (-1) % n
    if kind == "cyclic_lazy":
        u = rng.random()
        if u < 0.5:
            return 0
        return 1 % n if u < 0.75 else (-1) % n
    raise ValueError(f"unknown shuffle kind {kind!r}")  # pragma: no cover
