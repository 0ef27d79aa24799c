"""Elements of the symmetric group S_n and the hyperoctahedral group B_n.

Elements are stored in one-line form: ``images[i - 1]`` is the position that
card ``i`` is sent to.  For signed permutations the sign of an image records
whether the card is flipped.  Composition follows function composition,
``(p * q)(i) = p(q(i))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, Iterator, Sequence, Union

from .config import LIMITS, CapExceeded

__all__ = [
    "Permutation",
    "SignedPermutation",
    "BiPartition",
    "compose",
    "inverse",
    "cycle_type",
    "signed_cycle_type",
    "sign",
    "enumerate_group",
    "GroupIndex",
    "xi",
    "signed",
]


@dataclass(frozen=True, slots=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        imgs = tuple(int(v) for v in self.images)
        object.__setattr__(self, "images", imgs)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a bijection on 1..{len(imgs)}: {imgs}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __len__(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        """Build from cycle notation, e.g. ``from_cycles(3, (1, 2, 3))`` sends 1 to 2."""
        imgs = list(range(1, n + 1))
        for cyc in cycles:
            for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
                imgs[a - 1] = b
        return cls(tuple(imgs))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * (self.n + 1)
        out = []
        for start in range(1, self.n + 1):
            if seen[start]:
                continue
            cyc = []
            i = start
            while not seen[i]:
                seen[i] = True
                cyc.append(i)
                i = self.images[i - 1]
            out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cyc = [c for c in self.cycles() if len(c) > 1]
        if not cyc:
            return "e"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


@dataclass(frozen=True, slots=True)
class SignedPermutation:
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        imgs = tuple(int(v) for v in self.images)
        object.__setattr__(self, "images", imgs)
        if 0 in imgs or sorted(abs(v) for v in imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a signed bijection on 1..{len(imgs)}: {imgs}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        if i < 0:
            return -self.images[-i - 1]
        return self.images[i - 1]

    def __mul__(self, other: "SignedPermutation") -> "SignedPermutation":
        return compose(self, other)

    def __len__(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_parts(cls, flips: Iterable[int], eta: Permutation) -> "SignedPermutation":
        """The element ``(prod of xi_i for i in flips) * eta``.

        ``eta`` is applied first, then every card landing on a flipped
        position is turned over.
        """
        fl = set(flips)
        return cls(tuple(-v if v in fl else v for v in eta.images))

    def underlying(self) -> Permutation:
        return Permutation(tuple(abs(v) for v in self.images))

    def flip_set(self) -> frozenset[int]:
        """Positions i with x_i = 1 in the factorisation (prod xi_i^x_i) * eta."""
        return frozenset(abs(v) for v in self.images if v < 0)

    def __str__(self) -> str:
        fl = sorted(self.flip_set())
        body = str(self.underlying())
        if not fl:
            return body
        head = "(" + "".join(f"xi{i}" for i in fl) + ")"
        return head if body == "e" else head + body


Element = Union[Permutation, SignedPermutation]


@dataclass(frozen=True, slots=True)
class BiPartition:
    first: tuple[int, ...]
    second: tuple[int, ...]

    @property
    def size(self) -> int:
        return sum(self.first) + sum(self.second)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        yield self.first
        yield self.second

    def __str__(self) -> str:
        def fmt(p: tuple[int, ...]) -> str:
            return "(" + ",".join(map(str, p)) + ")" if p else "()"

        return f"({fmt(self.first)},{fmt(self.second)})"


def xi(n: int, i: int) -> SignedPermutation:
    """The generator flipping card ``i`` in B_n."""
    imgs = list(range(1, n + 1))
    imgs[i - 1] = -i
    return SignedPermutation(tuple(imgs))


def signed(p: Permutation) -> SignedPermutation:
    """Embed S_n into B_n."""
    return SignedPermutation(p.images)


def _check_same(p: Element, q: Element) -> None:
    if type(p) is not type(q):
        raise TypeError("cannot mix Permutation and SignedPermutation")
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n}")


def compose(p: Element, q: Element) -> Element:
    _check_same(p, q)
    if isinstance(p, SignedPermutation):
        pi = p.images
        return SignedPermutation(tuple(pi[v - 1] if v > 0 else -pi[-v - 1] for v in q.images))
    pi = p.images
    return Permutation(tuple(pi[v - 1] for v in q.images))


def inverse(p: Element) -> Element:
    inv = [0] * p.n
    for i, v in enumerate(p.images, start=1):
        if v > 0:
            inv[v - 1] = i
        else:
            inv[-v - 1] = -i
    return type(p)(tuple(inv))


def cycle_type(p: Permutation) -> tuple[int, ...]:
    return tuple(sorted((len(c) for c in p.cycles()), reverse=True))


def signed_cycle_type(p: SignedPermutation) -> BiPartition:
    """Positive and negative cycle lengths.

    A cycle of the underlying permutation is negative when it carries an odd
    number of flipped images.
    """
    pos, neg = [], []
    for cyc in p.underlying().cycles():
        flips = sum(1 for i in cyc if p.images[i - 1] < 0)
        (neg if flips % 2 else pos).append(len(cyc))
    return BiPartition(tuple(sorted(pos, reverse=True)), tuple(sorted(neg, reverse=True)))


def _perm_sign(images: Sequence[int]) -> int:
    s = 1
    seen = [False] * (len(images) + 1)
    for start in range(1, len(images) + 1):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = abs(images[i - 1])
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def sign(p: Element) -> int:
    if isinstance(p, SignedPermutation):
        flips = sum(1 for v in p.images if v < 0)
        return (-1) ** flips * _perm_sign(p.images)
    return _perm_sign(p.images)


def _signed_key(images: Sequence[int]) -> tuple[tuple[int, bool], ...]:
    return tuple((abs(v), v < 0) for v in images)


class GroupIndex:
    """A finite group listed in canonical order, with inverse lookup.

    ``kind`` is ``"symmetric"``, ``"hyperoctahedral"`` or ``"cyclic"``.  The
    cyclic group Z_n uses plain integers 0..n-1 as elements.
    """

    def __init__(self, kind: str, n: int, elements: Sequence) -> None:
        self.kind = kind
        self.n = n
        self.elements = tuple(elements)
        keys = self.elements if kind == "cyclic" else (e.images for e in self.elements)
        self._index = {k: i for i, k in enumerate(keys)}
        self._tables: dict = {}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i: int):
        return self.elements[i]

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self, g) -> int:
        if self.kind == "cyclic":
            return self._index[int(g) % self.n]
        return self._index[g.images]

    def identity(self):
        if self.kind == "cyclic":
            return 0
        return self.elements[0]

    def compose(self, a, b):
        if self.kind == "cyclic":
            return (a + b) % self.n
        return compose(a, b)

    def inverse(self, a):
        if self.kind == "cyclic":
            return (-a) % self.n
        return inverse(a)

    def left_table(self, support: Sequence) -> list[list[int]]:
        """``table[k][h] = index(support[k] * elements[h])``."""
        out = []
        for s in support:
            key = ("L", self.index(s))
            if key not in self._tables:
                self._tables[key] = [self.index(self.compose(s, h)) for h in self.elements]
            out.append(self._tables[key])
        return out

    def inverse_indices(self) -> list[int]:
        key = ("inv",)
        if key not in self._tables:
            self._tables[key] = [self.index(self.inverse(g)) for g in self.elements]
        return self._tables[key]


_GROUP_CACHE: dict[tuple[str, int], GroupIndex] = {}


def enumerate_group(n: int, kind: str = "symmetric", cap: int | None = None) -> GroupIndex:
    """All elements of S_n, B_n or Z_n in canonical (lexicographic) order."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if kind == "symmetric":
        limit = LIMITS.symmetric if cap is None else cap
    elif kind == "hyperoctahedral":
        limit = LIMITS.hyperoctahedral if cap is None else cap
    elif kind == "cyclic":
        limit = None
    else:
        raise ValueError(f"unknown group kind {kind!r}")
    if limit is not None and n > limit:
        raise CapExceeded(f"{kind} group of degree {n} exceeds cap {limit}")
    key = (kind, n)
    if key in _GROUP_CACHE:
        return _GROUP_CACHE[key]
    if kind == "symmetric":
        elems = [Permutation(p) for p in permutations(range(1, n + 1))]
    elif kind == "hyperoctahedral":
        raw = []
        for p in permutations(range(1, n + 1)):
            for signs in product((1, -1), repeat=n):
                raw.append(tuple(s * v for s, v in zip(signs, p)))
        raw.sort(key=_signed_key)
        elems = [SignedPermutation(r) for r in raw]
    else:
        if n < 1:
            raise ValueError("Z_n needs n >= 1")
        elems = list(range(n))
    group = GroupIndex(kind, n, elems)
    _GROUP_CACHE[key] = group
    return group
