"""Word modules and lifted eigenvectors.

A word is a tuple of integer symbol codes.  Letter ``a`` is stored as
``3a`` when unsigned, ``3a + 1`` for ``a+`` and ``3a + 2`` for ``a-``, so
sorting the codes orders words lexicographically by letter and then by tag.
A :class:`WordVector` is an immutable sparse rational combination of words.

Eigenvectors are grown box by box from the empty word with the lifting
operators ``kappa``; each step multiplies the vector by an explicit
combination of adding (``Phi``) and switching (``Theta``) operators and
shifts the eigenvalue of the scaled group-algebra element by a known amount.
"""
from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

from .config import LIMITS, CapExceeded, thread_count
from .group_core import BiPartition, Permutation, SignedPermutation
from .shuffles import ShuffleSpec, algebra_element, algebra_scale
from .tableaux import (
    BiTableau,
    StandardTableau,
    as_bipartition,
    as_partition,
    enumerate_bi_syt,
    enumerate_syt,
)

__all__ = [
    "PLAIN",
    "SIGNED",
    "letter",
    "letter_value",
    "letter_tag",
    "parse_word",
    "format_word",
    "WordVector",
    "act",
    "adding",
    "shuffling",
    "switching",
    "kappa",
    "apply_shuffle_algebra",
    "LiftedVector",
    "EigenCheck",
    "build_eigenbasis",
    "build_all_eigenbases",
    "verify_eigenvector",
    "master_sides",
    "vector_rank",
    "dump",
]

PLAIN = "plain"
SIGNED = "signed"

Word = tuple[int, ...]
Scalar = Union[int, Fraction]

_TAGS = {"": 0, "+": 1, "-": 2}
_TAG_CHARS = ("", "+", "-")


def letter(a: int, tag: str = "") -> int:
    """Symbol code for ``a`` (``tag`` is '', '+' or '-')."""
    if a < 1:
        raise ValueError("letters are positive integers")
    return 3 * a + _TAGS[tag]


def letter_value(code: int) -> int:
    return code // 3


def letter_tag(code: int) -> int:
    return code % 3


_TOKEN = re.compile(r"(\d+)([+-]?)")


def parse_word(text: str) -> Word:
    """Parse ``"1 1+ 2"``, ``"11+2"`` or ``"1.1+.2"``; ``""`` is the empty word.

    Without separators every letter is a single digit.
    """
    text = text.strip()
    if text in ("", "ω", "w0"):
        return ()
    if any(sep in text for sep in " .,"):
        tokens = [t for t in re.split(r"[ .,]+", text) if t]
    else:
        tokens = re.findall(r"\d[+-]?", text)
        if "".join(tokens) != text:
            raise ValueError(f"cannot parse word {text!r}")
    out = []
    for tok in tokens:
        m = _TOKEN.fullmatch(tok)
        if m is None:
            raise ValueError(f"bad letter {tok!r}")
        out.append(letter(int(m.group(1)), m.group(2)))
    return tuple(out)


def format_word(word: Word) -> str:
    if not word:
        return "ω"
    parts = [f"{letter_value(c)}{_TAG_CHARS[letter_tag(c)]}" for c in word]
    if all(letter_value(c) < 10 for c in word):
        return "".join(parts)
    return ".".join(parts)


def _evaluation(word: Word) -> tuple:
    return tuple(sorted(word))


class WordVector:
    """Immutable sparse combination of words of one length and evaluation-free.

    ``mode`` is ``"plain"`` (unsigned letters only) or ``"signed"``.  The
    evaluation invariant is checked lazily by :meth:`evaluations`, since sums
    of vectors from different modules are sometimes useful as intermediates.
    """

    __slots__ = ("mode", "_terms", "_length")

    def __init__(self, terms: Mapping[Word, Scalar] | Iterable[tuple[Word, Scalar]] = (), mode: str = PLAIN,
                 length: int | None = None) -> None:
        if mode not in (PLAIN, SIGNED):
            raise ValueError(f"unknown mode {mode!r}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Word, Fraction] = {}
        for w, c in items:
            w = tuple(w)
            acc[w] = acc.get(w, Fraction(0)) + Fraction(c)
        clean = {w: c for w, c in acc.items() if c != 0}
        lengths = {len(w) for w in clean}
        if len(lengths) > 1:
            raise ValueError("words of different lengths in one vector")
        if mode == PLAIN and any(letter_tag(s) for w in clean for s in w):
            raise ValueError("signed letter in a plain vector")
        self.mode = mode
        self._terms = clean
        self._length = lengths.pop() if lengths else length

    # construction -----------------------------------------------------
    @classmethod
    def empty(cls, mode: str = PLAIN) -> "WordVector":
        """The empty word omega with coefficient 1."""
        return cls({(): 1}, mode=mode)

    @classmethod
    def zero(cls, mode: str = PLAIN, length: int | None = None) -> "WordVector":
        return cls({}, mode=mode, length=length)

    @classmethod
    def parse(cls, text: str, mode: str | None = None) -> "WordVector":
        """Parse ``"1/2*12 - 1/2*21"``; binary signs need surrounding spaces."""
        text = text.replace("−", "-").strip()
        pieces = re.split(r"\s+([+-])\s+", text)
        signs = ["+"] + pieces[1::2]
        terms: dict[Word, Fraction] = {}
        for sign, body in zip(signs, pieces[::2]):
            body = body.strip()
            c = Fraction(1)
            if body.startswith("-"):
                c, body = -c, body[1:].strip()
            if "*" in body:
                coef, body = body.split("*", 1)
                c *= Fraction(coef.strip())
            if sign == "-":
                c = -c
            w = parse_word(body)
            terms[w] = terms.get(w, Fraction(0)) + c
        if mode is None:
            mode = SIGNED if any(letter_tag(s) for w in terms for s in w) else PLAIN
        return cls(terms, mode=mode)

    # access -----------------------------------------------------------
    @property
    def length(self) -> int | None:
        return self._length

    def items(self) -> list[tuple[Word, Fraction]]:
        return sorted(self._terms.items())

    def words(self) -> list[Word]:
        return sorted(self._terms)

    def coefficient(self, word: Word) -> Fraction:
        return self._terms.get(tuple(word), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def evaluations(self) -> set:
        return {_evaluation(w) for w in self._terms}

    # arithmetic -------------------------------------------------------
    def _combine(self, other: "WordVector", sign: int) -> "WordVector":
        if not isinstance(other, WordVector):
            return NotImplemented
        mode = SIGNED if SIGNED in (self.mode, other.mode) else PLAIN
        terms = dict(self._terms)
        for w, c in other._terms.items():
            terms[w] = terms.get(w, Fraction(0)) + sign * c
        return WordVector(terms, mode=mode, length=self._length if self._length is not None else other._length)

    def __add__(self, other: "WordVector") -> "WordVector":
        return self._combine(other, 1)

    def __sub__(self, other: "WordVector") -> "WordVector":
        return self._combine(other, -1)

    def __neg__(self) -> "WordVector":
        return self.scale(-1)

    def scale(self, c: Scalar) -> "WordVector":
        c = Fraction(c)
        return WordVector({w: c * v for w, v in self._terms.items()}, mode=self.mode, length=self._length)

    def __mul__(self, c: Scalar) -> "WordVector":
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WordVector):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (w, c) in enumerate(self.items()):
            sign = "-" if c < 0 else ("" if i == 0 else "+")
            mag = abs(c)
            coef = "" if mag == 1 else f"{mag}*"
            parts.append(f"{sign}{coef}{format_word(w)}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"WordVector({self}, mode={self.mode!r})"


def _map_words(v: WordVector, fn, mode: str | None = None) -> WordVector:
    """Linear extension of ``fn: word -> iterable of (word, coef)``."""
    acc: dict[Word, Fraction] = {}
    for w, c in v._terms.items():
        for u, k in fn(w):
            acc[u] = acc.get(u, Fraction(0)) + c * k
    return WordVector(acc, mode=mode or v.mode)


# ---------------------------------------------------------------------------
# group action


def _act_word(images: Sequence[int], word: Word) -> Word:
    out = [0] * len(word)
    for i, s in enumerate(word):
        target = images[i]
        pos = abs(target) - 1
        if target < 0 and letter_tag(s):
            s = s + 1 if letter_tag(s) == 1 else s - 1
        out[pos] = s
    return tuple(out)


def act(sigma: Permutation | SignedPermutation, v: WordVector) -> WordVector:
    """Place action: the letter at position i moves to position |sigma(i)|.

    A signed permutation also turns over signed letters landing through a
    negative image; unsigned letters carry no face.
    """
    images = sigma.images
    if isinstance(sigma, SignedPermutation) and v.mode != SIGNED:
        raise ValueError("signed permutations act on signed word vectors only")
    if v.length is not None and v.length != len(images):
        raise ValueError(f"word length {v.length} does not match n={len(images)}")
    return _map_words(v, lambda w: ((_act_word(images, w), 1),))


# ---------------------------------------------------------------------------
# adding, shuffling and switching operators


_ADD_FLAVORS = {"plain": ((0, 1),), "1": ((0, 1),), "+": ((1, 1),), "-": ((2, 1),), "2": ((1, 1), (2, -1))}


def adding(v: WordVector, a: int, flavor: str = "plain") -> WordVector:
    """Append letter ``a``.

    Flavors: ``plain``/``1`` append unsigned a; ``+``/``-`` append a+ / a-;
    ``2`` maps w to w a+ - w a-.
    """
    try:
        pieces = _ADD_FLAVORS[flavor]
    except KeyError:
        raise ValueError(f"unknown adding flavor {flavor!r}") from None
    mode = v.mode
    if any(tag for tag, _ in pieces):
        if mode != SIGNED:
            raise ValueError("signed adding needs a signed word vector")
    base = 3 * a
    return _map_words(v, lambda w: [(w + (base + tag,), k) for tag, k in pieces], mode)


def shuffling(v: WordVector, a: int) -> WordVector:
    """Sum of all words formed by inserting unsigned ``a`` at one position."""
    s = 3 * a
    return _map_words(v, lambda w: [(w[:j] + (s,) + w[j:], 1) for j in range(len(w) + 1)])


def _switch_rules(b: int, a: int, flavor: str) -> dict[int, tuple[tuple[int, int], ...]]:
    """Map from the symbol being replaced to ``(new symbol, coefficient)`` pairs."""
    A, B = 3 * a, 3 * b
    if flavor in ("plain", "1"):
        return {B: ((A, 1),)}
    if flavor == "pm":
        return {B + 1: ((A, 1),), B + 2: ((A, 1),)}
    if flavor == "+":
        return {B + 1: ((A + 1, 1),), B + 2: ((A + 2, 1),)}
    if flavor == "-":
        return {B + 1: ((A + 2, 1),), B + 2: ((A + 1, 1),)}
    if flavor == "2":
        return {B + 1: ((A + 1, 1), (A + 2, -1)), B + 2: ((A + 2, 1), (A + 1, -1))}
    raise ValueError(f"unknown switching flavor {flavor!r}")


def switching(v: WordVector, b: int, a: int, flavor: str = "plain") -> WordVector:
    """Sum over occurrences of (the flavor's) ``b``, each replaced by ``a``.

    Flavors: ``plain``/``1`` unsigned to unsigned; ``pm`` a signed b (either
    face) to unsigned a; ``+`` keeps the face; ``-`` turns it over; ``2`` is
    ``+`` minus ``-``.
    """
    rules = _switch_rules(b, a, flavor)

    def fn(w: Word):
        out = []
        for k, s in enumerate(w):
            for new, c in rules.get(s, ()):
                out.append((w[:k] + (new,) + w[k + 1:], c))
        return out

    return _map_words(v, fn)


# ---------------------------------------------------------------------------
# lifting operators


def _component(shape, component: int | None) -> tuple[tuple[int, ...], int]:
    if component is None:
        if isinstance(shape, BiPartition):
            raise ValueError("a bi-partition needs component 1 or 2")
        return as_partition(shape), 1
    if component not in (1, 2):
        raise ValueError("component must be 1 or 2")
    bi = as_bipartition(shape)
    return (bi.first if component == 1 else bi.second), component


def kappa(v: WordVector, shape, row: int, component: int | None = None) -> WordVector:
    """Lift ``v`` in the module of ``shape`` by adding a box in ``row``.

    Expands the chain sum recursively: ``X_b = Phi_b v + sum_{c<b}
    Theta_{c,b} X_c / d_c`` with ``d_c = k((lam_row - row) - (lam_c - c))``;
    the result is ``X_row``.  With ``component`` set, ``shape`` is a
    bi-partition and the operators are the signed-word flavors for that
    component.
    """
    lam, k = _component(shape, component)
    parts = list(lam)
    if row < 1 or row > len(parts) + 1:
        raise ValueError(f"row {row} is not addable to {lam}")
    cur = parts[row - 1] if row <= len(parts) else 0
    if row > 1 and parts[row - 2] <= cur:
        raise ValueError(f"adding a box in row {row} of {lam} is not a partition")
    if component is None:
        add_flavor = sw_flavor = "plain"
    else:
        add_flavor = sw_flavor = str(k)
    target = cur - row
    xs: list[WordVector] = []
    for b in range(1, row + 1):
        x = adding(v, b, add_flavor)
        for c in range(1, b):
            d = k * (target - (parts[c - 1] - c))
            x = x + switching(xs[c - 1], c, b, sw_flavor).scale(Fraction(1, d))
        xs.append(x)
    return xs[-1]


# ---------------------------------------------------------------------------
# group-algebra action


@lru_cache(maxsize=None)
def _algebra(spec: ShuffleSpec) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
    if not spec.exact:
        raise ValueError(f"{spec} has non-rational weights")
    return tuple((tuple(g.images), Fraction(c)) for g, c in algebra_element(spec))


def apply_shuffle_algebra(v: WordVector, spec: ShuffleSpec) -> WordVector:
    """Act with ``scale * sum_g P(g) g`` on ``v`` (exact)."""
    if spec.group_kind not in ("symmetric", "hyperoctahedral"):
        raise ValueError("word modules exist for the symmetric and hyperoctahedral groups")
    if spec.group_kind == "hyperoctahedral" and v.mode != SIGNED:
        raise ValueError(f"{spec} acts on signed word vectors")
    if v.length is not None and v.length != spec.n:
        raise ValueError(f"word length {v.length} does not match n={spec.n}")
    elements = _algebra(spec)

    def fn(w: Word):
        return [(_act_word(images, w), c) for images, c in elements]

    return _map_words(v, fn)


@dataclass(frozen=True)
class EigenCheck:
    ok: bool
    witness: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_eigenvector(v: WordVector, spec: ShuffleSpec, claimed) -> EigenCheck:
    """Exact test of ``A v == scale * claimed * v`` for the scaled algebra element A."""
    if v.is_zero():
        return EigenCheck(False, "zero vector")
    try:
        value = Fraction(claimed)
    except (TypeError, ValueError):
        return EigenCheck(False, f"claimed eigenvalue {claimed!r} is not rational")
    lhs = apply_shuffle_algebra(v, spec)
    rhs = v.scale(algebra_scale(spec) * value)
    diff = lhs - rhs
    if diff.is_zero():
        return EigenCheck(True)
    w, _ = diff.items()[0]
    return EigenCheck(False, f"word {format_word(w)}: A v has {lhs.coefficient(w)}, expected {rhs.coefficient(w)}")


# ---------------------------------------------------------------------------
# eigenbases


_S_KINDS = ("OST", "OST_biased", "RT")
_B_KINDS = ("B_RT", "B_OST", "B_OST_biased")


@dataclass(frozen=True)
class LiftedVector:
    tableau: StandardTableau | BiTableau
    vector: WordVector
    eigenvalue: Fraction
    scaled: Fraction


def _increment(spec: ShuffleSpec, size: int, content: int, component: int) -> Fraction:
    """Change of the scaled eigenvalue when box ``size`` lands on ``content``."""
    kind = spec.kind
    if kind == "OST":
        return Fraction(content + 1, size)
    if kind == "OST_biased":
        return Fraction(spec.weight(size)) * Fraction(content + 1, size)
    if kind == "RT":
        return Fraction(1 + 2 * content)
    if kind == "B_RT":
        return Fraction(2 + 4 * content if component == 1 else 4 * content)
    if kind in ("B_OST", "B_OST_biased"):
        shift = 1 if component == 1 else 0
        return Fraction(spec.weight(size)) * Fraction(content + shift, size)
    raise ValueError(f"no lifting for {kind}")


def _lift_path(spec: ShuffleSpec, tableau) -> LiftedVector:
    signed = isinstance(tableau, BiTableau)
    if signed:
        steps = tableau.path()
        v = WordVector.empty(SIGNED)
        shape = [[], []]
    else:
        steps = [(None, r) for r in tableau.path()]
        v = WordVector.empty(PLAIN)
        shape = [[], []]
    scaled = Fraction(0)
    for size, (comp, row) in enumerate(steps, start=1):
        lam = shape[0 if comp in (None, 1) else 1]
        if signed:
            v = kappa(v, BiPartition(tuple(shape[0]), tuple(shape[1])), row, comp)
        else:
            v = kappa(v, tuple(lam), row)
        if row > len(lam):
            lam.append(0)
        content = lam[row - 1] + 1 - row
        lam[row - 1] += 1
        scaled += _increment(spec, size, content, comp or 1)
    if v.is_zero():
        raise ArithmeticError(f"lifting along {tableau} produced the zero vector")
    return LiftedVector(tableau, v, scaled / algebra_scale(spec), scaled)


def _check_spec(spec: ShuffleSpec, signed: bool) -> None:
    kinds = _B_KINDS if signed else _S_KINDS
    if spec.kind not in kinds:
        raise ValueError(f"build_eigenbasis supports {kinds}, got {spec.kind}")
    if not spec.exact:
        raise ValueError(f"{spec} has non-rational weights")


def build_eigenbasis(shape, spec: ShuffleSpec) -> list[LiftedVector]:
    """One lifted eigenvector per standard (bi-)tableau of ``shape``.

    Vectors are ordered like :func:`enumerate_syt` / :func:`enumerate_bi_syt`.
    """
    signed = isinstance(shape, BiPartition) or (
        isinstance(shape, tuple) and len(shape) == 2 and all(isinstance(x, (tuple, list)) for x in shape)
    )
    _check_spec(spec, signed)
    if signed:
        bi = as_bipartition(shape)
        if bi.size != spec.n:
            raise ValueError("shape size must equal n")
        if bi.size > LIMITS.hyperoctahedral:
            raise CapExceeded(f"n={bi.size} exceeds the signed lifting cap {LIMITS.hyperoctahedral}")
        tableaux = enumerate_bi_syt(bi)
    else:
        lam = as_partition(shape)
        if sum(lam) != spec.n:
            raise ValueError("shape size must equal n")
        if sum(lam) > LIMITS.symmetric:
            raise CapExceeded(f"n={sum(lam)} exceeds the lifting cap {LIMITS.symmetric}")
        tableaux = enumerate_syt(lam)
    return [_lift_path(spec, t) for t in tableaux]


def _basis_job(args):
    shape, spec = args
    return shape, build_eigenbasis(shape, spec)


def build_all_eigenbases(spec: ShuffleSpec, shapes: Sequence | None = None,
                         threads: int | None = None) -> dict:
    """Eigenbases for every shape of size n, optionally in worker processes."""
    from .tableaux import bipartitions_of, partitions_of

    if shapes is None:
        shapes = bipartitions_of(spec.n) if spec.kind in _B_KINDS else partitions_of(spec.n)
    jobs = [(s, spec) for s in shapes]
    workers = thread_count(threads)
    if workers <= 1 or len(jobs) <= 1:
        return dict(map(_basis_job, jobs))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return dict(pool.map(_basis_job, jobs))


def vector_rank(vectors: Sequence[WordVector]) -> int:
    """Rank of a family of word vectors (floating point, small families)."""
    words = sorted({w for v in vectors for w in v.words()})
    if not words:
        return 0
    col = {w: i for i, w in enumerate(words)}
    m = np.zeros((len(vectors), len(words)))
    for r, v in enumerate(vectors):
        for w, c in v.items():
            m[r, col[w]] = float(c)
    return int(np.linalg.matrix_rank(m))


# ---------------------------------------------------------------------------
# master equations


def master_sides(spec: ShuffleSpec, v: WordVector, a: int, component: int | None = None,
                 variant: str = "phi_b") -> tuple[WordVector, WordVector]:
    """Both sides of ``A_{n+1} Phi_a - Phi_a A_n = RHS`` on ``v``.

    ``spec`` fixes the shuffle family and is rescaled to n = len(v) and n+1.
    ``variant="phi_a"`` uses ``Phi_a Theta_{b,a}`` in place of
    ``Phi_b Theta_{b,a}`` for the random transposition right-hand side, a
    form that does not hold; it is kept as a negative control.
    """
    n = v.length if v.length is not None else 0
    upper = spec.with_n(n + 1)
    lower = spec.with_n(n) if n else None
    kind = spec.kind
    letters = sorted({letter_value(s) for w in v.words() for s in w} | {a})
    if kind in _B_KINDS:
        flavor = str(component or 1)
        phi = adding(v, a, flavor)
        lhs = apply_shuffle_algebra(phi, upper)
        if n:
            lhs = lhs - adding(apply_shuffle_algebra(v, lower), a, flavor)
        if component in (None, 1):
            plain = WordVector.zero(SIGNED)
            pm = WordVector.zero(SIGNED)
            for b in letters:
                plain = plain + adding(switching(v, b, a, "1"), b, "1")
                t = switching(v, b, a, "pm")
                pm = pm + adding(t, b, "+") + adding(t, b, "-")
            if kind == "B_RT":
                rhs = phi.scale(2) + plain.scale(4) + pm.scale(2)
            else:
                c = Fraction(upper.weight(n + 1)) / (n + 1)
                rhs = (phi + plain + pm.scale(Fraction(1, 2))).scale(c)
        else:
            acc = WordVector.zero(SIGNED)
            for b in letters:
                acc = acc + adding(switching(v, b, a, "2"), b, "2")
            if kind == "B_RT":
                rhs = acc.scale(2)
            else:
                rhs = acc.scale(Fraction(upper.weight(n + 1)) / (2 * (n + 1)))
        return lhs, rhs
    phi = adding(v, a)
    lhs = apply_shuffle_algebra(phi, upper)
    if n:
        lhs = lhs - adding(apply_shuffle_algebra(v, lower), a)
    acc = WordVector.zero(v.mode)
    for b in letters:
        switched = switching(v, b, a)
        acc = acc + adding(switched, a if variant == "phi_a" else b)
    if kind == "RT":
        return lhs, phi + acc.scale(2)
    if kind == "OST":
        c = Fraction(1, n + 1)
    elif kind == "OST_biased":
        c = Fraction(upper.weight(n + 1)) / (n + 1)
    else:
        raise ValueError(f"no master equation for {kind}")
    return lhs, (phi + acc).scale(c)


def dump(v: WordVector) -> str:
    """One ``coefficient<TAB>word`` line per term, exact fractions."""
    return "".join(f"{c}\t{format_word(w)}\n" for w, c in v.items())


def iter_dump(lifted: Iterable[LiftedVector]) -> Iterator[str]:
    for item in lifted:
        yield f"# tableau {item.tableau}\teigenvalue {item.eigenvalue}\n"
        yield dump(item.vector)
