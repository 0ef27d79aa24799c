import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shufflelab.group_core import BiPartition, Permutation, SignedPermutation
from shufflelab.lifting import (
    SIGNED,
    WordVector,
    act,
    adding,
    apply_shuffle_algebra,
    build_all_eigenbases,
    build_eigenbasis,
    dump,
    format_word,
    kappa,
    master_sides,
    parse_word,
    shuffling,
    switching,
    verify_eigenvector,
)
from shufflelab.shuffles import ShuffleSpec
from shufflelab.spectra import build_catalog
from shufflelab.suites import random_word_vector
from shufflelab.tableaux import bipartitions_of, partitions_of

W = WordVector.parse


def S(text):
    return WordVector.parse(text, mode=SIGNED)


def test_word_parsing_round_trip():
    assert format_word(parse_word("1 1+ 2")) == "11+2"
    assert parse_word("1.1+.2") == parse_word("11+2")
    assert format_word(parse_word("10 2")) == "10.2"
    assert parse_word("") == ()
    with pytest.raises(ValueError):
        W("1 + 2 x")


def test_place_action_examples():
    assert act(Permutation.from_cycles(3, (1, 2, 3)), W("232")) == W("223")
    g = SignedPermutation.from_parts([1, 4, 5], Permutation.from_cycles(5, (1, 2, 3)))
    assert act(g, S("1+ 2 4- 3+ 3")) == S("4+ 1+ 2 3- 3")
    v = W("12 - 21")
    assert act(Permutation.identity(2), v) == v
    with pytest.raises(ValueError):
        act(SignedPermutation.identity(2), v)


def test_adding_examples():
    assert adding(WordVector.empty(), 1) == W("1")
    assert adding(W("1"), 1) == W("11")
    assert adding(WordVector.empty(SIGNED), 1, "2") == S("1+ - 1-")


def test_switching_examples():
    assert switching(W("1231"), 3, 1) == W("1211")
    assert switching(W("1231"), 1, 3) == W("3231 + 1233")
    assert switching(W("1221"), 2, 2) == W("2*1221")


def test_kappa_examples():
    assert kappa(W("1"), (1,), 2) == W("1/2*12 - 1/2*21")
    assert kappa(W("1"), (1,), 1) == W("11")
    assert kappa(W("12 - 21"), (1, 1), 1) == W("121 - 211")
    w = S("1 1+ - 1 1-")
    lifted = kappa(w, BiPartition((1,), (1,)), 2, 1)
    expected = S("1/2*1 1+ 2 - 1/2*2 1+ 1 - 1/2*1 1- 2 + 1/2*2 1- 1")
    assert lifted == expected
    with pytest.raises(ValueError):
        kappa(W("12 - 21"), (1, 1), 2)


def test_algebra_action_examples():
    assert apply_shuffle_algebra(W("1"), ShuffleSpec("OST", 1)) == W("1")
    assert apply_shuffle_algebra(W("11"), ShuffleSpec("OST", 2)) == W("2*11")
    assert apply_shuffle_algebra(W("12 - 21"), ShuffleSpec("OST", 2)) == W("12 - 21")


def test_eigenbasis_examples():
    (only,) = build_eigenbasis((2,), ShuffleSpec("OST", 2))
    assert only.vector == W("11") and only.scaled == 2 and only.eigenvalue == 1
    pair = build_eigenbasis((2, 1), ShuffleSpec("OST", 3))
    assert [b.eigenvalue for b in pair] == [Fraction(2, 3), Fraction(5, 9)]
    signed = build_eigenbasis(BiPartition((1,), (1,)), ShuffleSpec("B_OST", 2))
    assert [b.vector for b in signed] == [S("1 1+ - 1 1-"), S("1+ 1 - 1- 1")]


def test_verify_examples():
    assert verify_eigenvector(W("11"), ShuffleSpec("OST", 2), 1)
    assert not verify_eigenvector(W("11"), ShuffleSpec("OST", 2), Fraction(9, 10))
    assert not verify_eigenvector(WordVector.zero(), ShuffleSpec("OST", 2), 1)
    assert not verify_eigenvector(W("11"), ShuffleSpec("OST", 2), "x")


def test_shuffled_lift_belongs_to_random_to_random():
    # 2(112 - 211) is the shuffling lift sh_1(12 - 21); it is a random-to-random
    # eigenvector, not a one-sided one.
    v = W("2*112 - 2*211")
    assert shuffling(W("12 - 21"), 1) == v
    assert verify_eigenvector(v, ShuffleSpec("RTR", 3), Fraction(4, 9))
    image = apply_shuffle_algebra(v, ShuffleSpec("OST", 3))
    assert set(image.words()) != set(v.words())
    for t in build_eigenbasis((2, 1), ShuffleSpec("OST", 3)):
        assert not verify_eigenvector(v, ShuffleSpec("OST", 3), t.eigenvalue)


def test_dump_format():
    assert dump(W("1/2*12 - 1/2*21")) == "1/2\t12\n-1/2\t21\n"


def _lift_specs():
    out = []
    for n in range(1, 7):
        out += [ShuffleSpec("OST", n), ShuffleSpec("RT", n)]
        out += [ShuffleSpec("OST_biased", n, alpha=a) for a in (-1, 0, 1, 2)]
    for n in range(1, 5):
        out += [ShuffleSpec("B_RT", n), ShuffleSpec("B_OST", n), ShuffleSpec("B_OST_biased", n, alpha=2)]
    return out


@pytest.mark.parametrize("spec", _lift_specs(), ids=str)
def test_every_lifted_vector_is_an_eigenvector_and_matches_catalog(spec):
    shapes = bipartitions_of(spec.n) if spec.group_kind == "hyperoctahedral" else partitions_of(spec.n)
    lifted = Counter()
    for shape in shapes:
        basis = build_eigenbasis(shape, spec)
        for item in basis:
            assert not item.vector.is_zero()
            check = verify_eigenvector(item.vector, spec, item.eigenvalue)
            assert check, check.witness
            # each vector generates a copy of the module, of dimension len(basis)
            lifted[item.eigenvalue] += len(basis)
    catalog = Counter()
    for e in build_catalog(spec).entries:
        catalog[e.eigenvalue] += e.multiplicity
    assert lifted == catalog


def test_build_all_in_worker_processes():
    spec = ShuffleSpec("OST", 4)
    serial = build_all_eigenbases(spec, threads=1)
    parallel = build_all_eigenbases(spec, threads=2)
    assert {k: [b.vector for b in v] for k, v in serial.items()} == {k: [b.vector for b in v] for k, v in parallel.items()}


vectors = st.tuples(st.integers(0, 2**32 - 1), st.integers(1, 5))


@given(vectors)
def test_commutation_identities(seed_n):
    seed, n = seed_n
    rng = random.Random(seed)
    v = random_word_vector(rng, n, letters=4)
    a, b = rng.sample(range(1, 5), 2)
    assert adding(switching(v, b, a), b) == switching(adding(v, b), b, a) - adding(v, a)
    w = random_word_vector(rng, n, SIGNED, letters=4)
    assert adding(switching(w, b, a, "2"), b, "2") == switching(adding(w, b, "2"), b, a, "2") - adding(w, a, "2").scale(2)
    assert adding(switching(w, b, a, "1"), b, "1") == switching(adding(w, b, "1"), b, a, "1") - adding(w, a, "1")


@given(vectors, st.sampled_from(["OST", "RT", "OST_biased"]))
def test_master_equations(seed_n, kind):
    seed, n = seed_n
    rng = random.Random(seed)
    v = random_word_vector(rng, n, letters=4)
    spec = ShuffleSpec(kind, 1, alpha=2 if kind == "OST_biased" else None)
    lhs, rhs = master_sides(spec, v, rng.randint(1, 4))
    assert lhs == rhs


@given(vectors, st.sampled_from(["B_RT", "B_OST"]), st.sampled_from([1, 2]))
def test_signed_master_equations(seed_n, kind, component):
    seed, n = seed_n
    rng = random.Random(seed)
    w = random_word_vector(rng, min(n, 4), SIGNED, letters=3)
    lhs, rhs = master_sides(ShuffleSpec(kind, 1), w, rng.randint(1, 3), component)
    assert lhs == rhs


def test_random_transposition_master_needs_phi_b_in_the_sum():
    # Phi_a in place of Phi_b inside the sum breaks the identity already on 12.
    v = W("12")
    lhs, rhs = master_sides(ShuffleSpec("RT", 1), v, 1, variant="phi_a")
    assert lhs != rhs
    lhs, rhs = master_sides(ShuffleSpec("RT", 1), v, 1)
    assert lhs == rhs


@given(vectors)
def test_switching_commutes_with_the_action(seed_n):
    seed, n = seed_n
    rng = random.Random(seed)
    v = random_word_vector(rng, n, letters=4)
    images = list(range(1, n + 1))
    rng.shuffle(images)
    sigma = Permutation(tuple(images))
    a, b = rng.randint(1, 4), rng.randint(1, 4)
    assert act(sigma, switching(v, b, a)) == switching(act(sigma, v), b, a)
    w = random_word_vector(rng, n, SIGNED, letters=4)
    tau = SignedPermutation(tuple(x * rng.choice((1, -1)) for x in images))
    for flavor in ("1", "pm", "+", "-", "2"):
        assert act(tau, switching(w, b, a, flavor)) == switching(act(tau, w), b, a, flavor)
