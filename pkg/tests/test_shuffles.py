import json
import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shufflelab.group_core import Permutation, SignedPermutation, inverse
from shufflelab.shuffles import (
    KINDS,
    ShuffleSpec,
    algebra_element,
    algebra_scale,
    cyclic_walk_pmf,
    make_rng,
    pmf,
    sample,
    support,
    support_dict,
)
from shufflelab.exact_engine import evolve

EXACT_SPECS = [ShuffleSpec(k, n) for k in KINDS if not k.endswith("_biased") for n in range(1, 5)]
EXACT_SPECS += [ShuffleSpec(k, n, alpha=a) for k in ("OST_biased", "B_OST_biased") for n in range(1, 5) for a in (-1, 0, 2)]


def T(n, i, j):
    return Permutation.from_cycles(n, (i, j))


def test_pmf_examples():
    assert pmf(ShuffleSpec("OST", 3), T(3, 1, 2)) == Fraction(1, 6)
    assert pmf(ShuffleSpec("OST", 3), Permutation.identity(3)) == Fraction(11, 18)
    assert pmf(ShuffleSpec("RT", 4), T(4, 1, 3)) == Fraction(1, 8)


def test_support_examples():
    assert support_dict(ShuffleSpec("OST", 2)) == {Permutation.identity(2): Fraction(3, 4), T(2, 1, 2): Fraction(1, 4)}
    ttr = support_dict(ShuffleSpec("TTR", 3))
    assert ttr == {
        Permutation.identity(3): Fraction(1, 3),
        Permutation.from_cycles(3, (2, 1)): Fraction(1, 3),
        Permutation.from_cycles(3, (3, 2, 1)): Fraction(1, 3),
    }
    assert support_dict(ShuffleSpec("B_RT", 1)) == {SignedPermutation((1,)): Fraction(1, 2), SignedPermutation((-1,)): Fraction(1, 2)}


def test_cyclic_walks():
    assert cyclic_walk_pmf(ShuffleSpec("cyclic_simple", 5)) == {1: Fraction(1, 2), 4: Fraction(1, 2)}
    assert cyclic_walk_pmf(ShuffleSpec("cyclic_lazy", 2)) == {0: Fraction(1, 2), 1: Fraction(1, 2)}
    spec = ShuffleSpec("cyclic_simple", 6)
    d = dict(evolve(spec, 3))[3]
    assert d[0] == 0


@pytest.mark.parametrize("spec", EXACT_SPECS, ids=str)
def test_mass_is_one_and_reversibility(spec):
    supp = support(spec)
    assert sum(p for _, p in supp) == 1
    if spec.n <= 4 and spec.group_kind != "cyclic":
        rev = all(pmf(spec, inverse(g)) == p for g, p in supp)
        if spec.kind in ("TTR", "RTT"):
            assert not rev or spec.n <= 2
        else:
            assert rev


def test_biased_alpha_zero_is_unbiased():
    for n in range(1, 6):
        assert support_dict(ShuffleSpec("OST_biased", n, alpha=0)) == support_dict(ShuffleSpec("OST", n))


def test_algebra_scales():
    assert algebra_scale(ShuffleSpec("OST", 5)) == 5
    assert algebra_scale(ShuffleSpec("RT", 5)) == 25
    assert algebra_scale(ShuffleSpec("B_RT", 3)) == 18
    assert algebra_scale(ShuffleSpec("OST_biased", 3, alpha=1)) == 6
    scaled = dict(algebra_element(ShuffleSpec("OST", 3)))
    assert scaled[Permutation.identity(3)] == Fraction(11, 6)


def test_spec_json_round_trip_and_validation():
    for spec in (ShuffleSpec("OST", 5), ShuffleSpec("OST_biased", 4, alpha=-1),
                 ShuffleSpec("B_OST_biased", 3, weights=("1", "2", "1/2"))):
        assert ShuffleSpec.from_json(spec.to_json()) == spec
        assert ShuffleSpec.from_json(json.loads(spec.to_json())) == spec
    with pytest.raises(ValueError):
        ShuffleSpec("OST", 0)
    with pytest.raises(ValueError):
        ShuffleSpec("OST_biased", 3)
    with pytest.raises(ValueError):
        ShuffleSpec("OST", 3, alpha=1)
    with pytest.raises(ValueError):
        ShuffleSpec("nope", 3)
    with pytest.raises(ValueError):
        ShuffleSpec("OST_biased", 2, weights=(1, 0))
    assert not ShuffleSpec("OST_biased", 3, alpha=0.5).exact


def test_sample_trivial_cases():
    rng = make_rng(0)
    assert all(sample(ShuffleSpec("OST", 1), rng) == Permutation.identity(1) for _ in range(20))


def _binomial_band(counts, spec, draws, k=4.0):
    for g, p in support(spec):
        p = float(p)
        sigma = math.sqrt(p * (1 - p) / draws)
        assert abs(counts.get(g, 0) / draws - p) <= k * sigma, (g, counts.get(g, 0) / draws, p)
    assert set(counts) <= set(support_dict(spec))


@pytest.mark.slow
def test_sample_matches_pmf_ost4():
    spec = ShuffleSpec("OST", 4)
    rng = make_rng(11)
    draws = 1_000_000
    counts = Counter(sample(spec, rng) for _ in range(draws))
    _binomial_band(counts, spec, draws)


def test_sample_b_ost1_and_biased():
    for spec in (ShuffleSpec("B_OST", 1), ShuffleSpec("OST_biased", 3, alpha=2), ShuffleSpec("B_RT", 2)):
        rng = make_rng(5)
        draws = 40_000
        counts = Counter(sample(spec, rng) for _ in range(draws))
        _binomial_band(counts, spec, draws)


def test_streams_are_reproducible_and_distinct():
    a = make_rng(3, 0).random(5)
    assert (a == make_rng(3, 0).random(5)).all()
    assert not (a == make_rng(3, 1).random(5)).all()


@given(st.sampled_from(["OST", "RT", "B_OST", "B_RT", "TTR", "RTR"]), st.integers(1, 5))
def test_pmf_sums_to_one(kind, n):
    assert sum(p for _, p in support(ShuffleSpec(kind, n))) == 1
