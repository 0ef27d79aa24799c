from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shufflelab.config import CapExceeded
from shufflelab.exact_engine import (
    brute_force_spectrum,
    curve_csv,
    deduplicate,
    delta_identity,
    distance_curve,
    evolve,
    from_spec,
    is_reversible,
    mixing_time,
    sep_distance,
    step,
    transition_matrix,
    tv_distance,
    uniform,
)
from shufflelab.shuffles import ShuffleSpec, support_dict
from shufflelab.tableaux import diag_sum, dimension, partitions_of

Z5_SEP = [1, 1, 1, 1, Fraction(11, 16), Fraction(11, 16), Fraction(29, 64)]
Z5_TV = [Fraction(4, 5), Fraction(3, 5), Fraction(2, 5), Fraction(7, 20), Fraction(11, 40), Fraction(9, 40),
         Fraction(29, 160)]

small_specs = st.sampled_from(
    [ShuffleSpec(k, n) for k in ("OST", "RT", "TTR", "RTT", "RTR") for n in (2, 3, 4)]
    + [ShuffleSpec(k, n) for k in ("B_OST", "B_RT") for n in (1, 2, 3)]
    + [ShuffleSpec(k, n) for k in ("cyclic_simple", "cyclic_lazy") for n in (2, 5, 6)]
    + [ShuffleSpec("OST_biased", 3, alpha=2)]
)


@pytest.mark.parametrize("spec", [ShuffleSpec("OST", 3), ShuffleSpec("B_RT", 2), ShuffleSpec("cyclic_simple", 5)], ids=str)
def test_delta_identity(spec):
    d = delta_identity(spec)
    assert d.total() == 1
    assert d[d.group.identity()] == 1


@given(small_specs)
def test_step_from_delta_is_pmf_and_uniform_is_stationary(spec):
    d = from_spec(spec)
    probs = support_dict(spec)
    for g in d.group.elements:
        assert d[g] == probs.get(g, 0)
    u = step(uniform(spec), spec)
    assert tv_distance(u, uniform(spec), exact=True) == 0
    assert u.total() == 1


def test_two_step_matches_matrix_square():
    spec = ShuffleSpec("OST", 3)
    m = transition_matrix(spec, exact=True)
    size = len(m)
    sq = [[sum(m[i][k] * m[k][j] for k in range(size)) for j in range(size)] for i in range(size)]
    d = dict(evolve(spec, 2))[2]
    e = d.group.index(d.group.identity())
    for j, g in enumerate(d.group.elements):
        assert d[g] == sq[e][j]


def test_distance_examples():
    spec = ShuffleSpec("OST", 3)
    pi = uniform(spec)
    assert tv_distance(pi, pi, exact=True) == 0
    assert tv_distance(delta_identity(spec), pi, exact=True) == Fraction(5, 6)
    assert sep_distance(pi, exact=True) == 0
    assert sep_distance(delta_identity(spec), exact=True) == 1


def test_cyclic_table_exact():
    rows = distance_curve(ShuffleSpec("cyclic_simple", 5), 6, exact=True, exact_values=True)
    assert [r[1] for r in rows] == Z5_TV
    assert [r[2] for r in rows] == Z5_SEP
    text = curve_csv(rows)
    assert "4,0.275,0.6875,11/40,11/16" in text


def test_mixing_times():
    assert mixing_time(ShuffleSpec("OST", 3), 1) == 0
    # two-state chain with second eigenvalue 1/2: d_TV(t) = 2^-(t+1)
    assert mixing_time(ShuffleSpec("OST", 2), Fraction(1, 4)) == 1
    assert mixing_time(ShuffleSpec("cyclic_lazy", 2), 0) == 1
    assert mixing_time(ShuffleSpec("cyclic_simple", 4), Fraction(1, 10), t_max=50) is None


def test_transition_matrix_examples():
    assert transition_matrix(ShuffleSpec("OST", 1)).tolist() == [[1.0]]
    assert transition_matrix(ShuffleSpec("OST", 2), exact=True) == [[Fraction(3, 4), Fraction(1, 4)],
                                                                     [Fraction(1, 4), Fraction(3, 4)]]
    m = transition_matrix(ShuffleSpec("TTR", 4))
    assert np.allclose(m.sum(axis=0), 1) and np.allclose(m.sum(axis=1), 1)
    with pytest.raises(CapExceeded):
        transition_matrix(ShuffleSpec("RT", 4), cap=10)


def test_spectrum_examples():
    assert np.allclose(brute_force_spectrum(ShuffleSpec("OST", 2)), [1, 0.5])
    spec = ShuffleSpec("RT", 3)
    expected = sorted([(3 + 2 * diag_sum(l)) / 9 for l in partitions_of(3) for _ in range(dimension(l) ** 2)],
                      reverse=True)
    assert np.allclose(brute_force_spectrum(spec), expected)
    m = transition_matrix(spec)
    assert np.allclose(m @ np.ones(len(m)), np.ones(len(m)))
    with pytest.raises(ValueError):
        brute_force_spectrum(ShuffleSpec("TTR", 3))
    dedup = deduplicate([1, 0.5, 0.5 + 1e-12, 0])
    assert [m for _, m in dedup] == [1, 2, 1]
    assert np.allclose([v for v, _ in dedup], [1, 0.5, 0])


@given(small_specs)
def test_distances_are_monotone_and_ordered(spec):
    rows = distance_curve(spec, 12, exact=True, exact_values=True)
    for (_, tv0, sep0), (_, tv1, sep1) in zip(rows, rows[1:]):
        assert tv1 <= tv0 and sep1 <= sep0
    assert all(tv <= sep for _, tv, sep in rows)


@given(small_specs)
def test_float_mode_agrees_with_exact(spec):
    exact = distance_curve(spec, 6, exact=True)
    approx = distance_curve(spec, 6, exact=False)
    for a, b in zip(exact, approx):
        assert abs(a[1] - b[1]) < 1e-12 and abs(a[2] - b[2]) < 1e-12


@given(small_specs)
def test_mass_preserved_and_reversible_symmetry(spec):
    d = delta_identity(spec)
    for _ in range(3):
        d = step(d, spec)
        assert d.total() == 1
    if is_reversible(spec) and spec.group_kind != "cyclic":
        m = transition_matrix(spec)
        assert np.array_equal(m, m.T)
