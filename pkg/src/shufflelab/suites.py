"""Self-checks run by ``shufflelab verify``.

Each suite returns a :class:`Report`: named checks with a pass flag, the
number of cases tried and up to ten counterexamples.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .bounds import diag_bound_check, first_row_bound_check
from .exact_engine import brute_force_spectrum
from .group_core import Permutation, SignedPermutation
from .lifting import (
    PLAIN,
    SIGNED,
    WordVector,
    act,
    adding,
    build_eigenbasis,
    format_word,
    letter,
    master_sides,
    switching,
    vector_rank,
    verify_eigenvector,
)
from .shuffles import ShuffleSpec
from .spectra import (
    bost_eig,
    biased_ost_eig,
    brt_eig,
    build_catalog,
    eig_order_checks,
    rt_eig,
)
from .tableaux import bipartitions_of, dimension, bi_dimension, partitions_of

__all__ = ["Report", "SUITES", "run_suite", "oracle_specs", "lifting_specs", "random_word_vector"]

ALPHAS = (-1, 1, 2)


@dataclass
class Check:
    passed: bool = True
    checked: int = 0
    witnesses: list = field(default_factory=list)


@dataclass
class Report:
    suite: str
    checks: dict[str, Check] = field(default_factory=dict)

    def record(self, name: str, ok: bool, witness=None) -> None:
        c = self.checks.setdefault(name, Check())
        c.checked += 1
        if not ok:
            c.passed = False
            if len(c.witnesses) < 10:
                c.witnesses.append(witness)

    def merge(self, name: str, passed: bool, checked: int, witnesses) -> None:
        c = self.checks.setdefault(name, Check())
        c.checked += checked
        c.passed = c.passed and passed
        c.witnesses.extend(list(witnesses)[: max(0, 10 - len(c.witnesses))])

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def lines(self) -> list[str]:
        out = []
        for name in sorted(self.checks):
            c = self.checks[name]
            out.append(f"{'PASS' if c.passed else 'FAIL'}\t{self.suite}\t{name}\tchecked={c.checked}")
            for w in c.witnesses:
                out.append(f"\twitness\t{w}")
        out.append(f"{'PASS' if self.passed else 'FAIL'}\t{self.suite}\toverall")
        return out


# ---------------------------------------------------------------------------
# oracle


def oracle_specs(n_max: int) -> list[ShuffleSpec]:
    """Specs compared against the dense spectrum: S_n up to 6, B_n up to 4."""
    out = []
    for n in range(2, min(n_max, 6) + 1):
        out += [ShuffleSpec("RT", n), ShuffleSpec("RTR", n), ShuffleSpec("OST", n)]
        out += [ShuffleSpec("OST_biased", n, alpha=a) for a in ALPHAS]
    for n in range(2, min(n_max, 4) + 1):
        out += [ShuffleSpec("B_RT", n), ShuffleSpec("B_OST", n)]
    return out


def compare_spectrum(spec: ShuffleSpec, tol: float = 1e-9) -> tuple[bool, str]:
    formula = np.array(build_catalog(spec).multiset())
    dense = brute_force_spectrum(spec)
    if formula.shape != dense.shape:
        return False, f"{spec}: {formula.size} formula values vs {dense.size} dense"
    gap = float(np.max(np.abs(np.sort(formula) - np.sort(dense))))
    return gap <= tol, f"{spec}: max gap {gap:.3e}"


def oracle_suite(n_max: int) -> Report:
    rep = Report("oracle")
    for spec in oracle_specs(n_max):
        ok, msg = compare_spectrum(spec)
        rep.record("spectrum", ok, msg)
        cat = build_catalog(spec)
        rep.record("count", cat.count_ok(), f"{spec}: {cat.total_multiplicity()} vs {cat.group_order}")
        rep.record("trace", cat.trace_ok(), f"{spec}: {cat.trace()} vs {cat.expected_trace()}")
    return rep


# ---------------------------------------------------------------------------
# lifting


def lifting_specs(n_max: int) -> list[ShuffleSpec]:
    out = []
    for n in range(1, min(n_max, 6) + 1):
        out += [ShuffleSpec("OST", n), ShuffleSpec("RT", n)]
        out += [ShuffleSpec("OST_biased", n, alpha=a) for a in ALPHAS]
    for n in range(1, min(n_max, 4) + 1):
        out += [ShuffleSpec("B_RT", n), ShuffleSpec("B_OST", n)]
    return out


def _formula_eigenvalue(spec: ShuffleSpec, tableau) -> Fraction:
    kind = spec.kind
    if kind in ("OST", "OST_biased"):
        return biased_ost_eig(tableau, spec if kind == "OST_biased" else None, spec.n)
    if kind == "RT":
        return rt_eig(tableau.shape, spec.n)
    if kind == "B_RT":
        return brt_eig(tableau.shape, spec.n)
    return bost_eig(tableau, spec if kind == "B_OST_biased" else None, spec.n)


def lifting_suite(n_max: int) -> Report:
    rep = Report("lifting")
    for spec in lifting_specs(n_max):
        signed = spec.group_kind == "hyperoctahedral"
        shapes = bipartitions_of(spec.n) if signed else partitions_of(spec.n)
        for shape in shapes:
            basis = build_eigenbasis(shape, spec)
            for item in basis:
                check = verify_eigenvector(item.vector, spec, item.eigenvalue)
                rep.record("eigen_equation", check.ok, f"{spec} {item.tableau}: {check.witness}")
                formula = _formula_eigenvalue(spec, item.tableau)
                rep.record("eigenvalue_matches_formula", formula == item.eigenvalue,
                           f"{spec} {item.tableau}: lifted {item.eigenvalue}, formula {formula}")
            dim = bi_dimension(shape) if signed else dimension(shape)
            rank = vector_rank([b.vector for b in basis])
            rep.record("independent", rank == dim == len(basis), f"{spec} {shape}: rank {rank}, dimension {dim}")
    return rep


# ---------------------------------------------------------------------------
# ordering


def ordering_suite(n_max: int) -> Report:
    rep = Report("ordering")
    for n in range(1, n_max + 1):
        for weight in (None,) + ALPHAS:
            for name, r in eig_order_checks(n, weight).items():
                label = f"{name} (alpha={0 if weight is None else weight})"
                rep.merge(label, r["passed"], r["checked"], [f"n={n}: {w}" for w in r["witnesses"]])
        for lam in partitions_of(n):
            rep.record("diag_bounds", diag_bound_check(lam), lam)
            rep.record("first_row_bounds", first_row_bound_check(lam), lam)
    return rep


# ---------------------------------------------------------------------------
# operator identities on random word vectors


def random_word_vector(rng: random.Random, n: int, mode: str = PLAIN, terms: int = 3,
                       letters: int | None = None) -> WordVector:
    """A few words sharing one evaluation, with small integer coefficients."""
    top = letters or max(1, min(n, 3))
    if mode == PLAIN:
        base = [letter(rng.randint(1, top)) for _ in range(n)]
    else:
        base = [letter(rng.randint(1, top), rng.choice(("", "+", "-"))) for _ in range(n)]
    acc: dict = {}
    for _ in range(terms):
        w = base[:]
        rng.shuffle(w)
        acc[tuple(w)] = acc.get(tuple(w), 0) + rng.choice((-3, -2, -1, 1, 2, 3))
    return WordVector(acc, mode=mode, length=n) if acc else WordVector.zero(mode, n)


def _random_perm(rng: random.Random, n: int) -> Permutation:
    images = list(range(1, n + 1))
    rng.shuffle(images)
    return Permutation(tuple(images))


def _random_signed(rng: random.Random, n: int) -> SignedPermutation:
    images = list(range(1, n + 1))
    rng.shuffle(images)
    return SignedPermutation(tuple(v * rng.choice((1, -1)) for v in images))


def _extend(sigma, n1: int):
    images = tuple(sigma.images) + tuple(range(len(sigma.images) + 1, n1 + 1))
    return type(sigma)(images)


def _show(v: WordVector) -> str:
    return str(v) if len(v) <= 6 else f"{len(v)}-term vector with first word {format_word(v.words()[0])}"


def identities_suite(n_max: int, samples: int = 1000, seed: int = 0) -> Report:
    """Master equations, Phi/Theta commutation and equivariance on random vectors."""
    rep = Report("identities")
    rng = random.Random(seed)
    plain_specs = [ShuffleSpec("OST", 1), ShuffleSpec("RT", 1)] + [ShuffleSpec("OST_biased", 1, alpha=a) for a in ALPHAS]
    signed_specs = [ShuffleSpec("B_RT", 1), ShuffleSpec("B_OST", 1), ShuffleSpec("B_OST_biased", 1, alpha=1)]
    for n in range(1, min(n_max, 6) + 1):
        for _ in range(samples):
            top = min(n + 1, 4)
            v = random_word_vector(rng, n, PLAIN, letters=top)
            a, b = rng.sample(range(1, top + 1), 2) if top > 1 else (1, 1)
            lhs = adding(switching(v, b, a), b)
            rhs = switching(adding(v, b), b, a) - adding(v, a)
            rep.record("phi_theta_commutation", lhs == rhs, f"n={n} a={a} b={b} v={_show(v)}")
            sigma = _random_perm(rng, n)
            rep.record("theta_equivariance", act(sigma, switching(v, b, a)) == switching(act(sigma, v), b, a),
                       f"n={n} sigma={sigma.images} v={_show(v)}")
            rep.record("phi_equivariance", act(_extend(sigma, n + 1), adding(v, a)) == adding(act(sigma, v), a),
                       f"n={n} sigma={sigma.images} v={_show(v)}")
            spec = rng.choice(plain_specs)
            l, r = master_sides(spec, v, a)
            rep.record(f"master_{spec.kind}", l == r, f"n={n} a={a} {spec} v={_show(v)}")

            w = random_word_vector(rng, n, SIGNED, letters=top)
            lhs2 = adding(switching(w, b, a, "2"), b, "2")
            rhs2 = switching(adding(w, b, "2"), b, a, "2") - adding(w, a, "2").scale(2)
            rep.record("phi2_theta2_commutation", lhs2 == rhs2, f"n={n} a={a} b={b} v={_show(w)}")
            tau = _random_signed(rng, n)
            flavor = rng.choice(("1", "pm", "+", "-", "2"))
            rep.record("signed_theta_equivariance",
                       act(tau, switching(w, b, a, flavor)) == switching(act(tau, w), b, a, flavor),
                       f"n={n} flavor={flavor} sigma={tau.images} v={_show(w)}")
            add_flavor = rng.choice(("1", "+", "-", "2"))
            rep.record("signed_phi_equivariance",
                       act(_extend(tau, n + 1), adding(w, a, add_flavor)) == adding(act(tau, w), a, add_flavor),
                       f"n={n} flavor={add_flavor} sigma={tau.images} v={_show(w)}")
            sspec = rng.choice(signed_specs)
            comp = rng.choice((1, 2))
            l, r = master_sides(sspec, w, a, comp)
            rep.record(f"master_{sspec.kind}_component{comp}", l == r, f"n={n} a={a} {sspec} v={_show(w)}")
    return rep


SUITES: dict[str, Callable[..., Report]] = {
    "oracle": oracle_suite,
    "lifting": lifting_suite,
    "ordering": ordering_suite,
    "identities": identities_suite,
}


def run_suite(name: str, n_max: int, **kwargs) -> Report:
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    return fn(n_max, **kwargs)
