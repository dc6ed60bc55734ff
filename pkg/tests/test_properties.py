"""Hypothesis-driven invariants of the product over random norms and vectors."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from polarize.csb import E1, E2, canonical_orientation, check_aux_propositions, compute_stvw, induce_c2_norm
from polarize.norms import FAMILIES, eval_norm, from_json, random_norm
from polarize.product import (
    check_algebraic_properties,
    check_phase_identities,
    check_unit_square_bound,
    polarization_product,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
seeds = st.integers(0, 2**32 - 1)
c2_families = st.sampled_from(FAMILIES)


def vec(n):
    return st.lists(st.tuples(finite, finite), min_size=n, max_size=n).map(
        lambda pairs: np.array([complex(a, b) for a, b in pairs])
    ).filter(lambda v: np.linalg.norm(v) > 1e-3)


@settings(max_examples=150, deadline=None)
@given(c2_families, seeds, vec(2), vec(2), finite)
def test_algebraic_properties(family, seed, x, y, r):
    d = random_norm(family, 2, seed)
    rep = check_algebraic_properties(d, x, y, r)
    assert rep.passed, rep.failures


@settings(max_examples=150, deadline=None)
@given(c2_families, seeds, vec(2), vec(2))
def test_csb_and_unit_square(family, seed, x, y):
    d = random_norm(family, 2, seed)
    pv = polarization_product(d, x, y)
    assert pv.ratio <= 1 + 1e-9
    m = check_unit_square_bound(d, x / pv.norm_x, y / pv.norm_y)
    assert m.passed


@settings(max_examples=150, deadline=None)
@given(c2_families, seeds, vec(2), vec(2), st.floats(-10, 10))
def test_phase_identities(family, seed, x, y, phi):
    d = random_norm(family, 2, seed)
    assert check_phase_identities(d, x, y, phi).passed


@settings(max_examples=100, deadline=None)
@given(c2_families, seeds)
def test_aux_propositions_after_orientation(family, seed):
    d = induce_c2_norm(random_norm(family, 2, seed), E1, E2)
    oriented, _ = canonical_orientation(d)
    assert all(c.passed for c in check_aux_propositions(compute_stvw(oriented), oriented))


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([f for f in FAMILIES if f != "induced_c2"]), st.integers(1, 4), seeds, vec(4))
def test_round_trip(family, dim, seed, x):
    d = random_norm(family, dim, seed)
    back = from_json(d.dumps())
    assert back == d
    assert eval_norm(back, x[:dim]) == eval_norm(d, x[:dim])


@settings(max_examples=100, deadline=None)
@given(seeds, vec(3), st.floats(0.01, 100))
def test_positive_scaling_of_arguments(seed, x, lam):
    d = random_norm("mixture", 3, seed)
    y = np.roll(x, 1)
    a = polarization_product(d, lam * x, y).value
    b = lam * polarization_product(d, x, y).value
    assert abs(a - b) <= 1e-9 * max(1.0, abs(b))
    assert math.isfinite(a.real)
