import math

import numpy as np
import pytest

from polarize.csb import (
    E1,
    E2,
    HALF_SQRT2,
    NEGATE_FIRST,
    SWAP_ARGUMENTS,
    StvwQuadruple,
    assign_case,
    b_star,
    bound_A,
    bound_B,
    canonical_orientation,
    check_aux_propositions,
    check_prop_neun,
    check_substitution_identity,
    compute_stvw,
    d_equality_locus,
    decomposition_identities_check,
    g_diagonal_minimum,
    g_map,
    induce_c2_norm,
    inequality_C,
    inequality_D,
    minimize_r_numeric,
    product_from_stvw,
    r_function,
    verify_csb_proof,
)
from polarize.errors import DependentVectorsError, DomainError
from polarize.norms import HermitianQuadratic, PNorm, eval_norm, random_norm
from polarize.product import polarization_product
from polarize.rng import complex_normal, stream

SQRT2, SQRT3 = math.sqrt(2), math.sqrt(3)
L1, L2, SUP = PNorm(1, 2), PNorm(2, 2), PNorm(math.inf, 2)


def test_induced_identity_basis():
    d = induce_c2_norm(SUP, E1, E2)
    for x in ([1, 2j], [3 - 1j, 0.5]):
        assert eval_norm(d, x) == eval_norm(SUP, x)


def test_induced_coordinate_subspace():
    d = induce_c2_norm(PNorm(1, 3), [1, 0, 0], [0, 0, 1])
    assert eval_norm(d, [3, 4j]) == pytest.approx(7.0)


def test_induced_product_matches_base_space():
    rng = stream(1, "induced")
    b = complex_normal(rng, (3, 3))
    base = HermitianQuadratic.from_matrix(b.conj().T @ b + np.eye(3))
    a, c = complex_normal(rng, 3), complex_normal(rng, 3)
    d = induce_c2_norm(base, a, c)
    lhs = polarization_product(d, E1, E2).value
    rhs = polarization_product(base, a / eval_norm(base, a), c / eval_norm(base, c)).value
    assert abs(lhs - rhs) <= 1e-12


def test_induced_rejects_dependent():
    with pytest.raises(DependentVectorsError):
        induce_c2_norm(PNorm(2, 2), [1, 1j], [2j, -2])


@pytest.mark.parametrize("norm, value", [(SUP, 1.0), (L1, 0.5), (L2, 1 / SQRT2)])
def test_stvw_of_p_norms(norm, value):
    assert compute_stvw(norm).as_tuple() == pytest.approx((value,) * 4, abs=1e-15)


@pytest.mark.parametrize("v", [1.0, 0.5])
def test_product_from_equal_quadruple_is_zero(v):
    assert product_from_stvw(StvwQuadruple(v, v, v, v)) == 0


def test_product_from_stvw_matches_polarization():
    for seed in range(20):
        d = random_norm("dual_max", 2, seed)
        d = induce_c2_norm(d, E1 / eval_norm(d, E1), E2 / eval_norm(d, E2))
        assert abs(product_from_stvw(compute_stvw(d)) - polarization_product(d, E1, E2).value) <= 1e-12


def test_orientation_identity_for_sup():
    d, ops = canonical_orientation(SUP)
    assert ops == []
    assert d is SUP


def _find(pred):
    for seed in range(500):
        d = random_norm("dual_max", 2, seed)
        z = polarization_product(d, E1 / eval_norm(d, E1), E2 / eval_norm(d, E2)).value
        if pred(z):
            return d
    raise AssertionError("no norm found")


def _oriented_product(d):
    oriented, ops = canonical_orientation(induce_c2_norm(d, E1, E2))
    return polarization_product(oriented, E1, E2).value, ops


def test_orientation_negates_first_when_real_part_negative():
    z, ops = _oriented_product(_find(lambda z: z.real < -1e-3))
    assert NEGATE_FIRST in ops
    assert z.real >= 0 and z.imag >= 0


def test_orientation_swaps_when_imag_part_negative():
    z, ops = _oriented_product(_find(lambda z: z.real > 1e-3 and z.imag < -1e-3))
    assert ops == [SWAP_ARGUMENTS]
    assert z.real >= 0 and z.imag >= 0


def test_oriented_quadruple_is_ordered():
    for seed in range(50):
        d = random_norm("max_of", 2, seed)
        oriented, _ = canonical_orientation(induce_c2_norm(d, E1, E2))
        q = compute_stvw(oriented)
        assert q.s <= q.t + 1e-12 and q.v <= q.w + 1e-12


def test_r_function_values():
    assert r_function(0.0, 1.0) == pytest.approx(2.0)
    assert r_function(1.0, 1.0) == pytest.approx(2 + SQRT2)
    assert r_function(b_star(1.0), 1.0) == pytest.approx(math.sqrt(2 + SQRT3), abs=1e-12)


def test_b_star_values():
    assert b_star(HALF_SQRT2) == pytest.approx(0.0, abs=1e-15)
    assert b_star(1.0) == pytest.approx(0.5 * (1 - 1 / SQRT3), abs=1e-15)
    assert b_star(SQRT2) == pytest.approx(0.5 * (1 - 1 / math.sqrt(7)), abs=1e-15)
    assert minimize_r_numeric(SQRT2) == pytest.approx(b_star(SQRT2), abs=1e-6)


@pytest.mark.parametrize("w", [0.5, 0.0, -1.0, math.nan])
def test_b_star_domain(w):
    with pytest.raises(DomainError):
        b_star(w)


def test_r_function_domain():
    with pytest.raises(DomainError):
        r_function(0.3, 0.0)


def test_prop_neun_examples():
    assert all(c.lhs == pytest.approx(1.0) and c.rhs == pytest.approx(2.0)
               for c in check_prop_neun(compute_stvw(SUP), [0.0]))
    for c in check_prop_neun(compute_stvw(L1), [0.0]):
        assert c.passed and c.margin == pytest.approx(0.0, abs=1e-15)


def test_prop_neun_random_dual_max():
    rng = stream(2, "neun")
    for seed in range(10):
        d = random_norm("dual_max", 2, seed)
        q = compute_stvw(induce_c2_norm(d, E1, E2))
        assert all(c.passed for c in check_prop_neun(q, rng.uniform(-2, 2, 100)))


def test_bound_A_examples():
    assert bound_A(compute_stvw(SUP)) == pytest.approx(2 + SQRT3)
    assert bound_A(StvwQuadruple(0.5, 0.5, 0.5, HALF_SQRT2)) == pytest.approx(4.0)
    assert bound_A(StvwQuadruple(0.5, 0.5, 0.5, 0.6)) is None
    assert bound_B(StvwQuadruple(0.5, 1.0, 0.5, 0.5)) == pytest.approx(2 + SQRT3)


def test_inequality_D_examples():
    lhs, rhs = inequality_D(HALF_SQRT2, HALF_SQRT2)
    assert lhs == pytest.approx(0.0, abs=1e-15) and rhs == pytest.approx(1.0)
    lhs, rhs = inequality_D(HALF_SQRT2, 2.0)
    assert rhs - lhs == pytest.approx(1.0, abs=1e-12)
    t = SQRT2 / (SQRT3 - 1)
    lhs, rhs = inequality_D(t, 1.0)
    assert abs(lhs - rhs) <= 1e-9
    assert lhs == pytest.approx(4 * t * t, abs=1e-9)
    assert d_equality_locus(1.0) == pytest.approx(t, abs=1e-14)


def test_inequality_C_examples():
    lhs, margin = inequality_C(1.0, 1.0)
    assert lhs == pytest.approx(2 * (1 + SQRT3) ** 2)
    assert margin == pytest.approx(16 - lhs)
    lhs, _ = inequality_C(HALF_SQRT2, HALF_SQRT2)
    assert lhs == pytest.approx(8.0)


def test_inequality_C_on_grid():
    g = np.linspace(0.5, 10, 60)
    assert all(inequality_C(t, w)[1] >= -1e-9 for t in g for w in g)


def test_substitution_identity_examples():
    r = check_substitution_identity(HALF_SQRT2, HALF_SQRT2)
    assert r.residual <= 1e-12 and r.square == pytest.approx(4.0)
    r = check_substitution_identity(d_equality_locus(1.0), 1.0)
    assert r.passed and abs(r.square) <= 1e-9
    rng = stream(3, "subst")
    for t, w in rng.uniform(0.5, 10, (100, 2)):
        assert check_substitution_identity(t, w).passed


def test_g_map_minimum():
    m = g_diagonal_minimum()
    assert m.location == pytest.approx((3 - SQRT3) / 6, abs=1e-12)
    assert m.value == pytest.approx((SQRT2 + math.sqrt(6)) / 2, abs=1e-12)
    assert g_map(m.location, m.location) == pytest.approx(m.value, abs=1e-12)
    assert m.value == pytest.approx(1.932, abs=5e-4)
    assert g_map(0.0, 0.0) == pytest.approx(2.0)


def test_aux_propositions_sup():
    checks = {c.name: c for c in check_aux_propositions(compute_stvw(SUP), SUP)}
    assert all(c.passed for c in checks.values())
    assert checks["min_t_w_at_most_sqrt2"].lhs == pytest.approx(1.0)
    assert checks["recip_s_plus_t_at_least_2"].margin == pytest.approx(0.0, abs=1e-12)
    assert checks["s_above_harmonic_vw"].margin >= 0


def test_aux_propositions_l1():
    checks = {c.name: c for c in check_aux_propositions(compute_stvw(L1), L1)}
    assert all(c.passed for c in checks.values())
    c = checks["s_above_harmonic_vw"]
    assert c.lhs == pytest.approx(SQRT2 * 0.25) and c.rhs == pytest.approx(0.5)


def test_aux_propositions_random_oriented():
    for seed in range(100):
        fam = ("dual_max", "mixture", "max_of", "hermitian")[seed % 4]
        d = random_norm(fam, 2, seed)
        oriented, _ = canonical_orientation(induce_c2_norm(d, E1, E2))
        failed = [c for c in check_aux_propositions(compute_stvw(oriented), oriented) if not c.passed]
        assert not failed, (seed, failed)


def test_decomposition_examples():
    for c in decomposition_identities_check(SUP, 0.0, 0.0):
        assert c.passed
    checks = {c.name: c for c in decomposition_identities_check(SUP, 0.2113, 0.2113)}
    assert checks["recip_s_triangle_bound"].rhs == pytest.approx(1.9319, abs=1e-4)
    d = induce_c2_norm(random_norm("dual_max", 2, 4), E1, E2)
    for a, b in stream(4, "decomp").uniform(-1, 2, (50, 2)):
        assert all(c.passed for c in decomposition_identities_check(d, a, b))


def test_case_assignment():
    assert assign_case(HALF_SQRT2, HALF_SQRT2) == "a"
    assert assign_case(HALF_SQRT2 + 1e-13, 0.6) == "a"
    assert assign_case(1.0, 0.6) == "b"
    assert assign_case(0.6, 1.0) == "b"
    assert assign_case(1.0, 1.0) == "c"


def test_verify_l1():
    tr = verify_csb_proof(L1)
    assert tr.case == "a" and tr.final_bound == pytest.approx(0.0, abs=1e-15) and tr.passed


def test_verify_sup():
    tr = verify_csb_proof(SUP)
    assert tr.case == "c" and tr.passed
    assert tr.final_bound == pytest.approx(0.0, abs=1e-15)
    assert tr.check("inequality_C").margin == pytest.approx(16 - 2 * (1 + SQRT3) ** 2, abs=1e-9)


def test_verify_trace_json():
    obj = verify_csb_proof(SUP).to_json()
    assert set(obj) >= {"case", "stvw", "orientation", "checks", "final_bound", "passed"}
    assert all(set(c) >= {"name", "margin", "passed"} for c in obj["checks"])


def test_verify_random_norms_all_cases():
    cases = set()
    for seed in range(300):
        d = random_norm(("dual_max", "mixture", "max_of", "induced_c2")[seed % 4], 2, seed)
        tr = verify_csb_proof(d)
        assert tr.passed, (seed, [c for c in tr.checks if not c.passed])
        assert tr.final_bound <= 16 + 1e-7
        cases.add(tr.case)
    assert cases == {"a", "b", "c"}


def test_verify_requires_c2():
    with pytest.raises(Exception):
        verify_csb_proof(PNorm(2, 3))
