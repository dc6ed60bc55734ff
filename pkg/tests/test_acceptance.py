"""Acceptance criteria 1-8. Each test prints one PASS/FAIL line, repeated in the terminal summary."""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from polarize.csb import (
    E1,
    E2,
    HALF_SQRT2,
    b_star,
    canonical_orientation,
    check_aux_propositions,
    check_substitution_identity,
    compute_stvw,
    d_equality_locus,
    g_diagonal_minimum,
    induce_c2_norm,
    inequality_D,
    minimize_r_numeric,
    r_function,
    verify_csb_proof,
)
from polarize.explorer import brute_force_max_abs_product, max_abs_product, max_phase_defect
from polarize.norms import FAMILIES, DualMax, HermitianQuadratic, PNorm, eval_norm, families_for_dim, random_norm
from polarize.product import (
    check_algebraic_properties,
    check_phase_identities,
    check_unit_square_bound,
    polarization_product,
)
from polarize.reproduce import ROTATED_PRODUCT, SIXTH_ROOT, SUP_PRODUCT, SUP_X, SUP_Y
from polarize.rng import child_seed, complex_normal, stream

SQRT2, SQRT3 = math.sqrt(2), math.sqrt(3)
SUP = PNorm(math.inf, 2)


def report(k, title, ok, detail):
    line = f"criterion {k} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    ACCEPTANCE_LINES[k] = line
    print(line)
    assert ok, line


def test_criterion_1_sup_norm_example():
    t0 = time.perf_counter()
    plain = polarization_product(SUP, SUP_X, SUP_Y).value
    rotated = polarization_product(SUP, SIXTH_ROOT * SUP_X, SUP_Y).value
    elapsed = time.perf_counter() - t0
    e1, e2 = abs(plain - SUP_PRODUCT), abs(rotated - ROTATED_PRODUCT)
    gap = abs(rotated) - abs(plain)
    ok = e1 <= 1e-12 and e2 <= 1e-12 and gap > 0.02 and elapsed < 1.0
    report(1, "sup-norm example", ok,
           f"|err| {e1:.1e}, rotated |err| {e2:.1e}, modulus gap {gap:.4f}, {elapsed * 1e3:.1f} ms")


def test_criterion_2_csb_stress():
    t0 = time.perf_counter()
    worst, count, per_family = 0.0, 0, {f: 0 for f in FAMILIES}
    for dim in (2, 3):
        fams = families_for_dim(dim)
        trials = 520 if dim == 2 else 480
        for i in range(trials):
            fam = fams[i % len(fams)]
            seed = child_seed(2024, "stress", dim, i)
            rep = max_abs_product(random_norm(fam, dim, seed), restarts=6, iters=400, seed=seed)
            worst = max(worst, rep.best_value)
            per_family[fam] += 1
            count += 1
    elapsed = time.perf_counter() - t0
    ok = count >= 1000 and worst <= 1 + 1e-7 and all(per_family.values())
    report(2, "CSB stress search", ok, f"{count} norms, max ratio 1{worst - 1:+.2e}, {elapsed:.1f} s")


FIXED_HERMITIAN = [
    HermitianQuadratic.from_matrix([[2, 0], [0, 1]]),
    HermitianQuadratic.from_matrix([[1, 0.5j], [-0.5j, 1]]),
    HermitianQuadratic.from_matrix([[3, 1 - 1j], [1 + 1j, 2]]),
]
FIXED_DUAL_MAX = [
    DualMax.from_rows([[1, 1], [1, -1]]),
    DualMax.from_rows([[1, 0], [0, 1], [1, 1j]]),
    DualMax.from_rows([[2, 1j], [0.5, -1], [1 + 1j, 0.3], [0, 1j]]),
]


def test_criterion_3_proof_chain():
    fixed = [PNorm(1, 2), PNorm(2, 2), SUP, *FIXED_HERMITIAN, *FIXED_DUAL_MAX]
    fams = families_for_dim(2)
    randoms = [random_norm(fams[i % len(fams)], 2, child_seed(7, "proof", i)) for i in range(1200)]
    t0 = time.perf_counter()
    failures, cases = [], {"a": 0, "b": 0, "c": 0}
    for i, d in enumerate(fixed + randoms):
        tr = verify_csb_proof(d)
        cases[tr.case] += 1
        if not tr.passed:
            failures.append(i)
    elapsed = time.perf_counter() - t0
    expected = [verify_csb_proof(d).case for d in fixed[:3]]
    ok = not failures and elapsed <= 60 and expected == ["a", "a", "c"] and all(cases.values())
    report(3, "proof-chain replay", ok,
           f"{len(fixed) + len(randoms)} norms, {len(failures)} failures, cases {cases}, {elapsed:.1f} s")


def test_criterion_4_closed_forms():
    ws = stream(4, "w").uniform(HALF_SQRT2, 10, 100)
    ws[0] = 10.0
    identity = max(abs(r_function(b_star(w), w) ** 2 - (2 + math.sqrt(4 * w * w - 1) / w**2)) for w in ws)
    argmin = max(abs(minimize_r_numeric(w) - b_star(w)) for w in ws)
    m = g_diagonal_minimum()
    loc_err = abs(m.location - (3 - SQRT3) / 6)
    val_err = abs(m.value - math.sqrt(2 + SQRT3))
    num_err = max(abs(m.numeric_location - (3 - SQRT3) / 6), abs(m.numeric_value - math.sqrt(2 + SQRT3)))
    radicals = abs(math.sqrt(2 + SQRT3) - (SQRT2 + math.sqrt(6)) / 2)
    ok = identity <= 1e-10 and argmin <= 1e-6 and max(loc_err, val_err, num_err) <= 1e-8 and radicals <= 1e-12
    report(4, "closed-form identities", ok,
           f"R identity {identity:.1e}, argmin {argmin:.1e}, G min {max(loc_err, val_err, num_err):.1e}, "
           f"radicals {radicals:.1e}")


def test_criterion_5_inequality_D():
    grid = np.linspace(0.5, 10, 200)
    worst_d, worst_sub = -math.inf, 0.0
    for t in grid:
        for w in grid:
            lhs, rhs = inequality_D(t, w)
            worst_d = max(worst_d, lhs - rhs)
            r = check_substitution_identity(t, w)
            worst_sub = max(worst_sub, r.residual / r.scale)
    # w >= 0.75 keeps the locus at t <= 9 where absolute 1e-9 is meaningful
    locus = 0.0
    for w in stream(5, "locus").uniform(0.75, 10, 100):
        lhs, rhs = inequality_D(d_equality_locus(w), w)
        locus = max(locus, abs(lhs - rhs))
    gap = 0.0
    for w in stream(5, "gap").uniform(0.5, 10, 100):
        lhs, rhs = inequality_D(HALF_SQRT2, w)
        gap = max(gap, abs(rhs - lhs - 1))
    ok = worst_d <= 1e-9 and locus <= 1e-9 and gap <= 1e-9 and worst_sub <= 1e-9
    report(5, "inequality D structure", ok,
           f"max lhs-rhs {worst_d:.2e}, locus {locus:.1e}, unit gap {gap:.1e}, substitution {worst_sub:.1e}")


def test_criterion_6_inner_product_oracle():
    worst_rel, worst_phase = 0.0, 0.0
    for i in range(100):
        dim = 2 + i % 3
        seed = child_seed(6, "herm", i)
        d = random_norm("hermitian", dim, seed)
        a = d.A
        rng = stream(seed, "pairs")
        x, y = complex_normal(rng, (100, dim)), complex_normal(rng, (100, dim))
        for xk, yk in zip(x, y):
            want = np.vdot(yk, a @ xk)
            got = polarization_product(d, xk, yk).value
            worst_rel = max(worst_rel, abs(got - want) / max(abs(want), 1e-300))
        worst_phase = max(worst_phase, max_phase_defect(d, restarts=3, iters=200, seed=seed).best_value)
    ok = worst_rel <= 1e-10 and worst_phase <= 1e-8
    report(6, "inner-product oracle", ok, f"max rel err {worst_rel:.1e}, max phase defect {worst_phase:.1e}")


def test_criterion_7_property_suite():
    t0 = time.perf_counter()
    fams = families_for_dim(2)
    n, violations = 0, []
    rng = stream(7, "suite")
    for i in range(10_000):
        d = random_norm(fams[i % len(fams)], 2, child_seed(7, "suite", i))
        x, y = complex_normal(rng, 2), complex_normal(rng, 2)
        r = float(rng.uniform(-5, 5))
        phi = float(rng.uniform(-math.pi, math.pi))
        results = [
            check_algebraic_properties(d, x, y, r).passed,
            check_unit_square_bound(d, x / eval_norm(d, x), y / eval_norm(d, y)).passed,
            check_phase_identities(d, x, y, phi).passed,
        ]
        oriented, _ = canonical_orientation(induce_c2_norm(d, E1, E2))
        results.append(all(c.passed for c in check_aux_propositions(compute_stvw(oriented), oriented)))
        if not all(results):
            violations.append((i, results))
        n += 1
    elapsed = time.perf_counter() - t0
    report(7, "algebraic property suite", not violations and n >= 10_000,
           f"{n} instances, {len(violations)} violations, {elapsed:.1f} s")


def test_criterion_8_brute_force():
    t0 = time.perf_counter()
    axes = (12, 12, 10, 10, 10, 10)
    brute, _, _ = brute_force_max_abs_product(SUP, axes)
    evals = int(np.prod(axes))
    best = max_abs_product(SUP, restarts=50, iters=500, seed=8).best_value
    elapsed = time.perf_counter() - t0
    ok = evals >= 1_000_000 and brute <= 1 + 1e-6 and best >= brute - 1e-6
    report(8, "sup-norm brute-force oracle", ok,
           f"{evals} grid points, grid max {brute:.12f}, optimizer {best:.12f}, {elapsed:.1f} s")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
