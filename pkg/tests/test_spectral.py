"""Perturbed dbar operators: derivatives, adjoints, spectra, sweeps."""

import itertools

import numpy as np
import pytest

from torusdbar.errors import (
    BidegreeOverflow,
    BidegreeUnderflow,
    CutoffTooSmall,
    TrivialBundle,
)
from torusdbar.lattice import (
    lambda_c_generators,
    period_matrix,
    random_lattice,
    reduce,
    square_lattice,
)
from torusdbar.spectral import (
    FormGrid,
    apply_dbar_rho,
    apply_dbar_rho_star,
    character,
    character_form,
    counterexample_11,
    fd_laplacian_lambda_min,
    k_rho,
    l2_inner,
    l2_norm,
    min_eigenvalue,
    p0_kernel_gap,
    random_bandlimited,
    smallest_nonzero_eigenvalue,
    solve_dbar_rho,
    sweep_pic0,
    verify_cross_term,
    verify_gap_inequality,
)

SQ1 = square_lattice(1)


def fd_dzbar_of_character(w, lat, j, z, h=1e-6):
    """Independent oracle: centred differences of chi_w in the ambient x, y
    coordinates of C^d, with lattice coordinates from a general solve."""
    a = period_matrix(lat)

    def chi(zz):
        coords = np.linalg.solve(a.T, np.concatenate([zz.real, zz.imag]))
        return np.exp(2j * np.pi * np.dot(w, coords))

    ex = np.zeros(lat.d, dtype=complex)
    ex[j] = 1.0
    dx = (chi(z + h * ex) - chi(z - h * ex)) / (2 * h)
    dy = (chi(z + 1j * h * ex) - chi(z - 1j * h * ex)) / (2 * h)
    return 0.5 * (dx + 1j * dy)


def test_character_form_zero():
    assert np.abs(character_form(np.zeros(2), SQ1)).max() == 0.0


def test_character_form_basis_frequencies():
    from torusdbar.lattice import dual_basis

    rng = np.random.default_rng(0)
    lat = random_lattice(2, rng)
    dual = dual_basis(lat).vectors
    for k in range(4):
        w = np.zeros(4)
        w[k] = 1.0
        assert np.linalg.norm(character_form(w, lat) - 1j * np.pi * dual[k]) < 1e-12


def test_character_form_against_fd_oracle():
    rng = np.random.default_rng(1)
    for d in (1, 2):
        lat = random_lattice(d, rng)
        w = rng.integers(-3, 4, size=2 * d)
        z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        coords = np.linalg.solve(period_matrix(lat).T, np.concatenate([z.real, z.imag]))
        chi_val = np.exp(2j * np.pi * np.dot(w, coords))
        eta = character_form(w, lat)
        for j in range(d):
            fd = fd_dzbar_of_character(w, lat, j, z)
            assert abs(fd - eta[j] * chi_val) < 1e-6 * (1 + abs(eta[j]))


def test_character_form_lies_in_lambda_c():
    rng = np.random.default_rng(2)
    lat = random_lattice(2, rng)
    gens = lambda_c_generators(lat)
    w = rng.integers(-3, 4, size=4)
    assert np.linalg.norm(character_form(w, lat) - w.astype(complex) @ gens) < 1e-12


def test_dbar_of_constant_is_zero_when_untwisted():
    u = FormGrid.from_function(1, 8, np.ones((8, 8)))
    out = apply_dbar_rho(u, np.zeros(1), SQ1)
    assert l2_norm(out, SQ1) == 0.0


def test_dbar_of_constant_is_c_wedge():
    c = np.array([0.3 - 0.2j, 0.1j])
    lat = square_lattice(2)
    u = FormGrid.from_function(2, 4, np.ones((4,) * 4))
    out = apply_dbar_rho(u, c, lat)
    for j in range(2):
        comp = out.component((), (j,))
        assert np.abs(comp - c[j]).max() < 1e-14


def test_dbar_on_character_matches_closed_form():
    rng = np.random.default_rng(3)
    for d in (1, 2):
        lat = random_lattice(d, rng)
        c = reduce(0.3 * (rng.standard_normal(d) + 1j * rng.standard_normal(d)), lat).c
        w = rng.integers(-2, 3, size=2 * d)
        n = 8
        u = FormGrid.from_function(d, n, character(w, d, n))
        out = apply_dbar_rho(u, c, lat)
        eta = character_form(w, lat)
        for j in range(d):
            expect = (eta[j] + c[j]) * u.comps[0, 0]
            assert np.abs(out.component((), (j,)) - expect).max() < 1e-10


def test_dbar_squared_is_zero():
    rng = np.random.default_rng(4)
    worst = 0.0
    for d in (1, 2):
        lat = random_lattice(d, rng)
        c = reduce(0.2 * (rng.standard_normal(d) + 1j * rng.standard_normal(d)), lat).c
        for p in (0, 1):
            if d < 2 and p > 0:
                continue
            u = random_bandlimited(d, p, 0, 8, rng, zero_mean=False)
            once = apply_dbar_rho(u, c, lat)
            if once.q < d:
                worst = max(worst, l2_norm(apply_dbar_rho(once, c, lat), lat))
    assert worst < 1e-10


def test_bidegree_overflow_and_underflow():
    u = random_bandlimited(1, 0, 1, 8, np.random.default_rng(5), zero_mean=False)
    with pytest.raises(BidegreeOverflow):
        apply_dbar_rho(u, np.zeros(1), SQ1)
    f = FormGrid.from_function(1, 8, np.ones((8, 8)))
    with pytest.raises(BidegreeUnderflow):
        apply_dbar_rho_star(f, np.zeros(1), SQ1)


def test_adjoint_of_constant_one_form_untwisted():
    v = FormGrid.zeros(1, 0, 1, 8)
    v.comps[0, 0] = 1.0
    out = apply_dbar_rho_star(v, np.zeros(1), SQ1)
    assert l2_norm(out, SQ1) < 1e-14


def test_adjointness_identity():
    rng = np.random.default_rng(6)
    worst = 0.0
    for d in (1, 2):
        lat = random_lattice(d, rng)
        c = reduce(0.2 * (rng.standard_normal(d) + 1j * rng.standard_normal(d)), lat).c
        for p in range(d):
            for _ in range(10):
                u = random_bandlimited(d, p, 0, 8, rng, zero_mean=False)
                v = random_bandlimited(d, p, 1, 8, rng, zero_mean=False)
                lhs = l2_inner(apply_dbar_rho(u, c, lat), v, lat)
                rhs = l2_inner(u, apply_dbar_rho_star(v, c, lat), lat)
                worst = max(worst, abs(lhs - rhs))
    assert worst < 1e-10


def test_adjoint_of_twisted_character_one_form():
    rng = np.random.default_rng(7)
    lat = random_lattice(1, rng)
    w = np.array([1, -2])
    n = 8
    v = FormGrid.zeros(1, 0, 1, n)
    v.comps[0, 0] = character(w, 1, n)
    out = apply_dbar_rho_star(v, np.zeros(1), lat)
    eta = character_form(w, lat)
    expect = -np.conj(-eta[0]) * v.comps[0, 0]  # -d/dz of chi_w is conj(eta) chi_w
    assert np.abs(out.comps[0, 0] - expect).max() < 1e-10


def test_characters_diagonalise_laplacian():
    rng = np.random.default_rng(8)
    for d in (1, 2):
        lat = random_lattice(d, rng)
        c = reduce(0.3 * (rng.standard_normal(d) + 1j * rng.standard_normal(d)), lat).c
        w = rng.integers(-2, 3, size=2 * d)
        n = 8
        u = FormGrid.from_function(d, n, character(w, d, n))
        lap = apply_dbar_rho_star(apply_dbar_rho(u, c, lat), c, lat)
        eig = np.linalg.norm(character_form(w, lat) + c) ** 2
        assert np.abs(lap.comps[0, 0] - eig * u.comps[0, 0]).max() < 1e-10


# ---------------------------------------------------------------------------
# character spectrum


def brute_min_eigen(c, lat, radius=6, exclude_zero=False):
    gens = lambda_c_generators(lat)
    best = np.inf
    for offs in itertools.product(range(-radius, radius + 1), repeat=2 * lat.d):
        if exclude_zero and not any(offs):
            continue
        eta = np.array(offs, dtype=complex) @ gens
        best = min(best, float(np.linalg.norm(eta + c) ** 2))
    return best


def test_min_eigenvalue_trivial_bundle():
    report = min_eigenvalue(reduce(np.zeros(1), SQ1), SQ1)
    assert report.lambda_min == 0.0 and report.w_min == (0, 0)
    smallest = smallest_nonzero_eigenvalue(SQ1)
    assert smallest == pytest.approx(brute_min_eigen(np.zeros(1), SQ1, exclude_zero=True))


def test_min_eigenvalue_reduced_point():
    cv = reduce(np.array([0.25 + 0.1j]), SQ1)
    report = min_eigenvalue(cv, SQ1)
    assert report.w_min == (0, 0)
    assert report.lambda_min == pytest.approx(cv.norm**2, abs=1e-14)
    assert report.k_rho * cv.norm == pytest.approx(1.0, abs=1e-12)


def test_min_eigenvalue_matches_brute_force():
    rng = np.random.default_rng(9)
    for d in (1, 2):
        lat = random_lattice(d, rng)
        cv = reduce(rng.standard_normal(d) + 1j * rng.standard_normal(d), lat)
        report = min_eigenvalue(cv, lat, cutoff=3)
        assert report.lambda_min == pytest.approx(brute_min_eigen(cv.c, lat, radius=4))


def test_min_eigenvalue_midpoint_tie():
    gens = lambda_c_generators(SQ1)
    cv = reduce(0.5 * gens[0], SQ1)
    report = min_eigenvalue(cv, SQ1)
    vals = []
    for offs in itertools.product(range(-2, 3), repeat=2):
        eta = np.array(offs, dtype=complex) @ gens
        vals.append(np.linalg.norm(eta + cv.c) ** 2)
    vals = sorted(vals)
    assert vals[0] == pytest.approx(vals[1], abs=1e-14)  # two minimisers
    assert report.lambda_min == pytest.approx(vals[0])


def test_cutoff_too_small_after_doublings():
    gens = lambda_c_generators(SQ1)
    far = 20.0 * gens[0]  # minimiser needs |w| = 20, beyond 1 -> 8 doubling
    with pytest.raises(CutoffTooSmall):
        min_eigenvalue(far, SQ1, cutoff=1)


def test_k_rho_examples():
    cv = reduce(np.array([0.1]), SQ1)
    assert k_rho(cv, SQ1) == pytest.approx(10.0, abs=1e-10)
    with pytest.raises(TrivialBundle):
        k_rho(reduce(np.zeros(1), SQ1), SQ1)


def test_k_rho_scaling_along_ray():
    direction = np.array([0.6 + 0.8j])  # unit norm
    for s in (0.3, 0.1, 0.03, 0.01):
        cv = reduce(s * direction, SQ1)
        assert k_rho(cv, SQ1) * cv.norm == pytest.approx(1.0, abs=1e-12)


def test_k_rho_at_voronoi_vertex():
    gens = lambda_c_generators(SQ1)
    vertex = reduce(0.5 * (gens[0] + gens[1]), SQ1)
    covering_radius = np.pi / np.sqrt(2)
    assert k_rho(vertex, SQ1) == pytest.approx(1.0 / covering_radius, abs=1e-12)


# ---------------------------------------------------------------------------
# finite-difference oracle


def test_fd_oracle_matches_character_formula():
    cv = reduce(np.array([0.3]), SQ1)
    lam = fd_laplacian_lambda_min(cv.c, SQ1, 64)
    assert abs(lam - 0.09) / 0.09 < 0.02


def test_fd_oracle_zero_at_trivial():
    assert fd_laplacian_lambda_min(np.zeros(1), SQ1, 16) < 1e-10


def test_fd_oracle_near_lattice_point():
    g = lambda_c_generators(SQ1)[0]
    c = g + np.array([0.05])
    lam = fd_laplacian_lambda_min(c, SQ1, 48)
    # reduce-then-square target, with the low-order symbol error at w = -1
    assert lam == pytest.approx(0.05**2, rel=0.3, abs=5e-3)


def test_fd_oracle_resource_limit():
    from torusdbar.errors import ResourceLimit

    with pytest.raises(ResourceLimit):
        fd_laplacian_lambda_min(np.zeros(1), SQ1, 512)


# ---------------------------------------------------------------------------
# Fourier solve


def test_solve_dbar_rho_inverts_operator():
    rng = np.random.default_rng(10)
    lat = random_lattice(1, rng)
    cv = reduce(np.array([0.2 + 0.1j]), lat)
    v = random_bandlimited(1, 0, 1, 16, rng, zero_mean=False)
    u = solve_dbar_rho(v, cv.c, lat)
    back = apply_dbar_rho(u, cv.c, lat)
    back.comps -= v.comps
    assert l2_norm(back, lat) / l2_norm(v, lat) < 1e-12


def test_solve_dbar_rho_rejects_trivial():
    v = random_bandlimited(1, 0, 1, 8, np.random.default_rng(11), zero_mean=False)
    with pytest.raises(TrivialBundle):
        solve_dbar_rho(v, np.zeros(1), SQ1)


# ---------------------------------------------------------------------------
# inequality batteries


def test_gap_inequality_single_character_slack():
    lam = smallest_nonzero_eigenvalue(SQ1)
    n = 8
    alpha = FormGrid.from_function(1, n, character([1, 0], 1, n))
    lhs = l2_norm(apply_dbar_rho(alpha, np.zeros(1), SQ1), SQ1) ** 2
    rhs = 0.5 * lam * l2_norm(alpha, SQ1) ** 2
    assert lhs - rhs >= 0.0


def test_gap_inequality_no_negative_slack():
    rng = np.random.default_rng(12)
    for d in (1, 2):
        lat = random_lattice(d, rng)
        cv = reduce(0.2 * (rng.standard_normal(d) + 1j * rng.standard_normal(d)), lat)
        for p in (0, 1):
            if p > 0 and d < 1:
                continue
            rep = verify_gap_inequality(cv, lat, trials=25, p=p, q=0, seed=13)
            assert rep.worst_slack >= -1e-10


def test_gap_inequality_q1_branch():
    # the general (p,q) bound with the r_{n,q} factor, exercised at q = 1
    rng = np.random.default_rng(19)
    lat = random_lattice(2, rng)
    cv = reduce(0.1 * (rng.standard_normal(2) + 1j * rng.standard_normal(2)), lat)
    rep = verify_gap_inequality(cv, lat, trials=10, p=0, q=1, seed=20)
    assert rep.worst_slack >= -1e-10


def test_smallest_nonzero_eigenvalue_square_lattice():
    # eta_{e_1} = i pi on the self-dual square lattice, so the gap is pi^2
    assert smallest_nonzero_eigenvalue(SQ1) == pytest.approx(np.pi**2, rel=1e-14)


def test_gap_inequality_vacuous_rows_flagged():
    # large twist: the right-hand side goes nonpositive and the bound is vacuous
    gens = lambda_c_generators(SQ1)
    cv = reduce(0.5 * (gens[0] + gens[1]), SQ1)
    rep = verify_gap_inequality(cv, SQ1, trials=5, p=0, q=0, seed=14)
    assert rep.rhs_factor_last <= 0.0
    assert rep.vacuous == 5
    assert rep.worst_slack >= 0.0


def test_uniform_lower_bound_inside_epsilon_ball():
    # near the trivial bundle the twisted operator admits the explicit
    # uniform bound |dbar_c u|^2 >= (1 - eps) |c|^2 |u|^2 whenever
    # |c|^2 < eps * lambda / (2 eps (1 - eps) + 4 eps d + 2 d^2);
    # volume factors cancel between the two conventions of the constants
    rng = np.random.default_rng(21)
    for d in (1, 2):
        lat = random_lattice(d, rng)
        lam = smallest_nonzero_eigenvalue(lat)
        eps = 0.5
        radius_sq = eps * lam / (2 * eps * (1 - eps) + 4 * eps * d + 2 * d**2)
        direction = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        direction /= np.linalg.norm(direction)
        cv = reduce(0.9 * np.sqrt(radius_sq) * direction, lat)
        assert cv.norm**2 < radius_sq  # inside the ball, nontrivial
        for _ in range(20):
            u = random_bandlimited(d, 0, 0, 8, rng, zero_mean=False)
            lhs = l2_norm(apply_dbar_rho(u, cv.c, lat), lat) ** 2
            rhs = (1 - eps) * cv.norm**2 * l2_norm(u, lat) ** 2
            assert lhs >= rhs - 1e-10


def test_cross_term_identities():
    rng = np.random.default_rng(15)
    for d in (1, 2):
        lat = random_lattice(d, rng)
        cv = reduce(0.3 * (rng.standard_normal(d) + 1j * rng.standard_normal(d)), lat)
        rep = verify_cross_term(cv, lat, trials=20, seed=16)
        assert rep.max_function_residual < 1e-9
        assert rep.max_p0_cross < 1e-9


def test_cross_term_single_character_orthogonality():
    # <dbar_c chi_w, dbar_c 1> reduces to the vanishing integral of chi_w
    cv = reduce(np.array([0.2 + 0.1j]), SQ1)
    n = 8
    alpha = FormGrid.from_function(1, n, character([1, 1], 1, n))
    beta = FormGrid.from_function(1, n, np.ones((n, n)))
    cross = l2_inner(apply_dbar_rho(alpha, cv.c, SQ1), apply_dbar_rho(beta, cv.c, SQ1), SQ1)
    assert abs(cross) < 1e-12


# ---------------------------------------------------------------------------
# counterexample and (p,0) gap


def test_counterexample_11():
    lat = square_lattice(2)
    u_norm = np.sqrt(lat.volume)
    assert u_norm > 0
    assert counterexample_11(lat, 0.01, slot=1) < 1e-12
    assert counterexample_11(lat, 0.0, slot=1) == 0.0
    assert counterexample_11(lat, 0.01, slot=0) == pytest.approx(0.01 * u_norm, rel=1e-12)


def test_p0_kernel_gap_matches_function_case():
    rng = np.random.default_rng(17)
    for d in (1, 2):
        lat = random_lattice(d, rng)
        cv = reduce(0.3 * (rng.standard_normal(d) + 1j * rng.standard_normal(d)), lat)
        base = np.sqrt(min_eigenvalue(cv, lat).lambda_min)
        for p in range(0, d + 1):
            gap = p0_kernel_gap(cv.c, lat, p, cutoff=2)
            assert gap == pytest.approx(base, rel=1e-10)


def test_p0_kernel_gap_voronoi_interior_value():
    lat = square_lattice(2)
    cv = reduce(np.array([0.1, 0.2 + 0.1j]), lat)
    assert p0_kernel_gap(cv.c, lat, p=1) == pytest.approx(cv.norm, rel=1e-10)


def test_p0_kernel_gap_rejects_trivial():
    with pytest.raises(TrivialBundle):
        p0_kernel_gap(np.zeros(2), square_lattice(2), p=1)


# ---------------------------------------------------------------------------
# sweep


def test_sweep_products_are_one():
    rows = [r for r in sweep_pic0(SQ1, 9) if not r.skipped]
    assert rows
    assert max(abs(r.product - 1.0) for r in rows) < 1e-12


def test_sweep_marks_trivial_row():
    rows = sweep_pic0(SQ1, 10)  # even grid hits c = 0 exactly
    assert any(r.skipped for r in rows)


def test_sweep_ray_slope_minus_one():
    rng = np.random.default_rng(18)
    direction = rng.standard_normal(1) + 1j * rng.standard_normal(1)
    direction /= np.linalg.norm(direction)
    dists, ks = [], []
    for s in np.geomspace(0.02, 0.8, 12):
        cv = reduce(s * direction, SQ1)
        dists.append(cv.norm)
        ks.append(k_rho(cv, SQ1))
    slope = np.polyfit(np.log(dists), np.log(ks), 1)[0]
    assert abs(slope + 1.0) < 0.01
