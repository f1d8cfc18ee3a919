"""Covers, partitions of unity, coboundaries, and the delta-primitive."""

import numpy as np
import pytest

from torusdbar.cech import (
    Cochain,
    OpenCover,
    Rect,
    cocycle_residual,
    cocycle_to_form,
    cover_from_json,
    cover_to_json,
    delta0,
    delta_residual,
    get_piece,
    holomorphic_cochain,
    overlap_mask,
    partition_of_unity,
    solve_primitive,
    square_cover,
    ueda_chain_constants,
    ueda_ratio,
)
from torusdbar.errors import CoverGap, DimensionMismatch, NotACocycle, TrivialTwist
from torusdbar.lattice import curve_lattice
from torusdbar.spectral import k_rho, l2_norm

TAU = 0.3 + 1.1j
ANGLES = (2 * np.pi * 0.31, 2 * np.pi * 0.17)


def default_cover(angles=ANGLES, tau=TAU):
    return square_cover(tau, angles=angles)


def test_rect_width_validation():
    with pytest.raises(DimensionMismatch):
        Rect(0.0, 1.2, 0.0, 0.5)
    with pytest.raises(DimensionMismatch):
        Rect(0.3, 0.3, 0.0, 0.5)


def test_partition_sums_to_one():
    for tiles, overlap in ((2, 0.25), (3, 0.3)):
        cover = square_cover(TAU, angles=ANGLES, tiles=tiles, overlap_frac=overlap)
        pou = partition_of_unity(cover, 64)
        total = np.sum(np.stack(pou.values), axis=0)
        assert np.abs(total - 1.0).max() < 1e-12


def test_partition_supported_in_rectangles():
    cover = default_cover()
    n = 64
    pou = partition_of_unity(cover, n)
    lifts = cover.lift_data(n)
    for j in range(len(cover.rects)):
        outside = ~lifts[j][0]
        assert np.abs(pou.values[j][outside]).max() == 0.0


def test_partition_derivative_consistency():
    # the analytic dt derivatives are the second-order limit of centred
    # differences of the values (the C^2 ramps have large third derivatives,
    # so the check is on the convergence rate, not a fixed tolerance)
    cover = default_cover()
    errs = {}
    for n in (256, 512, 1024):
        pou = partition_of_unity(cover, n)
        v = pou.values[0]
        fd1 = (np.roll(v, -1, axis=0) - np.roll(v, 1, axis=0)) * (n / 2.0)
        errs[n] = np.abs(fd1 - pou.dt1[0]).max()
    assert errs[256] / errs[512] > 3.0
    assert errs[512] / errs[1024] > 3.0


def test_cover_gap_detected():
    rects = (Rect(0.0, 0.4, 0.0, 0.9), Rect(0.5, 0.9, 0.0, 0.9))
    cover = OpenCover(rects=rects, tau=TAU, angles=ANGLES, overlap_min=0.05)
    with pytest.raises(CoverGap):
        partition_of_unity(cover, 32)


def test_taper_must_fit():
    cover = square_cover(TAU, angles=ANGLES, tiles=4, overlap_frac=0.25)
    cover = OpenCover(rects=cover.rects, tau=TAU, angles=ANGLES, overlap_min=0.2)
    with pytest.raises(CoverGap):
        partition_of_unity(cover, 32)


def test_transitions_cocycle_exact():
    cover = default_cover()
    n = 32
    lifts = cover.lift_data(n)
    m = len(cover.rects)
    for j in range(m):
        for k in range(m):
            for l in range(m):
                mask = lifts[j][0] & lifts[k][0] & lifts[l][0]
                if not mask.any():
                    continue
                prod = cover.transition(j, k, lifts) * cover.transition(k, l, lifts)
                diff = np.where(mask, prod - cover.transition(j, l, lifts), 0.0)
                assert np.abs(diff).max() < 1e-12


def test_delta0_constant_sections():
    n = 32
    trivial = square_cover(TAU, angles=(0.0, 0.0))
    ones = Cochain.zero(trivial, 0, n)
    for j in ones.pieces:
        ones.pieces[j][:] = 1.0
    out = delta0(ones, trivial)
    assert max(np.abs(arr).max() for arr in out.pieces.values()) == 0.0

    cover = default_cover()
    ones = Cochain.zero(cover, 0, n)
    lifts = cover.lift_data(n)
    for j in ones.pieces:
        ones.pieces[j][:] = np.where(lifts[j][0], 1.0, 0.0)
    out = delta0(ones, cover)
    for (j, k), arr in out.pieces.items():
        mask = overlap_mask(cover, j, k, lifts)
        expect = 1.0 - cover.transition(j, k, lifts)
        assert np.abs(np.where(mask, arr - expect, 0.0)).max() < 1e-12


def test_delta0_output_is_cocycle():
    cover = default_cover()
    rng = np.random.default_rng(0)
    c0 = holomorphic_cochain(cover, 32, rng)
    c1 = delta0(c0, cover)
    assert cocycle_residual(c1, cover) < 1e-10


def test_antisymmetry_of_pieces():
    cover = default_cover()
    n = 32
    lifts = cover.lift_data(n)
    c1 = delta0(holomorphic_cochain(cover, n, np.random.default_rng(1)), cover)
    for (j, k) in list(c1.pieces):
        mask = overlap_mask(cover, j, k, lifts)
        forward = get_piece(c1, cover, j, k, lifts)
        backward = get_piece(c1, cover, k, j, lifts)
        resid = forward + cover.transition(j, k, lifts) * backward
        assert np.abs(np.where(mask, resid, 0.0)).max() < 1e-12


def test_cocycle_to_form_zero():
    cover = default_cover()
    n = 32
    pou = partition_of_unity(cover, n)
    v = cocycle_to_form(Cochain.zero(cover, 1, n), pou, cover)
    assert l2_norm(v, curve_lattice(TAU)) == 0.0


def test_cocycle_to_form_rect_independence():
    from torusdbar.cech import _form_from_rect

    cover = default_cover()
    n = 64
    pou = partition_of_unity(cover, n)
    lifts = cover.lift_data(n)
    c1 = delta0(holomorphic_cochain(cover, n, np.random.default_rng(2)), cover)
    dbar_rho = pou.dbar_coefficients(cover)
    c = cover.c_reduced()
    for (j, k) in ((0, 1), (1, 2), (2, 3)):
        va = _form_from_rect(c1, pou, cover, j, lifts, dbar_rho, c)
        vb = _form_from_rect(c1, pou, cover, k, lifts, dbar_rho, c)
        mask = overlap_mask(cover, j, k, lifts)
        assert np.abs(np.where(mask, va - vb, 0.0)).max() < 1e-8


def test_cocycle_to_form_rejects_non_cocycle():
    cover = default_cover()
    n = 32
    pou = partition_of_unity(cover, n)
    c1 = delta0(holomorphic_cochain(cover, n, np.random.default_rng(3)), cover)
    c1.pieces[(0, 1)] = c1.pieces[(0, 1)] + 0.5  # break the cocycle identity
    with pytest.raises(NotACocycle):
        cocycle_to_form(c1, pou, cover)


def test_form_is_dbar_closed():
    # on a curve every (0,1)-form is closed; check the solver inverts it instead
    cover = default_cover()
    n = 64
    pou = partition_of_unity(cover, n)
    c1 = delta0(holomorphic_cochain(cover, n, np.random.default_rng(4)), cover)
    v = cocycle_to_form(c1, pou, cover)
    assert np.isfinite(l2_norm(v, curve_lattice(TAU)))


def test_solve_primitive_zero_cocycle():
    cover = default_cover()
    n = 32
    pou = partition_of_unity(cover, n)
    prim = solve_primitive(Cochain.zero(cover, 1, n), pou, cover)
    assert max(np.abs(arr).max() for arr in prim.pieces.values()) < 1e-12


def test_solve_primitive_requires_twist():
    cover = square_cover(TAU, angles=(0.0, 0.0))
    n = 32
    pou = partition_of_unity(cover, n)
    with pytest.raises(TrivialTwist):
        solve_primitive(Cochain.zero(cover, 1, n), pou, cover)


def test_delta_primitive_residual_machine_small():
    cover = default_cover()
    n = 64
    pou = partition_of_unity(cover, n)
    c1 = delta0(holomorphic_cochain(cover, n, np.random.default_rng(5)), cover)
    prim = solve_primitive(c1, pou, cover)
    assert delta_residual(prim, c1, cover) < 1e-6


def test_round_trip_recovers_cochain():
    # delta-then-solve recovers the original pieces; the accuracy is set
    # by the Fourier tail of the C^1 bump derivative, hence the fine grid
    cover = default_cover()
    n = 1024
    pou = partition_of_unity(cover, n)
    c0 = holomorphic_cochain(cover, n, np.random.default_rng(6))
    c1 = delta0(c0, cover)
    prim = solve_primitive(c1, pou, cover)
    lifts = cover.lift_data(n)
    worst = max(
        np.abs(np.where(lifts[j][0], prim.pieces[j] - c0.pieces[j], 0.0)).max()
        for j in range(len(cover.rects))
    )
    assert worst < 1e-6


def test_ueda_ratio_zero_cocycle():
    cover = default_cover()
    n = 32
    pou = partition_of_unity(cover, n)
    rep = ueda_ratio(Cochain.zero(cover, 1, n), pou, cover)
    assert rep.ratio == 0.0


def test_ueda_ratio_bounded_by_chain_constants():
    n = 48
    rng = np.random.default_rng(7)
    lat = curve_lattice(TAU)
    geometry = square_cover(TAU, angles=(0.0, 0.0))
    c0 = holomorphic_cochain(geometry, n, rng)
    c1_const, c2_const = None, None
    for _ in range(8):
        p, q = rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95)
        cover = square_cover(TAU, angles=(2 * np.pi * p, 2 * np.pi * q))
        pou = partition_of_unity(cover, n)
        if c1_const is None:
            c1_const, c2_const = ueda_chain_constants(cover, pou)
        c1 = delta0(c0, cover)
        rep = ueda_ratio(c1, pou, cover)
        k = k_rho(np.array([cover.c_reduced()]), lat)
        bound = c1_const * (k * rep.dist) + c2_const * rep.dist
        assert rep.ratio <= bound


def test_ueda_ratio_stable_under_twist_sweep():
    n = 32
    geometry = square_cover(TAU, angles=(0.0, 0.0))
    c0 = holomorphic_cochain(geometry, n, np.random.default_rng(8))
    ratios = []
    m = 6
    for ip in range(m):
        for iq in range(m):
            p, q = ip / m, iq / m
            cover = square_cover(TAU, angles=(2 * np.pi * p, 2 * np.pi * q))
            pou = partition_of_unity(cover, n)
            c1 = delta0(c0, cover)
            try:
                rep = ueda_ratio(c1, pou, cover)
            except TrivialTwist:
                continue
            if rep.dist < 1e-3:
                continue
            ratios.append(rep.ratio)
    assert ratios and np.isfinite(ratios).all()


def test_cochain_csv_round_trip():
    from torusdbar.cech import cochain_from_csv, cochain_to_csv

    cover = default_cover()
    n = 8
    rng = np.random.default_rng(9)
    c0 = holomorphic_cochain(cover, n, rng)
    back0 = cochain_from_csv(cochain_to_csv(c0), cover)
    assert all(np.abs(back0.pieces[j] - c0.pieces[j]).max() < 1e-15 for j in c0.pieces)
    c1 = delta0(c0, cover)
    back1 = cochain_from_csv(cochain_to_csv(c1), cover)
    assert all(np.abs(back1.pieces[k] - c1.pieces[k]).max() < 1e-15 for k in c1.pieces)


def test_cover_json_round_trip():
    cover = default_cover()
    back = cover_from_json(cover_to_json(cover), TAU, ANGLES)
    assert len(back.rects) == len(cover.rects)
    assert back.overlap_min == cover.overlap_min
    assert back.rects[0] == cover.rects[0]
