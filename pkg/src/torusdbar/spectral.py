"""Perturbed dbar operators and their spectra on flat tori.

Forms are sampled in lattice coordinates t in [0,1)^{2d} on an N-per-axis
grid, with components taken in the pointwise-orthonormal dz_I ^ dzbar_J
frame.  Differentiation is spectral: the chain rule through the inverse
period matrix gives

    d/dzbar_j = sum_k (lambda^dual_k)_j / 2 * d/dt_k,

which is exact on band-limited data.  The perturbed operator is

    dbar_c u = dbar u + sum_j c_j dzbar_j ^ u,

and its adjoint contracts with conj(c).  Characters chi_w = exp(2 pi i w.t)
diagonalise everything: dbar chi_w = chi_w * eta_w with

    eta_w = i pi sum_k w_k lambda^dual_k  (a point of Lambda_c),

so the Laplacian dbar_c^* dbar_c has eigenvalues |eta_w + c|^2 on functions
and the minimum over frequencies is dist(c, Lambda_c)^2.  The norm
constant K_c = 1/sqrt(lambda_min) therefore satisfies K_c * dist = 1
exactly on tori, which is what the sweep utilities tabulate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    BidegreeOverflow,
    BidegreeUnderflow,
    CutoffTooSmall,
    DimensionMismatch,
    ResourceLimit,
    TrivialBundle,
)
from .lattice import CVector, Lattice, dual_basis, lambda_c_generators, reduce

MAX_CUTOFF_DOUBLINGS = 3
FD_MAX_POINTS = 20_000
TRIVIAL_NORM_TOL = 1e-14


def multi_indices(d: int, p: int):
    """Sorted p-element subsets of {0..d-1}, in lexicographic order."""
    return list(combinations(range(d), p))


def _wedge(j: int, indices: tuple) -> tuple | None:
    """Insert index j into the sorted tuple, returning (sign, new_tuple)."""
    if j in indices:
        return None
    pos = sum(1 for l in indices if l < j)
    merged = tuple(sorted(indices + (j,)))
    return (-1) ** pos, merged


@dataclass
class FormGrid:
    """Sampled (p,q)-form on C^d/Lambda in lattice coordinates.

    comps has shape (C(d,p), C(d,q), N, ..., N) with 2d grid axes; the
    leading axes run over the sorted multi-indices returned by
    multi_indices.  Values are coefficients in the dz_I ^ dzbar_J frame
    of the sigma-trivialised section.
    """

    d: int
    p: int
    q: int
    n: int
    comps: np.ndarray

    @classmethod
    def zeros(cls, d: int, p: int, q: int, n: int) -> "FormGrid":
        shape = (math.comb(d, p), math.comb(d, q)) + (n,) * (2 * d)
        return cls(d=d, p=p, q=q, n=n, comps=np.zeros(shape, dtype=complex))

    @classmethod
    def from_function(cls, d: int, n: int, values: np.ndarray) -> "FormGrid":
        out = cls.zeros(d, 0, 0, n)
        out.comps[0, 0] = values
        return out

    def copy(self) -> "FormGrid":
        return FormGrid(d=self.d, p=self.p, q=self.q, n=self.n, comps=self.comps.copy())

    def component(self, I: tuple, J: tuple) -> np.ndarray:
        return self.comps[multi_indices(self.d, self.p).index(tuple(I)),
                          multi_indices(self.d, self.q).index(tuple(J))]


def t_grid(d: int, n: int):
    """2d arrays of lattice coordinates, each of shape (n,)*2d."""
    axes = np.meshgrid(*[np.arange(n) / n] * (2 * d), indexing="ij")
    return axes


def character(w, d: int, n: int) -> np.ndarray:
    """chi_w(t) = exp(2 pi i w.t) on the grid."""
    w = np.asarray(w, dtype=float).reshape(-1)
    axes = t_grid(d, n)
    phase = sum(w[k] * axes[k] for k in range(2 * d))
    return np.exp(2j * np.pi * phase)


def character_form(w, lat: Lattice) -> np.ndarray:
    """Constant (0,1)-coefficients eta_w with dbar chi_w = chi_w * eta_w.

    Equals i pi sum_k w_k lambda^dual_k, a point of Lambda_c.
    """
    w = np.asarray(w, dtype=float).reshape(-1)
    if w.shape != (2 * lat.d,):
        raise DimensionMismatch(f"expected {2 * lat.d} frequencies, got {w.shape}")
    return w @ lambda_c_generators(lat)


def _freq_axes(d: int, n: int):
    """Integer frequency grids per lattice axis, fftfreq layout."""
    w = np.fft.fftfreq(n) * n
    return np.meshgrid(*[w] * (2 * d), indexing="ij")


def _dzbar_symbols(lat: Lattice, n: int):
    """Spectral multipliers for d/dzbar_j and d/dz_j, j = 0..d-1."""
    dual = dual_basis(lat).vectors  # (2d, d)
    freqs = _freq_axes(lat.d, n)
    sym_zbar, sym_z = [], []
    for j in range(lat.d):
        zbar = sum(dual[k, j] / 2.0 * freqs[k] for k in range(2 * lat.d))
        z = sum(dual[k, j].conjugate() / 2.0 * freqs[k] for k in range(2 * lat.d))
        sym_zbar.append(2j * np.pi * zbar)
        sym_z.append(2j * np.pi * z)
    return sym_zbar, sym_z


def _as_cvec(c, d: int) -> np.ndarray:
    cv = c.c if isinstance(c, CVector) else np.asarray(c, dtype=complex).reshape(-1)
    if cv.shape != (d,):
        raise DimensionMismatch(f"expected c in C^{d}, got shape {cv.shape}")
    return cv


def apply_dbar_rho(u: FormGrid, c, lat: Lattice) -> FormGrid:
    """dbar_c u = dbar u + sum_j c_j dzbar_j ^ u, exact on band-limited data."""
    if u.d != lat.d:
        raise DimensionMismatch(f"form d={u.d} vs lattice d={lat.d}")
    if u.q >= u.d:
        raise BidegreeOverflow(f"cannot raise q={u.q} on a d={u.d} torus")
    if u.n < 4:
        raise ResourceLimit(f"resolution N={u.n} too coarse for spectral differentiation")
    cv = _as_cvec(c, lat.d)
    sym_zbar, _ = _dzbar_symbols(lat, u.n)
    cols_in = multi_indices(u.d, u.q)
    cols_out = multi_indices(u.d, u.q + 1)
    out = FormGrid.zeros(u.d, u.p, u.q + 1, u.n)
    sign_p = (-1) ** u.p
    grid_axes = tuple(range(2, 2 + 2 * u.d))
    hat = np.fft.fftn(u.comps, axes=grid_axes)
    for ji, J in enumerate(cols_in):
        for j in range(u.d):
            wedge = _wedge(j, J)
            if wedge is None:
                continue
            sgn, J_new = wedge
            coeff = np.fft.ifftn(hat[:, ji] * sym_zbar[j], axes=tuple(range(1, 1 + 2 * u.d)))
            coeff = coeff + cv[j] * u.comps[:, ji]
            out.comps[:, cols_out.index(J_new)] += sign_p * sgn * coeff
    return out


def apply_dbar_rho_star(v: FormGrid, c, lat: Lattice) -> FormGrid:
    """Formal adjoint: (dbar_c)^* v = dbar^* v + contraction with conj(c).

    Satisfies <dbar_c u, v> = <u, (dbar_c)^* v> for the grid L2 inner
    product on band-limited data.
    """
    if v.d != lat.d:
        raise DimensionMismatch(f"form d={v.d} vs lattice d={lat.d}")
    if v.q < 1:
        raise BidegreeUnderflow("adjoint lowers q; need q >= 1")
    cv = _as_cvec(c, lat.d)
    _, sym_z = _dzbar_symbols(lat, v.n)
    cols_in = multi_indices(v.d, v.q)
    cols_out = multi_indices(v.d, v.q - 1)
    out = FormGrid.zeros(v.d, v.p, v.q - 1, v.n)
    sign_p = (-1) ** v.p
    grid_axes = tuple(range(2, 2 + 2 * v.d))
    hat = np.fft.fftn(v.comps, axes=grid_axes)
    for ji, Jbig in enumerate(cols_in):
        for j in Jbig:
            J_small = tuple(l for l in Jbig if l != j)
            sgn, _ = _wedge(j, J_small)
            dz = np.fft.ifftn(hat[:, ji] * sym_z[j], axes=tuple(range(1, 1 + 2 * v.d)))
            out.comps[:, cols_out.index(J_small)] += sign_p * sgn * (
                -dz + cv[j].conjugate() * v.comps[:, ji]
            )
    return out


def l2_inner(u: FormGrid, v: FormGrid, lat: Lattice) -> complex:
    """<u, v> = Vol * mean over grid of the pointwise frame inner product."""
    if (u.p, u.q, u.n) != (v.p, v.q, v.n):
        raise DimensionMismatch("forms of different bidegree or resolution")
    return complex(lat.volume * np.mean(np.sum(u.comps * v.comps.conj(), axis=(0, 1))))


def l2_norm(u: FormGrid, lat: Lattice) -> float:
    return math.sqrt(max(l2_inner(u, u, lat).real, 0.0))


# ---------------------------------------------------------------------------
# character spectrum


@dataclass
class SpectralReport:
    """Minimum Laplacian eigenvalue over characters, with its certificate."""

    c: CVector
    lambda_min: float
    w_min: tuple
    k_rho: float
    cutoff: int


def _frequency_box(d: int, cutoff: int) -> np.ndarray:
    axes = [np.arange(-cutoff, cutoff + 1)] * (2 * d)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _min_over_characters(cv: np.ndarray, lat: Lattice, cutoff: int, exclude_zero: bool):
    """(lambda_min, w_min, cutoff_used); auto-doubles the cutoff if the
    minimiser touches the enumeration boundary."""
    gens_c = lambda_c_generators(lat)
    for attempt in range(MAX_CUTOFF_DOUBLINGS + 1):
        box = _frequency_box(lat.d, cutoff)
        eta = box.astype(complex) @ gens_c
        vals = np.sum(np.abs(eta + cv[None, :]) ** 2, axis=1)
        if exclude_zero:
            zero_row = np.all(box == 0, axis=1)
            vals = np.where(zero_row, np.inf, vals)
        best = vals.min()
        tied = np.flatnonzero(vals <= best * (1 + 1e-12) + 1e-300)
        order = np.lexsort(tuple(box[tied, k] for k in range(box.shape[1] - 1, -1, -1)))
        w_min = box[tied[order[0]]]
        if np.max(np.abs(w_min)) < cutoff:
            return float(best), tuple(int(x) for x in w_min), cutoff
        cutoff *= 2
    raise CutoffTooSmall(
        f"minimiser {tuple(w_min)} still on the boundary after {MAX_CUTOFF_DOUBLINGS} doublings"
    )


def min_eigenvalue(c: CVector, lat: Lattice, cutoff: int = 2) -> SpectralReport:
    """Smallest eigenvalue of the perturbed Laplacian on functions.

    Characters diagonalise the operator, so this is
    min over |w|_inf <= cutoff of |eta_w + c|^2 = dist(c, Lambda_c)^2.
    """
    cv = _as_cvec(c, lat.d)
    lam, w_min, used = _min_over_characters(cv, lat, cutoff, exclude_zero=False)
    k = 1.0 / math.sqrt(lam) if lam > 0 else math.inf
    cvec = c if isinstance(c, CVector) else CVector(c=cv, reduced=False)
    return SpectralReport(c=cvec, lambda_min=lam, w_min=w_min, k_rho=k, cutoff=used)


def k_rho(c: CVector, lat: Lattice, cutoff: int = 2) -> float:
    """Norm constant 1/sqrt(lambda_min); undefined at the trivial bundle."""
    report = min_eigenvalue(c, lat, cutoff)
    if report.lambda_min <= TRIVIAL_NORM_TOL**2:
        raise TrivialBundle("K is undefined at the trivial bundle (c in Lambda_c)")
    return report.k_rho


def smallest_nonzero_eigenvalue(lat: Lattice, cutoff: int = 2) -> float:
    """lambda_{p,q} of the unperturbed Laplacian: min over w != 0 of |eta_w|^2.

    On a flat torus the value does not depend on the bidegree, since the
    frame is parallel and the Laplacian acts componentwise.
    """
    zero = np.zeros(lat.d, dtype=complex)
    lam, _, _ = _min_over_characters(zero, lat, cutoff, exclude_zero=True)
    return lam


# ---------------------------------------------------------------------------
# independent finite-difference oracle


def fd_laplacian_lambda_min(
    c, lat: Lattice, n: int, seed: int = 1234, tol: float = 0.0
) -> float:
    """Smallest eigenvalue of the finite-difference perturbed Laplacian.

    Deliberately low-order and independent of the spectral path: centred
    second-order differences in lattice coordinates, assembled sparsely,
    smallest eigenvalue via shift-invert Lanczos.  Converges to
    min_eigenvalue's answer as n grows.
    """
    d = lat.d
    if d > 2:
        raise ResourceLimit("finite-difference oracle is desk-scale only (d <= 2)")
    n_pts = n ** (2 * d)
    if n_pts > FD_MAX_POINTS:
        raise ResourceLimit(f"grid of {n_pts} points exceeds limit {FD_MAX_POINTS}")
    cv = _as_cvec(c, d)
    dual = dual_basis(lat).vectors
    eye = sp.identity(n, format="csr", dtype=complex)
    shift = sp.csr_matrix(
        (np.ones(n), (np.arange(n), (np.arange(n) + 1) % n)), shape=(n, n), dtype=complex
    )
    diff_1d = (shift - shift.T) * (n / 2.0)  # centred difference, spacing 1/n
    axis_ops = []
    for k in range(2 * d):
        mats = [eye] * (2 * d)
        mats[k] = diff_1d
        op = mats[0]
        for m in mats[1:]:
            op = sp.kron(op, m, format="csr")
        axis_ops.append(op)
    blocks = []
    ident = sp.identity(n_pts, format="csr", dtype=complex)
    for j in range(d):
        a_j = sum(dual[k, j] / 2.0 * axis_ops[k] for k in range(2 * d)) + cv[j] * ident
        blocks.append(a_j)
    a = sp.vstack(blocks, format="csr")
    m = (a.conj().T @ a).tocsc()
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(n_pts) + 1j * rng.standard_normal(n_pts)
    vals = spla.eigsh(
        m, k=1, sigma=-1e-6, which="LM", v0=v0, return_eigenvectors=False, tol=tol
    )
    return float(max(vals[0].real, 0.0))


# ---------------------------------------------------------------------------
# Fourier solve


def solve_dbar_rho(v: FormGrid, c, lat: Lattice) -> FormGrid:
    """Solve dbar_c u = v for a (0,1)-form v with c not in Lambda_c.

    Inverts the character diagonalisation; for dbar_c-closed v this is the
    unique solution (the kernel is trivial away from the trivial bundle).
    """
    if (v.p, v.q) != (0, 1):
        raise DimensionMismatch("Fourier solve implemented for (0,1)-forms")
    cv = _as_cvec(c, lat.d)
    gens_c = lambda_c_generators(lat)
    freqs = _freq_axes(lat.d, v.n)
    eta = [
        sum(freqs[k] * gens_c[k, j] for k in range(2 * lat.d)) + cv[j]
        for j in range(lat.d)
    ]
    den = sum(np.abs(e) ** 2 for e in eta)
    if float(den.min()) < 1e-24:
        raise TrivialBundle("operator not invertible: c lies in Lambda_c")
    numer = np.zeros_like(v.comps[0, 0])
    for j in range(lat.d):
        numer = numer + eta[j].conjugate() * np.fft.fftn(v.comps[0, j])
    out = FormGrid.zeros(lat.d, 0, 0, v.n)
    out.comps[0, 0] = np.fft.ifftn(numer / den)
    return out


# ---------------------------------------------------------------------------
# inequality batteries


@dataclass
class GapReport:
    worst_slack: float
    vacuous: int
    trials: int
    lambda_pq: float
    rhs_factor_last: float = field(default=float("nan"))


def random_bandlimited(
    d: int,
    p: int,
    q: int,
    n: int,
    rng: np.random.Generator,
    bandlimit: int = 2,
    zero_mean: bool = True,
) -> FormGrid:
    """Random trigonometric-polynomial form; zero_mean removes the
    harmonic (constant-coefficient) part."""
    out = FormGrid.zeros(d, p, q, n)
    box = 2 * bandlimit + 1
    spec = np.zeros_like(out.comps)
    coeffs = rng.standard_normal(out.comps.shape[:2] + (box,) * (2 * d)) + 1j * rng.standard_normal(
        out.comps.shape[:2] + (box,) * (2 * d)
    )
    coeffs /= math.sqrt(box ** (2 * d))
    sl = tuple(np.arange(-bandlimit, bandlimit + 1))
    idx = np.ix_(*([np.arange(s) for s in out.comps.shape[:2]] + [np.array(sl)] * (2 * d)))
    spec[idx] = coeffs
    if zero_mean:
        spec[(slice(None), slice(None)) + (0,) * (2 * d)] = 0.0
    out.comps = np.fft.ifftn(spec, axes=tuple(range(2, 2 + 2 * d))) * n ** (2 * d)
    return out


def verify_gap_inequality(
    c,
    lat: Lattice,
    trials: int = 100,
    p: int = 0,
    q: int = 0,
    bandlimit: int = 2,
    cutoff: int = 3,
    seed: int = 0,
) -> GapReport:
    """Check (alpha, Lap_c alpha) >= (1/2)(lambda_{p,q} - 4 r^2 C^2)|alpha|^2
    on random band-limited alpha with zero harmonic part.

    r^2 = d * binom(d, q) in general; the q = 0 case uses the stronger
    bound with r = 1.  C = sum_j |c_j| (the frame is pointwise
    orthonormal).  Rows with nonpositive right-hand side are vacuous and
    counted separately.
    """
    cv = _as_cvec(c, lat.d)
    lam = smallest_nonzero_eigenvalue(lat, cutoff)
    big_c = float(np.sum(np.abs(cv)))
    r2 = 1.0 if q == 0 else lat.d * math.comb(lat.d, q)
    factor = 0.5 * (lam - 4.0 * r2 * big_c**2)
    rng = np.random.default_rng(seed)
    n = 2 * bandlimit + 4
    worst = math.inf
    vacuous = 0
    for _ in range(trials):
        alpha = random_bandlimited(lat.d, p, q, n, rng, bandlimit=bandlimit)
        lhs = l2_norm(apply_dbar_rho(alpha, cv, lat), lat) ** 2
        if q >= 1:
            lhs += l2_norm(apply_dbar_rho_star(alpha, cv, lat), lat) ** 2
        rhs = factor * l2_norm(alpha, lat) ** 2
        if rhs <= 0:
            vacuous += 1
        worst = min(worst, lhs - rhs)
    return GapReport(
        worst_slack=float(worst), vacuous=vacuous, trials=trials, lambda_pq=lam,
        rhs_factor_last=factor,
    )


@dataclass
class CrossTermReport:
    max_function_residual: float
    max_p0_cross: float
    trials: int


def verify_cross_term(
    c,
    lat: Lattice,
    trials: int = 50,
    bandlimit: int = 2,
    seed: int = 0,
) -> CrossTermReport:
    """Check the cross-term identities between zero-average and harmonic parts.

    Functions: <dbar_c a, dbar_c b> = conj(b) |c|^2 Integral(a) for constant
    b and zero-average a.  (p,0)-forms on the torus: the cross term with a
    constant-coefficient form vanishes outright, all holomorphic forms
    being parallel.
    """
    cv = _as_cvec(c, lat.d)
    rng = np.random.default_rng(seed)
    n = 2 * bandlimit + 4
    worst_fun = 0.0
    worst_p0 = 0.0
    vol = lat.volume
    for _ in range(trials):
        alpha = random_bandlimited(lat.d, 0, 0, n, rng, bandlimit=bandlimit)
        beta_val = rng.standard_normal() + 1j * rng.standard_normal()
        beta = FormGrid.zeros(lat.d, 0, 0, n)
        beta.comps[0, 0] = beta_val
        lhs = l2_inner(apply_dbar_rho(alpha, cv, lat), apply_dbar_rho(beta, cv, lat), lat)
        integral_alpha = vol * np.mean(alpha.comps[0, 0])
        rhs = beta_val.conjugate() * float(np.sum(np.abs(cv) ** 2)) * integral_alpha
        worst_fun = max(worst_fun, abs(lhs - rhs))
        alpha_p = random_bandlimited(lat.d, 1, 0, n, rng, bandlimit=bandlimit)
        beta_p = FormGrid.zeros(lat.d, 1, 0, n)
        consts = rng.standard_normal(beta_p.comps.shape[0]) + 1j * rng.standard_normal(
            beta_p.comps.shape[0]
        )
        for i, val in enumerate(consts):
            beta_p.comps[i, 0] = val
        cross = l2_inner(
            apply_dbar_rho(alpha_p, cv, lat), apply_dbar_rho(beta_p, cv, lat), lat
        )
        worst_p0 = max(worst_p0, abs(cross))
    return CrossTermReport(
        max_function_residual=float(worst_fun), max_p0_cross=float(worst_p0), trials=trials
    )


def counterexample_11(lat: Lattice, eps: float, slot: int = 1) -> float:
    """|dbar_c (dz_1 ^ dzbar_2)| on a 2-torus with c = eps * e_slot.

    slot=1 puts the twist on the second coordinate, where the wedge dies
    and the norm vanishes although the form does not; slot=0 leaves a
    surviving dzbar_1 wedge and a nonzero norm.
    """
    if lat.d != 2:
        raise DimensionMismatch("the (1,1) counterexample lives on a 2-torus")
    n = 4
    u = FormGrid.zeros(2, 1, 1, n)
    rows = multi_indices(2, 1)
    u.comps[rows.index((0,)), rows.index((1,))] = 1.0
    cv = np.zeros(2, dtype=complex)
    cv[slot] = eps
    return l2_norm(apply_dbar_rho(u, cv, lat), lat)


def p0_kernel_gap(c, lat: Lattice, p: int, cutoff: int = 2) -> float:
    """Smallest singular value of dbar_c on (p,0) characters within the cutoff.

    Evaluated through the grid operator (one application per character and
    frame element dz_I), not through the closed form, so it exercises the
    full differentiation path.  Strictly positive away from the trivial
    bundle; equals sqrt(lambda_min) of the function case.
    """
    cv = _as_cvec(c, lat.d)
    if float(np.linalg.norm(reduce(cv, lat).c)) < TRIVIAL_NORM_TOL:
        raise TrivialBundle("dbar_c has holomorphic kernel at the trivial bundle")
    rows = multi_indices(lat.d, p)
    used = cutoff
    for attempt in range(MAX_CUTOFF_DOUBLINGS + 1):
        n = 2 * used + 4
        box = _frequency_box(lat.d, used)
        best = math.inf
        w_best = None
        for w in box:
            chi = character(w, lat.d, n)
            u = FormGrid.zeros(lat.d, p, 0, n)
            for i in range(len(rows)):
                u.comps[i, 0] = chi
            ratio = l2_norm(apply_dbar_rho(u, cv, lat), lat) / l2_norm(u, lat)
            if ratio < best:
                best, w_best = ratio, w
        if np.max(np.abs(w_best)) < used:
            return float(best)
        used *= 2
    raise CutoffTooSmall(f"singular-value minimiser {tuple(w_best)} on the boundary")


# ---------------------------------------------------------------------------
# Picard-torus sweep


@dataclass
class SweepRow:
    c: np.ndarray
    dist: float
    lambda_min: float
    k_rho: float
    product: float
    skipped: bool = False


def sweep_pic0(lat: Lattice, grid_m: int, cutoff: int = 2) -> list[SweepRow]:
    """Tabulate lambda_min, K and K*dist over a grid of the fundamental domain.

    Grid points are coefficient vectors in [-1/2, 1/2)^{2d} against the
    Lambda_c generators, Voronoi-reduced before evaluation.  Rows at the
    trivial bundle are kept as skipped markers.  The product column is
    identically 1 on tori.
    """
    gens_c = lambda_c_generators(lat)
    steps = np.arange(grid_m) / grid_m - 0.5
    rows: list[SweepRow] = []
    mesh = np.meshgrid(*[steps] * (2 * lat.d), indexing="ij")
    coeffs = np.stack([m.ravel() for m in mesh], axis=1)
    for coeff in coeffs:
        raw = coeff.astype(complex) @ gens_c
        red = reduce(raw, lat)
        if red.norm < TRIVIAL_NORM_TOL:
            rows.append(
                SweepRow(c=red.c, dist=0.0, lambda_min=0.0, k_rho=math.inf,
                         product=math.nan, skipped=True)
            )
            continue
        report = min_eigenvalue(red, lat, cutoff)
        dist = red.norm
        rows.append(
            SweepRow(
                c=red.c,
                dist=dist,
                lambda_min=report.lambda_min,
                k_rho=report.k_rho,
                product=report.k_rho * dist,
            )
        )
    return rows
