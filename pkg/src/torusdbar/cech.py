"""Constructive Cech machinery for flat bundles on an elliptic curve.

The torus [0,1)^2 (lattice coordinates for <1, tau>) is covered by open
axis-aligned rectangles of widths below 1; each rectangle U_j carries the
flat holomorphic frame e_j obtained by lifting U_j to the plane.  On an
overlap the lifts differ by a lattice vector, so coefficient transport is
the locally constant U(1) factor

    t_jk = exp(i theta . (m_j - m_k)),

where theta are the monodromy angles and m_j the integer lift offsets.
The factors are constant on each overlap component and satisfy the
cocycle identity exactly.  Conventions: sections are phi_j e_j and the
coboundary is (delta f)_jk = f_j - t_jk f_k.

From a 1-cocycle the bump average g_j = sum_l rho_l f_jl produces a
global (0,1)-form v = dbar g_j (computed analytically from the bump
derivatives, no finite differences); solving dbar_c u = v and setting
f_j = g_j - u yields the delta-primitive.  The ratio

    dist(trivial) * max_j sup |f_j| / max_jk sup |f_jk|

stays bounded over twists, and an explicit ceiling C1 * (K * dist)
+ C2 * dist follows from the partition constants and the mean value
inequality; ueda_chain_constants computes C1, C2 for a given cover.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bundle import Representation, c_of_representation, distance_to_trivial
from .errors import CoverGap, DimensionMismatch, NotACocycle, TrivialTwist
from .lattice import curve_lattice, dual_basis, period_matrix
from .spectral import FormGrid, solve_dbar_rho

EDGE_TOL = 1e-12


@dataclass(frozen=True)
class Rect:
    """Open axis-aligned rectangle in lattice coordinates, widths in (0,1)."""

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def __post_init__(self):
        for lo, hi in ((self.x_lo, self.x_hi), (self.y_lo, self.y_hi)):
            if not 0 < hi - lo < 1:
                raise DimensionMismatch(
                    f"rectangle extent {hi - lo} must lie strictly between 0 and 1"
                )

    @property
    def widths(self) -> tuple[float, float]:
        return (self.x_hi - self.x_lo, self.y_hi - self.y_lo)


def _lift_axis(coords: np.ndarray, lo: float, hi: float):
    """Integer shifts m with coords + m in [lo, hi], and the membership mask."""
    m = np.ceil(lo - coords - EDGE_TOL)
    lifted = coords + m
    mask = lifted <= hi + EDGE_TOL
    return m, mask


@dataclass(frozen=True)
class OpenCover:
    """Rectangular cover of the torus of an elliptic curve with a flat twist.

    angles are the monodromy angles (theta_1, theta_2) on the generators
    (1, tau); they determine the locally constant transition factors.
    """

    rects: tuple
    tau: complex
    angles: tuple
    overlap_min: float = 0.0625
    taper: float | None = None

    @property
    def taper_width(self) -> float:
        return self.overlap_min if self.taper is None else self.taper

    def representation(self) -> Representation:
        return Representation(d=1, angles=np.asarray(self.angles, dtype=float))

    def c_reduced(self) -> complex:
        return complex(c_of_representation(self.representation(), curve_lattice(self.tau)).c[0])

    def grid(self, n: int):
        idx = np.arange(n) / n
        return np.meshgrid(idx, idx, indexing="ij")

    def lift_data(self, n: int):
        """Per-rectangle (mask, m1, m2) on the n x n grid."""
        t1, t2 = self.grid(n)
        out = []
        for r in self.rects:
            m1, ok1 = _lift_axis(t1, r.x_lo, r.x_hi)
            m2, ok2 = _lift_axis(t2, r.y_lo, r.y_hi)
            out.append((ok1 & ok2, m1, m2))
        return out

    def transition(self, j: int, k: int, lifts) -> np.ndarray:
        """t_jk on the full grid (garbage outside the overlap mask)."""
        theta = np.asarray(self.angles, dtype=float)
        _, m1j, m2j = lifts[j]
        _, m1k, m2k = lifts[k]
        return np.exp(1j * (theta[0] * (m1j - m1k) + theta[1] * (m2j - m2k)))

    def lifted_points(self, j: int, n: int, lifts) -> np.ndarray:
        """Complex coordinates of the rect-j lifts of the grid points."""
        t1, t2 = self.grid(n)
        _, m1, m2 = lifts[j]
        return (t1 + m1) + (t2 + m2) * self.tau


def square_cover(tau: complex, angles, tiles: int = 2, overlap_frac: float = 0.25) -> OpenCover:
    """tiles x tiles rectangles with the given overlap fraction per tile."""
    size = 1.0 / tiles
    pad = overlap_frac * size / 2.0
    rects = []
    for i in range(tiles):
        for j in range(tiles):
            rects.append(
                Rect(i * size - pad, (i + 1) * size + pad, j * size - pad, (j + 1) * size + pad)
            )
    return OpenCover(rects=tuple(rects), tau=tau, angles=tuple(np.asarray(angles, dtype=float)),
                     overlap_min=2 * pad)


def cover_to_json(cover: OpenCover) -> str:
    return json.dumps(
        {
            "rects": [[r.x_lo, r.x_hi, r.y_lo, r.y_hi] for r in cover.rects],
            "overlap_min": cover.overlap_min,
        }
    )


def cover_from_json(text: str, tau: complex, angles) -> OpenCover:
    obj = json.loads(text)
    rects = tuple(Rect(*row) for row in obj["rects"])
    return OpenCover(rects=rects, tau=tau, angles=tuple(np.asarray(angles, dtype=float)),
                     overlap_min=float(obj.get("overlap_min", 0.0625)))


# ---------------------------------------------------------------------------
# partition of unity


def _ramp(s: np.ndarray) -> np.ndarray:
    """C^2 smoothstep on [0,1]: s - sin(2 pi s)/(2 pi)."""
    return s - np.sin(2 * np.pi * s) / (2 * np.pi)


def _ramp_d(s: np.ndarray) -> np.ndarray:
    return 1.0 - np.cos(2 * np.pi * s)


def _profile(x: np.ndarray, lo: float, hi: float, w: float):
    """Tapered plateau on [lo, hi] with ramp width w; returns (value, derivative)."""
    up = np.clip((x - lo) / w, 0.0, 1.0)
    down = np.clip((hi - x) / w, 0.0, 1.0)
    val = _ramp(up) * _ramp(down)
    dval = _ramp_d(up) / w * _ramp(down) - _ramp(up) * _ramp_d(down) / w
    inside = (x >= lo) & (x <= hi)
    return np.where(inside, val, 0.0), np.where(inside, dval, 0.0)


@dataclass
class PartitionOfUnity:
    """Normalised bump functions and their lattice-coordinate derivatives."""

    n: int
    values: list = field(default_factory=list)
    dt1: list = field(default_factory=list)
    dt2: list = field(default_factory=list)

    def dbar_coefficients(self, cover: OpenCover) -> list:
        """dzbar-coefficients of dbar rho_j via the chain rule."""
        dual = dual_basis(curve_lattice(cover.tau)).vectors  # (2,1)
        return [
            dual[0, 0] / 2.0 * d1 + dual[1, 0] / 2.0 * d2
            for d1, d2 in zip(self.dt1, self.dt2)
        ]


def partition_of_unity(cover: OpenCover, n: int) -> PartitionOfUnity:
    """Smooth bumps subordinate to the cover, summing to 1 on every grid point."""
    t1, t2 = cover.grid(n)
    w = cover.taper_width
    lifts = cover.lift_data(n)
    bumps, d1s, d2s = [], [], []
    for r, (mask, m1, m2) in zip(cover.rects, lifts):
        if min(r.widths) < 2 * w:
            raise CoverGap(f"taper width {w} does not fit in rectangle {r}")
        px, dpx = _profile(t1 + m1, r.x_lo, r.x_hi, w)
        py, dpy = _profile(t2 + m2, r.y_lo, r.y_hi, w)
        keep = mask
        bumps.append(np.where(keep, px * py, 0.0))
        d1s.append(np.where(keep, dpx * py, 0.0))
        d2s.append(np.where(keep, px * dpy, 0.0))
    total = np.sum(bumps, axis=0)
    if float(total.min()) <= 0.0:
        raise CoverGap("cover leaves grid points with zero bump mass")
    dt_total1 = np.sum(d1s, axis=0)
    dt_total2 = np.sum(d2s, axis=0)
    pou = PartitionOfUnity(n=n)
    for b, d1, d2 in zip(bumps, d1s, d2s):
        pou.values.append(b / total)
        pou.dt1.append((d1 * total - b * dt_total1) / total**2)
        pou.dt2.append((d2 * total - b * dt_total2) / total**2)
    return pou


# ---------------------------------------------------------------------------
# cochains


@dataclass
class Cochain:
    """Degree 0: one coefficient grid per rectangle (w.r.t. the flat frame e_j).

    Degree 1: one grid per ordered pair j < k on the overlap; the (k, j)
    entry is recovered through antisymmetry phi_kj = -t_kj phi_jk.
    """

    degree: int
    n: int
    pieces: dict

    @classmethod
    def zero(cls, cover: OpenCover, degree: int, n: int) -> "Cochain":
        pieces = {}
        if degree == 0:
            for j in range(len(cover.rects)):
                pieces[j] = np.zeros((n, n), dtype=complex)
        else:
            for j in range(len(cover.rects)):
                for k in range(j + 1, len(cover.rects)):
                    pieces[(j, k)] = np.zeros((n, n), dtype=complex)
        return cls(degree=degree, n=n, pieces=pieces)


def overlap_mask(cover: OpenCover, j: int, k: int, lifts) -> np.ndarray:
    return lifts[j][0] & lifts[k][0]


def get_piece(c1: Cochain, cover: OpenCover, j: int, k: int, lifts) -> np.ndarray:
    """phi_jk for any ordered pair, via antisymmetry phi_jk = -t_jk phi_kj."""
    if j == k:
        return np.zeros((c1.n, c1.n), dtype=complex)
    if (j, k) in c1.pieces:
        return c1.pieces[(j, k)]
    t_jk = cover.transition(j, k, lifts)
    return -t_jk * c1.pieces[(k, j)]


def delta0(c0: Cochain, cover: OpenCover) -> Cochain:
    """Cech coboundary: phi_jk = phi_j - t_jk phi_k on overlaps."""
    if c0.degree != 0:
        raise DimensionMismatch("delta0 expects a degree-0 cochain")
    n = c0.n
    lifts = cover.lift_data(n)
    out = Cochain.zero(cover, 1, n)
    for (j, k) in out.pieces:
        mask = overlap_mask(cover, j, k, lifts)
        t_jk = cover.transition(j, k, lifts)
        out.pieces[(j, k)] = np.where(mask, c0.pieces[j] - t_jk * c0.pieces[k], 0.0)
    return out


def cocycle_residual(c1: Cochain, cover: OpenCover) -> float:
    """max over triple overlaps of |phi_jl - phi_jk - t_jk phi_kl|."""
    n = c1.n
    lifts = cover.lift_data(n)
    worst = 0.0
    m = len(cover.rects)
    for j in range(m):
        for k in range(j + 1, m):
            for l in range(k + 1, m):
                mask = lifts[j][0] & lifts[k][0] & lifts[l][0]
                if not mask.any():
                    continue
                lhs = get_piece(c1, cover, j, l, lifts)
                rhs = get_piece(c1, cover, j, k, lifts) + cover.transition(
                    j, k, lifts
                ) * get_piece(c1, cover, k, l, lifts)
                worst = max(worst, float(np.max(np.abs(np.where(mask, lhs - rhs, 0.0)))))
    return worst


def _frame_over_sigma(cover: OpenCover, j: int, n: int, lifts, c: complex) -> np.ndarray:
    """p_j = e_j / sigma on the grid: exp(conj(c) zt - c conj(zt)) at the rect-j lift."""
    zt = cover.lifted_points(j, n, lifts)
    return np.exp(np.conj(c) * zt - c * np.conj(zt))


def _form_from_rect(c1: Cochain, pou: PartitionOfUnity, cover: OpenCover, j: int,
                    lifts, dbar_rho, c: complex) -> np.ndarray:
    """dbar g_j in the unit-section trivialisation, valid on U_j."""
    n = c1.n
    acc = np.zeros((n, n), dtype=complex)
    for l in range(len(cover.rects)):
        if l == j:
            continue
        mask = overlap_mask(cover, j, l, lifts)
        phi = get_piece(c1, cover, j, l, lifts)
        acc += np.where(mask, dbar_rho[l] * phi, 0.0)
    return acc * _frame_over_sigma(cover, j, n, lifts, c)


def cocycle_to_form(c1: Cochain, pou: PartitionOfUnity, cover: OpenCover,
                    check_cocycle: bool = True, cocycle_tol: float = 1e-8) -> FormGrid:
    """Global (0,1)-form representing the cocycle class, trivialised data.

    v = dbar(sum_l rho_l f_jl) is computed from the analytic bump
    derivatives and the holomorphy of the pieces; the result does not
    depend on which rectangle evaluates it (cocycle identity), so each
    grid point is assigned to the rectangle with the largest bump value.
    """
    if c1.degree != 1:
        raise DimensionMismatch("expected a degree-1 cochain")
    if check_cocycle:
        resid = cocycle_residual(c1, cover)
        if resid > cocycle_tol:
            raise NotACocycle(f"cocycle residual {resid:.3e} above {cocycle_tol:.1e}")
    n = c1.n
    lifts = cover.lift_data(n)
    dbar_rho = pou.dbar_coefficients(cover)
    c = cover.c_reduced()
    owner = np.argmax(np.stack(pou.values), axis=0)
    out = np.zeros((n, n), dtype=complex)
    for j in range(len(cover.rects)):
        sel = owner == j
        if not sel.any():
            continue
        piece = _form_from_rect(c1, pou, cover, j, lifts, dbar_rho, c)
        out[sel] = piece[sel]
    v = FormGrid.zeros(1, 0, 1, n)
    v.comps[0, 0] = out
    return v


def solve_primitive(c1: Cochain, pou: PartitionOfUnity, cover: OpenCover) -> Cochain:
    """delta-primitive f_j = g_j - u of a trivial-class cocycle.

    u solves dbar_c u = v for the form produced by cocycle_to_form; the
    solution is unique because the bundle has no global sections away
    from the trivial twist.
    """
    c = cover.c_reduced()
    if abs(c) < 1e-13:
        raise TrivialTwist("delta-primitive needs a nontrivial twist")
    n = c1.n
    lifts = cover.lift_data(n)
    dbar_rho = pou.dbar_coefficients(cover)
    v = cocycle_to_form(c1, pou, cover)
    lat = curve_lattice(cover.tau)
    u = solve_dbar_rho(v, np.array([c]), lat)
    out = Cochain.zero(cover, 0, n)
    for j in range(len(cover.rects)):
        mask = lifts[j][0]
        g_coeff = np.zeros((n, n), dtype=complex)
        for l in range(len(cover.rects)):
            if l == j:
                continue
            ol = overlap_mask(cover, j, l, lifts)
            g_coeff += np.where(ol, pou.values[l] * get_piece(c1, cover, j, l, lifts), 0.0)
        u_coeff = u.comps[0, 0] / _frame_over_sigma(cover, j, n, lifts, c)
        out.pieces[j] = np.where(mask, g_coeff - u_coeff, 0.0)
    return out


def delta_residual(c0: Cochain, c1: Cochain, cover: OpenCover) -> float:
    """sup norm of delta(c0) - c1 over all overlap grid points."""
    d = delta0(c0, cover)
    lifts = cover.lift_data(c0.n)
    worst = 0.0
    for (j, k), arr in d.pieces.items():
        mask = overlap_mask(cover, j, k, lifts)
        diff = np.where(mask, arr - c1.pieces[(j, k)], 0.0)
        worst = max(worst, float(np.max(np.abs(diff))))
    return worst


@dataclass
class UedaReport:
    ratio: float
    sup_primitive: float
    sup_cocycle: float
    dist: float


def ueda_ratio(c1: Cochain, pou: PartitionOfUnity, cover: OpenCover) -> UedaReport:
    """dist(trivial) * max_j sup |f_j| / max_jk sup |f_jk| for the primitive."""
    lat = curve_lattice(cover.tau)
    dist = distance_to_trivial(cover.representation(), lat)
    if dist < 1e-13:
        raise TrivialTwist("Ueda ratio needs a nontrivial twist")
    lifts = cover.lift_data(c1.n)
    sup_a = 0.0
    for (j, k), arr in c1.pieces.items():
        mask = overlap_mask(cover, j, k, lifts)
        sup_a = max(sup_a, float(np.max(np.abs(np.where(mask, arr, 0.0)))))
    if sup_a == 0.0:
        return UedaReport(ratio=0.0, sup_primitive=0.0, sup_cocycle=0.0, dist=dist)
    prim = solve_primitive(c1, pou, cover)
    sup_f = max(float(np.max(np.abs(arr))) for arr in prim.pieces.values())
    return UedaReport(ratio=dist * sup_f / sup_a, sup_primitive=sup_f, sup_cocycle=sup_a,
                      dist=dist)


def ueda_chain_constants(cover: OpenCover, pou: PartitionOfUnity) -> tuple[float, float]:
    """(C1, C2) with ratio <= C1 * (K * dist) + C2 * dist, from the
    partition constants and the mean value inequality on shrunk rectangles."""
    lat = curve_lattice(cover.tau)
    dbar_rho = pou.dbar_coefficients(cover)
    s_rho = float(np.max(np.sum(np.abs(np.stack(dbar_rho)), axis=0)))
    vol_x = lat.volume
    vol_u = max(r.widths[0] * r.widths[1] for r in cover.rects) * cover.tau.imag
    sigma_min = np.linalg.svd(period_matrix(lat), compute_uv=False)[-1]
    r_star = (cover.taper_width / 2.0) * sigma_min
    c3 = 1.0 / (math.sqrt(math.pi) * r_star)
    c1 = c3 * s_rho * math.sqrt(vol_x)
    c2 = c3 * math.sqrt(vol_u) + 1.0
    return c1, c2


def cochain_to_csv(c: Cochain) -> str:
    """Grid CSV: degree 0 rows are j,t1,t2,re,im; degree 1 rows are j,k,t1,t2,re,im."""
    lines = [f"# degree={c.degree} n={c.n}"]
    for key in sorted(c.pieces):
        arr = c.pieces[key]
        tag = f"{key}" if c.degree == 0 else f"{key[0]},{key[1]}"
        for i in range(c.n):
            for j in range(c.n):
                v = arr[i, j]
                lines.append(f"{tag},{i / c.n:.17g},{j / c.n:.17g},{v.real:.17g},{v.imag:.17g}")
    return "\n".join(lines) + "\n"


def cochain_from_csv(text: str, cover: OpenCover) -> Cochain:
    lines = [l for l in text.splitlines() if l.strip()]
    head = lines[0].lstrip("# ").split()
    degree = int(head[0].split("=")[1])
    n = int(head[1].split("=")[1])
    out = Cochain.zero(cover, degree, n)
    keylen = 1 if degree == 0 else 2
    for line in lines[1:]:
        parts = line.split(",")
        key = int(parts[0]) if degree == 0 else (int(parts[0]), int(parts[1]))
        t1, t2, re, im = (float(x) for x in parts[keylen:])
        out.pieces[key][int(round(t1 * n)) % n, int(round(t2 * n)) % n] = complex(re, im)
    return out


def holomorphic_cochain(cover: OpenCover, n: int, rng: np.random.Generator,
                        degree_max: int = 2, scale: float = 1.0) -> Cochain:
    """Random polynomial 0-cochain in the lifted coordinate, for test drives."""
    lifts = cover.lift_data(n)
    out = Cochain.zero(cover, 0, n)
    for j, r in enumerate(cover.rects):
        mask = lifts[j][0]
        zt = cover.lifted_points(j, n, lifts)
        center = (r.x_lo + r.x_hi) / 2.0 + (r.y_lo + r.y_hi) / 2.0 * cover.tau
        coeffs = scale * (rng.standard_normal(degree_max + 1)
                          + 1j * rng.standard_normal(degree_max + 1))
        vals = sum(coeffs[k] * (zt - center) ** k for k in range(degree_max + 1))
        out.pieces[j] = np.where(mask, vals, 0.0)
    return out
