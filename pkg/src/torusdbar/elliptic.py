"""Weierstrass functions and the twisted integral dbar solver on an elliptic curve.

Everything here lives on X = C/<1, tau> with Im tau > 0.  The classical
sigma and zeta functions are evaluated through the first Jacobi theta
function (nome exp(i pi tau)):

    sigma(z) = exp(eta1 z^2) theta1(pi z) / (pi theta1'(0)),
    zeta(z)  = 2 eta1 z + pi theta1'(pi z) / theta1(pi z),
    eta1     = -(pi^2 / 6) theta1'''(0) / theta1'(0),

with arguments first reduced modulo the lattice through the sigma/zeta
quasi-periodicity, so the series see only small imaginary parts.  The
theta series converges like |q|^{n^2}; the truncation length is chosen
from that tail bound and certified at construction time.  The defining
lattice sums converge far too slowly to reach the tolerances used here
(the symmetrised tail is O(1/R^2) in the truncation radius), which is
why the evaluation goes through theta functions; the lattice sums are
kept as a low-accuracy cross-check in the test suite.

Half-period constants follow the convention omega1 = 1/2,
omega2 = (-1-tau)/2, omega3 = tau/2, eta_j = zeta(omega_j), so that
eta1 + eta2 + eta3 = 0 and the Legendre combinations equal i pi / 2.

A twist (p, q) in [0,1)^2 minus the origin (monodromy exp(2 pi i p),
exp(2 pi i q))
defines A = -2 (p eta3 - q eta1), B = p tau - q, and the kernel

    Ktilde(z, xi) = exp(A (z - xi)) sigma(z - xi + B) / sigma(z - xi),

whose z-monodromy matches the twist.  The solver integrates the kernel
against (0,1)-data over the fundamental domain; in the unit-section
trivialisation the integral is a periodic convolution with the kernel

    khat(w) = Ktilde(w) exp(conj(c) w - c conj(w)),

evaluated by a symmetrically punctured trapezoid rule plus moment
corrections on the singular cell, which is second-order accurate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bundle import Representation, c_of_representation
from .errors import (
    DiagonalPole,
    DimensionMismatch,
    PoleAtLattice,
    ResourceLimit,
    SingularLattice,
    TrivialTwist,
)
from .lattice import Lattice, curve_lattice
from .spectral import FormGrid, _dzbar_symbols, l2_norm

THETA_EPS = 1e-15
MAX_THETA_TERMS = 400


@dataclass(frozen=True)
class EllipticCurve:
    """The curve C/<1, tau>; Im tau >= 0.1 as a numerical guard."""

    tau: complex

    def __post_init__(self):
        if self.tau.imag < 0.1:
            raise SingularLattice(f"Im tau = {self.tau.imag} below guard 0.1")

    @property
    def lattice(self) -> Lattice:
        return curve_lattice(self.tau)


def _theta_terms(a: float, ymax: float, eps: float = THETA_EPS) -> int:
    """Smallest series length with certified tail below eps.

    Terms are bounded by 2 exp(-a (n+1/2)^2 + (2n+1) ymax), a = pi Im tau;
    past the largest term the bound decays super-geometrically, so the
    first n with bound < eps (plus a safety margin) truncates safely.
    """
    log_eps = math.log(eps)
    for n in range(MAX_THETA_TERMS):
        expo = -a * (n + 0.5) ** 2 + (2 * n + 1) * ymax + math.log(2.0)
        if expo < log_eps and (n + 0.5) > ymax / a:
            return n + 3
    raise ResourceLimit(f"theta series needs more than {MAX_THETA_TERMS} terms")


class WeierstrassContext:
    """Truncation-controlled evaluator for sigma, zeta and the eta constants."""

    def __init__(self, tau: complex, terms: int | None = None):
        tau = complex(tau)
        if tau.imag < 0.1:
            raise SingularLattice(f"Im tau = {tau.imag} below guard 0.1")
        self.tau = tau
        self.nome = np.exp(1j * np.pi * tau)
        a = np.pi * tau.imag
        # reduced arguments satisfy |Im(pi z)| <= pi Im tau / 2 + slack;
        # half-period evaluations need the same budget
        ymax = np.pi * tau.imag / 2 + 1.0
        self.terms = terms if terms is not None else _theta_terms(a, ymax)
        ns = np.arange(self.terms)
        self._signs = (-1.0) ** ns
        self._qpow = self.nome ** ((ns + 0.5) ** 2)
        self._odd = 2 * ns + 1
        self.theta1_prime0 = 2.0 * np.sum(self._signs * self._odd * self._qpow)
        theta1_ppp0 = -2.0 * np.sum(self._signs * self._odd**3 * self._qpow)
        self.eta1 = -(np.pi**2 / 6.0) * theta1_ppp0 / self.theta1_prime0
        self.omega1 = 0.5 + 0j
        self.omega2 = (-1.0 - tau) / 2.0
        self.omega3 = tau / 2.0
        self.eta3 = self._zeta_basic(np.asarray(self.omega3))[()]
        self.eta2 = self._zeta_basic(np.asarray(self.omega2))[()]

    # -- theta building blocks ------------------------------------------------

    def _theta1(self, v: np.ndarray) -> np.ndarray:
        v = v[..., None]
        return np.sum(2.0 * self._signs * self._qpow * np.sin(self._odd * v), axis=-1)

    def _theta1_dv(self, v: np.ndarray) -> np.ndarray:
        v = v[..., None]
        return np.sum(
            2.0 * self._signs * self._odd * self._qpow * np.cos(self._odd * v), axis=-1
        )

    # -- lattice reduction ----------------------------------------------------

    def lattice_coords(self, z: np.ndarray):
        """Real coordinates (a, b) with z = a + b tau."""
        z = np.asarray(z, dtype=complex)
        b = z.imag / self.tau.imag
        a = z.real - b * self.tau.real
        return a, b

    def _split(self, z: np.ndarray):
        """z = z0 + m + n tau with coefficients of z0 in [-1/2, 1/2)."""
        a, b = self.lattice_coords(np.asarray(z, dtype=complex))
        m = np.floor(a + 0.5)
        n = np.floor(b + 0.5)
        z0 = np.asarray(z, dtype=complex) - m - n * self.tau
        return z0, m, n

    def dist_to_lattice(self, z) -> np.ndarray:
        """Euclidean distance to <1, tau>, exact for the moderate tau used here."""
        z0, _, _ = self._split(z)
        best = np.abs(z0)
        for dm in (-1, 0, 1):
            for dn in (-1, 0, 1):
                best = np.minimum(best, np.abs(z0 - dm - dn * self.tau))
        return best

    # -- sigma / zeta ---------------------------------------------------------

    def _sigma_basic(self, z0: np.ndarray) -> np.ndarray:
        return (
            np.exp(self.eta1 * z0**2)
            * self._theta1(np.pi * z0)
            / (np.pi * self.theta1_prime0)
        )

    def _zeta_basic(self, z0: np.ndarray) -> np.ndarray:
        v = np.pi * z0
        return 2.0 * self.eta1 * z0 + np.pi * self._theta1_dv(v) / self._theta1(v)

    def sigma(self, z) -> np.ndarray:
        """Weierstrass sigma; odd, sigma(z)/z -> 1 at 0, quasi-periodic."""
        z = np.asarray(z, dtype=complex)
        z0, m, n = self._split(z)
        base = self._sigma_basic(z0)
        plain = (m == 0) & (n == 0)
        if np.all(plain):
            return base[()] if z.ndim == 0 else base
        eta_w = 2.0 * (m * self.eta1 + n * self.eta3)
        w = m + n * self.tau
        sign = np.where((np.mod(m, 2) == 0) & (np.mod(n, 2) == 0), 1.0, -1.0)
        out = sign * np.exp(eta_w * (z0 + w / 2.0)) * base
        return out[()] if z.ndim == 0 else out

    def zeta(self, z) -> np.ndarray:
        """Weierstrass zeta; simple pole 1/z on the lattice."""
        z = np.asarray(z, dtype=complex)
        z0, m, n = self._split(z)
        if np.any(np.abs(z0) < 1e-12):
            raise PoleAtLattice("zeta evaluated at a lattice point")
        out = self._zeta_basic(z0) + 2.0 * (m * self.eta1 + n * self.eta3)
        return out[()] if z.ndim == 0 else out

    def legendre_residuals(self) -> tuple[float, float, float, float]:
        """(eta-sum, and the three |Legendre - i pi/2| residuals)."""
        target = 0.5j * np.pi
        r0 = abs(self.eta1 + self.eta2 + self.eta3)
        r1 = abs(self.eta3 * self.omega2 - self.eta2 * self.omega3 - target)
        r2 = abs(self.eta2 * self.omega1 - self.eta1 * self.omega2 - target)
        r3 = abs(self.eta1 * self.omega3 - self.eta3 * self.omega1 - target)
        return float(r0), float(r1), float(r2), float(r3)


def weierstrass_sigma(ctx: WeierstrassContext, z) -> np.ndarray:
    """Function-style entry point for ctx.sigma."""
    return ctx.sigma(z)


def weierstrass_zeta(ctx: WeierstrassContext, z) -> np.ndarray:
    """Function-style entry point for ctx.zeta."""
    return ctx.zeta(z)


@dataclass(frozen=True)
class TwistData:
    """Monodromy twist (p, q) with its kernel constants A and B."""

    p: float
    q: float
    a_const: complex
    b_const: complex
    c: complex

    @classmethod
    def from_pq(cls, ctx: WeierstrassContext, p: float, q: float) -> "TwistData":
        p, q = float(p) % 1.0, float(q) % 1.0
        if p == 0.0 and q == 0.0:
            raise TrivialTwist("the twist (p, q) = (0, 0) is the trivial bundle")
        a_const = -2.0 * (p * ctx.eta3 - q * ctx.eta1)
        b_const = p * ctx.tau - q
        rep = Representation(d=1, angles=[2 * np.pi * p, 2 * np.pi * q])
        c_red = c_of_representation(rep, curve_lattice(ctx.tau)).c[0]
        return cls(p=p, q=q, a_const=a_const, b_const=b_const, c=c_red)

    def representation(self) -> Representation:
        return Representation(d=1, angles=[2 * np.pi * self.p, 2 * np.pi * self.q])


def kernel_eval(ctx: WeierstrassContext, twist: TwistData, z, xi) -> np.ndarray:
    """Ktilde(z, xi) = exp(A(z-xi)) sigma(z-xi+B) / sigma(z-xi)."""
    w = np.asarray(z, dtype=complex) - np.asarray(xi, dtype=complex)
    if np.any(ctx.dist_to_lattice(w) < 1e-12):
        raise DiagonalPole("kernel evaluated with z - xi on the lattice")
    return np.exp(twist.a_const * w) * ctx.sigma(w + twist.b_const) / ctx.sigma(w)


def _khat(ctx: WeierstrassContext, twist: TwistData, w: np.ndarray) -> np.ndarray:
    """Periodic kernel in the unit-section trivialisation (no pole handling)."""
    c = twist.c
    return (
        np.exp(twist.a_const * w)
        * ctx.sigma(w + twist.b_const)
        / ctx.sigma(w)
        * np.exp(np.conj(c) * w - c * np.conj(w))
    )


def _gauss_cell_moments(ctx: WeierstrassContext, twist: TwistData, n: int, order: int = 10):
    """Integrals over the centred grid cell of khat - sigma(B)/w times 1, w, conj(w).

    The subtracted simple pole integrates to zero over the symmetric cell,
    so the remaining integrand is bounded and tensor Gauss-Legendre handles it.
    """
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes, weights = nodes / 2.0, weights / 2.0  # [-1/2, 1/2]
    aa, bb = np.meshgrid(nodes, nodes, indexing="ij")
    ww = np.outer(weights, weights)
    w = (aa + bb * ctx.tau) / n
    sigma_b = ctx.sigma(twist.b_const)
    reg = _khat(ctx, twist, w) - sigma_b / w
    jac = ctx.tau.imag / n**2
    i0 = np.sum(reg * ww) * jac
    i1 = np.sum(reg * w * ww) * jac + sigma_b * jac
    i2 = np.sum(reg * np.conj(w) * ww) * jac + sigma_b * _cell_wbar_over_w(ctx.tau, n)
    return i0, i1, i2


def _cell_radial(tau: complex, n: int, theta: np.ndarray) -> np.ndarray:
    """Radial extent of the centred cell {(a + b tau)/n : |a|,|b| <= 1/2}."""
    u = n * np.exp(1j * theta)
    b = u.imag / tau.imag
    a = u.real - b * tau.real
    return 0.5 / np.maximum(np.abs(a), np.abs(b))


def _cell_wbar_over_w(tau: complex, n: int, m_theta: int = 2048) -> complex:
    """Integral of conj(w)/w over the centred cell, by the polar formula."""
    theta = np.arange(m_theta) * (2 * np.pi / m_theta)
    r = _cell_radial(tau, n, theta)
    return complex(np.sum(np.exp(-2j * theta) * r**2 / 2.0) * (2 * np.pi / m_theta))


def _cell_inv_abs(tau: complex, n: int, m_theta: int = 2048) -> float:
    """Integral of 1/|w| over the centred cell: the mean radial extent."""
    theta = np.arange(m_theta) * (2 * np.pi / m_theta)
    return float(np.sum(_cell_radial(tau, n, theta)) * (2 * np.pi / m_theta))


def khat_grid(ctx: WeierstrassContext, twist: TwistData, n: int) -> np.ndarray:
    """khat on the n x n lattice-coordinate grid, zeroed at the pole point."""
    idx = np.arange(n) / n
    t1, t2 = np.meshgrid(idx, idx, indexing="ij")
    w = t1 + t2 * ctx.tau
    out = np.empty((n, n), dtype=complex)
    mask = np.ones((n, n), dtype=bool)
    mask[0, 0] = False
    out[mask] = _khat(ctx, twist, w[mask])
    out[0, 0] = 0.0
    return out


def solve_dbar_kernel(ctx: WeierstrassContext, twist: TwistData, f: FormGrid) -> FormGrid:
    """Solve dbar u = v for v = fhat dzbar against the Weierstrass kernel.

    f holds the trivialised (0,1)-coefficient on the n x n grid.  The
    quadrature is the punctured trapezoid rule (one FFT convolution) plus
    zeroth- and first-moment corrections on the singular cell; the
    relative residual decreases at second order in 1/n.
    """
    if (f.p, f.q) != (0, 1) or f.d != 1:
        raise DimensionMismatch("solver expects a (0,1)-form on the curve")
    n = f.n
    fhat = f.comps[0, 0]
    kern = khat_grid(ctx, twist, n)
    cell_area = ctx.tau.imag / n**2
    conv = np.fft.ifft2(np.fft.fft2(kern) * np.fft.fft2(fhat)) * cell_area
    i0, i1, i2 = _gauss_cell_moments(ctx, twist, n)
    lat = curve_lattice(ctx.tau)
    sym_zbar, sym_z = _dzbar_symbols(lat, n)
    spec = np.fft.fft2(fhat)
    df_dz = np.fft.ifft2(spec * sym_z[0])
    df_dzbar = np.fft.ifft2(spec * sym_zbar[0])
    total = conv + i0 * fhat - i1 * df_dz - i2 * df_dzbar
    sigma_b = ctx.sigma(twist.b_const)
    out = FormGrid.zeros(1, 0, 0, n)
    out.comps[0, 0] = total / (np.pi * sigma_b)
    return out


def young_l1_bound(ctx: WeierstrassContext, twist: TwistData, n: int = 128) -> float:
    """Numerical L1 norm of khat / (pi sigma(B)) over the fundamental domain.

    The simple pole is integrable; the singular cell is handled by the
    exact polar integral of |sigma(B)|/|w| plus a Gauss rule on the
    bounded remainder.
    """
    kern = np.abs(khat_grid(ctx, twist, n))
    cell_area = ctx.tau.imag / n**2
    far = float(np.sum(kern)) * cell_area
    sigma_b = ctx.sigma(twist.b_const)
    nodes, weights = np.polynomial.legendre.leggauss(10)
    nodes, weights = nodes / 2.0, weights / 2.0
    aa, bb = np.meshgrid(nodes, nodes, indexing="ij")
    ww = np.outer(weights, weights)
    w = (aa + bb * ctx.tau) / n
    remainder = np.abs(_khat(ctx, twist, w)) - np.abs(sigma_b) / np.abs(w)
    near = abs(sigma_b) * _cell_inv_abs(ctx.tau, n) + float(
        np.sum(remainder * ww).real
    ) * ctx.tau.imag / n**2
    return (far + near) / (np.pi * abs(sigma_b))


def inv_dist_l1(ctx: WeierstrassContext, m_theta: int = 4096) -> float:
    """Exact-to-quadrature L1 norm of 1/dist(z, lattice) over the torus.

    Computed as the angular integral of the Voronoi radial function.
    """
    theta = np.arange(m_theta) * (2 * np.pi / m_theta)
    u = np.exp(1j * theta)
    best = np.full(m_theta, np.inf)
    for mm in range(-2, 3):
        for nn in range(-2, 3):
            if mm == 0 and nn == 0:
                continue
            g = mm + nn * ctx.tau
            dot = np.real(u * np.conj(g))
            r = np.where(dot > 1e-12, (abs(g) ** 2 / 2.0) / np.maximum(dot, 1e-300), np.inf)
            best = np.minimum(best, r)
    return float(np.sum(best) * (2 * np.pi / m_theta))


def theorem_constant(
    ctx: WeierstrassContext, n_z: int = 32, n_twist: int = 12
) -> tuple[float, float]:
    """(M, K): the sup constant of d(z) d(B) |kernel| and K = M * ||1/d||_L1.

    Both factors are periodic, so sampling fundamental domains (offset to
    dodge the poles) suffices; K/d(B) then dominates the solver's L2 norm
    ratio on every twist.
    """
    idx = (np.arange(n_z) + 0.5) / n_z
    t1, t2 = np.meshgrid(idx, idx, indexing="ij")
    z = t1 + t2 * ctx.tau
    dz = ctx.dist_to_lattice(z)
    m_best = 0.0
    for ip in range(n_twist):
        for iq in range(n_twist):
            p = (ip + 0.5) / n_twist
            q = (iq + 0.5) / n_twist
            b = p * ctx.tau - q
            a = -2.0 * (p * ctx.eta3 - q * ctx.eta1)
            vals = np.abs(
                np.exp(a * z) * ctx.sigma(z + b) / (ctx.sigma(b) * ctx.sigma(z))
            )
            m_here = float(np.max(vals * dz)) * float(ctx.dist_to_lattice(b))
            m_best = max(m_best, m_here)
    return m_best, m_best * inv_dist_l1(ctx)


def solver_residual(ctx: WeierstrassContext, twist: TwistData, f: FormGrid, u: FormGrid) -> float:
    """Relative L2 residual |dbar_c u - f| / |f| in the trivialised frame."""
    from .spectral import apply_dbar_rho

    lat = curve_lattice(ctx.tau)
    resid = apply_dbar_rho(u, np.array([twist.c]), lat)
    resid.comps = resid.comps - f.comps
    return l2_norm(resid, lat) / l2_norm(f, lat)
