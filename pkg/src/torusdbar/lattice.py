"""Real-linear algebra of rank-2d lattices in C^d.

A lattice is given by 2d generators that form an R-basis of C^d.  The
period matrix A stacks (Re lambda_k | Im lambda_k) as rows; its inverse
encodes the dual R-basis.  The map

    c(s) = i * B(A^{-1}(-i s)),    B(a, b) = (a + i b) / 2,

sends purely imaginary 2d-vectors s to points of C^d and identifies
U(1)-characters of the lattice with C^d modulo the lattice

    Lambda_c = c(2 pi i Z^{2d}),  generated by  i pi lambda_k^dual.

Fundamental-domain representatives are taken in the Voronoi cell of
Lambda_c (closest-vector reduction: Babai rounding plus an exhaustive
search over a small coefficient box, exact at desk scale for d <= 3).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonImaginaryInput, SingularLattice

# Lattices with a period matrix conditioned worse than this are rejected
# at construction time.
COND_CEILING = 1.0e8

# |Re s| above this trips NonImaginaryInput in c_map.
IMAG_TOL = 1.0e-9

# Relative slack used to detect closest-vector ties (Voronoi faces).
TIE_TOL = 1.0e-12

# Half-width of the coefficient box searched around the Babai seed.
ENUM_RADIUS = 2


@dataclass(frozen=True)
class Lattice:
    """Rank-2d lattice in C^d given by its 2d generators.

    generators has shape (2d, d): row k is the complex coordinate vector
    of the k-th generator.
    """

    d: int
    generators: np.ndarray

    def __post_init__(self):
        gens = np.asarray(self.generators, dtype=complex)
        if self.d < 1:
            raise SingularLattice(f"complex dimension must be positive, got {self.d}")
        if gens.shape != (2 * self.d, self.d):
            raise SingularLattice(
                f"expected {2 * self.d} generators in C^{self.d}, got shape {gens.shape}"
            )
        object.__setattr__(self, "generators", gens)
        a = period_matrix(self, _validate=False)
        cond = np.linalg.cond(a)
        if not np.isfinite(cond) or cond > COND_CEILING:
            raise SingularLattice(
                f"period matrix condition number {cond:.3e} exceeds ceiling {COND_CEILING:.1e}"
            )

    @property
    def volume(self) -> float:
        """Euclidean volume of a fundamental parallelepiped."""
        return abs(np.linalg.det(period_matrix(self)))


@dataclass(frozen=True)
class DualBasis:
    """Dual R-basis lambda^dual_l, rows matching the primal generators."""

    vectors: np.ndarray

    def pairing_matrix(self, lat: Lattice) -> np.ndarray:
        """Re(lambda_j).Re(dual_l) + Im(lambda_j).Im(dual_l); identity for a true dual."""
        g, v = lat.generators, self.vectors
        return g.real @ v.real.T + g.imag @ v.imag.T


@dataclass(frozen=True)
class CVector:
    """A point of C^d together with a fundamental-domain certificate."""

    c: np.ndarray
    reduced: bool = False

    def __post_init__(self):
        object.__setattr__(self, "c", np.asarray(self.c, dtype=complex).reshape(-1))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.c))


def period_matrix(lat: Lattice, _validate: bool = True) -> np.ndarray:
    """Real 2d x 2d matrix with rows (Re lambda_k^T, Im lambda_k^T)."""
    gens = np.asarray(lat.generators, dtype=complex)
    a = np.hstack([gens.real, gens.imag])
    if _validate and abs(np.linalg.det(a)) < 1e-300:
        raise SingularLattice("period matrix is singular")
    return a


def dual_basis(lat: Lattice) -> DualBasis:
    """Dual R-basis, read off the columns of the inverse period matrix."""
    a = period_matrix(lat)
    ainv = np.linalg.inv(a)
    d = lat.d
    vectors = (ainv[:d, :] + 1j * ainv[d:, :]).T  # column l -> row l
    return DualBasis(vectors=vectors)


def _check_imaginary(s: np.ndarray):
    worst = float(np.max(np.abs(s.real))) if s.size else 0.0
    if worst > IMAG_TOL:
        raise NonImaginaryInput(f"real part {worst:.3e} exceeds tolerance {IMAG_TOL:.1e}")


def c_map(lat: Lattice, s) -> np.ndarray:
    """Evaluate c(s) = i * B(A^{-1}(-i s)) for purely imaginary s in C^{2d}.

    Agrees with the dual-basis closed form (1/2) sum_l s_l lambda^dual_l.
    """
    s = np.asarray(s, dtype=complex).reshape(-1)
    if s.shape != (2 * lat.d,):
        raise DimensionMismatch(f"expected {2 * lat.d} components, got {s.shape}")
    _check_imaginary(s)
    a = period_matrix(lat)
    y = np.linalg.solve(a, (-1j * s).real)
    d = lat.d
    return 1j * 0.5 * (y[:d] + 1j * y[d:])


def lambda_c_generators(lat: Lattice) -> np.ndarray:
    """Generators c(2 pi i e_k) of Lambda_c, equal to i pi lambda^dual_k."""
    out = np.empty((2 * lat.d, lat.d), dtype=complex)
    for k in range(2 * lat.d):
        s = np.zeros(2 * lat.d, dtype=complex)
        s[k] = 2j * np.pi
        out[k] = c_map(lat, s)
    return out


def key_identity_residual(lat: Lattice, s) -> float:
    """Residual of the identity M (-conj c(s), c(s))^T = s, rows of M being (lambda_k^T | conj lambda_k^T)."""
    s = np.asarray(s, dtype=complex).reshape(-1)
    _check_imaginary(s)
    c = c_map(lat, s)
    gens = lat.generators
    m = np.hstack([gens, gens.conj()])
    vec = np.concatenate([-c.conj(), c])
    return float(np.linalg.norm(m @ vec - s))


def _real_embed(vectors: np.ndarray) -> np.ndarray:
    """(n, d) complex -> (n, 2d) real, norm-preserving."""
    v = np.atleast_2d(np.asarray(vectors, dtype=complex))
    return np.hstack([v.real, v.imag])


def _offset_box(rank: int, radius: int) -> np.ndarray:
    rng = range(-radius, radius + 1)
    return np.array(list(itertools.product(rng, repeat=rank)), dtype=float)


def nearest_lattice_point(v, generators: np.ndarray, radius: int = ENUM_RADIUS):
    """Closest point of the lattice spanned by `generators` to v, in C^d.

    Babai rounding in lattice coordinates seeds an exhaustive search over
    the coefficient box of the given radius.  Ties on Voronoi faces go to
    the lexicographically smallest coefficient vector.

    Returns (point, coefficients).
    """
    gens = np.atleast_2d(np.asarray(generators, dtype=complex))
    v = np.asarray(v, dtype=complex).reshape(-1)
    basis = _real_embed(gens)  # (rank, 2d)
    rank = basis.shape[0]
    target = _real_embed(v)[0]
    coords = np.linalg.lstsq(basis.T, target, rcond=None)[0]
    n0 = np.round(coords)
    cand = n0[None, :] + _offset_box(rank, radius)
    residues = target[None, :] - cand @ basis
    norms = np.einsum("ij,ij->i", residues, residues)
    best = norms.min()
    tied = np.flatnonzero(norms <= best + TIE_TOL * (1.0 + best))
    # lexicographic order on integer coefficient vectors
    order = np.lexsort(tuple(cand[tied, k] for k in range(rank - 1, -1, -1)))
    pick = tied[order[0]]
    coeff = cand[pick].astype(int)
    point = (coeff.astype(complex) @ gens).reshape(-1)
    return point, coeff


def reduce(v, lat: Lattice, radius: int = ENUM_RADIUS) -> CVector:
    """Voronoi representative of v modulo Lambda_c.

    Idempotent, and invariant under shifting v by any Lambda_c vector
    reachable within the enumeration radius.
    """
    gens_c = lambda_c_generators(lat)
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.shape != (lat.d,):
        raise DimensionMismatch(f"expected a point of C^{lat.d}, got shape {v.shape}")
    point, _ = nearest_lattice_point(v, gens_c, radius=radius)
    return CVector(c=v - point, reduced=True)


def lattice_distance(v, generators: np.ndarray, radius: int = ENUM_RADIUS) -> float:
    """Euclidean distance from v to the lattice spanned by `generators`."""
    point, _ = nearest_lattice_point(v, generators, radius=radius)
    return float(np.linalg.norm(np.asarray(v, dtype=complex).reshape(-1) - point))


def lattice_to_json(lat: Lattice) -> str:
    """Serialize as {"d": d, "generators": [[re, im], ...]} row-major, d entries per generator."""
    pairs = [[z.real, z.imag] for z in lat.generators.reshape(-1)]
    return json.dumps({"d": lat.d, "generators": pairs})


def lattice_from_json(text: str) -> Lattice:
    obj = json.loads(text)
    d = int(obj["d"])
    flat = np.array([complex(re, im) for re, im in obj["generators"]])
    if flat.size != 2 * d * d:
        raise SingularLattice(
            f"expected {2 * d * d} complex entries for d={d}, got {flat.size}"
        )
    return Lattice(d=d, generators=flat.reshape(2 * d, d))


def square_lattice(d: int = 1) -> Lattice:
    """Generators e_1..e_d, i e_1..i e_d; the self-dual product of unit squares."""
    eye = np.eye(d, dtype=complex)
    return Lattice(d=d, generators=np.vstack([eye, 1j * eye]))


def curve_lattice(tau: complex) -> Lattice:
    """The rank-2 lattice <1, tau> of an elliptic curve."""
    return Lattice(d=1, generators=np.array([[1.0 + 0j], [tau]]))


def random_lattice(d: int, rng: np.random.Generator, max_cond: float = 50.0) -> Lattice:
    """Well-conditioned random lattice, for randomized test batteries."""
    while True:
        gens = rng.standard_normal((2 * d, d)) + 1j * rng.standard_normal((2 * d, d))
        try:
            lat = Lattice(d=d, generators=gens)
        except SingularLattice:
            continue
        if np.linalg.cond(period_matrix(lat)) <= max_cond:
            return lat
