"""Monodromy representations and the unit-length trivialising section.

A flat unitary line bundle on the torus C^d/Lambda is the data of a
U(1)-character rho of the lattice, stored here as the 2d angles
theta_k in (-pi, pi] with rho(lambda_k) = exp(i theta_k).  The branch
normalisation makes the coordinate c(rho) continuous at the trivial
bundle.

The section

    sigma(z) = exp(- sum_j conj(c_j) z_j + sum_j c_j conj(z_j))

has unit modulus everywhere and twisted periodicity
sigma(z + lambda_k) = rho(lambda_k) sigma(z); monodromy_defect measures
how well a (c, rho) pair satisfies it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .lattice import CVector, Lattice, c_map, reduce


def wrap_angle(theta):
    """Map angles to the branch (-pi, pi]."""
    theta = np.asarray(theta, dtype=float)
    wrapped = theta - 2.0 * np.pi * np.floor((theta + np.pi) / (2.0 * np.pi))
    # floor maps the branch cut to -pi; fold it back to +pi
    wrapped = np.where(np.isclose(wrapped, -np.pi), np.pi, wrapped)
    return wrapped


@dataclass(frozen=True)
class Representation:
    """U(1)-character of a rank-2d lattice, as angles in (-pi, pi]."""

    d: int
    angles: np.ndarray

    def __post_init__(self):
        angles = wrap_angle(np.asarray(self.angles, dtype=float).reshape(-1))
        if angles.shape != (2 * self.d,):
            raise DimensionMismatch(
                f"expected {2 * self.d} angles for d={self.d}, got {angles.shape}"
            )
        object.__setattr__(self, "angles", angles)

    def values(self) -> np.ndarray:
        """rho(lambda_k) on the generators, unit modulus by construction."""
        return np.exp(1j * self.angles)

    def is_trivial(self, tol: float = 1e-14) -> bool:
        return bool(np.all(np.abs(self.angles) <= tol))

    def compose(self, other: "Representation") -> "Representation":
        """Pointwise product of characters (group law on the character torus)."""
        if self.d != other.d:
            raise DimensionMismatch("representations live on tori of different dimension")
        return Representation(d=self.d, angles=wrap_angle(self.angles + other.angles))


def representation_to_json(rep: Representation) -> str:
    return json.dumps({"d": rep.d, "angles": [float(a) for a in rep.angles]})


def representation_from_json(text: str) -> Representation:
    obj = json.loads(text)
    return Representation(d=int(obj["d"]), angles=np.asarray(obj["angles"], dtype=float))


def c_of_representation(rep: Representation, lat: Lattice) -> CVector:
    """Voronoi-reduced coordinate of the bundle on C^d / Lambda_c."""
    if rep.d != lat.d:
        raise DimensionMismatch(f"representation d={rep.d} vs lattice d={lat.d}")
    raw = c_map(lat, 1j * rep.angles)
    return reduce(raw, lat)


def distance_to_trivial(rep: Representation, lat: Lattice) -> float:
    """Euclidean norm of the reduced coordinate; zero iff rho is trivial."""
    return c_of_representation(rep, lat).norm


def sigma_eval(c: CVector | np.ndarray, z) -> np.ndarray:
    """Evaluate the unit section at points z (shape (..., d) or scalar for d=1).

    The exponent is purely imaginary, so the result has unit modulus and
    sigma(0) = 1.
    """
    cv = c.c if isinstance(c, CVector) else np.asarray(c, dtype=complex).reshape(-1)
    d = cv.size
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0:
        pts, out_shape = z.reshape(1, 1), ()
    elif z.ndim == 1 and d > 1:
        pts, out_shape = z.reshape(1, d), ()  # a single point of C^d
    elif d == 1 and (z.ndim == 1 or z.shape[-1] != 1):
        pts, out_shape = z.reshape(-1, 1), z.shape
    else:
        pts, out_shape = z.reshape(-1, d), z.shape[:-1]
    expo = -pts @ cv.conj() + pts.conj() @ cv
    out = np.exp(expo).reshape(out_shape)
    return out[()] if out_shape == () else out


@dataclass(frozen=True)
class SigmaSection:
    """The unit global section determined by a reduced bundle coordinate.

    Calling it evaluates sigma at points of C^d; values have unit modulus
    and the twisted periodicity sigma(z + lambda_k) = rho(lambda_k) sigma(z).
    """

    c: CVector

    def __call__(self, z) -> np.ndarray:
        return sigma_eval(self.c, z)


def monodromy_defect(
    c: CVector | np.ndarray,
    lat: Lattice,
    rep: Representation,
    samples: int = 100,
    seed: int = 7,
) -> float:
    """max over generators and sample points of |sigma(z + lambda_k) - rho(lambda_k) sigma(z)|.

    Near zero certifies that sigma descends to a section of the bundle
    with monodromy rho.  Shifting c by a Lambda_c vector leaves the
    defect unchanged.
    """
    if rep.d != lat.d:
        raise DimensionMismatch(f"representation d={rep.d} vs lattice d={lat.d}")
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((samples, lat.d)) + 1j * rng.standard_normal((samples, lat.d))
    base = sigma_eval(c, pts)
    worst = 0.0
    for k in range(2 * lat.d):
        shifted = sigma_eval(c, pts + lat.generators[k][None, :])
        defect = np.max(np.abs(shifted - rep.values()[k] * base))
        worst = max(worst, float(defect))
    return worst
