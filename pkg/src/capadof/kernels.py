"""Scalar channel kernels between two planar apertures.

Three kernels are provided:

* ``Exact`` — spherical wave with true amplitude decay,
  ``-j*eta0*k0*exp(-j*k0*R)/(4*pi*R)`` with R the exact point-to-point
  distance (ohm/m^2).
* ``Fresnel`` — constant amplitude ``-j*eta0*k0/(4*pi*D)`` with the distance
  replaced by its quadratic-phase expansion around the center separation D
  (ohm/m^2).
* ``Reduced`` — the dimensionless bilinear-phase exponential
  ``exp(+j*(k0/D)*t' E' r)`` that shares the singular values of the Fresnel
  kernel up to a global constant.

All point arguments are in-plane coordinates with trailing dimension 2
(``(x, z)``); any leading shape broadcasts, so pairwise evaluation over two
grids is ``kernel_value(kind, med, geom, r[:, None, :], t[None, :, :])``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import LinkGeometry

__all__ = [
    "SPEED_OF_LIGHT",
    "FREE_SPACE_IMPEDANCE",
    "Medium",
    "KernelKind",
    "exact_distance",
    "fresnel_distance",
    "kernel_value",
    "bilinear_phase_kernel",
    "unimodular_factors",
    "fresnel_amplitude",
]

SPEED_OF_LIGHT = 299_792_458.0  # m/s
FREE_SPACE_IMPEDANCE = 376.730313668  # ohm


@dataclass(frozen=True)
class Medium:
    """Propagation medium: carrier frequency and derived wave quantities."""

    fc: float  # Hz
    wavelength: float  # m
    k0: float  # rad/m
    eta0: float = FREE_SPACE_IMPEDANCE  # ohm

    @classmethod
    def from_frequency(cls, fc: float, eta0: float = FREE_SPACE_IMPEDANCE) -> "Medium":
        if not fc > 0:
            raise DomainError(f"carrier frequency must be positive, got {fc}")
        lam = SPEED_OF_LIGHT / fc
        return cls(fc=fc, wavelength=lam, k0=2.0 * math.pi / lam, eta0=eta0)

    @classmethod
    def from_wavelength(cls, lam: float, eta0: float = FREE_SPACE_IMPEDANCE) -> "Medium":
        if not lam > 0:
            raise DomainError(f"wavelength must be positive, got {lam}")
        return cls(
            fc=SPEED_OF_LIGHT / lam, wavelength=lam, k0=2.0 * math.pi / lam, eta0=eta0
        )


class KernelKind(enum.Enum):
    EXACT = "exact"
    FRESNEL = "fresnel"
    REDUCED = "reduced"

    @property
    def dimensionless(self) -> bool:
        """True for the unit-modulus kernel that carries no impedance scale."""
        return self is KernelKind.REDUCED


def _split(points) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(points, dtype=float)
    if p.shape[-1] != 2:
        raise DomainError(f"points must have trailing dimension 2, got shape {p.shape}")
    return p[..., 0], p[..., 1]


def _rx_global_components(geom: LinkGeometry, rx, rz):
    """Global (x, y, z) of receive-plane points, broadcasting."""
    e = geom.rotation.matrix
    o = geom.rx_center
    gx = o[0] + e[0, 0] * rx + e[0, 2] * rz
    gy = o[1] + e[1, 0] * rx + e[1, 2] * rz
    gz = o[2] + e[2, 0] * rx + e[2, 2] * rz
    return gx, gy, gz


def exact_distance(geom: LinkGeometry, r, t) -> np.ndarray:
    """Exact distance between a receive-plane point and a transmit-plane point.

    Parameters
    ----------
    r, t : array_like, shape (..., 2)
        In-plane (x, z) coordinates on the receive / transmit aperture.
        Leading dimensions broadcast.

    Returns
    -------
    ndarray
        ``||o_r + E (r_x, 0, r_z) - (t_x, 0, t_z)||`` in meters.
    """
    rx, rz = _split(r)
    tx, tz = _split(t)
    gx, gy, gz = _rx_global_components(geom, rx, rz)
    dist = np.sqrt((gx - tx) ** 2 + gy**2 + (gz - tz) ** 2)
    if np.any(dist == 0.0):
        raise DomainError("zero propagation distance: apertures collide at a sample point")
    return dist


def _difference_terms(geom: LinkGeometry, r, t):
    """o_r . d and ||d||^2 for d = E (r_x,0,r_z) - (t_x,0,t_z), broadcasting."""
    rx, rz = _split(r)
    tx, tz = _split(t)
    e = geom.rotation.matrix
    dx = e[0, 0] * rx + e[0, 2] * rz - tx
    dy = e[1, 0] * rx + e[1, 2] * rz
    dz = e[2, 0] * rx + e[2, 2] * rz - tz
    o = geom.rx_center
    od = o[0] * dx + o[1] * dy + o[2] * dz
    dd = dx**2 + dy**2 + dz**2
    return od, dd


def fresnel_distance(geom: LinkGeometry, r, t) -> np.ndarray:
    """Quadratic-phase expansion of :func:`exact_distance` around D.

    Computed as ``D*(1 + o.d/D^2 + |d|^2/(2 D^2) - o.d/(2 D^3))`` with
    ``d = E (r_x,0,r_z) - (t_x,0,t_z)``. Every term is linear or separable
    quadratic in the plane coordinates, which is what makes the reduced
    kernel share singular values with the Fresnel one exactly.
    """
    d = geom.distance
    od, dd = _difference_terms(geom, r, t)
    return d * (1.0 + od / d**2 + dd / (2.0 * d**2) - od / (2.0 * d**3))


def fresnel_amplitude(med: Medium, geom: LinkGeometry) -> float:
    """Constant modulus eta0*k0/(4*pi*D) of the Fresnel kernel, ohm/m^2."""
    return med.eta0 * med.k0 / (4.0 * math.pi * geom.distance)


def bilinear_phase_kernel(coupling: float, eprime: np.ndarray, r, t) -> np.ndarray:
    """Unit-modulus kernel ``exp(+j * coupling * [t_x,t_z] E' [r_x,r_z]^T)``.

    ``coupling`` is k0/D for the physical reduced kernel; passing 1 gives the
    unit-coupling kernel used on rescaled apertures.
    """
    rx, rz = _split(r)
    tx, tz = _split(t)
    phase = tx * (eprime[0, 0] * rx + eprime[0, 1] * rz) + tz * (
        eprime[1, 0] * rx + eprime[1, 1] * rz
    )
    return np.exp(1j * coupling * phase)


def kernel_value(kind: KernelKind, med: Medium, geom: LinkGeometry, r, t) -> np.ndarray:
    """Evaluate the selected kernel at (r, t), broadcasting over points.

    Units: ohm/m^2 for ``Exact``/``Fresnel``, dimensionless for ``Reduced``.
    """
    if kind is KernelKind.EXACT:
        dist = exact_distance(geom, r, t)
        return -1j * med.eta0 * med.k0 * np.exp(-1j * med.k0 * dist) / (4.0 * math.pi * dist)
    if kind is KernelKind.FRESNEL:
        dist = fresnel_distance(geom, r, t)
        amp = fresnel_amplitude(med, geom)
        return -1j * amp * np.exp(-1j * med.k0 * dist)
    if kind is KernelKind.REDUCED:
        eprime = geom.rotation.projected_submatrix()
        return bilinear_phase_kernel(med.k0 / geom.distance, eprime, r, t)
    raise DomainError(f"unknown kernel kind {kind!r}")


def unimodular_factors(med: Medium, geom: LinkGeometry, r, t):
    """Diagonal phase factors linking the Fresnel and reduced kernels.

    Returns ``(u, v)`` with |u| = |v| = 1 such that, pointwise,

        kernel_value(FRESNEL, r, t) == const * u(r) * kernel_value(REDUCED, r, t) * v(t)

    with ``const = -j*eta0*k0*exp(-j*k0*D)/(4*pi*D)``. Both factors depend on
    one endpoint only, so they leave singular values untouched.
    """
    d = geom.distance
    k0 = med.k0
    o = geom.rx_center
    e = geom.rotation.matrix

    rx, rz = _split(r)
    # x = E (r_x, 0, r_z), global coordinates of the rotated receive point
    xx = e[0, 0] * rx + e[0, 2] * rz
    xy = e[1, 0] * rx + e[1, 2] * rz
    xz = e[2, 0] * rx + e[2, 2] * rz
    ox = o[0] * xx + o[1] * xy + o[2] * xz
    xnorm2 = xx**2 + xy**2 + xz**2
    u = np.exp(-1j * k0 * (ox / d + xnorm2 / (2.0 * d) - ox / (2.0 * d**2)))

    tx, tz = _split(t)
    ot = o[0] * tx + o[2] * tz
    tnorm2 = tx**2 + tz**2
    v = np.exp(-1j * k0 * (-ot / d + tnorm2 / (2.0 * d) + ot / (2.0 * d**2)))
    return u, v


def fresnel_reduced_constant(med: Medium, geom: LinkGeometry) -> complex:
    """Global constant of the Fresnel/reduced factorization, ohm/m^2."""
    d = geom.distance
    return -1j * med.eta0 * med.k0 * np.exp(-1j * med.k0 * d) / (4.0 * math.pi * d)
