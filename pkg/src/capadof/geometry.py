"""Aperture and orientation geometry for planar line-of-sight links.

Both arrays are rectangles. The transmit aperture lies in the global x-z
plane, centered at the origin. The receive aperture is centered at
``rx_center`` and carries its own primed coordinate frame, related to the
global frame by a rotation matrix built from Euler angles (counterclockwise
about z, then y, then x). All lengths are meters, all angles radians.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "EulerAngles",
    "RotationMatrix",
    "ApertureSpec",
    "LinkGeometry",
    "rotation_from_euler",
    "projected_submatrix_det",
    "rx_point_to_global",
]

_TWO_PI = 2.0 * math.pi

#: Aperture-diagonal / distance ratio above which the quadratic phase
#: expansion of the propagation distance becomes questionable. Exceeding it
#: only emits a warning; the exact kernel stays available for cross-checks.
FRESNEL_RATIO_WARN = 0.5


def _wrap_angle(x: float) -> float:
    """Map an angle to the canonical interval (-pi, pi]."""
    r = math.remainder(x, _TWO_PI)
    if r <= -math.pi:
        r += _TWO_PI
    return r


@dataclass(frozen=True)
class EulerAngles:
    """Orientation of the receive aperture.

    alpha, beta, gamma are counterclockwise rotations about the global z-,
    y-, and x-axes respectively, applied in that order.
    """

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"Euler angle {name} must be finite, got {v!r}")

    def normalized(self) -> "EulerAngles":
        """Return the angles wrapped to (-pi, pi]."""
        return EulerAngles(
            _wrap_angle(self.alpha), _wrap_angle(self.beta), _wrap_angle(self.gamma)
        )


@dataclass(frozen=True)
class RotationMatrix:
    """Proper orthonormal 3x3 matrix; columns are the rotated basis vectors."""

    matrix: np.ndarray

    #: tolerance for the orthonormality and determinant checks
    TOL = 1e-12

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (3, 3):
            raise DomainError(f"rotation matrix must be 3x3, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)
        eye = np.eye(3)
        if not (
            np.allclose(m.T @ m, eye, rtol=0.0, atol=self.TOL)
            and np.allclose(m @ m.T, eye, rtol=0.0, atol=self.TOL)
        ):
            raise DomainError("rotation matrix is not orthonormal within 1e-12")
        if abs(np.linalg.det(m) - 1.0) > self.TOL:
            raise DomainError("rotation matrix determinant differs from +1")

    def projected_submatrix(self) -> np.ndarray:
        """2x2 submatrix coupling the two in-plane axes (x and z rows/columns)."""
        return self.matrix[np.ix_([0, 2], [0, 2])]


@dataclass(frozen=True)
class ApertureSpec:
    """Rectangular aperture side lengths, meters."""

    lx: float
    lz: float

    def __post_init__(self):
        if not (self.lx > 0 and self.lz > 0 and math.isfinite(self.lx) and math.isfinite(self.lz)):
            raise DomainError(f"aperture sides must be positive finite, got {self.lx}, {self.lz}")

    @property
    def area(self) -> float:
        return self.lx * self.lz

    @property
    def diagonal(self) -> float:
        return math.hypot(self.lx, self.lz)

    def contains(self, x: float, z: float, slack: float = 0.0) -> bool:
        return abs(x) <= self.lx / 2 + slack and abs(z) <= self.lz / 2 + slack


@dataclass(frozen=True)
class LinkGeometry:
    """Full transmit/receive arrangement of one point-to-point link.

    Attributes
    ----------
    tx, rx : ApertureSpec
        Aperture side lengths.
    rx_center : ndarray, shape (3,)
        Center of the receive aperture in global coordinates, meters.
    rx_orientation : EulerAngles
        Receive-aperture orientation.
    """

    tx: ApertureSpec
    rx: ApertureSpec
    rx_center: np.ndarray
    rx_orientation: EulerAngles = field(default_factory=lambda: EulerAngles(0.0, 0.0, 0.0))

    def __post_init__(self):
        c = np.asarray(self.rx_center, dtype=float)
        if c.shape != (3,) or not np.all(np.isfinite(c)):
            raise DomainError(f"rx_center must be a finite 3-vector, got {self.rx_center!r}")
        object.__setattr__(self, "rx_center", c)
        if not self.distance > 0:
            raise DomainError("rx_center must not coincide with the transmit center")
        if self.fresnel_ratio > FRESNEL_RATIO_WARN:
            warnings.warn(
                f"aperture diagonal / distance ratio {self.fresnel_ratio:.3f} exceeds "
                f"{FRESNEL_RATIO_WARN}; quadratic-phase distance approximation may be "
                "inaccurate (computation proceeds)",
                stacklevel=2,
            )

    @property
    def distance(self) -> float:
        """Center-to-center separation, meters."""
        return float(np.linalg.norm(self.rx_center))

    @property
    def rotation(self) -> RotationMatrix:
        return rotation_from_euler(self.rx_orientation)

    @property
    def fresnel_ratio(self) -> float:
        """max aperture diagonal over distance; > 0.5 triggers a warning."""
        return max(self.tx.diagonal, self.rx.diagonal) / self.distance


def rotation_from_euler(angles: EulerAngles) -> RotationMatrix:
    """Rotation matrix for counterclockwise z-, then y-, then x-axis rotations.

    Parameters
    ----------
    angles : EulerAngles
        alpha about z, beta about y, gamma about x.

    Returns
    -------
    RotationMatrix
        Orthonormal with determinant +1.
    """
    ca, sa = math.cos(angles.alpha), math.sin(angles.alpha)
    cb, sb = math.cos(angles.beta), math.sin(angles.beta)
    cg, sg = math.cos(angles.gamma), math.sin(angles.gamma)
    # rows of the transposed matrix; the return value transposes back
    et = np.array(
        [
            [ca * cb, ca * sb * sg - sa * cg, ca * sb * cg + sa * sg],
            [sa * cb, sa * sb * sg + ca * cg, sa * sb * cg - ca * sg],
            [-sb, cb * sg, cb * cg],
        ]
    )
    return RotationMatrix(et.T)


def projected_submatrix_det(rot: RotationMatrix) -> float:
    """|determinant| of the 2x2 in-plane submatrix of a rotation.

    Equals |cos(alpha)cos(gamma) + sin(alpha)sin(gamma)sin(beta)| for a
    matrix built by :func:`rotation_from_euler`; never exceeds 1. A value of
    1 means the apertures are parallel (up to in-plane spin); 0 means the
    receive aperture is seen edge-on and the coupling degenerates.
    """
    m = rot.matrix
    return abs(m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0])


def rx_point_to_global(geom: LinkGeometry, r) -> np.ndarray:
    """Map receive-plane coordinates (r_x, r_z) to a global 3-vector.

    The point is embedded as (r_x, 0, r_z) in the receive frame, rotated,
    and translated to the aperture center.

    Raises
    ------
    DomainError
        If the point lies outside the receive aperture.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (2,):
        raise DomainError(f"expected a 2-vector of receive-plane coordinates, got {r!r}")
    if not geom.rx.contains(r[0], r[1]):
        raise DomainError(
            f"point ({r[0]}, {r[1]}) lies outside the receive aperture "
            f"{geom.rx.lx} x {geom.rx.lz}"
        )
    e = geom.rotation.matrix
    return geom.rx_center + e @ np.array([r[0], 0.0, r[1]])
