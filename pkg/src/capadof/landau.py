"""Closed-form degrees-of-freedom prediction and spectrum polarization analysis.

For two rectangles at center separation D, the number of dominant singular
values of the constant-amplitude channel operator is predicted by

    DOF = L_tx * L_tz * L_rx * L_rz * |det E'| / (lambda * D)^2,

and the leading (unnormalized) singular values plateau near
``(eta0 / 2) / sqrt(|det E'|)`` before decaying steeply past index DOF.
The effective DoF count is the number of normalized squared singular values
above a threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .geometry import LinkGeometry, projected_submatrix_det
from .kernels import KernelKind, Medium
from .nystrom import SingularSpectrum

__all__ = [
    "DofReport",
    "dof_closed_form",
    "dof_from_dimensions",
    "count_edof",
    "analyze_polarization",
]

DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True)
class DofReport:
    """Summary of the predicted and observed spatial degrees of freedom.

    ``plateau_sv`` / ``plateau_predicted`` are in ohms and absent (None) when
    the spectrum came from the dimensionless reduced kernel.
    """

    dof_formula: float
    det_eprime: float
    edof_count: int
    threshold: float
    plateau_sv: Optional[float]
    plateau_predicted: Optional[float]

    def to_json_dict(self) -> dict:
        out = {
            "dof_formula": self.dof_formula,
            "det_eprime": self.det_eprime,
            "edof_count": self.edof_count,
            "threshold": self.threshold,
        }
        if self.plateau_sv is not None:
            out["plateau_sv"] = self.plateau_sv
        if self.plateau_predicted is not None:
            out["plateau_predicted"] = self.plateau_predicted
        return out


def dof_from_dimensions(
    ltx: float, ltz: float, lrx: float, lrz: float, wavelength: float, distance: float, det_eprime: float
) -> float:
    """DoF formula on raw dimensions; zero-area apertures are allowed here."""
    if wavelength <= 0 or distance <= 0:
        raise DomainError("wavelength and distance must be positive")
    return (ltx * ltz * lrx * lrz) / (wavelength * distance) ** 2 * det_eprime


def dof_closed_form(med: Medium, geom: LinkGeometry) -> float:
    """Closed-form spatial DoF of the link; scales with the aperture area
    product and inversely with (wavelength * distance)^2."""
    det = projected_submatrix_det(geom.rotation)
    return dof_from_dimensions(
        geom.tx.lx, geom.tx.lz, geom.rx.lx, geom.rx.lz, med.wavelength, geom.distance, det
    )


def count_edof(spectrum: SingularSpectrum, threshold: float) -> int:
    """Number of normalized squared singular values strictly above threshold.

    Normalization is by the largest value, so the compared quantities are
    ``(values[i] / values[0])^2`` in [0, 1].
    """
    if not 0.0 < threshold < 1.0:
        raise DomainError(f"threshold must lie in (0, 1), got {threshold}")
    eps = spectrum.normalized() ** 2
    return int(np.sum(eps > threshold))


def analyze_polarization(
    spectrum: SingularSpectrum,
    med: Medium,
    geom: LinkGeometry,
    threshold: float = DEFAULT_THRESHOLD,
) -> DofReport:
    """Build a :class:`DofReport` comparing the spectrum against the closed form.

    The observed plateau is the mean of the first ``max(1, floor(DOF/2))``
    singular values, deliberately staying away from the decay edge near
    index DOF. For a reduced-kernel spectrum the plateau fields are omitted
    because that kernel carries no impedance units.
    """
    if len(spectrum) == 0:
        raise DomainError("cannot analyze an empty spectrum")
    det = projected_submatrix_det(geom.rotation)
    dof = dof_closed_form(med, geom)
    edof = count_edof(spectrum, threshold)

    plateau_sv: Optional[float] = None
    plateau_predicted: Optional[float] = None
    if spectrum.kind is not KernelKind.REDUCED:
        # tiny offset so a DoF one rounding error below an integer does not
        # drop a plateau index
        n_plateau = max(1, math.floor(dof / 2 + 1e-9))
        n_plateau = min(n_plateau, len(spectrum))
        plateau_sv = float(np.mean(spectrum.values[:n_plateau]))
        # no finite plateau exists for a degenerate (edge-on) projection
        plateau_predicted = (med.eta0 / 2.0) / math.sqrt(det) if det > 0 else None

    return DofReport(
        dof_formula=dof,
        det_eprime=det,
        edof_count=edof,
        threshold=threshold,
        plateau_sv=plateau_sv,
        plateau_predicted=plateau_predicted,
    )
