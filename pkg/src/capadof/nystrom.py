"""Quadrature discretization of the aperture-to-aperture kernel operator.

The continuous operator on the two rectangles is discretized on tensor
Gauss-Legendre grids with symmetric square-root weighting,

    A[i, j] = sqrt(w_r[i]) * kernel(r_i, t_j) * sqrt(w_t[j]),

so the singular values of ``A`` approximate the singular values of the
continuous operator directly, and singular-function samples are recovered by
dividing the matrix singular vectors by the root weights.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np
from threadpoolctl import threadpool_limits

from .errors import DomainError, NumericalError
from .geometry import ApertureSpec, LinkGeometry
from .kernels import KernelKind, Medium, kernel_value

__all__ = [
    "QuadratureGrid",
    "DiscretizedOperator",
    "SingularSpectrum",
    "gauss_legendre_grid",
    "build_operator",
    "singular_spectrum",
    "refine_until_converged",
]

#: hard ceiling on nodes per dimension for the refinement loop
DEFAULT_N_CAP = 128


@dataclass(frozen=True)
class QuadratureGrid:
    """Tensor Gauss-Legendre rule over one rectangular aperture.

    ``points`` enumerates the tensor nodes row-major with z fastest:
    index ``ix * n_z + iz`` holds ``(nodes_x[ix], nodes_z[iz])``. ``weights``
    are the matching products, units m^2.
    """

    nodes_x: np.ndarray
    weights_x: np.ndarray
    nodes_z: np.ndarray
    weights_z: np.ndarray
    points: np.ndarray
    weights: np.ndarray
    aperture: ApertureSpec

    @property
    def n_per_dim(self) -> int:
        return len(self.nodes_x)

    def scaled(self, factor: float) -> "QuadratureGrid":
        """Grid for the aperture with both sides multiplied by ``factor``.

        Gauss-Legendre nodes and weights scale linearly with the interval, so
        this is exact (no re-evaluation of the rule).
        """
        if not factor > 0:
            raise DomainError(f"scale factor must be positive, got {factor}")
        return QuadratureGrid(
            nodes_x=self.nodes_x * factor,
            weights_x=self.weights_x * factor,
            nodes_z=self.nodes_z * factor,
            weights_z=self.weights_z * factor,
            points=self.points * factor,
            weights=self.weights * factor**2,
            aperture=ApertureSpec(self.aperture.lx * factor, self.aperture.lz * factor),
        )


def gauss_legendre_grid(aperture: ApertureSpec, n_per_dim: int) -> QuadratureGrid:
    """Tensor Gauss-Legendre grid with ``n_per_dim`` nodes per axis.

    Nodes/weights on [-1, 1] are mapped affinely to [-L/2, L/2] per axis;
    tensor weights are the per-axis products and sum to the aperture area.
    """
    if n_per_dim < 1:
        raise DomainError(f"n_per_dim must be >= 1, got {n_per_dim}")
    xi, w = np.polynomial.legendre.leggauss(n_per_dim)
    nodes_x = 0.5 * aperture.lx * xi
    weights_x = 0.5 * aperture.lx * w
    nodes_z = 0.5 * aperture.lz * xi
    weights_z = 0.5 * aperture.lz * w
    # row-major tensor enumeration, z fastest
    px = np.repeat(nodes_x, n_per_dim)
    pz = np.tile(nodes_z, n_per_dim)
    points = np.column_stack([px, pz])
    weights = np.repeat(weights_x, n_per_dim) * np.tile(weights_z, n_per_dim)
    return QuadratureGrid(nodes_x, weights_x, nodes_z, weights_z, points, weights, aperture)


@dataclass(frozen=True)
class DiscretizedOperator:
    """Root-weighted kernel sample matrix on a pair of grids."""

    matrix: np.ndarray  # complex, shape (rx nodes, tx nodes)
    rx_grid: QuadratureGrid
    tx_grid: QuadratureGrid
    kind: Optional[KernelKind]

    def frobenius_norm_sq(self) -> float:
        return float(np.sum(np.abs(self.matrix) ** 2))


def build_operator(
    kind: Optional[KernelKind],
    med: Optional[Medium],
    geom: Optional[LinkGeometry],
    rx_grid: QuadratureGrid,
    tx_grid: QuadratureGrid,
    kernel_fn: Optional[Callable] = None,
) -> DiscretizedOperator:
    """Assemble the root-weighted kernel matrix on the given grids.

    ``kernel_fn(r, t)`` overrides the kernel evaluation (it must broadcast
    over point arrays of shape (..., 2)); otherwise ``kind``/``med``/``geom``
    select one of the built-in kernels. Every entry depends only on its own
    node pair, so assembly is bitwise independent of evaluation order.
    """
    if len(rx_grid.points) == 0 or len(tx_grid.points) == 0:
        raise DomainError("quadrature grids must be nonempty")
    if kernel_fn is None:
        if kind is None or med is None or geom is None:
            raise DomainError("either kernel_fn or (kind, med, geom) must be provided")
        k = kind

        def kernel_fn(r, t):
            return kernel_value(k, med, geom, r, t)

    values = np.asarray(
        kernel_fn(rx_grid.points[:, None, :], tx_grid.points[None, :, :]), dtype=complex
    )
    if not np.all(np.isfinite(values)):
        raise NumericalError("kernel evaluation produced non-finite entries")
    sw_r = np.sqrt(rx_grid.weights)
    sw_t = np.sqrt(tx_grid.weights)
    matrix = sw_r[:, None] * values * sw_t[None, :]
    return DiscretizedOperator(matrix=matrix, rx_grid=rx_grid, tx_grid=tx_grid, kind=kind)


@dataclass(frozen=True)
class SingularSpectrum:
    """Descending singular values with node-sampled singular functions.

    ``left_vectors[:, i]`` samples the i-th receive-side singular function at
    the receive grid nodes (matrix singular vector divided by root weights);
    ``right_vectors[:, i]`` likewise on the transmit side. The vectors are
    orthonormal under the quadrature inner product.
    """

    values: np.ndarray
    left_vectors: Optional[np.ndarray] = None
    right_vectors: Optional[np.ndarray] = None
    kind: Optional[KernelKind] = None
    rx_grid: Optional[QuadratureGrid] = None
    tx_grid: Optional[QuadratureGrid] = None
    converged: bool = True

    def __len__(self) -> int:
        return len(self.values)

    @property
    def n_per_dim(self) -> Optional[int]:
        return self.rx_grid.n_per_dim if self.rx_grid is not None else None

    def normalized(self) -> np.ndarray:
        """values / values[0]; errors on an all-zero spectrum."""
        if len(self.values) == 0 or self.values[0] <= 0.0:
            raise DomainError("spectrum has no positive singular value to normalize by")
        return self.values / self.values[0]


def singular_spectrum(op: DiscretizedOperator) -> SingularSpectrum:
    """Full SVD of the discretized operator.

    The LAPACK call is pinned to one thread so repeated runs produce
    bit-identical spectra regardless of ambient threading configuration.
    """
    if not np.all(np.isfinite(op.matrix)):
        raise NumericalError("operator matrix contains non-finite entries")
    try:
        with threadpool_limits(limits=1):
            u, s, vh = np.linalg.svd(op.matrix, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"SVD did not converge for {op.matrix.shape[0]}x{op.matrix.shape[1]} "
            f"operator (kind={op.kind})"
        ) from exc
    left = u / np.sqrt(op.rx_grid.weights)[:, None]
    right = vh.conj().T / np.sqrt(op.tx_grid.weights)[:, None]
    return SingularSpectrum(
        values=s,
        left_vectors=left,
        right_vectors=right,
        kind=op.kind,
        rx_grid=op.rx_grid,
        tx_grid=op.tx_grid,
    )


def _spectrum_at(kind, med, geom, n: int, kernel_fn) -> SingularSpectrum:
    rx_grid = gauss_legendre_grid(geom.rx, n)
    tx_grid = gauss_legendre_grid(geom.tx, n)
    return singular_spectrum(build_operator(kind, med, geom, rx_grid, tx_grid, kernel_fn))


def refine_until_converged(
    kind: Optional[KernelKind],
    med: Optional[Medium],
    geom: LinkGeometry,
    n_start: int = 8,
    tol: float = 1e-6,
    k_track: int = 10,
    n_cap: int = DEFAULT_N_CAP,
    kernel_fn: Optional[Callable] = None,
) -> SingularSpectrum:
    """Double the per-dimension node count until the top values settle.

    Convergence is declared when every tracked singular value changes by
    less than ``tol`` relative to the current largest value between
    consecutive grids. If the cap is reached first, the last spectrum is
    returned with ``converged=False``.
    """
    if n_start < 4:
        raise DomainError(f"n_start must be >= 4, got {n_start}")
    if tol < 0:
        raise DomainError(f"tol must be >= 0, got {tol}")
    if k_track < 1:
        raise DomainError(f"k_track must be >= 1, got {k_track}")
    if n_cap < n_start:
        raise DomainError(f"n_cap {n_cap} is below n_start {n_start}")

    n = n_start
    spectrum = _spectrum_at(kind, med, geom, n, kernel_fn)
    while n < n_cap:
        n = min(2 * n, n_cap)
        finer = _spectrum_at(kind, med, geom, n, kernel_fn)
        k = min(k_track, len(spectrum.values), len(finer.values))
        scale = finer.values[0] if finer.values[0] > 0 else 1.0
        change = np.max(np.abs(finer.values[:k] - spectrum.values[:k])) / scale
        spectrum = finer
        if change < tol:
            return spectrum
    # cap reached without a passing comparison
    return replace(spectrum, converged=False)
