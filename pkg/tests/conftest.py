"""Shared fixtures: paper-default scenario objects and cached spectra.

The 32-nodes-per-dimension spectra cost ~1.5 s each, so they are computed
once per session and shared across test modules.
"""

import numpy as np
import pytest

from capadof import (
    ApertureSpec,
    EulerAngles,
    KernelKind,
    LinkGeometry,
    Medium,
    build_operator,
    gauss_legendre_grid,
    singular_spectrum,
)

FC_HZ = 2.4e9


@pytest.fixture(scope="session")
def medium():
    return Medium.from_frequency(FC_HZ)


def make_link(medium, side_lam=10.0, dist_lam=50.0, alpha=0.0, beta=0.0, gamma=0.0):
    lam = medium.wavelength
    ap = ApertureSpec(side_lam * lam, side_lam * lam)
    return LinkGeometry(
        tx=ap,
        rx=ap,
        rx_center=np.array([0.0, dist_lam * lam, 0.0]),
        rx_orientation=EulerAngles(alpha, beta, gamma),
    )


@pytest.fixture(scope="session")
def geom_parallel(medium):
    return make_link(medium)


@pytest.fixture(scope="session")
def geom_rotated(medium):
    return make_link(medium, alpha=np.pi / 4, gamma=np.pi / 4)


def compute_spectrum(medium, geom, kind, n=32):
    rx = gauss_legendre_grid(geom.rx, n)
    tx = gauss_legendre_grid(geom.tx, n)
    return singular_spectrum(build_operator(kind, medium, geom, rx, tx))


@pytest.fixture(scope="session")
def spectrum_parallel(medium, geom_parallel):
    return compute_spectrum(medium, geom_parallel, KernelKind.FRESNEL)


@pytest.fixture(scope="session")
def spectrum_rotated(medium, geom_rotated):
    return compute_spectrum(medium, geom_rotated, KernelKind.FRESNEL)


@pytest.fixture(scope="session")
def spectrum_parallel_exact(medium, geom_parallel):
    return compute_spectrum(medium, geom_parallel, KernelKind.EXACT)


@pytest.fixture(scope="session")
def spectrum_parallel_reduced(medium, geom_parallel):
    return compute_spectrum(medium, geom_parallel, KernelKind.REDUCED)


@pytest.fixture(scope="session")
def spectrum_rotated_reduced(medium, geom_rotated):
    return compute_spectrum(medium, geom_rotated, KernelKind.REDUCED)
