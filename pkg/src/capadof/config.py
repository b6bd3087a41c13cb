"""Scenario and sweep configuration: a strict, flat-sectioned TOML schema.

Lengths are meters when numeric; the string shorthand ``"<number>lambda"``
resolves against the medium's wavelength (one lossless multiply, logged).
Angles are radians and must be numeric — no degree forms. Unknown keys
anywhere are errors: silent typos in physics configs are the dominant
failure mode.

Example::

    kernel_kind = "fresnel"

    [medium]
    fc_hz = 2.4e9

    [tx]
    lx = "10lambda"
    lz = "10lambda"

    [rx]
    lx = "10lambda"
    lz = "10lambda"
    center = [0.0, "50lambda", 0.0]
    euler_rad = [0.0, 0.0, 0.0]

    [numerics]
    n_per_dim = 32
    tol = 1e-6
    n_cap = 128
    threshold = 0.5

    [sweep]            # only read by the `sweep` subcommand
    parameter = "distance"
    values = ["25lambda", "50lambda", "100lambda"]
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigError, DomainError
from .geometry import ApertureSpec, EulerAngles, LinkGeometry
from .kernels import KernelKind, Medium

__all__ = ["Numerics", "ScenarioConfig", "SweepSpec", "load_scenario", "load_sweep"]

log = logging.getLogger(__name__)

DEFAULT_FC_HZ = 2.4e9
DEFAULT_CENTER = (0.0, "50lambda", 0.0)

_LAMBDA_RE = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*lambda\s*$")

_KNOWN = {
    "": {"kernel_kind", "medium", "tx", "rx", "numerics", "sweep"},
    "medium": {"fc_hz", "lambda_m"},
    "tx": {"lx", "lz"},
    "rx": {"lx", "lz", "center", "euler_rad"},
    "numerics": {"n_per_dim", "tol", "n_cap", "threshold"},
    "sweep": {"parameter", "values"},
}


@dataclass(frozen=True)
class Numerics:
    n_per_dim: int = 32
    tol: float = 1e-6
    n_cap: int = 128
    threshold: float = 0.5


@dataclass(frozen=True)
class ScenarioConfig:
    medium: Medium
    geometry: LinkGeometry
    numerics: Numerics
    kernel_kind: KernelKind


@dataclass(frozen=True)
class SweepSpec:
    parameter: str  # "distance" | "side_length" | "alpha_gamma"
    values: tuple
    fixed: ScenarioConfig


def _check_keys(section: str, table: dict) -> None:
    known = _KNOWN[section]
    for key in table:
        if key not in known:
            where = f"[{section}]" if section else "top level"
            raise ConfigError(
                f"unknown key {key!r} at {where}; known keys: {sorted(known)}"
            )


def _resolve_length(value, wavelength: float, where: str) -> float:
    """Meters from a numeric value or a '<number>lambda' string."""
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a length, got boolean")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        m = _LAMBDA_RE.match(value)
        if m is None:
            raise ConfigError(
                f"{where}: cannot parse length {value!r}; use meters or '<number>lambda'"
            )
        meters = float(m.group(1)) * wavelength
        log.info("%s: resolved %r -> %.17g m (wavelength %.17g m)", where, value, meters, wavelength)
        return meters
    raise ConfigError(f"{where}: expected number or '<number>lambda' string, got {type(value).__name__}")


def _require_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _require_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    return value


def _parse_medium(table: dict) -> Medium:
    _check_keys("medium", table)
    has_fc = "fc_hz" in table
    has_lam = "lambda_m" in table
    if has_fc == has_lam:
        raise ConfigError("[medium]: exactly one of fc_hz / lambda_m must be given")
    try:
        if has_fc:
            return Medium.from_frequency(_require_number(table["fc_hz"], "medium.fc_hz"))
        return Medium.from_wavelength(_require_number(table["lambda_m"], "medium.lambda_m"))
    except DomainError as exc:
        raise ConfigError(f"[medium]: {exc}") from exc


def _parse_aperture(section: str, table: dict, wavelength: float) -> ApertureSpec:
    for key in ("lx", "lz"):
        if key not in table:
            raise ConfigError(f"[{section}]: missing required key {key!r}")
    lx = _resolve_length(table["lx"], wavelength, f"{section}.lx")
    lz = _resolve_length(table["lz"], wavelength, f"{section}.lz")
    try:
        return ApertureSpec(lx=lx, lz=lz)
    except DomainError as exc:
        raise ConfigError(f"[{section}]: {exc}") from exc


def _parse_vector3(value, wavelength: float, where: str) -> np.ndarray:
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise ConfigError(f"{where}: expected a 3-element array")
    return np.array([_resolve_length(v, wavelength, f"{where}[{i}]") for i, v in enumerate(value)])


def _parse_euler(value, where: str) -> EulerAngles:
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise ConfigError(f"{where}: expected a 3-element array of radians")
    vals = []
    for i, v in enumerate(value):
        if isinstance(v, str):
            raise ConfigError(
                f"{where}[{i}]: angles are radians-only numbers; got string {v!r}"
            )
        vals.append(_require_number(v, f"{where}[{i}]"))
    try:
        return EulerAngles(*vals)
    except DomainError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _parse_numerics(table: dict) -> Numerics:
    _check_keys("numerics", table)
    n = Numerics()
    if "n_per_dim" in table:
        n = replace(n, n_per_dim=_require_int(table["n_per_dim"], "numerics.n_per_dim"))
    if "tol" in table:
        n = replace(n, tol=_require_number(table["tol"], "numerics.tol"))
    if "n_cap" in table:
        n = replace(n, n_cap=_require_int(table["n_cap"], "numerics.n_cap"))
    if "threshold" in table:
        n = replace(n, threshold=_require_number(table["threshold"], "numerics.threshold"))
    if n.n_per_dim < 4:
        raise ConfigError("numerics.n_per_dim must be >= 4")
    if not n.tol >= 0:
        raise ConfigError("numerics.tol must be >= 0")
    if n.n_cap < n.n_per_dim:
        raise ConfigError("numerics.n_cap must be >= n_per_dim")
    if not 0.0 < n.threshold < 1.0:
        raise ConfigError("numerics.threshold must lie in (0, 1)")
    return n


def _parse_scenario(raw: dict) -> ScenarioConfig:
    _check_keys("", raw)
    medium_table = raw.get("medium", {"fc_hz": DEFAULT_FC_HZ})
    if not isinstance(medium_table, dict):
        raise ConfigError("[medium] must be a table")
    medium = _parse_medium(medium_table)
    lam = medium.wavelength

    for section in ("tx", "rx"):
        if section not in raw:
            raise ConfigError(f"missing required section [{section}]")
        if not isinstance(raw[section], dict):
            raise ConfigError(f"[{section}] must be a table")
        _check_keys(section, raw[section])
    tx = _parse_aperture("tx", raw["tx"], lam)
    rx = _parse_aperture("rx", raw["rx"], lam)
    center = _parse_vector3(raw["rx"].get("center", list(DEFAULT_CENTER)), lam, "rx.center")
    euler = _parse_euler(raw["rx"].get("euler_rad", [0.0, 0.0, 0.0]), "rx.euler_rad")

    if not isinstance(raw.get("numerics", {}), dict):
        raise ConfigError("[numerics] must be a table")
    numerics = _parse_numerics(raw.get("numerics", {}))

    kind_raw = raw.get("kernel_kind", "fresnel")
    try:
        kind = KernelKind(kind_raw)
    except ValueError:
        raise ConfigError(
            f"kernel_kind must be one of {[k.value for k in KernelKind]}, got {kind_raw!r}"
        ) from None

    try:
        geometry = LinkGeometry(tx=tx, rx=rx, rx_center=center, rx_orientation=euler)
    except DomainError as exc:
        raise ConfigError(f"invalid geometry: {exc}") from exc
    return ScenarioConfig(medium=medium, geometry=geometry, numerics=numerics, kernel_kind=kind)


_SWEEP_PARAMETERS = ("distance", "side_length", "alpha_gamma")


def _parse_sweep(raw: dict, fixed: ScenarioConfig) -> SweepSpec:
    if "sweep" not in raw:
        raise ConfigError("missing required section [sweep]")
    table = raw["sweep"]
    if not isinstance(table, dict):
        raise ConfigError("[sweep] must be a table")
    _check_keys("sweep", table)
    parameter = table.get("parameter")
    if parameter not in _SWEEP_PARAMETERS:
        raise ConfigError(f"sweep.parameter must be one of {_SWEEP_PARAMETERS}, got {parameter!r}")
    values_raw = table.get("values")
    if not isinstance(values_raw, list) or len(values_raw) == 0:
        raise ConfigError("sweep.values must be a nonempty array")
    lam = fixed.medium.wavelength
    if parameter == "alpha_gamma":
        values = []
        for i, v in enumerate(values_raw):
            if isinstance(v, str):
                raise ConfigError(f"sweep.values[{i}]: angles are radians-only numbers")
            values.append(_require_number(v, f"sweep.values[{i}]"))
    else:
        values = [_resolve_length(v, lam, f"sweep.values[{i}]") for i, v in enumerate(values_raw)]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ConfigError(f"sweep.values must be strictly increasing for {parameter}")
        if any(v <= 0 for v in values):
            raise ConfigError("sweep.values must be positive lengths")
    return SweepSpec(parameter=parameter, values=tuple(values), fixed=fixed)


def _load_toml(path) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        # the decoder message carries line/column diagnostics
        raise ConfigError(f"{path}: {exc}") from exc


def load_scenario(path) -> ScenarioConfig:
    """Parse a scenario config file; raises ConfigError with the offending field."""
    return _parse_scenario(_load_toml(path))


def load_sweep(path) -> SweepSpec:
    """Parse a config file that also carries a [sweep] section."""
    raw = _load_toml(path)
    fixed = _parse_scenario(raw)
    return _parse_sweep(raw, fixed)


def apply_sweep_value(base: ScenarioConfig, parameter: str, value: float) -> ScenarioConfig:
    """Scenario for one sweep point.

    distance moves the receive center along its existing direction;
    side_length sets all four aperture sides; alpha_gamma sets the first and
    third Euler angles equal to the value, keeping the middle one.
    """
    geom = base.geometry
    if parameter == "distance":
        direction = geom.rx_center / geom.distance
        new_geom = LinkGeometry(
            tx=geom.tx, rx=geom.rx, rx_center=direction * value, rx_orientation=geom.rx_orientation
        )
    elif parameter == "side_length":
        side = ApertureSpec(lx=value, lz=value)
        new_geom = LinkGeometry(
            tx=side, rx=side, rx_center=geom.rx_center, rx_orientation=geom.rx_orientation
        )
    elif parameter == "alpha_gamma":
        angles = EulerAngles(alpha=value, beta=geom.rx_orientation.beta, gamma=value)
        new_geom = LinkGeometry(
            tx=geom.tx, rx=geom.rx, rx_center=geom.rx_center, rx_orientation=angles
        )
    else:
        raise ConfigError(f"unknown sweep parameter {parameter!r}")
    return replace(base, geometry=new_geom)
