"""3D scene math for wall-mounted RIS deployments.

Positions, distances, local azimuth/elevation at the RIS, planar-array
response vectors, scenario validation, and recommended placements.

Frame convention
----------------
The RIS is a square sqrt(N) x sqrt(N) grid mounted flat on a wall:

* side wall:      first array axis = global +x, second axis = global +z,
                  broadside normal = global -y (toward the room interior);
* opposite wall:  first array axis = global +y, second axis = global +z,
                  broadside normal = global -x.

Local azimuth phi and elevation theta of a direction u (unit vector from
the RIS toward a target) are phi = atan2(u . e1, u . n) and
theta = asin(u . e2), so phi = theta = 0 is pure broadside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

SPEED_OF_LIGHT = 299792458.0
SUPPORTED_FREQUENCIES_GHZ = (28.0, 73.0)

# Violation codes returned by validate_scenario (machine-readable).
CELL_RADIUS_EXCEEDED = "CELL_RADIUS_EXCEEDED"
TX_HEIGHT_RANGE = "TX_HEIGHT_RANGE"
RX_TOO_HIGH = "RX_TOO_HIGH"
TX_NOT_ON_YZ_PLANE = "TX_NOT_ON_YZ_PLANE"
NONPOSITIVE_HEIGHT = "NONPOSITIVE_HEIGHT"
TERMINAL_BEHIND_RIS = "TERMINAL_BEHIND_RIS"
N_NOT_SQUARE = "N_NOT_SQUARE"
FREQUENCY_UNSUPPORTED = "FREQUENCY_UNSUPPORTED"
NONFINITE_COORDINATE = "NONFINITE_COORDINATE"

RX_MAX_HEIGHT_M = 2.0
CELL_RADIUS_M = {"inh": 75.0, "umi": 100.0}
TX_HEIGHT_RANGE_M = {"inh": (2.0, 3.0), "umi": (3.0, 20.0)}


class Environment(str, Enum):
    """Deployment environment class (indoor office or street canyon)."""

    INDOOR_HOTSPOT = "inh"
    URBAN_MICRO = "umi"


class WallPlacement(str, Enum):
    """Which wall carries the RIS: xz plane (side) or yz plane (opposite)."""

    SIDE_WALL = "side"
    OPPOSITE_WALL = "opposite"


def wavelength(frequency_ghz: float) -> float:
    """Carrier wavelength in meters."""
    if frequency_ghz <= 0:
        raise ValueError("frequency must be positive")
    return SPEED_OF_LIGHT / (frequency_ghz * 1e9)


def wavenumber(frequency_ghz: float) -> float:
    """Wave number 2*pi/lambda in rad/m."""
    return 2.0 * math.pi / wavelength(frequency_ghz)


@dataclass(frozen=True, slots=True)
class Point3:
    """A point in global coordinates, meters."""

    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.as_array())))


@dataclass(frozen=True, slots=True)
class LocalAngles:
    """Azimuth/elevation (radians) in the RIS local frame, 0/0 = broadside."""

    azimuth: float
    elevation: float


@dataclass(frozen=True)
class Violation:
    """One validation finding; violations are data, not exceptions."""

    code: str
    message: str


@dataclass(frozen=True)
class Scenario:
    """Full experiment description: environment, band, and placements."""

    environment: Environment
    frequency_ghz: float
    wall: WallPlacement
    tx: Point3
    rx: Point3
    ris: Point3
    n_elements: int = 256
    element_spacing: float | None = None  # None -> lambda/2
    direct_link_present: bool = True

    @property
    def wavelength(self) -> float:
        return wavelength(self.frequency_ghz)

    @property
    def wavenumber(self) -> float:
        return wavenumber(self.frequency_ghz)

    @property
    def spacing(self) -> float:
        if self.element_spacing is not None:
            return self.element_spacing
        return self.wavelength / 2.0

    @property
    def side(self) -> int:
        return grid_side(self.n_elements)


def grid_side(n_elements: int) -> int:
    """Side length of the square element grid; n_elements must be a square."""
    if n_elements < 1:
        raise ValueError("n_elements must be >= 1")
    side = math.isqrt(n_elements)
    if side * side != n_elements:
        raise ValueError(f"n_elements={n_elements} is not a perfect square")
    return side


def distance(a: Point3, b: Point3) -> float:
    """Euclidean distance in meters."""
    return math.sqrt((a.x - b.x) ** 2 + (a.y - b.y) ** 2 + (a.z - b.z) ** 2)


def wall_frame(wall: WallPlacement) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Local frame (e1, e2, normal) of a wall-mounted RIS, global coordinates."""
    if wall is WallPlacement.SIDE_WALL:
        e1 = np.array([1.0, 0.0, 0.0])
        normal = np.array([0.0, -1.0, 0.0])
    else:
        e1 = np.array([0.0, 1.0, 0.0])
        normal = np.array([-1.0, 0.0, 0.0])
    e2 = np.array([0.0, 0.0, 1.0])
    return e1, e2, normal


def local_angles(ris: Point3, wall: WallPlacement, target: Point3) -> LocalAngles:
    """Azimuth/elevation of the direction RIS -> target in the RIS local frame."""
    dx = target.x - ris.x
    dy = target.y - ris.y
    dz = target.z - ris.z
    norm = math.sqrt(dx * dx + dy * dy + dz * dz)
    if norm == 0.0:
        raise ValueError("target coincides with the RIS reference point")
    if wall is WallPlacement.SIDE_WALL:
        u1, un = dx / norm, -dy / norm
    else:
        u1, un = dy / norm, -dx / norm
    elevation = math.asin(min(max(dz / norm, -1.0), 1.0))
    azimuth = math.atan2(u1, un)
    return LocalAngles(azimuth=azimuth, elevation=elevation)


def local_angles_many(
    ris: Point3, wall: WallPlacement, targets: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized local_angles for an (M, 3) stack of target points."""
    delta = np.asarray(targets, dtype=float) - ris.as_array()[None, :]
    norms = np.linalg.norm(delta, axis=1)
    if np.any(norms == 0.0):
        raise ValueError("target coincides with the RIS reference point")
    u = delta / norms[:, None]
    e1, e2, normal = wall_frame(wall)
    elevation = np.arcsin(np.clip(u @ e2, -1.0, 1.0))
    azimuth = np.arctan2(u @ e1, u @ normal)
    return azimuth, elevation


def unit_from_local_angles(wall: WallPlacement, angles: LocalAngles) -> np.ndarray:
    """Inverse of local_angles: global unit vector for given local angles."""
    e1, e2, normal = wall_frame(wall)
    cos_el = math.cos(angles.elevation)
    return (
        math.sin(angles.azimuth) * cos_el * e1
        + math.cos(angles.azimuth) * cos_el * normal
        + math.sin(angles.elevation) * e2
    )


@lru_cache(maxsize=64)
def _grid_indices(side: int) -> tuple[np.ndarray, np.ndarray]:
    """Flat (p, q) index arrays of the square grid, p-major."""
    p = np.repeat(np.arange(side), side)
    q = np.tile(np.arange(side), side)
    p.setflags(write=False)
    q.setflags(write=False)
    return p, q


@lru_cache(maxsize=256)
def element_positions(scn: Scenario) -> np.ndarray:
    """(N, 3) element-center coordinates; element (0, 0) sits at the RIS point.

    Flattened p-major: flat index = p * side + q, p along the first array
    axis, q along global z. Cached per scenario; the returned array is
    read-only.
    """
    e1, e2, _ = wall_frame(scn.wall)
    p, q = _grid_indices(scn.side)
    offsets = scn.spacing * (p[:, None] * e1[None, :] + q[:, None] * e2[None, :])
    out = scn.ris.as_array()[None, :] + offsets
    out.setflags(write=False)
    return out


def array_response(scn: Scenario, angles: LocalAngles) -> np.ndarray:
    """Planar-array response vector for a far-field direction.

    Entry for element (p, q) is exp(j*k*d*(p*cos(theta)*sin(phi) + q*sin(theta)))
    with d the element spacing; all entries are unit modulus, and the
    broadside response is the all-ones vector.
    """
    p, q = _grid_indices(scn.side)
    phase = scn.wavenumber * scn.spacing * (
        p * math.cos(angles.elevation) * math.sin(angles.azimuth)
        + q * math.sin(angles.elevation)
    )
    return np.exp(1j * phase)


def array_response_many(scn: Scenario, azimuth: np.ndarray, elevation: np.ndarray) -> np.ndarray:
    """(len(angles), N) stack of array responses for many directions."""
    p, q = _grid_indices(scn.side)
    u1 = np.cos(elevation) * np.sin(azimuth)
    u2 = np.sin(elevation)
    phase = scn.wavenumber * scn.spacing * (np.outer(u1, p) + np.outer(u2, q))
    return np.exp(1j * phase)


def element_phases_exact(scn: Scenario, source: Point3) -> np.ndarray:
    """Per-element unit phasors exp(-j*k*(d_n - d_ref)) for a point source.

    Spherical-wavefront counterpart of array_response; d_n is the exact
    source-to-element distance and d_ref the source-to-RIS-reference
    distance, so the reference element carries phase 0.
    """
    positions = element_positions(scn)
    src = source.as_array()
    d_n = np.linalg.norm(positions - src[None, :], axis=1)
    d_ref = float(np.linalg.norm(scn.ris.as_array() - src))
    return np.exp(-1j * scn.wavenumber * (d_n - d_ref))


def _horizontal_extent(points: list[Point3]) -> float:
    return max(max(p.x, p.y) for p in points)


def validate_scenario(scn: Scenario) -> list[Violation]:
    """Check placement rules; returns an empty list when the scenario is valid.

    Rules: cell radius (largest horizontal coordinate) below the
    environment limit, Tx height inside the environment's mounting range,
    Rx below 2 m, all heights positive, Tx on the yz plane, and no
    terminal behind the RIS wall plane. A non-square element count and an
    unsupported band are also reported here so UIs can surface them.
    """
    out: list[Violation] = []
    terminals = [scn.tx, scn.rx, scn.ris]
    if not all(p.is_finite() for p in terminals):
        out.append(Violation(NONFINITE_COORDINATE, "all coordinates must be finite"))
        return out

    env = scn.environment.value
    radius = CELL_RADIUS_M[env]
    if _horizontal_extent(terminals) >= radius:
        out.append(
            Violation(
                CELL_RADIUS_EXCEEDED,
                f"horizontal coordinates must stay below {radius:g} m for {env}",
            )
        )

    lo, hi = TX_HEIGHT_RANGE_M[env]
    if not (lo <= scn.tx.z <= hi):
        out.append(
            Violation(
                TX_HEIGHT_RANGE,
                f"Tx height must lie in [{lo:g}, {hi:g}] m for {env}, got {scn.tx.z:g} m",
            )
        )

    if scn.rx.z >= RX_MAX_HEIGHT_M:
        out.append(
            Violation(RX_TOO_HIGH, f"Rx height must be below {RX_MAX_HEIGHT_M:g} m")
        )

    for name, p in (("Tx", scn.tx), ("Rx", scn.rx), ("RIS", scn.ris)):
        if p.z <= 0:
            out.append(Violation(NONPOSITIVE_HEIGHT, f"{name} height must be positive"))

    if abs(scn.tx.x) > 1e-9:
        out.append(Violation(TX_NOT_ON_YZ_PLANE, "Tx must lie on the yz plane (x = 0)"))

    for name, p in (("Tx", scn.tx), ("Rx", scn.rx)):
        if scn.wall is WallPlacement.SIDE_WALL:
            behind = p.y > scn.ris.y
        else:
            behind = p.x > scn.ris.x
        if behind:
            out.append(
                Violation(
                    TERMINAL_BEHIND_RIS,
                    f"{name} lies behind the RIS wall plane for the {scn.wall.value} wall",
                )
            )

    side = math.isqrt(max(scn.n_elements, 0))
    if scn.n_elements < 1 or side * side != scn.n_elements:
        out.append(
            Violation(N_NOT_SQUARE, "element count must be a positive perfect square")
        )

    if scn.frequency_ghz not in SUPPORTED_FREQUENCIES_GHZ:
        out.append(
            Violation(
                FREQUENCY_UNSUPPORTED,
                f"frequency must be one of {SUPPORTED_FREQUENCIES_GHZ} GHz",
            )
        )
    return out


_RECOMMENDED = {
    (Environment.INDOOR_HOTSPOT, WallPlacement.SIDE_WALL): (
        Point3(0, 25, 2),
        Point3(38, 48, 1),
        Point3(40, 50, 2),
    ),
    (Environment.INDOOR_HOTSPOT, WallPlacement.OPPOSITE_WALL): (
        Point3(0, 25, 2),
        Point3(70, 35, 1),
        Point3(70, 30, 2),
    ),
    (Environment.URBAN_MICRO, WallPlacement.SIDE_WALL): (
        Point3(0, 25, 20),
        Point3(50, 70, 1),
        Point3(70, 85, 10),
    ),
    (Environment.URBAN_MICRO, WallPlacement.OPPOSITE_WALL): (
        Point3(0, 25, 20),
        Point3(80, 40, 1),
        Point3(80, 35, 10),
    ),
}


def recommend_positions(
    environment: Environment,
    wall: WallPlacement,
    frequency_ghz: float = 28.0,
    n_elements: int = 256,
) -> Scenario:
    """A known-good placement for the selected environment and wall."""
    tx, rx, ris = _RECOMMENDED[(environment, wall)]
    return Scenario(
        environment=environment,
        frequency_ghz=frequency_ghz,
        wall=wall,
        tx=tx,
        rx=rx,
        ris=ris,
        n_elements=n_elements,
    )
