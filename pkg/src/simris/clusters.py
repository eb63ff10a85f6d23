"""Stochastic scatterer generation.

Draws cluster counts, sub-rays, angles, 3D positions, complex gains, and
per-cluster shadowing for one link of a scenario. Every sampled sub-ray
keeps its full geometry so downstream code (and tests) can reproduce its
attenuation from first principles; nothing is hidden in the stream.

All distribution constants here are simulator defaults, configurable via
ClusterStatistics; they are not measurement-campaign values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .geometry import (
    Environment,
    LocalAngles,
    Point3,
    Scenario,
    WallPlacement,
    distance,
    local_angles_many,
)
from .propagation import PathLossModel, ci_path_loss, sample_shadow_db


class Link(Enum):
    """Which hop of the scenario a cluster set belongs to."""

    TX_RIS = "tx-ris"
    RIS_RX = "ris-rx"
    TX_RX = "tx-rx"


@dataclass(frozen=True)
class ClusterStatistics:
    """Tunable distribution constants for scatterer generation."""

    poisson_mean_28ghz: float = 1.8
    poisson_mean_73ghz: float = 1.9
    poisson_mean: float | None = None  # overrides the per-band means
    subray_min: int = 1
    subray_max: int = 30
    cluster_azimuth_spread_deg: float = 60.0
    cluster_elevation_spread_deg: float = 20.0
    subray_spread_deg: float = 5.0  # Laplacian angular std per axis
    min_cluster_distance_m: float = 1.0
    max_redraws: int = 16
    room_x_m: float = 75.0
    room_y_m: float = 50.0
    room_height_m: float = 3.5
    wall_margin_m: float = 0.1

    def mean_cluster_count(self, frequency_ghz: float) -> float:
        if self.poisson_mean is not None:
            return self.poisson_mean
        return self.poisson_mean_73ghz if frequency_ghz >= 60 else self.poisson_mean_28ghz


@dataclass(frozen=True, slots=True)
class Subray:
    """One propagation path inside a cluster."""

    azimuth_offset: float  # radians, relative to the cluster mean
    elevation_offset: float
    position: Point3
    complex_gain: complex
    attenuation: float
    arrival: LocalAngles  # at the RIS, local frame


@dataclass(frozen=True, slots=True)
class Cluster:
    """A group of co-located scatterers sharing a mean direction."""

    mean_azimuth: float  # global-frame radians
    mean_elevation: float
    center: Point3
    shadow_db: float
    subrays: list[Subray]

    def __post_init__(self):
        if len(self.subrays) < 1:
            raise ValueError("a cluster needs at least one sub-ray")


@dataclass(frozen=True)
class ClusterSet:
    """All clusters of one link plus the power normalization factor."""

    clusters: list[Cluster]
    link: Link = Link.TX_RIS

    def __post_init__(self):
        if len(self.clusters) < 1:
            raise ValueError("a cluster set needs at least one cluster")

    @property
    def subray_count(self) -> int:
        return sum(len(c.subrays) for c in self.clusters)

    @property
    def normalization(self) -> float:
        """gamma = sqrt(1 / sum_c S_c)."""
        return math.sqrt(1.0 / self.subray_count)

    def iter_subrays(self):
        for cluster in self.clusters:
            for subray in cluster.subrays:
                yield cluster, subray


def sample_cluster_count(
    rng: np.random.Generator,
    frequency_ghz: float,
    stats: ClusterStatistics = ClusterStatistics(),
) -> int:
    """Number of clusters: max(Poisson(lambda_C), 1)."""
    return max(int(rng.poisson(stats.mean_cluster_count(frequency_ghz))), 1)


def sample_subray_count(
    rng: np.random.Generator, stats: ClusterStatistics = ClusterStatistics()
) -> int:
    """Sub-rays per cluster, uniform on [subray_min, subray_max]."""
    return int(rng.integers(stats.subray_min, stats.subray_max + 1))


def sample_complex_gain(rng: np.random.Generator) -> complex:
    """Circularly-symmetric complex Gaussian with unit variance."""
    return complex(rng.normal(0.0, math.sqrt(0.5)), rng.normal(0.0, math.sqrt(0.5)))


def _link_endpoints(scn: Scenario, link: Link) -> tuple[Point3, Point3]:
    if link is Link.TX_RIS:
        return scn.tx, scn.ris
    if link is Link.RIS_RX:
        return scn.ris, scn.rx
    return scn.tx, scn.rx


def _environment_box(scn: Scenario, stats: ClusterStatistics) -> tuple[np.ndarray, np.ndarray]:
    """Axis-aligned bounds scatterers must stay inside.

    Indoors this is the room box; outdoors only the ground (and a generous
    horizontal extent) constrains positions. Both are intersected with the
    half-space in front of the RIS wall so scatterers cannot sit behind
    the surface.
    """
    if scn.environment is Environment.INDOOR_HOTSPOT:
        lo = np.array([0.0, 0.0, 0.0])
        hi = np.array([stats.room_x_m, stats.room_y_m, stats.room_height_m])
    else:
        lo = np.array([-1000.0, -1000.0, 0.0])
        hi = np.array([1000.0, 1000.0, 1000.0])
    margin = stats.wall_margin_m
    if scn.wall is WallPlacement.SIDE_WALL:
        hi[1] = min(hi[1], scn.ris.y - margin)
    else:
        hi[0] = min(hi[0], scn.ris.x - margin)
    return lo, hi


def _direction(azimuth: float, elevation: float) -> np.ndarray:
    cos_el = math.cos(elevation)
    return np.array(
        [cos_el * math.cos(azimuth), cos_el * math.sin(azimuth), math.sin(elevation)]
    )


def _in_box(point: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> bool:
    return (
        lo[0] <= point[0] <= hi[0]
        and lo[1] <= point[1] <= hi[1]
        and lo[2] <= point[2] <= hi[2]
    )


_MAX_ELEVATION = math.pi / 2 - 1e-6


def sample_cluster_geometry(
    rng: np.random.Generator,
    scn: Scenario,
    link: Link,
    stats: ClusterStatistics = ClusterStatistics(),
    pathloss: PathLossModel | None = None,
) -> ClusterSet:
    """Draw the full scatterer geometry for one link of the scenario.

    Cluster mean directions are drawn around the link axis (uniform
    +-azimuth/elevation spreads), cluster centers uniformly along that
    direction between the minimum distance and the link length, and
    sub-rays get Laplacian angular offsets at the cluster's radial
    distance. Out-of-bounds clusters are redrawn a bounded number of times
    and finally clipped; sub-ray attenuations use the NLOS CI model over
    the exact two-segment travel distance with the cluster's shadowing.
    """
    if pathloss is None:
        pathloss = PathLossModel.defaults(scn.environment, scn.frequency_ghz)
    origin_pt, target_pt = _link_endpoints(scn, link)
    origin = origin_pt.as_array()
    target = target_pt.as_array()
    d_link = distance(origin_pt, target_pt)
    if d_link == 0:
        raise ValueError("degenerate link: endpoints coincide")
    axis = (target - origin) / d_link
    axis_azimuth = math.atan2(axis[1], axis[0])
    axis_elevation = math.asin(float(np.clip(axis[2], -1.0, 1.0)))

    lo, hi = _environment_box(scn, stats)
    az_spread = math.radians(stats.cluster_azimuth_spread_deg)
    el_spread = math.radians(stats.cluster_elevation_spread_deg)
    subray_scale = math.radians(stats.subray_spread_deg) / math.sqrt(2.0)
    d_min = min(stats.min_cluster_distance_m, 0.9 * d_link)

    n_clusters = sample_cluster_count(rng, scn.frequency_ghz, stats)
    clusters: list[Cluster] = []
    for _ in range(n_clusters):
        s_c = sample_subray_count(rng, stats)
        shadow = sample_shadow_db(rng, pathloss.nlos_sigma_db)

        mean_az = mean_el = 0.0
        radial = d_min
        center = origin.copy()
        for _attempt in range(stats.max_redraws + 1):
            mean_az = axis_azimuth + rng.uniform(-az_spread, az_spread)
            mean_el = min(
                max(axis_elevation + rng.uniform(-el_spread, el_spread), -_MAX_ELEVATION),
                _MAX_ELEVATION,
            )
            radial = rng.uniform(d_min, d_link)
            center = origin + radial * _direction(mean_az, mean_el)
            if _in_box(center, lo, hi):
                break
        center = np.clip(center, lo, hi)

        offsets = rng.laplace(0.0, subray_scale, size=(s_c, 2))
        gains = rng.normal(0.0, math.sqrt(0.5), size=(s_c, 2))
        el = np.clip(mean_el + offsets[:, 1], -_MAX_ELEVATION, _MAX_ELEVATION)
        az = mean_az + offsets[:, 0]
        cos_el = np.cos(el)
        directions = np.stack(
            [cos_el * np.cos(az), cos_el * np.sin(az), np.sin(el)], axis=1
        )
        positions = np.clip(origin[None, :] + radial * directions, lo, hi)
        seg_in = np.maximum(np.linalg.norm(positions - origin[None, :], axis=1), 1e-6)
        seg_out = np.maximum(np.linalg.norm(target[None, :] - positions, axis=1), 1e-6)
        travel = np.maximum(seg_in + seg_out, pathloss.reference_distance)
        attenuations = ci_path_loss(pathloss, travel, los=False, shadow_db=shadow)
        arrival_az, arrival_el = local_angles_many(scn.ris, scn.wall, positions)
        pos_list = positions.tolist()
        off_list = offsets.tolist()
        subrays = [
            Subray(
                azimuth_offset=off_list[s][0],
                elevation_offset=off_list[s][1],
                position=Point3(*pos_list[s]),
                complex_gain=complex(gains[s, 0], gains[s, 1]),
                attenuation=float(attenuations[s]),
                arrival=LocalAngles(float(arrival_az[s]), float(arrival_el[s])),
            )
            for s in range(s_c)
        ]
        clusters.append(
            Cluster(
                mean_azimuth=mean_az,
                mean_elevation=mean_el,
                center=Point3(*center),
                shadow_db=shadow,
                subrays=subrays,
            )
        )
    return ClusterSet(clusters=clusters, link=link)
