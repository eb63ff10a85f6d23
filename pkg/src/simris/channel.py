"""Monte Carlo channel realization assembly.

Produces the Tx-RIS vector h, the RIS-Rx vector g, and the scalar direct
channel for indoor and outdoor scenarios, and composes the end-to-end
effective channel g^T Theta h + h_siso.

Reproducibility: realization i of a run is generated from RNG substreams
derived from (master seed, i, link), so any realization can be recreated
in isolation and realizations may be generated in parallel without
changing results. Draw order within a link stream is fixed: LOS
indicator, LOS phase, LOS shadowing, then cluster sampling.

Phase models: LOS terms use exact per-element spherical phases (the
terminals can sit within a few meters of the surface); cluster terms use
far-field steering vectors, which is accurate because scatterers are kept
at least the reference distance away from the link endpoints.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .clusters import ClusterSet, ClusterStatistics, Link, sample_cluster_geometry
from .geometry import (
    Environment,
    Scenario,
    array_response_many,
    distance,
    element_phases_exact,
    local_angles,
)
from .propagation import (
    LinkBudgetParams,
    PathLossModel,
    ci_path_loss,
    element_pattern_gain,
    los_probability,
    sample_los_indicator,
    sample_shadow_db,
)
from .ris import RisPhaseProfile

STREAM_TX_RIS = 0
STREAM_RIS_RX = 1
STREAM_TX_RX = 2
STREAM_PROFILE = 3


def substream(seed: int, index: int, stream: int) -> np.random.Generator:
    """Independent generator for one link of one realization."""
    return np.random.default_rng(np.random.SeedSequence((seed, index, stream)))


@dataclass
class ChannelConfig:
    """Everything a Monte Carlo run needs besides the metric parameters."""

    scenario: Scenario
    pathloss: PathLossModel | None = None
    clusters: ClusterStatistics = field(default_factory=ClusterStatistics)
    link_budget: LinkBudgetParams | None = None
    realizations: int = 1000
    seed: int = 0
    force_los: bool | None = None  # None -> probabilistic Bernoulli gating
    include_clusters: bool = True
    los_force_height: float | None = None  # None -> environment default
    n_jobs: int = 1

    def __post_init__(self):
        if self.realizations < 1:
            raise ValueError("realization count must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.pathloss is None:
            self.pathloss = PathLossModel.defaults(
                self.scenario.environment, self.scenario.frequency_ghz
            )
        if self.link_budget is None:
            self.link_budget = LinkBudgetParams.for_frequency(self.scenario.frequency_ghz)


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One Monte Carlo draw of (h, g, h_siso) plus its provenance."""

    h: np.ndarray
    g: np.ndarray
    h_siso: complex
    seed: int
    index: int
    los_tx_ris: int
    los_ris_rx: int | None  # None when the link is LOS by construction
    los_tx_rx: int | None  # None when the direct link is absent

    @property
    def n(self) -> int:
        return self.h.size


@dataclass(frozen=True)
class VectorDraw:
    """A drawn channel vector with the data that produced it."""

    vector: np.ndarray
    clusters: ClusterSet | None
    los_indicator: int | None


@dataclass(frozen=True)
class ScalarDraw:
    """A drawn scalar channel with the data that produced it."""

    value: complex
    clusters: ClusterSet | None
    los_indicator: int


def _los_prob(cfg: ChannelConfig, d: float, ris_link: bool) -> float:
    if cfg.force_los is not None:
        return 1.0 if cfg.force_los else 0.0
    return los_probability(
        cfg.scenario.environment,
        d,
        ris_height=cfg.scenario.ris.z if ris_link else None,
        force_height=cfg.los_force_height,
    )


def assemble_cluster_vector(scn: Scenario, cs: ClusterSet) -> np.ndarray:
    """Sum the per-sub-ray contributions into an N-vector.

    Each sub-ray contributes gamma * beta * sqrt(Ge(theta) * L) times the
    far-field steering vector of its arrival direction at the RIS.
    """
    subs = [sub for _cluster, sub in cs.iter_subrays()]
    azimuth = np.array([s.arrival.azimuth for s in subs])
    elevation = np.array([s.arrival.elevation for s in subs])
    weights = np.array(
        [s.complex_gain for s in subs], dtype=complex
    ) * np.sqrt(element_pattern_gain(elevation) * np.array([s.attenuation for s in subs]))
    steering = array_response_many(scn, azimuth, elevation)
    return cs.normalization * (weights @ steering)


def gen_h(rng: np.random.Generator, cfg: ChannelConfig) -> VectorDraw:
    """Tx-RIS channel vector: clustered sum plus a Bernoulli-gated LOS term."""
    scn = cfg.scenario
    plm = cfg.pathloss
    d = distance(scn.tx, scn.ris)

    indicator = sample_los_indicator(rng, _los_prob(cfg, d, ris_link=True))
    eta = rng.uniform(0.0, 2.0 * math.pi)
    shadow = sample_shadow_db(rng, plm.los_sigma_db)

    h = np.zeros(scn.n_elements, dtype=complex)
    if indicator:
        ang = local_angles(scn.ris, scn.wall, scn.tx)
        attenuation = ci_path_loss(
            plm, max(d, plm.reference_distance), los=True, shadow_db=shadow
        )
        amp = math.sqrt(element_pattern_gain(ang.elevation) * attenuation)
        h = amp * np.exp(1j * eta) * element_phases_exact(scn, scn.tx)

    cs = None
    if cfg.include_clusters:
        cs = sample_cluster_geometry(rng, scn, Link.TX_RIS, cfg.clusters, plm)
        h = h + assemble_cluster_vector(scn, cs)
    return VectorDraw(vector=h, clusters=cs, los_indicator=indicator)


def gen_g_indoor(rng: np.random.Generator, cfg: ChannelConfig) -> VectorDraw:
    """Indoor RIS-Rx channel: a pure LOS ray with random common phase."""
    scn = cfg.scenario
    if scn.environment is not Environment.INDOOR_HOTSPOT:
        raise ValueError("indoor RIS-Rx generation requires the indoor environment")
    plm = cfg.pathloss
    d = distance(scn.ris, scn.rx)
    eta = rng.uniform(0.0, 2.0 * math.pi)
    shadow = sample_shadow_db(rng, plm.los_sigma_db)
    ang = local_angles(scn.ris, scn.wall, scn.rx)
    attenuation = ci_path_loss(
        plm, max(d, plm.reference_distance), los=True, shadow_db=shadow
    )
    amp = math.sqrt(element_pattern_gain(ang.elevation) * attenuation)
    g = amp * np.exp(1j * eta) * element_phases_exact(scn, scn.rx)
    return VectorDraw(vector=g, clusters=None, los_indicator=None)


def gen_g_outdoor(rng: np.random.Generator, cfg: ChannelConfig) -> VectorDraw:
    """Outdoor RIS-Rx channel: independent clusters plus a gated LOS term."""
    scn = cfg.scenario
    if scn.environment is not Environment.URBAN_MICRO:
        raise ValueError("outdoor RIS-Rx generation requires the outdoor environment")
    plm = cfg.pathloss
    d = distance(scn.ris, scn.rx)

    indicator = sample_los_indicator(rng, _los_prob(cfg, d, ris_link=True))
    eta = rng.uniform(0.0, 2.0 * math.pi)
    shadow = sample_shadow_db(rng, plm.los_sigma_db)

    g = np.zeros(scn.n_elements, dtype=complex)
    if indicator:
        ang = local_angles(scn.ris, scn.wall, scn.rx)
        attenuation = ci_path_loss(
            plm, max(d, plm.reference_distance), los=True, shadow_db=shadow
        )
        amp = math.sqrt(element_pattern_gain(ang.elevation) * attenuation)
        g = amp * np.exp(1j * eta) * element_phases_exact(scn, scn.rx)

    cs = None
    if cfg.include_clusters:
        cs = sample_cluster_geometry(rng, scn, Link.RIS_RX, cfg.clusters, plm)
        g = g + assemble_cluster_vector(scn, cs)
    return VectorDraw(vector=g, clusters=cs, los_indicator=indicator)


def _direct_los_term(scn: Scenario, indicator: int) -> complex:
    d = distance(scn.tx, scn.rx)
    if d == 0:
        raise ValueError("Tx and Rx coincide")
    if not indicator:
        return 0j
    return (
        scn.wavelength
        / (4.0 * math.pi * d)
        * complex(np.exp(-1j * scn.wavenumber * d))
    )


def gen_hsiso_indoor(
    rng: np.random.Generator, cfg: ChannelConfig, shared: ClusterSet | None
) -> ScalarDraw:
    """Indoor direct channel reusing the Tx-RIS clusters.

    The complex gains, cluster structure, and shadowing of ``shared`` are
    reused verbatim; each sub-ray picks up the excess phase
    k * (d(scatterer, Rx) - d(scatterer, RIS)) from its stored position
    and a CI NLOS attenuation over the Tx -> scatterer -> Rx travel.
    """
    scn = cfg.scenario
    if scn.environment is not Environment.INDOOR_HOTSPOT:
        raise ValueError("shared-cluster direct channel requires the indoor environment")
    if shared is not None and shared.link is not Link.TX_RIS:
        raise ValueError("shared cluster set must come from the Tx-RIS draw")
    plm = cfg.pathloss
    d = distance(scn.tx, scn.rx)
    indicator = sample_los_indicator(rng, _los_prob(cfg, d, ris_link=False))

    total = 0j
    if shared is not None:
        k = scn.wavenumber
        tx = scn.tx.as_array()
        rx = scn.rx.as_array()
        ris = scn.ris.as_array()
        pairs = list(shared.iter_subrays())
        positions = np.array([s.position.as_array() for _c, s in pairs])
        shadows = np.array([c.shadow_db for c, _s in pairs])
        gains = np.array([s.complex_gain for _c, s in pairs], dtype=complex)
        to_rx = np.linalg.norm(rx[None, :] - positions, axis=1)
        to_ris = np.linalg.norm(ris[None, :] - positions, axis=1)
        from_tx = np.linalg.norm(positions - tx[None, :], axis=1)
        travel = np.maximum(from_tx + to_rx, plm.reference_distance)
        attenuation = ci_path_loss(plm, travel, los=False, shadow_db=shadows)
        excess = k * (to_rx - to_ris)
        total = shared.normalization * np.sum(
            gains * np.exp(1j * excess) * np.sqrt(attenuation)
        )
    return ScalarDraw(
        value=complex(total + _direct_los_term(scn, indicator)),
        clusters=shared,
        los_indicator=indicator,
    )


def gen_hsiso_outdoor(rng: np.random.Generator, cfg: ChannelConfig) -> ScalarDraw:
    """Outdoor direct channel with its own independent cluster draw."""
    scn = cfg.scenario
    if scn.environment is not Environment.URBAN_MICRO:
        raise ValueError("independent-cluster direct channel requires the outdoor environment")
    d = distance(scn.tx, scn.rx)
    indicator = sample_los_indicator(rng, _los_prob(cfg, d, ris_link=False))

    total = 0j
    cs = None
    if cfg.include_clusters:
        cs = sample_cluster_geometry(rng, scn, Link.TX_RX, cfg.clusters, cfg.pathloss)
        gamma = cs.normalization
        for _cluster, sub in cs.iter_subrays():
            total += sub.complex_gain * math.sqrt(sub.attenuation)
        total *= gamma
    return ScalarDraw(
        value=complex(total + _direct_los_term(scn, indicator)),
        clusters=cs,
        los_indicator=indicator,
    )


def realization(cfg: ChannelConfig, index: int) -> ChannelRealization:
    """Generate realization ``index`` from its own substreams."""
    scn = cfg.scenario
    indoor = scn.environment is Environment.INDOOR_HOTSPOT

    h_draw = gen_h(substream(cfg.seed, index, STREAM_TX_RIS), cfg)
    rng_g = substream(cfg.seed, index, STREAM_RIS_RX)
    g_draw = gen_g_indoor(rng_g, cfg) if indoor else gen_g_outdoor(rng_g, cfg)

    h_siso = 0j
    los_tx_rx = None
    if scn.direct_link_present:
        rng_s = substream(cfg.seed, index, STREAM_TX_RX)
        if indoor:
            s_draw = gen_hsiso_indoor(rng_s, cfg, h_draw.clusters)
        else:
            s_draw = gen_hsiso_outdoor(rng_s, cfg)
        h_siso = s_draw.value
        los_tx_rx = s_draw.los_indicator

    return ChannelRealization(
        h=h_draw.vector,
        g=g_draw.vector,
        h_siso=h_siso,
        seed=cfg.seed,
        index=index,
        los_tx_ris=h_draw.los_indicator,
        los_ris_rx=g_draw.los_indicator,
        los_tx_rx=los_tx_rx,
    )


def realize(cfg: ChannelConfig) -> Iterator[ChannelRealization]:
    """Lazily yield the run's realizations in index order.

    With n_jobs > 1 realizations are computed on a thread pool; results
    are identical to sequential generation because each index owns its
    substreams.
    """
    if cfg.n_jobs <= 1:
        for i in range(cfg.realizations):
            yield realization(cfg, i)
        return
    with ThreadPoolExecutor(max_workers=cfg.n_jobs) as pool:
        yield from pool.map(lambda i: realization(cfg, i), range(cfg.realizations))


def effective_channel(r: ChannelRealization, profile: RisPhaseProfile) -> complex:
    """End-to-end scalar channel g^T Theta h + h_siso."""
    if len(profile) != r.n:
        raise ValueError("profile length must match the element count")
    return complex(np.sum(r.g * profile.response() * r.h) + r.h_siso)
