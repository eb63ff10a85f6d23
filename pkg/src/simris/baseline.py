"""Deterministic signal models for pure-LOS and multi-scatterer RIS links.

These are the closed-form cascades: every amplitude comes from a link
budget and every phase from exact element-center geometry, so the module
doubles as an oracle for the stochastic channel synthesis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Point3, Scenario, distance, element_positions
from .propagation import LinkBudgetParams, rcs_from_gain, two_hop_received_power
from .ris import RisPhaseProfile


@dataclass(frozen=True)
class IoSet:
    """Interacting objects (scatterers) between the Tx and the RIS."""

    positions: list[Point3]
    rcs: list[float] = field(default_factory=list)

    def __post_init__(self):
        if len(self.positions) < 1:
            raise ValueError("an IoSet needs at least one scatterer")
        if self.rcs and len(self.rcs) != len(self.positions):
            raise ValueError("rcs list must match positions")
        if any(s < 0 for s in self.rcs):
            raise ValueError("RCS values must be nonnegative")

    def rcs_or_default(self, lam: float) -> list[float]:
        """Stored RCS values, or the isotropic-scatterer default (Ge = 1)."""
        if self.rcs:
            return list(self.rcs)
        return [rcs_from_gain(1.0, lam)] * len(self.positions)


def direct_los_gain(p: LinkBudgetParams, d: float) -> complex:
    """Complex amplitude of the direct Tx-Rx LOS path, sqrt power and phase."""
    if d <= 0:
        raise ValueError("Tx-Rx distance must be positive")
    amplitude = math.sqrt(p.pt * p.gt * p.gr) * p.wavelength / (4.0 * math.pi * d)
    return amplitude * np.exp(-1j * p.wavenumber * d)


def effective_gain_from_distances(
    p: LinkBudgetParams,
    a: np.ndarray,
    b: np.ndarray,
    profile: RisPhaseProfile,
    ge_tx: float | None = None,
    ge_rx: float | None = None,
    direct_distance: float | None = None,
) -> complex:
    """Coherent element sum sum_n sqrt(P_n) * alpha_n e^{j phi_n} * e^{-jk(a_n+b_n)}.

    ``a``/``b`` are per-element Tx-element and element-Rx distances; an
    optional direct-path term is added for ``direct_distance``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("distance arrays must be 1-D and equal length")
    if len(profile) != a.size:
        raise ValueError("profile length must match the element count")
    amplitudes = np.sqrt(
        [two_hop_received_power(p, ai, bi, ge_tx, ge_rx) for ai, bi in zip(a, b)]
    )
    total = np.sum(
        amplitudes * profile.response() * np.exp(-1j * p.wavenumber * (a + b))
    )
    if direct_distance is not None:
        total += direct_los_gain(p, direct_distance)
    return complex(total)


def _element_distances(scn: Scenario) -> tuple[np.ndarray, np.ndarray]:
    positions = element_positions(scn)
    a = np.linalg.norm(positions - scn.tx.as_array()[None, :], axis=1)
    b = np.linalg.norm(positions - scn.rx.as_array()[None, :], axis=1)
    return a, b


def los_effective_gain(
    scn: Scenario, p: LinkBudgetParams, profile: RisPhaseProfile
) -> complex:
    """Pure-LOS received amplitude through the RIS for a scenario geometry.

    Element gains use the constant reference value from the link budget;
    distances are exact per element center. The direct Tx-Rx term is
    included when the scenario carries one.
    """
    a, b = _element_distances(scn)
    if np.any(a == 0) or np.any(b == 0):
        raise ValueError("terminal coincides with an RIS element")
    direct = distance(scn.tx, scn.rx) if scn.direct_link_present else None
    return effective_gain_from_distances(p, a, b, profile, direct_distance=direct)


def aligned_phases(scn: Scenario, p: LinkBudgetParams) -> RisPhaseProfile:
    """Geometry-aligned profile phi_n = k*(a_n + b_n), the coherent optimum.

    With a direct link present the common phase is shifted onto the direct
    path's phase so all terms still add in phase.
    """
    a, b = _element_distances(scn)
    phase = p.wavenumber * (a + b)
    if scn.direct_link_present:
        phase = phase - p.wavenumber * distance(scn.tx, scn.rx)
    phase = np.mod(phase, 2.0 * math.pi)
    return RisPhaseProfile(magnitude=np.ones(a.size), phase=phase)


def io_cascade_power(
    p: LinkBudgetParams,
    a_m: float,
    b_mn: float,
    c_n: float,
    sigma_m: float,
    ge_tx: float | None = None,
    ge_rx: float | None = None,
) -> float:
    """Rx power over a Tx -> scatterer -> RIS element -> Rx cascade."""
    if a_m <= 0 or b_mn <= 0 or c_n <= 0:
        raise ValueError("segment distances must be positive")
    if sigma_m < 0:
        raise ValueError("RCS must be nonnegative")
    ge_t = p.ge_max if ge_tx is None else ge_tx
    ge_r = p.ge_max if ge_rx is None else ge_rx
    return (
        p.efficiency
        * p.pt
        * p.gt
        * p.gr
        * ge_t
        * ge_r
        * p.wavelength**4
        * sigma_m
        / ((4.0 * math.pi) ** 5 * a_m**2 * b_mn**2 * c_n**2)
    )


def multi_io_channel(
    scn: Scenario, ios: IoSet, p: LinkBudgetParams
) -> tuple[np.ndarray, np.ndarray]:
    """Tx-RIS and RIS-Rx channel vectors (h, g) for scatterers on the Tx side.

    g_n = sqrt(L_n_los) * e^{-jk c_n} over the LOS RIS-Rx hop and
    h_n = sum_m sqrt(L_mn_ris) * e^{-jk (a_m + b_mn)} over the scatterer
    cascade, so g^T Theta h reproduces the per-path double sum for any
    element response.
    """
    elements = element_positions(scn)
    lam = p.wavelength
    k = p.wavenumber
    ge = p.ge_max

    c = np.linalg.norm(elements - scn.rx.as_array()[None, :], axis=1)
    if np.any(c == 0):
        raise ValueError("Rx coincides with an RIS element")
    l_los = ge * lam**2 / (4.0 * math.pi * c) ** 2
    g = np.sqrt(l_los) * np.exp(-1j * k * c)

    h = np.zeros(elements.shape[0], dtype=complex)
    sigmas = ios.rcs_or_default(lam)
    for io, sigma in zip(ios.positions, sigmas):
        a_m = distance(scn.tx, io)
        b = np.linalg.norm(elements - io.as_array()[None, :], axis=1)
        if a_m == 0 or np.any(b == 0):
            raise ValueError("scatterer coincides with a terminal or element")
        l_ris = ge * lam**2 * sigma / ((4.0 * math.pi) ** 3 * a_m**2 * b**2)
        h += np.sqrt(l_ris) * np.exp(-1j * k * (a_m + b))
    return h, g


def effective_siso(h_direct_gain: complex) -> complex:
    """Direct-link channel pass-through (kept for a uniform composition API)."""
    return complex(h_direct_gain)
