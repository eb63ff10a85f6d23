"""Acceptance suite: one test per release criterion, run at the stated
tolerance and runtime budget. Each prints a PASS/FAIL line (use -s).

Run with:  pytest tests/test_acceptance.py -v -s
"""

import math
import time
from dataclasses import replace

import numpy as np

from simris.baseline import IoSet, multi_io_channel
from simris.channel import (
    ChannelConfig,
    ChannelRealization,
    STREAM_TX_RIS,
    assemble_cluster_vector,
    effective_channel,
    gen_g_indoor,
    gen_g_outdoor,
    gen_h,
    gen_hsiso_indoor,
    gen_hsiso_outdoor,
    realize,
    substream,
)
from simris.clusters import Cluster, ClusterSet, Link, Subray, sample_cluster_count
from simris.geometry import (
    Environment,
    Point3,
    WallPlacement,
    distance,
    local_angles,
    recommend_positions,
)
from simris.metrics import dbm_to_watts, power_scaling_sweep, profile_for, snr
from simris.propagation import (
    LinkBudgetParams,
    PathLossModel,
    ci_path_loss,
    element_pattern_gain,
    los_probability,
    radar_range_power,
    rcs_from_gain,
    sample_los_indicator,
    two_hop_received_power,
)
from simris.ris import optimal_phases, random_phases

NOISE_WATTS = dbm_to_watts(-100.0)


def report(number: int, name: str, checks: list[tuple[str, bool]], elapsed: float):
    ok = all(passed for _label, passed in checks)
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {number} ({name}): {status} [{elapsed:.1f}s]")
    for label, passed in checks:
        if not passed:
            print(f"  failed: {label}")
    assert ok, [label for label, passed in checks if not passed]


def test_criterion_1_radar_plate_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(1001)
    worst = 0.0
    for _ in range(10_000):
        lam = float(rng.uniform(0.001, 0.3))
        ge = float(rng.uniform(0.05, 50.0))
        a = float(rng.uniform(0.3, 500.0))
        b = float(rng.uniform(0.3, 500.0))
        p = LinkBudgetParams(wavelength=lam, ge_max=ge)
        two = two_hop_received_power(p, a, b)
        rad = radar_range_power(p, a, b, rcs_from_gain(ge, lam))
        worst = max(worst, abs(two - rad) / two)
    elapsed = time.perf_counter() - start
    checks = [
        (f"max relative error {worst:.2e} < 1e-12", worst < 1e-12),
        (f"runtime {elapsed:.2f}s < 1s", elapsed < 1.0),
    ]
    report(1, "radar/plate equivalence", checks, elapsed)


def test_criterion_2_power_scaling_laws():
    start = time.perf_counter()
    scn = replace(
        recommend_positions(Environment.INDOOR_HOTSPOT, WallPlacement.SIDE_WALL),
        direct_link_present=False,
    )
    cfg = ChannelConfig(
        scenario=scn,
        force_los=True,
        include_clusters=False,
        realizations=1000,
        seed=2002,
    )
    coherent = power_scaling_sweep(cfg, [16, 64, 256], profile_rule="optimal")
    random_rule = power_scaling_sweep(cfg, [16, 64, 256], profile_rule="random")
    coherent_steps = [
        (coherent[i + 1][1] - coherent[i][1]) / 2 for i in range(2)
    ]
    random_steps = [
        (random_rule[i + 1][1] - random_rule[i][1]) / 2 for i in range(2)
    ]
    elapsed = time.perf_counter() - start
    checks = [
        (
            f"coherent slope per doubling {coherent_steps} within 6.02 +- 0.1",
            all(abs(s - 6.02) <= 0.1 for s in coherent_steps),
        ),
        (
            f"random slope per doubling {random_steps} within 3.01 +- 0.3",
            all(abs(s - 3.01) <= 0.3 for s in random_steps),
        ),
        (f"runtime {elapsed:.1f}s < 30s", elapsed < 30.0),
    ]
    report(2, "N^2 power-scaling law", checks, elapsed)


def test_criterion_3_phase_optimality_oracle():
    start = time.perf_counter()
    scn = replace(
        recommend_positions(Environment.INDOOR_HOTSPOT, WallPlacement.SIDE_WALL),
        n_elements=4,
    )
    cfg = ChannelConfig(scenario=scn, realizations=100, seed=3003)
    levels = np.exp(1j * np.arange(64) * 2 * math.pi / 64)
    never_beaten = True
    within_bound = True
    for r in realize(cfg):
        z = r.g * r.h
        analytic = np.sum(np.abs(z)) + abs(r.h_siso)
        # exhaustive 64-level search over all four elements, evaluated as
        # a broadcast of two 64^2 partial sums
        t01 = z[0] * levels[:, None] + z[1] * levels[None, :]
        t23 = z[2] * levels[:, None] + z[3] * levels[None, :]
        combos = np.abs(
            t01.ravel()[:, None] + t23.ravel()[None, :] + r.h_siso
        )
        best_quantized = combos.max()
        bound = 2 * math.sin(math.pi / 64) * np.sum(np.abs(z))
        if best_quantized > analytic + 1e-12 * analytic:
            never_beaten = False
        if analytic - best_quantized > bound:
            within_bound = False
    elapsed = time.perf_counter() - start
    checks = [
        ("quantized search never beats the analytic profile", never_beaten),
        ("analytic lead stays within the quantization bound", within_bound),
        (f"runtime {elapsed:.1f}s < 60s", elapsed < 60.0),
    ]
    report(3, "phase-optimality oracle", checks, elapsed)


def test_criterion_4_distributional_correctness():
    from scipy import stats

    start = time.perf_counter()
    rng = np.random.default_rng(4004)

    # complex path gain moments
    from simris.clusters import sample_complex_gain

    betas = np.array([sample_complex_gain(rng) for _ in range(100_000)])
    beta_mean = abs(betas.mean())
    beta_var = float(np.mean(np.abs(betas) ** 2))

    # random-phase uniformity
    phases = np.concatenate([random_phases(rng, 1000).phase for _ in range(100)])
    ks_phases = stats.kstest(phases / (2 * math.pi), "uniform").pvalue

    # LOS random common phase, read back from the reference element of a
    # pure-LOS single-element channel
    scn = replace(
        recommend_positions(Environment.INDOOR_HOTSPOT, WallPlacement.SIDE_WALL),
        n_elements=1,
    )
    cfg = ChannelConfig(
        scenario=scn, force_los=True, include_clusters=False, seed=4104
    )
    etas = np.empty(100_000)
    for i in range(etas.size):
        draw = gen_h(substream(4104, i, STREAM_TX_RIS), cfg)
        etas[i] = np.angle(draw.vector[0]) % (2 * math.pi)
    ks_eta = stats.kstest(etas / (2 * math.pi), "uniform").pvalue

    # Bernoulli LOS indicator frequency at a mid-range probability
    d = distance(scn.tx, scn.ris)
    p_target = los_probability(Environment.INDOOR_HOTSPOT, d, ris_height=1.5)
    hits = sum(sample_los_indicator(rng, p_target) for _ in range(100_000))
    indicator_err = abs(hits / 100_000 - p_target)

    # cluster count mass at C = 1 for the 28 GHz band
    counts = np.array([sample_cluster_count(rng, 28.0) for _ in range(100_000)])
    c1_expect = math.exp(-1.8) * 2.8
    c1_err = abs(float(np.mean(counts == 1)) - c1_expect)

    elapsed = time.perf_counter() - start
    checks = [
        (f"|mean beta| {beta_mean:.4f} < 0.02", beta_mean < 0.02),
        (f"var beta {beta_var:.4f} within 2% of 1", abs(beta_var - 1.0) < 0.02),
        (f"random-phase KS p {ks_phases:.3f} > 0.01", ks_phases > 0.01),
        (f"LOS common-phase KS p {ks_eta:.3f} > 0.01", ks_eta > 0.01),
        (f"LOS indicator error {indicator_err:.4f} < 0.01", indicator_err < 0.01),
        (f"P(C=1) error {c1_err:.4f} < 0.01", c1_err < 0.01),
        (f"runtime {elapsed:.1f}s < 30s", elapsed < 30.0),
    ]
    report(4, "distributional correctness", checks, elapsed)


def _power_consistency(scn, seed, draws=10_000):
    """Accumulate measured vs closed-form powers for one configuration.

    LOS shadowing is zeroed and NLOS shadowing moderated so the closed
    forms are exact per draw and the beta-noise average converges well
    inside the tolerance (the comparison still exercises every
    deterministic factor: pattern gains, CI attenuations, normalization,
    steering norms, LOS gating).
    """
    plm = replace(
        PathLossModel.defaults(scn.environment, scn.frequency_ghz),
        los_sigma_db=0.0,
        nlos_sigma_db=3.0,
    )
    cfg = ChannelConfig(scenario=scn, pathloss=plm, seed=seed)
    indoor = scn.environment is Environment.INDOOR_HOTSPOT
    n = scn.n_elements

    d_h = distance(scn.tx, scn.ris)
    ang_h = local_angles(scn.ris, scn.wall, scn.tx)
    los_h = n * element_pattern_gain(ang_h.elevation) * ci_path_loss(plm, d_h, True)
    d_g = distance(scn.ris, scn.rx)
    ang_g = local_angles(scn.ris, scn.wall, scn.rx)
    los_g = n * element_pattern_gain(ang_g.elevation) * ci_path_loss(plm, d_g, True)
    d_s = distance(scn.tx, scn.rx)
    p_tr = (scn.wavelength / (4 * math.pi * d_s)) ** 2

    measured = np.zeros(3)
    closed = np.zeros(3)
    for i in range(draws):
        h_draw = gen_h(substream(seed, i, 0), cfg)
        measured[0] += np.linalg.norm(h_draw.vector) ** 2
        closed[0] += h_draw.los_indicator * los_h + n * _cluster_power(h_draw.clusters)

        rng_g = substream(seed, i, 1)
        if indoor:
            g_draw = gen_g_indoor(rng_g, cfg)
            closed[1] += los_g
        else:
            g_draw = gen_g_outdoor(rng_g, cfg)
            closed[1] += g_draw.los_indicator * los_g + n * _cluster_power(
                g_draw.clusters
            )
        measured[1] += np.linalg.norm(g_draw.vector) ** 2

        rng_s = substream(seed, i, 2)
        if indoor:
            s_draw = gen_hsiso_indoor(rng_s, cfg, h_draw.clusters)
            closed[2] += s_draw.los_indicator * p_tr + _siso_cluster_power(
                h_draw.clusters, scn, plm
            )
        else:
            s_draw = gen_hsiso_outdoor(rng_s, cfg)
            closed[2] += s_draw.los_indicator * p_tr + _plain_cluster_power(
                s_draw.clusters
            )
        measured[2] += abs(s_draw.value) ** 2
    return measured / draws, closed / draws


def _cluster_power(cs):
    if cs is None:
        return 0.0
    gamma2 = cs.normalization**2
    return gamma2 * sum(
        element_pattern_gain(s.arrival.elevation) * s.attenuation
        for _c, s in cs.iter_subrays()
    )


def _plain_cluster_power(cs):
    if cs is None:
        return 0.0
    return cs.normalization**2 * sum(s.attenuation for _c, s in cs.iter_subrays())


def _siso_cluster_power(cs, scn, plm):
    if cs is None:
        return 0.0
    total = 0.0
    for cluster, sub in cs.iter_subrays():
        travel = max(
            distance(scn.tx, sub.position) + distance(sub.position, scn.rx),
            plm.reference_distance,
        )
        total += ci_path_loss(plm, travel, False, shadow_db=cluster.shadow_db)
    return cs.normalization**2 * total


def test_criterion_5_channel_power_consistency():
    start = time.perf_counter()
    indoor = recommend_positions(Environment.INDOOR_HOTSPOT, WallPlacement.SIDE_WALL)
    outdoor = recommend_positions(Environment.URBAN_MICRO, WallPlacement.SIDE_WALL)
    indoor = replace(indoor, n_elements=64)
    outdoor = replace(outdoor, n_elements=64)
    checks = []
    for label, scn, seed in (("InH", indoor, 5005), ("UMi", outdoor, 5105)):
        measured, closed = _power_consistency(scn, seed)
        for name, m, c in zip(("E||h||^2", "E||g||^2", "E|h_siso|^2"), measured, closed):
            rel = abs(m - c) / c
            checks.append((f"{label} {name} rel err {rel:.3%} < 3%", rel < 0.03))
    elapsed = time.perf_counter() - start
    checks.append((f"runtime {elapsed:.1f}s < 60s", elapsed < 60.0))
    report(5, "channel power consistency", checks, elapsed)


def _paired_rates(cfg, rule, pt_watts=1.0):
    rates = []
    for r in realize(cfg):
        rho = snr(effective_channel(r, profile_for(rule, r)), pt_watts, NOISE_WATTS)
        rates.append(math.log2(1.0 + rho))
    return np.array(rates)


def test_criterion_6_indoor_rate_ordering():
    start = time.perf_counter()
    base = recommend_positions(Environment.INDOOR_HOTSPOT, WallPlacement.SIDE_WALL)
    high = replace(base, ris=Point3(40, 50, 2.0))
    low = replace(base, ris=Point3(40, 50, 1.5))
    cfg_high = ChannelConfig(scenario=high, realizations=1000, seed=6006)
    cfg_low = ChannelConfig(scenario=low, realizations=1000, seed=6006)

    rates_high = _paired_rates(cfg_high, "optimal")
    rates_low = _paired_rates(cfg_low, "optimal")
    rates_off = _paired_rates(cfg_high, "off")  # no surface: direct link only

    mean_high, mean_low, mean_off = (
        rates_high.mean(),
        rates_low.mean(),
        rates_off.mean(),
    )
    diff = rates_high - rates_off  # paired by common random numbers
    gap_se = diff.std(ddof=1) / math.sqrt(diff.size)
    elapsed = time.perf_counter() - start
    checks = [
        (
            f"R(2 m)={mean_high:.2f} > R(1.5 m)={mean_low:.2f}",
            mean_high > mean_low,
        ),
        (
            f"R(1.5 m)={mean_low:.2f} >= R(no surface)={mean_off:.2f}",
            mean_low >= mean_off,
        ),
        (
            f"gap {diff.mean():.2f} > 3 x stderr {3 * gap_se:.2f}",
            diff.mean() > 3 * gap_se,
        ),
        (f"runtime {elapsed:.1f}s < 120s", elapsed < 120.0),
    ]
    report(6, "indoor mounting-height rate ordering", checks, elapsed)


def test_criterion_7_outdoor_position_trends():
    start = time.perf_counter()
    base = recommend_positions(Environment.URBAN_MICRO, WallPlacement.SIDE_WALL)
    # y stops one row short of the RIS wall: a ground cell directly below
    # the surface sits in the element pattern's null (elevation -90 deg),
    # which would make "nearest cell wins" physically false.
    xs = [10.0, 30.0, 50.0, 70.0, 90.0]
    ys = [20.0, 35.0, 50.0, 65.0, 80.0]
    realizations = 400

    def grid_stats(direct_link: bool):
        means = np.zeros((len(ys), len(xs)))
        errs = np.zeros_like(means)
        for iy, y in enumerate(ys):
            for ix, x in enumerate(xs):
                scn = replace(
                    base, rx=Point3(x, y, 1.0), direct_link_present=direct_link
                )
                cfg = ChannelConfig(scenario=scn, realizations=realizations, seed=7007)
                rates = _paired_rates(cfg, "optimal")
                means[iy, ix] = rates.mean()
                errs[iy, ix] = rates.std(ddof=1) / math.sqrt(rates.size)
        return means, errs

    tx_xy = np.array([base.tx.x, base.tx.y])
    ris_xy = np.array([base.ris.x, base.ris.y])
    cells = [(ix, iy, np.array([x, y])) for iy, y in enumerate(ys) for ix, x in enumerate(xs)]
    nearest_tx = min(cells, key=lambda c: np.linalg.norm(c[2] - tx_xy))
    nearest_ris = min(cells, key=lambda c: np.linalg.norm(c[2] - ris_xy))

    with_direct, _ = grid_stats(direct_link=True)
    blocked, blocked_err = grid_stats(direct_link=False)

    argmax_direct = np.unravel_index(with_direct.argmax(), with_direct.shape)
    argmax_blocked = np.unravel_index(blocked.argmax(), blocked.shape)

    # monotone decay with RIS-Rx distance, up to 3 combined standard errors
    ris_pos = base.ris.as_array()
    ordered = sorted(
        cells, key=lambda c: np.linalg.norm(np.append(c[2], 1.0) - ris_pos)
    )
    monotone = True
    for (ix_a, iy_a, _), (ix_b, iy_b, _) in zip(ordered, ordered[1:]):
        a, b = blocked[iy_a, ix_a], blocked[iy_b, ix_b]
        tol = 3 * math.hypot(blocked_err[iy_a, ix_a], blocked_err[iy_b, ix_b])
        if b > a + tol:
            monotone = False
    elapsed = time.perf_counter() - start
    checks = [
        (
            f"direct-link maximum at {argmax_direct} == nearest-Tx cell "
            f"({nearest_tx[1]}, {nearest_tx[0]})",
            argmax_direct == (nearest_tx[1], nearest_tx[0]),
        ),
        (
            f"blocked maximum at {argmax_blocked} == nearest-RIS cell "
            f"({nearest_ris[1]}, {nearest_ris[0]})",
            argmax_blocked == (nearest_ris[1], nearest_ris[0]),
        ),
        ("blocked rates decay monotonically with RIS-Rx distance", monotone),
        (f"runtime {elapsed:.1f}s < 300s", elapsed < 300.0),
    ]
    report(7, "outdoor Rx-position trends", checks, elapsed)


def test_criterion_8_determinism(tmp_path):
    from simris.cli import main

    start = time.perf_counter()
    args = [
        "simulate",
        "--env", "inh", "--freq", "28", "--wall", "side",
        "--tx", "0,25,2", "--rx", "38,48,1", "--ris", "40,50,2",
        "--elements", "64", "--realizations", "50", "--seed", "88",
        "--format", "binary",
    ]
    paths = [tmp_path / name for name in ("a.bin", "b.bin", "c.bin")]
    assert main(args + ["--out", str(paths[0])]) == 0
    assert main(args + ["--out", str(paths[1])]) == 0
    assert main(args + ["--out", str(paths[2]), "--jobs", "4"]) == 0
    data = [p.read_bytes() for p in paths]
    elapsed = time.perf_counter() - start
    checks = [
        ("repeat run byte-identical", data[0] == data[1]),
        ("4-thread run byte-identical to sequential", data[0] == data[2]),
        (f"runtime {elapsed:.1f}s < 30s", elapsed < 30.0),
    ]
    report(8, "dump determinism", checks, elapsed)


def test_criterion_9_baseline_stochastic_cross_oracle():
    start = time.perf_counter()
    scn = replace(
        recommend_positions(Environment.INDOOR_HOTSPOT, WallPlacement.SIDE_WALL),
        n_elements=1,
    )
    params = LinkBudgetParams.for_frequency(scn.frequency_ghz)
    k = scn.wavenumber
    io_positions = [Point3(20, 30, 1.5), Point3(25, 40, 2.0), Point3(15, 20, 1.0)]
    sigmas = [2e-4, 3e-4, 1.5e-4]
    ios = IoSet(positions=io_positions, rcs=sigmas)
    h_base, g_base = multi_io_channel(scn, ios, params)
    d_tr = distance(scn.tx, scn.rx)
    hsiso_base = (
        math.sqrt(params.pt)
        * params.wavelength
        / (4 * math.pi * d_tr)
        * np.exp(-1j * k * d_tr)
    )

    # Deterministic one-cluster configuration of the stochastic assembly:
    # complex gains forced to the geometric phases, attenuations inverted
    # from the cascade law.
    gamma2 = 1.0 / len(io_positions)
    subrays = []
    for pos, sigma in zip(io_positions, sigmas):
        a_m = distance(scn.tx, pos)
        b_m = distance(pos, scn.ris)
        l_ris = (
            params.ge_max * params.wavelength**2 * sigma
            / ((4 * math.pi) ** 3 * a_m**2 * b_m**2)
        )
        ang = local_angles(scn.ris, scn.wall, pos)
        subrays.append(
            Subray(
                azimuth_offset=0.0,
                elevation_offset=0.0,
                position=pos,
                complex_gain=complex(np.exp(-1j * k * (a_m + b_m))),
                attenuation=l_ris / (gamma2 * element_pattern_gain(ang.elevation)),
                arrival=ang,
            )
        )
    cs = ClusterSet(
        clusters=[
            Cluster(
                mean_azimuth=0.0, mean_elevation=0.0,
                center=io_positions[0], shadow_db=0.0, subrays=subrays,
            )
        ],
        link=Link.TX_RIS,
    )
    h_chan = assemble_cluster_vector(scn, cs)

    # g through the channel-side amplitude law sqrt(Ge * L) * e^{j eta} * v,
    # with the attenuation inverted from the baseline's LOS hop gain and the
    # random phase pinned to the geometric -k*c.
    from simris.geometry import element_phases_exact

    c_n = distance(scn.ris, scn.rx)
    ang_rx = local_angles(scn.ris, scn.wall, scn.rx)
    l_los = params.ge_max * params.wavelength**2 / (4 * math.pi * c_n) ** 2
    l_ci = l_los / element_pattern_gain(ang_rx.elevation)
    g_chan = (
        math.sqrt(element_pattern_gain(ang_rx.elevation) * l_ci)
        * np.exp(-1j * k * c_n)
        * element_phases_exact(scn, scn.rx)
    )
    r = ChannelRealization(
        h=h_chan, g=g_chan, h_siso=complex(hsiso_base),
        seed=0, index=0, los_tx_ris=0, los_ris_rx=None, los_tx_rx=1,
    )
    profile = random_phases(np.random.default_rng(99), 1)
    via_channel = effective_channel(r, profile)
    via_baseline = complex(
        np.sum(g_base * profile.response() * h_base) + hsiso_base
    )
    rel = abs(via_channel - via_baseline) / abs(via_baseline)
    also_optimal = abs(
        effective_channel(r, optimal_phases(r))
    ) - (np.sum(np.abs(g_base * h_base)) + abs(hsiso_base))
    elapsed = time.perf_counter() - start
    checks = [
        (f"effective channel relative error {rel:.2e} < 1e-9", rel < 1e-9),
        (
            f"optimal-profile magnitude difference {abs(also_optimal):.2e} < 1e-9",
            abs(also_optimal) < 1e-9 * (np.sum(np.abs(g_base * h_base)) + abs(hsiso_base)),
        ),
        (f"runtime {elapsed:.1f}s < 1s", elapsed < 1.0),
    ]
    report(9, "baseline/stochastic cross-oracle", checks, elapsed)
