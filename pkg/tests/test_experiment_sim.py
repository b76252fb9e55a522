import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tripletcv import experiment_sim as es
from tripletcv import gaussian_core as gc
from tripletcv.errors import DegenerateInput, InvalidArgument
from tripletcv.experiment_sim import CombinerSpec, ExperimentConfig, KerrInputSpec, StokesObservable

deg = math.radians


def oracle_pair_cov(cfg: ExperimentConfig) -> np.ndarray:
    """Joint C/D covariance by direct complex substitution, independent of gaussian_core."""

    def single(k: KerrInputSpec):
        c, s = math.cos(k.theta_sq), math.sin(k.theta_sq)
        rot = np.array([[c, -s], [s, c]])
        cov = rot @ np.diag([0.25 * 10 ** (k.squeezing_db / 10), 0.25 * 10 ** (k.antisqueezing_db / 10)]) @ rot.T
        eta = cfg.visibility**2
        return eta * cov + (1 - eta) * 0.25 * np.eye(2)

    cov_in = np.zeros((4, 4))
    cov_in[:2, :2] = single(cfg.input_a)
    cov_in[2:, 2:] = single(cfg.input_b)
    t, r = math.sqrt(cfg.bs_transmittance), math.sqrt(1 - cfg.bs_transmittance)
    e = np.exp(1j * cfg.relative_phase)
    a_a, a_b = np.array([1, 1j, 0, 0]), np.array([0, 0, 1, 1j])
    a_c = t * a_a + r * e * a_b
    a_d = r * a_a - t * e * a_b
    s = np.array([a_c.real, a_c.imag, a_d.real, a_d.imag])
    return s @ cov_in @ s.T


def oracle_db(cov, w, shot=0.5):
    return 10 * math.log10(w @ cov @ w / shot)


def qvec(phi_c, phi_d, sign=1.0):
    return np.array([math.cos(phi_c), math.sin(phi_c), sign * math.cos(phi_d), sign * math.sin(phi_d)])


# build_kerr_state

def test_kerr_measured_values():
    s = es.build_kerr_state(KerrInputSpec(-4.6, 22.3, deg(4)))
    th = deg(4)
    assert gc.variance(s, gc.QuadratureObservable.single(0, th)) / 0.25 == pytest.approx(0.3467, abs=1e-4)
    assert gc.variance(s, gc.QuadratureObservable.single(0, th + math.pi / 2)) / 0.25 == pytest.approx(169.8, abs=0.05)
    assert gc.covariance(s, gc.QuadratureObservable.single(0, th), gc.QuadratureObservable.single(0, th + math.pi / 2)) == pytest.approx(0, abs=1e-12)


def test_kerr_zero_is_vacuum():
    s = es.build_kerr_state(KerrInputSpec(0.0, 0.0, 1.234))
    assert np.allclose(s.cov, 0.25 * np.eye(2), atol=1e-15)


def test_kerr_3db_pure():
    s = es.build_kerr_state(KerrInputSpec(-3.01, 3.01, 0.0))
    assert s.purity() == pytest.approx(1.0, abs=1e-12)


def test_kerr_rejects_unphysical():
    with pytest.raises(InvalidArgument):
        es.build_kerr_state(KerrInputSpec(-6.0, 3.0, 0.0))
    with pytest.raises(InvalidArgument):
        KerrInputSpec(1.0, 3.0)
    with pytest.raises(InvalidArgument):
        KerrInputSpec(-1.0, -3.0)


# entangle

def test_entangle_ideal_sum_is_input_squeezing():
    cfg = es.ideal_config(-4.6)
    st_ = es.entangle(cfg)
    var, _ = es.measure_correlation(st_, StokesObservable("C", 0), StokesObservable("D", 0), CombinerSpec(1, "sum"))
    assert var / 0.5 == pytest.approx(10 ** -0.46, rel=1e-12)


@pytest.mark.parametrize("t", [0.1, 0.49, 0.5, 0.9])
def test_entangle_vacuum_inputs(t):
    vac = KerrInputSpec(0.0, 0.0)
    st_ = es.entangle(ExperimentConfig(vac, vac, t, math.pi / 2, 1.0))
    assert np.allclose(st_.cov, 0.25 * np.eye(4), atol=1e-15)


def test_entangle_matches_independent_oracle():
    for cfg in (es.measured_config(), es.ideal_config(-3.0, 0.2), ExperimentConfig(KerrInputSpec(-2, 10, 0.1), KerrInputSpec(-1, 15, -0.3), 0.3, 1.1, 0.9)):
        assert np.allclose(es.entangle(cfg).cov, oracle_pair_cov(cfg), rtol=1e-12, atol=1e-12)


def test_measured_model_values_frozen():
    # values of the documented noise model, computed with oracle_pair_cov
    cov = oracle_pair_cov(es.measured_config())
    sq, asq = deg(4), deg(94)
    summary = es.fig2_summary(es.measured_config())
    assert summary.sum_db == pytest.approx(oracle_db(cov, qvec(sq, sq)), abs=1e-10)
    assert summary.difference_db == pytest.approx(oracle_db(cov, qvec(asq, asq, -1)), abs=1e-10)
    assert summary.sum_db == pytest.approx(-4.1059, abs=1e-3)
    assert summary.difference_db == pytest.approx(-4.0160, abs=1e-3)
    assert summary.excess_c_db == pytest.approx(19.111, abs=1e-3)


# measure_correlation

@given(st.floats(-90, 90))
def test_ideal_difference_is_mirror_flat(phi):
    cfg = es.ideal_config(-4.6, deg(4))
    state = es.entangle(cfg)
    a = cfg.theta_asq
    _, d0 = es.measure_correlation(state, StokesObservable("C", a), StokesObservable("D", a), CombinerSpec())
    _, d = es.measure_correlation(state, StokesObservable("C", a + deg(phi)), StokesObservable("D", a - deg(phi)), CombinerSpec())
    assert d == pytest.approx(d0, abs=1e-9)


def test_vacuum_correlation_zero_db():
    vac = KerrInputSpec(0.0, 0.0)
    state = es.entangle(ExperimentConfig(vac, vac))
    for a, b in ((0, 0), (0.3, -1.0), (2.0, 0.5)):
        _, d = es.measure_correlation(state, StokesObservable("C", a), StokesObservable("D", b), CombinerSpec(1, "sum"))
        assert d == pytest.approx(0, abs=1e-12)


def test_gain_shot_reference():
    vac = KerrInputSpec(0.0, 0.0)
    state = es.entangle(ExperimentConfig(vac, vac))
    var, d = es.measure_correlation(state, StokesObservable("C", 0), StokesObservable("D", 0), CombinerSpec(0.5, "difference"))
    assert var == pytest.approx(0.25 * 1.25)
    assert d == pytest.approx(0.0, abs=1e-12)


@given(st.sampled_from(["C", "D"]), st.floats(-10, 10))
def test_stokes_quadrature_round_trip(mode, angle):
    s = StokesObservable(mode, angle)
    assert StokesObservable.from_quadrature(s.to_quadrature()) == s


# sweep

def test_sweep_fixed_minimum_at_mirror_angle():
    res = es.sweep(es.measured_config(), "fixed_phi2", 45.0)
    assert len(res.rows) == 19
    assert res.argmin().phi1_deg == -45.0
    assert res.rows[0].phi1_deg == 0.0 and res.rows[-1].phi1_deg == -90.0


def test_sweep_mirror_nonclassical_for_measured_config():
    res = es.sweep(es.measured_config(), "mirror")
    assert np.all(res.column("variance_db") < 0)
    assert res.column("phi2_deg")[-1] == 90.0


def test_sweep_ideal_mirror_flat():
    db_ = es.sweep(es.ideal_config(), "mirror").column("variance_db")
    assert np.ptp(db_) < 1e-9


def test_sweep_db_consistent_with_linear():
    res = es.sweep(es.measured_config(), "mirror")
    for r in res.rows:
        assert r.variance_db == pytest.approx(10 * math.log10(r.variance_linear / res.shot_reference), abs=1e-12)


@pytest.mark.parametrize("t", [0.45, 0.48, 0.5, 0.52, 0.55])
@pytest.mark.parametrize("phi2", [20.0, 45.0, 70.0])
def test_sweep_argmin_within_one_step(t, phi2):
    k = KerrInputSpec(-4.6, 22.3, deg(4))
    cfg = ExperimentConfig(k, k, t, math.pi / 2, 0.98)
    res = es.sweep(cfg, "fixed_phi2", phi2)
    assert abs(res.argmin().phi1_deg + phi2) <= 5.0


def test_sweep_rows_match_monte_carlo():
    cfg = es.measured_config()
    state = es.entangle(cfg)
    res = es.sweep(cfg, "mirror", grid=(0, 90, 15))
    for k, row in enumerate(res.rows):
        obs = es.combined_observable(
            StokesObservable("C", cfg.theta_asq + deg(row.phi1_deg)),
            StokesObservable("D", cfg.theta_asq + deg(row.phi2_deg)),
            cfg.combiner,
        )
        mc = gc.sample_monte_carlo(state, obs, 200_000, 1000 + k)
        assert abs(mc.variance - row.variance_linear) < 5 * mc.standard_error


def test_sweep_errors():
    with pytest.raises(InvalidArgument):
        es.sweep(es.measured_config(), "fixed_phi2", grid=(0, -90, 0))
    with pytest.raises(InvalidArgument):
        es.sweep(es.measured_config(), "diagonal")


def test_angle_grid_directions():
    assert list(es.angle_grid(0, -10, 5)) == [0, -5, -10]
    assert list(es.angle_grid(0, 12, 5)) == [0, 5, 10]
    assert list(es.angle_grid(3, 3, 1)) == [3]


# optimize_gain

def brute_force_gain(state, oc, od, sign):
    gs = np.linspace(-3, 3, 60001)
    vs = [es.measure_correlation(state, oc, od, CombinerSpec(abs(g), sign if g >= 0 else ("sum" if sign == "difference" else "difference")))[0] for g in gs[::100]]
    g0 = gs[::100][int(np.argmin(vs))]
    fine = np.linspace(g0 - 0.02, g0 + 0.02, 4001)
    qc, qd = oc.to_quadrature().coefficients(2), od.to_quadrature().coefficients(2)
    f = 1.0 if sign == "sum" else -1.0
    vals = [(qc + f * g * qd) @ state.cov @ (qc + f * g * qd) for g in fine]
    return fine[int(np.argmin(vals))]


def test_optimal_gain_ideal_config():
    # finite squeezing: optimum (Va - Vs)/(Va + Vs), which tends to 1 only as r -> infinity
    cfg = es.ideal_config(-4.6)
    state = es.entangle(cfg)
    oc, od = StokesObservable("C", cfg.theta_asq), StokesObservable("D", cfg.theta_asq)
    g, v = es.optimize_gain(state, oc, od, "difference")
    vs, va = 10 ** -0.46, 10 ** 0.46
    assert g == pytest.approx((va - vs) / (va + vs), abs=1e-12)
    assert g == pytest.approx(brute_force_gain(state, oc, od, "difference"), abs=2e-5)
    assert v <= es.measure_correlation(state, oc, od, CombinerSpec(1.0, "difference"))[0]


def test_optimal_gain_tends_to_one_for_large_antisqueezing():
    k = KerrInputSpec(-4.6, 40.0)
    state = es.entangle(ExperimentConfig(k, k))
    g, _ = es.optimize_gain(state, StokesObservable("C", math.pi / 2), StokesObservable("D", math.pi / 2), "difference")
    assert g == pytest.approx(1.0, abs=1e-3)


def test_optimal_gain_uncorrelated():
    state = gc.direct_sum(es.build_kerr_state(KerrInputSpec(-3, 8, 0.2)), es.build_kerr_state(KerrInputSpec(-1, 2)))
    oc, od = StokesObservable("C", 0.4), StokesObservable("D", 1.0)
    g, v = es.optimize_gain(state, oc, od, "sum")
    assert g == pytest.approx(0.0, abs=1e-15)
    assert v == pytest.approx(gc.variance(state, oc.to_quadrature()), rel=1e-12)


def test_optimal_gain_measured_config():
    cfg = es.measured_config()
    state = es.entangle(cfg)
    for sign, ang in (("sum", cfg.theta_sq), ("difference", cfg.theta_asq)):
        oc, od = StokesObservable("C", ang), StokesObservable("D", ang)
        g, v = es.optimize_gain(state, oc, od, sign)
        assert abs(g - 1) > 1e-6
        assert v <= es.measure_correlation(state, oc, od, CombinerSpec(1.0, sign))[0]
        assert g == pytest.approx(brute_force_gain(state, oc, od, sign), abs=2e-5)


def test_optimal_gain_degenerate():
    state = gc.GaussianState(np.zeros(4), np.diag([0.25, 0.25, 0.0, 0.0]))
    with pytest.raises(DegenerateInput):
        es.optimize_gain(state, StokesObservable("C", 0), StokesObservable("D", 0), "sum")


# individual_noise

def test_individual_noise_measured_config():
    cfg = es.measured_config()
    state = es.entangle(cfg)
    (_, c), = es.individual_noise(state, "C", [cfg.theta_sq])
    assert c == pytest.approx(19.0, abs=2.0)
    # independent estimate: half the sum of the (lossy) principal variances
    eta = 0.98**2
    vs = eta * 10 ** -0.46 + 1 - eta
    va = eta * 10 ** 2.23 + 1 - eta
    assert c == pytest.approx(10 * math.log10((vs + va) / 2), abs=0.1)


def test_individual_noise_vacuum():
    out = es.individual_noise(gc.make_vacuum(2), "D", np.linspace(0, math.pi, 7))
    assert all(abs(d) < 1e-12 for _, d in out)


def test_individual_noise_ideal_angle_independent():
    state = es.entangle(es.ideal_config(-6.0, 0.3))
    vals = [d for _, d in es.individual_noise(state, "C", np.linspace(0, math.pi, 13))]
    assert np.ptp(vals) < 1e-12


def test_waveplate_conversion():
    assert es.waveplate_to_stokes(22.25) == pytest.approx(44.5)
