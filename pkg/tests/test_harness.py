import json
import math

import numpy as np
import pytest

from painleve1 import (EmptyAfterMask, InsufficientCells, IntegratorConfig,
                       OscParams, OutOfRegime, PoleData, SolutionClass, State,
                       Trajectory, classify, constraint_residual, hamiltonian,
                       integrate, invert_sing, reality_residual)
from painleve1.asymptotics import OSC_FREQ, ROOT4_24
from painleve1.harness import (Preset, appendix_b_stokes, custom_preset,
                               envelope_exponent, fit_params, preset_by_name,
                               run_compare, zero_ic_preset, zero_pole_preset)

from oracles import A_ZERO_IC, B_ZERO_POLE, TWO_COS_PI_5

SEP_MULT = None  # built lazily in its test


# ---------------------------------------------------------------------------
# appendix B


def test_appendix_b_values():
    s = appendix_b_stokes()
    target = complex(0.0, -TWO_COS_PI_5)
    for k in range(-2, 3):
        assert abs(s[k] - target) < 1e-12
    assert constraint_residual(s) < 1e-14
    assert reality_residual(s) < 1e-12


# ---------------------------------------------------------------------------
# presets


def test_preset_invariants():
    for preset in (zero_ic_preset(), zero_pole_preset()):
        assert constraint_residual(preset.multipliers) < 1e-14
        assert reality_residual(preset.multipliers) < 1e-14
    assert classify(zero_ic_preset().multipliers) is SolutionClass.OSCILLATORY
    assert classify(zero_pole_preset().multipliers) is SolutionClass.SINGULAR


def test_preset_by_name():
    assert preset_by_name("zero-ic").init == State(0.0, 0.0, 0.0)
    assert preset_by_name("zero-pole").init == PoleData(0.0, 0.0)
    with pytest.raises(KeyError):
        preset_by_name("nope")


def test_custom_preset_is_real_solution():
    pre = custom_preset(State(0.0, 1.0, 0.0), complex(0.3, 0.4))
    assert constraint_residual(pre.multipliers) < 1e-12
    assert reality_residual(pre.multipliers) < 1e-12


# ---------------------------------------------------------------------------
# run_compare: oscillatory preset


def test_zero_ic_exponents(zero_ic_report):
    r = zero_ic_report
    assert -0.85 <= r.exp_y.value <= -0.65
    assert -1.15 <= r.exp_h.value <= -0.85
    assert not r.masked.any()
    assert np.isfinite(r.resid_y).all()
    assert r.pole_rows == []
    assert classify(zero_ic_preset().multipliers).value == "oscillatory"


def test_zero_ic_pointwise_agreement(zero_ic_report):
    # figure-style agreement deep in the tail (thresholds from this run's
    # own fitted envelope, with factor-3 headroom)
    r = zero_ic_report
    i = int(np.argmin(np.abs(r.grid - (-40.0))))
    assert abs(r.resid_y[i]) < 0.006
    assert abs(r.resid_h[i]) < 0.02


def test_report_determinism(tmp_path, zero_ic_report):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    zero_ic_report.write_grid_csv(p1)
    zero_ic_report.write_grid_csv(p2)
    assert p1.read_bytes() == p2.read_bytes()
    j1, j2 = tmp_path / "a.json", tmp_path / "b.json"
    zero_ic_report.write_json(j1, {"grid": "a.csv"})
    zero_ic_report.write_json(j2, {"grid": "a.csv"})
    assert j1.read_bytes() == j2.read_bytes()
    parsed = json.loads(j1.read_text())
    assert set(parsed) == {"preset", "x_min", "exp_y", "exp_h", "pole_table", "files"}


def test_run_compare_rejects_shallow_x_min():
    with pytest.raises(ValueError):
        run_compare(zero_ic_preset(), -5.0)


def test_run_compare_rejects_separatrix():
    from painleve1 import StokesMultipliers
    sep = Preset("custom", State(0.0, 1.0, 0.0),
                 StokesMultipliers(1j, 0.5j, 0.0, 0.5j, 1j))
    with pytest.raises(OutOfRegime):
        run_compare(sep, -20.0)


# ---------------------------------------------------------------------------
# run_compare: singular preset


def test_zero_pole_rows(zero_pole_report):
    r = zero_pole_report
    assert len(r.pole_rows) == len(r.trajectory.poles)
    ns = [row.n for row in r.pole_rows]
    assert all(b - a == 1 for a, b in zip(ns, ns[1:]))
    deep = [row for row in r.pole_rows if -row.x_pred > 20.0]
    assert len(deep) >= 10
    gaps = [row.gap for row in deep]
    assert all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
    lx = np.log([-row.x_pred for row in deep])
    lg = np.log(gaps)
    slope = np.polyfit(lx, lg, 1)[0]
    assert slope <= -0.75


def test_zero_pole_mask_consistent(zero_pole_report):
    r = zero_pole_report
    assert r.masked.any()
    assert np.isnan(r.resid_y[r.masked]).all()
    assert np.isfinite(r.resid_y[~r.masked]).all()


def test_empty_after_mask():
    with pytest.raises(EmptyAfterMask):
        run_compare(zero_pole_preset(), -12.0, mask_eps=0.99999999)


def test_zero_pole_midcell_agreement(zero_pole_report):
    # figure-style agreement midway between poles near x = -40 (thresholds
    # from this run's own residual scale, factor-3 headroom)
    r = zero_pole_report
    window = (~r.masked) & (np.abs(r.grid + 40.0) < 1.0)
    correction = np.abs(r.y_asym + np.sqrt(-r.grid / 6.0))
    idx = np.where(window)[0]
    mid = idx[np.argmin(correction[idx])]
    assert abs(r.resid_y[mid]) < 0.01
    assert abs(r.resid_h[mid]) < 0.006


# ---------------------------------------------------------------------------
# fit_params


def _synthetic_osc_trajectory(a, phi, x_lo=-40.0, x_hi=-15.0, dx=0.005):
    p = OscParams(a, phi)
    xs = np.arange(x_hi, x_lo, -dx)
    samples = []
    for x in xs:
        theta = OSC_FREQ * (-x) ** 1.25 - (5.0 * a / 8.0) * math.log(-x) + phi
        env = math.sqrt(a) * (-24.0 * x) ** -0.125
        y = -math.sqrt(-x / 6.0) + env * math.cos(theta)
        theta_p = -ROOT4_24 * (-x) ** 0.25 - (5.0 * a / 8.0) / x
        dy = (math.sqrt(6.0) / 12.0 / math.sqrt(-x)
              + env / (8.0 * (-x)) * math.cos(theta)
              - env * theta_p * math.sin(theta))
        s = State(float(x), y, dy)
        samples.append((s, hamiltonian(s)))
    return Trajectory(samples=samples, poles=[], direction=-1,
                      config_echo=IntegratorConfig())


def test_fit_params_recovers_generating_model():
    a, phi = 0.1531726, 0.4
    traj = _synthetic_osc_trajectory(a, phi)
    got = fit_params(traj, SolutionClass.OSCILLATORY)
    assert abs(got.a - a) < 1e-6
    assert abs(got.phi - phi) < 1e-6


def test_fit_params_zero_ic(zero_ic_report):
    got = fit_params(zero_ic_report.trajectory, SolutionClass.OSCILLATORY)
    assert abs(got.a - A_ZERO_IC) / A_ZERO_IC < 0.02


def test_fit_params_zero_pole(zero_pole_traj_deep):
    got = fit_params(zero_pole_traj_deep, SolutionClass.SINGULAR)
    assert abs(got.b - B_ZERO_POLE) / B_ZERO_POLE < 0.02
    s2 = invert_sing(got, -math.pi / 2.0)
    assert abs(abs(s2) - TWO_COS_PI_5) / TWO_COS_PI_5 < 0.02


def test_param_recovery_improves_with_depth(zero_ic_report, zero_pole_report,
                                            zero_pole_traj_deep):
    shallow = integrate(State(0.0, 0.0, 0.0), -40.0, IntegratorConfig())
    err_shallow = abs(fit_params(shallow, SolutionClass.OSCILLATORY).a - A_ZERO_IC)
    err_deep = abs(fit_params(zero_ic_report.trajectory, SolutionClass.OSCILLATORY).a
                   - A_ZERO_IC)
    assert err_deep < err_shallow
    b60 = fit_params(zero_pole_report.trajectory, SolutionClass.SINGULAR).b
    b90 = fit_params(zero_pole_traj_deep, SolutionClass.SINGULAR).b
    assert abs(b90 - B_ZERO_POLE) < abs(b60 - B_ZERO_POLE)


def test_pole_data_regenerates_oscillatory_solution(zero_ic_report):
    # whole-system loop: the zero-IC solution's first positive-axis pole,
    # fitted from the rightward run, reparametrizes the same solution; the
    # leftward run from that pole data must be pole-free and recover a
    cfg = IntegratorConfig()
    right = integrate(State(0.0, 0.0, 0.0), 3.0, cfg)
    assert len(right.poles) == 1
    left = integrate(right.poles[0], -60.0, cfg)
    assert left.poles == []
    indirect = fit_params(left, SolutionClass.OSCILLATORY).a
    direct = fit_params(zero_ic_report.trajectory, SolutionClass.OSCILLATORY).a
    assert abs(indirect - A_ZERO_IC) / A_ZERO_IC < 2e-3
    assert abs(indirect - direct) < 1e-4


def test_fit_params_oscillatory_rejects_pole_crossing_trajectory():
    traj = integrate(PoleData(0.0, 0.0), -25.0, IntegratorConfig())
    with pytest.raises(OutOfRegime):
        fit_params(traj, SolutionClass.OSCILLATORY)


def test_fit_params_insufficient_data():
    traj = integrate(State(0.0, 0.0, 0.0), -5.0, IntegratorConfig())
    with pytest.raises(InsufficientCells):
        fit_params(traj, SolutionClass.OSCILLATORY)
    with pytest.raises(InsufficientCells):
        fit_params(traj, SolutionClass.SINGULAR)


def test_fit_params_rejects_separatrix_class():
    traj = integrate(State(0.0, 0.0, 0.0), -5.0, IntegratorConfig())
    with pytest.raises(OutOfRegime):
        fit_params(traj, SolutionClass.SEPARATRIX)


# ---------------------------------------------------------------------------
# envelope exponent helper


def test_envelope_exponent_recovers_power_law():
    x = np.linspace(-60.0, -10.0, 4000)
    r = (-x) ** -0.75 * np.abs(np.cos(1.77 * (-x) ** 1.25))
    fit = envelope_exponent(x, r, x_hi=-15.0)
    assert fit.value == pytest.approx(-0.75, abs=0.02)
    assert fit.stderr < 0.02


def test_envelope_exponent_needs_peaks():
    x = np.linspace(-30.0, -10.0, 50)
    with pytest.raises(InsufficientCells):
        envelope_exponent(x, np.full_like(x, np.nan))
