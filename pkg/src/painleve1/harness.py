"""End-to-end experiments: presets, numeric-vs-asymptotic comparison,
parameter recovery, and the Bessel-matching Stokes computation.

The two built-in presets are the special solutions with closed-form
multipliers: zero initial conditions y(0) = y'(0) = 0 (all s_k equal
2i cos(2pi/5), oscillatory) and the zero pole data (p, h) = (0, 0) (all
s_k equal -2i cos(pi/5), singular).  run_compare integrates a preset deep
into x < 0, evaluates the matching asymptotic family on a grid, and fits
the decay exponent of the residual envelope; fit_params solves the
inverse problem, recovering the connection constants from a trajectory.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import asymptotics as asym
from .errors import EmptyAfterMask, InsufficientCells, OutOfRegime
from .ode import IntegratorConfig, PoleData, State, Trajectory, integrate
from .specfun import reduce_angle
from .stokes import (OscParams, SingParams, SolutionClass, StokesMultipliers,
                     classify, complete_from_pair, osc_params, sing_params)


@dataclass(frozen=True)
class Preset:
    """A named experiment: initial data plus the matching Stokes multipliers."""

    name: str
    init: Union[State, PoleData]
    multipliers: StokesMultipliers


def _uniform_multipliers(s: complex) -> StokesMultipliers:
    return StokesMultipliers(s, s, s, s, s)


def zero_ic_preset() -> Preset:
    """y(0) = y'(0) = 0; all multipliers 2i cos(2pi/5) (oscillatory)."""
    s = 2j * math.cos(2.0 * math.pi / 5.0)
    return Preset("zero-ic", State(0.0, 0.0, 0.0), _uniform_multipliers(s))


def zero_pole_preset() -> Preset:
    """Pole data (p, h) = (0, 0); all multipliers -2i cos(pi/5) (singular)."""
    s = -2j * math.cos(math.pi / 5.0)
    return Preset("zero-pole", PoleData(0.0, 0.0), _uniform_multipliers(s))


def custom_preset(init: Union[State, PoleData], s2: complex) -> Preset:
    """A custom real-solution preset: s_m2 = -conj(s2) by the reality condition.

    The caller is responsible for init and s2 describing the same solution;
    that correspondence is the connection problem itself, and only the two
    built-in presets are closed-form-matched pairs.  run_compare on a
    mismatched pair compares unrelated solutions.
    """
    return Preset("custom", init, complete_from_pair(s2, -complex(s2).conjugate()))


def preset_by_name(name: str) -> Preset:
    table = {"zero-ic": zero_ic_preset, "zero-pole": zero_pole_preset}
    if name not in table:
        raise KeyError(f"unknown preset {name!r}")
    return table[name]()


# ---------------------------------------------------------------------------
# Stokes multipliers of the zero-pole solution from Bessel asymptotic matching


def appendix_b_stokes() -> StokesMultipliers:
    """Multipliers of the (p, h) = (0, 0) solution via Bessel matching.

    At the pole the isomonodromy system reduces to Y'' = (4z^3 + 2pz - 28H)Y,
    solved for (p, H) = (0, 0) by z^(1/2) I_{1/5} and z^(1/2) K_{1/5} of
    (4/5) z^(5/2).  Matching their sectorial asymptotics to the canonical
    solutions gives connection matrices whose quotients are the Stokes
    matrices; s0 and s1 come out as -2i cos(pi/5) and the cyclic recursion
    extends the value to all k.
    """
    pi = math.pi
    c1 = 1j * (4.0 * pi / 5.0) ** -0.5
    c2 = (4.0 * pi / 5.0) ** -0.5 * cmath.exp(-1j * pi / 5.0)
    c3 = 1j * (4.0 / (5.0 * pi)) ** -0.5
    c2_tilde = -cmath.exp(2j * pi / 5.0) * c2

    # sector arg z ~ 3pi/5 connection matrix [[d1, d3], [d2, d4]]
    d1 = 1j * cmath.exp(1j * pi / 5.0) * c2_tilde
    d2 = 1j * cmath.exp(1j * pi / 5.0) * c1
    d3 = cmath.exp(-1j * pi / 5.0) * 1j * c3 + pi * c2_tilde
    d4 = pi * c1

    # S0 = C Ctilde^-1 is unipotent lower triangular with entry (c2 - c2~)/c1
    s0 = (c2 - c2_tilde) / c1
    # S1 = Ctilde D^-1 is unipotent upper triangular; its entry is -c1 d3/det D
    det = d1 * d4 - d3 * d2
    s1 = -c1 * d3 / det

    # extend by 1 + s_k s_{k+1} = -i s_{k+3} (indices mod 5)
    s3 = 1j * (1.0 + s0 * s1)          # = s_m2
    s2 = (-1j * s0 - 1.0) / s3
    s4 = (-1j * s1 - 1.0) / s3         # = s_m1
    return StokesMultipliers(s3, s4, s0, s1, s2)


# ---------------------------------------------------------------------------
# Comparison report


@dataclass(frozen=True)
class FitExponent:
    value: float
    stderr: float
    n_points: int


@dataclass(frozen=True)
class PoleRow:
    n: int
    p_num: float
    x_pred: float
    gap: float


@dataclass
class CompareReport:
    preset: str
    x_min: float
    grid: np.ndarray
    y_num: np.ndarray
    y_asym: np.ndarray
    h_num: np.ndarray
    h_asym: np.ndarray
    masked: np.ndarray
    resid_y: np.ndarray
    resid_h: np.ndarray
    exp_y: FitExponent
    exp_h: FitExponent
    pole_rows: list[PoleRow]
    trajectory: Trajectory
    params: Union[OscParams, SingParams]

    def to_json_dict(self, files: Optional[dict] = None) -> dict:
        return {
            "preset": self.preset,
            "x_min": self.x_min,
            "exp_y": {"value": self.exp_y.value, "stderr": self.exp_y.stderr},
            "exp_h": {"value": self.exp_h.value, "stderr": self.exp_h.stderr},
            "pole_table": [{"n": r.n, "p_num": r.p_num, "x_pred": r.x_pred, "gap": r.gap}
                           for r in self.pole_rows],
            "files": files or {},
        }

    def write_json(self, path, files: Optional[dict] = None) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(files), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def write_grid_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("x,y_num,y_asym,h_num,h_asym,masked\n")
            for i in range(len(self.grid)):
                fh.write(f"{self.grid[i]:.17g},{self.y_num[i]:.17g},{self.y_asym[i]:.17g},"
                         f"{self.h_num[i]:.17g},{self.h_asym[i]:.17g},"
                         f"{1 if self.masked[i] else 0}\n")


def envelope_exponent(x: np.ndarray, resid: np.ndarray, x_hi: float = -15.0) -> FitExponent:
    """Log-log slope of the residual envelope.

    The residual oscillates through zero, so the decay rate is fitted on
    its local maxima (the envelope) rather than pointwise: OLS of
    log|resid_max| against log(-x) over maxima with x <= x_hi.
    """
    r = np.abs(resid)
    keep = np.isfinite(r)
    x = np.asarray(x)[keep]
    r = r[keep]
    peaks = [i for i in range(1, len(r) - 1)
             if r[i] >= r[i - 1] and r[i] >= r[i + 1] and x[i] <= x_hi and r[i] > 0.0]
    if len(peaks) < 6:
        raise InsufficientCells(f"only {len(peaks)} envelope maxima below x = {x_hi}")
    lx = np.log(-x[peaks])
    lr = np.log(r[peaks])
    design = np.column_stack([lx, np.ones_like(lx)])
    coef, _, _, _ = np.linalg.lstsq(design, lr, rcond=None)
    resid_fit = lr - design @ coef
    dof = len(peaks) - 2
    cov = (resid_fit @ resid_fit / dof) * np.linalg.inv(design.T @ design)
    return FitExponent(float(coef[0]), float(math.sqrt(cov[0, 0])), len(peaks))


def run_compare(preset: Preset, x_min: float, cfg: Optional[IntegratorConfig] = None,
                *, grid_hi: float = -8.0, grid_step: float = 0.05,
                mask_eps: float = asym.DEFAULT_MASK_EPS,
                fit_x_hi: float = -15.0) -> CompareReport:
    """Integrate a preset to x_min and compare against its asymptotic family.

    The comparison grid spans [x_min, grid_hi] with uniform spacing; the
    singular family is masked where |sin omega| < mask_eps.  Decay
    exponents are fitted on residual envelope maxima (restricted to
    midcell points, |sin omega| >= 0.9, in the singular case, where the
    asymptotic error term is not amplified by the pole denominators).
    Detected poles are paired with the predicted lattice by nearest
    predicted location.
    """
    if x_min > -10.0:
        raise ValueError(f"x_min must be <= -10, got {x_min}")
    cfg = cfg or IntegratorConfig()
    cls = classify(preset.multipliers)
    if cls is SolutionClass.SEPARATRIX:
        raise OutOfRegime("run_compare supports the oscillatory and singular families")

    # shallow runs cannot fit below -15; keep at least the outer 30% of the grid
    fit_x_hi = max(fit_x_hi, x_min + 0.7 * (grid_hi - x_min))
    n_grid = int(round((grid_hi - x_min) / grid_step)) + 1
    grid = [float(g) for g in np.linspace(x_min, grid_hi, n_grid)]
    traj = integrate(preset.init, x_min - 0.5, cfg, grid=grid)
    by_x = traj.state_by_x()
    states = [by_x[g] for g in grid]
    gx = np.array(grid)
    y_num = np.array([s.y for s, _ in states])
    h_num = np.array([h for _, h in states])

    pole_rows: list[PoleRow] = []
    if cls is SolutionClass.OSCILLATORY:
        params: Union[OscParams, SingParams] = osc_params(preset.multipliers.s_2)
        evals = [asym.osc_y(g, params) for g in grid]
        masked = np.zeros(len(grid), dtype=bool)
        fit_sel = np.ones(len(grid), dtype=bool)
    else:
        params = sing_params(preset.multipliers.s_2)
        evals = [asym.sing_y(g, params, mask_eps) for g in grid]
        prox = np.array([e.pole_proximity for e in evals])
        masked = prox < mask_eps
        fit_sel = prox >= 0.9
        n_hi = int(asym.phase_sing(x_min - 1.0, params) / math.pi) + 1
        predicted = asym.predict_poles(params, 1, n_hi)
        for pd in traj.poles:
            n, x_pred = min(predicted, key=lambda nx: abs(nx[1] - pd.p))
            pole_rows.append(PoleRow(n, pd.p, x_pred, abs(pd.p - x_pred)))

    y_asym = np.array([e.y for e in evals])
    h_asym = np.array([e.h for e in evals])
    if int((~masked).sum()) < 10:
        raise EmptyAfterMask("fewer than 10 unmasked comparison points")
    resid_y = np.where(~masked, y_num - y_asym, np.nan)
    resid_h = np.where(~masked, h_num - h_asym, np.nan)

    fy = np.where(fit_sel, resid_y, np.nan)
    fh = np.where(fit_sel, resid_h, np.nan)
    exp_y = envelope_exponent(gx, fy, fit_x_hi)
    exp_h = envelope_exponent(gx, fh, fit_x_hi)

    return CompareReport(preset=preset.name, x_min=x_min, grid=gx,
                         y_num=y_num, y_asym=y_asym, h_num=h_num, h_asym=h_asym,
                         masked=masked, resid_y=resid_y, resid_h=resid_h,
                         exp_y=exp_y, exp_h=exp_h, pole_rows=pole_rows,
                         trajectory=traj, params=params)


# ---------------------------------------------------------------------------
# Inverse problem: connection constants from a trajectory


def _refined_peaks(values: np.ndarray) -> list[float]:
    """Local maxima of |values| with parabolic peak refinement."""
    v = np.abs(values)
    peaks = []
    for i in range(1, len(v) - 1):
        if v[i] >= v[i - 1] and v[i] >= v[i + 1]:
            denom = v[i - 1] - 2.0 * v[i] + v[i + 1]
            if denom < 0.0:
                peaks.append(v[i] - (v[i + 1] - v[i - 1]) ** 2 / (8.0 * denom))
            else:
                peaks.append(v[i])
    return peaks


def fit_params(traj: Trajectory, solution_class: SolutionClass,
               *, x_max: float = -15.0,
               deep_fraction: float = 0.45) -> Union[OscParams, SingParams]:
    """Recover the connection constants from a numeric trajectory.

    Oscillatory: the scaled residual u = (y + sqrt(-x/6)) (-24x)^(1/8) is
    the envelope times cos theta, and w = -(y' - d/dx[-sqrt(-x/6)])
    (-24x)^(1/8) / theta' is the envelope times sin theta; a is the mean
    squared envelope at the extrema of u, and phi the circular mean of
    atan2(w, u) minus the parameter-free part of theta.

    Singular: each detected pole satisfies omega(p_n) = n pi, so
    n pi - (2*24^(1/4)/5)(-p_n)^(5/4) regressed on ((5/8) ln(-p_n), 1)
    gives (b, psi).  Only the deepest poles (-p above deep_fraction of the
    deepest) enter, since shallow poles still carry the higher-order
    corrections the asymptotic lattice omits; psi is identifiable mod pi
    and is reduced to (-pi/2, pi/2].
    """
    if solution_class is SolutionClass.OSCILLATORY:
        if traj.poles:
            raise OutOfRegime("trajectory crosses poles; not an oscillatory tail")
        pts = [(s.x, s.y, s.dy) for s, _ in traj.samples if s.x <= x_max]
        if not pts or min(p[0] for p in pts) > -20.0:
            raise InsufficientCells("trajectory does not reach x <= -20")
        x = np.array([p[0] for p in pts])
        y = np.array([p[1] for p in pts])
        dy = np.array([p[2] for p in pts])
        scale = (-24.0 * x) ** 0.125
        u = (y + np.sqrt(-x / 6.0)) * scale
        extrema = [i for i in range(1, len(u) - 1)
                   if abs(u[i]) >= abs(u[i - 1]) and abs(u[i]) >= abs(u[i + 1])]
        if len(extrema) < 10:
            raise InsufficientCells(f"only {len(extrema)} oscillation extrema")
        peaks = _refined_peaks(u)
        a = float(np.mean(np.array(peaks) ** 2))
        lead = math.sqrt(6.0) / 12.0 / np.sqrt(-x)
        # y' = lead + E' cos(theta) - E theta' sin(theta) with E'/E = 1/(8(-x)),
        # so the sine component is w below; u^2 + w^2 is the squared envelope.
        w = np.zeros_like(u)
        for _ in range(2):
            theta_prime = -asym.ROOT4_24 * (-x) ** 0.25 - (5.0 * a / 8.0) / x
            w = -((dy - lead) * scale - u / (8.0 * (-x))) / theta_prime
            a = float(np.mean(u[extrema] ** 2 + w[extrema] ** 2))
        theta_obs = np.unwrap(np.arctan2(w, u))
        theta_model = asym.OSC_FREQ * (-x) ** 1.25 - (5.0 * a / 8.0) * np.log(-x)
        z = np.exp(1j * (theta_obs - theta_model)).mean()
        return OscParams(a, reduce_angle(math.atan2(z.imag, z.real)))

    if solution_class is SolutionClass.SINGULAR:
        ps = [pd.p for pd in traj.poles]
        if len(ps) < 5:
            raise InsufficientCells(f"only {len(ps)} poles detected")
        ps.sort(reverse=True)  # crossing order toward -inf
        n0 = round(asym.SING_FREQ * (-ps[0]) ** 1.25 / math.pi)
        rows = [(n0 + i, p) for i, p in enumerate(ps)]
        depth = max(-p for _, p in rows)
        deep = [(n, p) for n, p in rows if -p >= deep_fraction * depth]
        if len(deep) < 5:
            raise InsufficientCells(f"only {len(deep)} poles in the deep window")
        nn = np.array([n for n, _ in deep], dtype=float)
        pp = np.array([p for _, p in deep])
        lhs = nn * math.pi - asym.SING_FREQ * (-pp) ** 1.25
        design = np.column_stack([(5.0 / 8.0) * np.log(-pp), np.ones_like(pp)])
        (b, psi), _, _, _ = np.linalg.lstsq(design, lhs, rcond=None)
        psi -= math.pi * round(psi / math.pi)  # mod pi, into (-pi/2, pi/2]
        return SingParams(float(b), float(psi))

    raise OutOfRegime("fit_params supports the oscillatory and singular classes")
