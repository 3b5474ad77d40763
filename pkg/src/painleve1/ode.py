"""Adaptive integration of y'' = 6y^2 + x through double poles.

The first-order system (y, y') is advanced by an embedded Dormand-Prince
5(4) pair with a standard PI step controller.  Real Painleve I
transcendents blow up like 1/(x-p)^2 at movable double poles; the
integrator never steps through one.  Instead, once |y| crosses the
detection threshold, the pole is located and the free Laurent datum
fitted from recent samples,

    y(x) = (x-p)^-2 - p/10 (x-p)^2 - 1/6 (x-p)^3 + h (x-p)^4 + ...,

and integration restarts from the series on the far side (pole vaulting).
The Hamiltonian H = y'^2/2 - 2y^3 - xy satisfies H' = -y and behaves like
1/(x-p) - 14h near a pole, which provides an independent cross-check on
the fitted h.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .errors import (AtPole, DegreeTooSmall, FitIllConditioned,
                     MaxPolesExceeded, StepUnderflow)

# Dormand-Prince 5(4) tableau.
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
# y5 - y4 error weights
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_BETA = 0.04            # PI controller memory
_EXPO = 0.2 - 0.75 * _BETA
_H_MIN = 1e-14


@dataclass(frozen=True)
class State:
    """One phase-space sample (x, y, y')."""

    x: float
    y: float
    dy: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.dy)):
            raise ValueError(f"non-finite state ({self.x}, {self.y}, {self.dy})")


@dataclass(frozen=True)
class PoleData:
    """Laurent data (p, h): pole location and the free quartic coefficient."""

    p: float
    h: float


@dataclass(frozen=True)
class IntegratorConfig:
    rtol: float = 1e-10
    atol: float = 1e-12
    h_init: float = 1e-3
    y_detect: float = 1e4
    fit_band: tuple[float, float] = (0.05, 0.5)
    restart_offset: float = 0.2
    series_degree: int = 12
    max_poles: int = 200
    max_step: Optional[float] = None   # forces accepted samples this dense

    def __post_init__(self):
        lo, hi = self.fit_band
        if not 0.0 < lo < hi:
            raise ValueError(f"fit_band must satisfy 0 < lo < hi, got {self.fit_band}")
        if not lo <= self.restart_offset <= hi:
            raise ValueError("restart_offset must lie within fit_band")
        if self.series_degree < 6:
            raise ValueError("series_degree must be >= 6")
        if self.rtol <= 0.0 or self.atol <= 0.0:
            raise ValueError("rtol and atol must be positive")


@dataclass(frozen=True)
class PoleFit:
    """Fitted pole with the Hamiltonian cross-check h_ham = -(H - 1/(x-p))/14."""

    data: PoleData
    h_ham: float
    h_disagreement: float
    flagged: bool


@dataclass(frozen=True)
class StepResult:
    state: State
    error_estimate: float
    h_used: float
    h_next: float


@dataclass
class Trajectory:
    """Accepted samples (plus dense grid output), detected poles, and config."""

    samples: list[tuple[State, float]]
    poles: list[PoleData]
    direction: int
    config_echo: IntegratorConfig
    pole_fits: list[PoleFit] = field(default_factory=list)

    def state_by_x(self) -> dict[float, tuple[State, float]]:
        return {s.x: (s, h) for s, h in self.samples}

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("x,y,dy,H\n")
            for s, h in self.samples:
                fh.write(f"{s.x:.17g},{s.y:.17g},{s.dy:.17g},{h:.17g}\n")

    def poles_to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("n,p,h\n")
            for i, pd in enumerate(self.poles, start=1):
                fh.write(f"{i},{pd.p:.17g},{pd.h:.17g}\n")


def rhs(s: State) -> tuple[float, float]:
    """(y', 6y^2 + x)."""
    return s.dy, 6.0 * s.y * s.y + s.x


def hamiltonian(s: State) -> float:
    """H = y'^2/2 - 2y^3 - xy."""
    return 0.5 * s.dy * s.dy - 2.0 * s.y ** 3 - s.x * s.y


def _hamiltonian_xyd(x: float, y: float, dy: float) -> float:
    return 0.5 * dy * dy - 2.0 * y ** 3 - x * y


# ---------------------------------------------------------------------------
# Laurent series machinery


def laurent_coeffs(pd: PoleData, degree: int) -> list[float]:
    """Coefficients c_{-2}..c_degree of the Laurent series at pole (p, h).

    c_{-2} = 1, c_{-1} = c_0 = c_1 = 0, c_2 = -p/10, c_3 = -1/6, c_4 = h;
    higher coefficients follow from substituting the series into the ODE:
    ((m+2)(m+1) - 12) c_{m+2} = 6 sum'_{i+j=m} c_i c_j + p [m=0] + [m=1],
    the primed sum excluding the c_{-2} c_{m+2} resonance terms.
    """
    if degree < 4:
        raise DegreeTooSmall(f"degree {degree} < 4")
    c = {-2: 1.0, -1: 0.0, 0: 0.0, 1: 0.0, 2: -pd.p / 10.0, 3: -1.0 / 6.0, 4: pd.h}
    for m in range(3, degree - 1):
        acc = 0.0
        for i in range(-1, m // 2 + 1):
            j = m - i
            if j < i:
                break
            term = c[i] * c[j]
            acc += term if i == j else 2.0 * term
        c[m + 2] = 6.0 * acc / ((m + 2) * (m + 1) - 12)
    return [c[k] for k in range(-2, degree + 1)]


def laurent_eval(pd: PoleData, degree: int, x: float) -> State:
    """Evaluate the truncated Laurent series (y and its derivative) at x."""
    t = x - pd.p
    if t == 0.0:
        raise AtPole(f"laurent_eval at the pole x = {x}")
    cs = laurent_coeffs(pd, degree)
    # y = t^-2 * sum cs[i] t^i, evaluated by Horner on the polynomial part
    poly = 0.0
    dpoly = 0.0  # d/dt of sum cs[i] t^i
    for i in range(len(cs) - 1, -1, -1):
        dpoly = dpoly * t + i * cs[i]
        poly = poly * t + cs[i]
    inv_t2 = 1.0 / (t * t)
    y = poly * inv_t2
    dy = dpoly * inv_t2 / t - 2.0 * poly * inv_t2 / t
    return State(x, y, dy)


def seed_from_pole(pd: PoleData, side: str, cfg: IntegratorConfig) -> State:
    """Series-evaluated state one restart_offset from the pole.

    side 'left' puts the seed at p - restart_offset (toward -inf),
    'right' at p + restart_offset.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    dx = -cfg.restart_offset if side == "left" else cfg.restart_offset
    return laurent_eval(pd, cfg.series_degree, pd.p + dx)


# ---------------------------------------------------------------------------
# Embedded RK step


def _rk_attempt(x: float, y: float, dy: float, h: float):
    """One raw Dormand-Prince attempt: returns (y5, dy5, err_y, err_dy)."""
    ky = [0.0] * 7
    kd = [0.0] * 7
    for i in range(7):
        yy = y
        dd = dy
        for j, a in enumerate(_A[i]):
            if a != 0.0:
                yy += h * a * ky[j]
                dd += h * a * kd[j]
        xi = x + _C[i] * h
        ky[i] = dd
        kd[i] = 6.0 * yy * yy + xi
    y5 = y
    d5 = dy
    for i, b in enumerate(_B5):
        if b != 0.0:
            y5 += h * b * ky[i]
            d5 += h * b * kd[i]
    ey = 0.0
    ed = 0.0
    for i, e in enumerate(_E):
        if e != 0.0:
            ey += h * e * ky[i]
            ed += h * e * kd[i]
    return y5, d5, ey, ed


def _error_norm(y, dy, y5, d5, ey, ed, rtol, atol) -> float:
    sc_y = atol + rtol * max(abs(y), abs(y5))
    sc_d = atol + rtol * max(abs(dy), abs(d5))
    try:
        return math.sqrt(0.5 * ((ey / sc_y) ** 2 + (ed / sc_d) ** 2))
    except OverflowError:
        return math.inf


def step(s: State, cfg: Optional[IntegratorConfig] = None, h: Optional[float] = None,
         direction: int = -1) -> StepResult:
    """One accepted embedded 5(4) step from s.

    The trial step h (default cfg.h_init, signed by direction) is shrunk
    until the mixed error norm against atol + rtol*|value| passes; raises
    StepUnderflow below 1e-14.  Returns the new state, the error estimate
    of the accepted step, the step actually taken, and the controller's
    proposal for the next one.
    """
    cfg = cfg or IntegratorConfig()
    if h is None:
        h = cfg.h_init * (1.0 if direction > 0 else -1.0)
    facold = 1e-4
    while True:
        if abs(h) < _H_MIN:
            raise StepUnderflow(f"step size {h} below {_H_MIN}")
        y5, d5, ey, ed = _rk_attempt(s.x, s.y, s.dy, h)
        err = _error_norm(s.y, s.dy, y5, d5, ey, ed, cfg.rtol, cfg.atol)
        if math.isnan(err):
            h *= 0.1
            continue
        if err <= 1.0:
            fac = _SAFETY * (err ** -_EXPO if err > 0.0 else _MAX_FACTOR) * facold ** _BETA
            fac = max(_MIN_FACTOR, min(_MAX_FACTOR, fac))
            return StepResult(State(s.x + h, y5, d5), err, h, h * fac)
        h *= max(_MIN_FACTOR, min(1.0, _SAFETY * err ** -0.2))


# ---------------------------------------------------------------------------
# Pole detection and fitting


def _fit_newton(f, x0: float, scale: float, iters: int = 4) -> float:
    v = x0
    for _ in range(iters):
        fv = f(v)
        d = scale * max(abs(v), 1.0) if scale > 0 else 1e-9
        deriv = (f(v + d) - f(v - d)) / (2.0 * d)
        if deriv == 0.0 or not math.isfinite(deriv):
            break
        v -= fv / deriv
    return v


def fit_pole(tail: Sequence[State], cfg: IntegratorConfig) -> PoleFit:
    """Locate a double pole from samples approaching it and fit (p, h).

    The innermost sample gives p = x + 2y/dy (exact to O((x-p)^5) on the
    series), polished by Newton on the truncated series; h starts from the
    degree-4 residual of a sample inside fit_band and is polished the same
    way.  The Hamiltonian limit -(H - 1/(x-p))/14 cross-checks h; relative
    disagreement above 1e-4 flags the fit.
    """
    if not tail:
        raise FitIllConditioned("empty sample tail")
    inner = tail[-1]
    if inner.y < 0.0:
        raise FitIllConditioned("blowup with y -> -inf: not a Painleve I pole")
    if inner.dy == 0.0:
        raise FitIllConditioned("stationary innermost sample")
    deg = cfg.series_degree
    lo, hi = cfg.fit_band

    p = inner.x + 2.0 * inner.y / inner.dy
    h = 0.0
    band: list[State] = []
    for _ in range(4):
        p = _fit_newton(
            lambda pp: laurent_eval(PoleData(pp, h), deg, inner.x).y - inner.y,
            p, 1e-9, iters=3)
        band = [s for s in tail if lo <= abs(s.x - p) <= hi]
        if not band:
            raise FitIllConditioned(f"no sample with |x - p| in [{lo}, {hi}]")
        s_h = min(band, key=lambda s: abs(abs(s.x - p) - 0.2))
        t = s_h.x - p
        h = (s_h.y - (t ** -2 - p * t ** 2 / 10.0 - t ** 3 / 6.0)) * t ** -4
        h = _fit_newton(
            lambda hh: laurent_eval(PoleData(p, hh), deg, s_h.x).y - s_h.y,
            h, 1e-7, iters=3)

    # Hamiltonian cross-check: H = 1/t - 14h + (p/30)t^3 + (1/24)t^4 + O(t^5)
    window = [s for s in band if 0.1 <= abs(s.x - p) <= 0.35] or band
    estimates = []
    for s in window:
        t = s.x - p
        estimates.append(-(hamiltonian(s) - 1.0 / t - p * t ** 3 / 30.0 - t ** 4 / 24.0) / 14.0)
    estimates.sort()
    h_ham = estimates[len(estimates) // 2]
    disagreement = abs(h - h_ham) / max(abs(h), abs(h_ham), 1e-3)
    return PoleFit(PoleData(p, h), h_ham, disagreement, disagreement > 1e-4)


def detect_and_fit_pole(tail: Sequence[State], cfg: IntegratorConfig,
                        direction: int = -1) -> PoleData:
    """Thin wrapper around fit_pole returning only the Laurent data."""
    return fit_pole(tail, cfg).data


# ---------------------------------------------------------------------------
# Driver


def _hermite(x0, y0, d0, x1, y1, d1, xg):
    """Cubic Hermite interpolation of (y, dy) at xg in [x0, x1]."""
    h = x1 - x0
    s = (xg - x0) / h
    h00 = 2 * s ** 3 - 3 * s ** 2 + 1
    h10 = s ** 3 - 2 * s ** 2 + s
    h01 = -2 * s ** 3 + 3 * s ** 2
    h11 = s ** 3 - s ** 2
    yg = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
    dg = ((6 * s ** 2 - 6 * s) / h * y0 + (3 * s ** 2 - 4 * s + 1) * d0
          + (6 * s - 6 * s ** 2) / h * y1 + (3 * s ** 2 - 2 * s) * d1)
    return yg, dg


def integrate(init: Union[State, PoleData], x_end: float,
              cfg: Optional[IntegratorConfig] = None,
              grid: Optional[Sequence[float]] = None) -> Trajectory:
    """Integrate to x_end, vaulting every pole along the way.

    init may be a State or a PoleData (the start is then the series seed
    one restart_offset from the pole, on the x_end side).  Samples are
    accepted steps plus cubic-Hermite dense output at the requested grid
    points; grid points falling inside a vaulted interval are evaluated
    from the Laurent series.  Deterministic for fixed inputs.
    """
    cfg = cfg or IntegratorConfig()
    if isinstance(init, PoleData):
        side = "left" if x_end < init.p else "right"
        start = seed_from_pole(init, side, cfg)
    else:
        start = init
    if x_end == start.x:
        raise ValueError("x_end coincides with the start")
    d = 1.0 if x_end > start.x else -1.0

    gridpts: list[float] = []
    if grid is not None:
        gridpts = sorted((g for g in grid if (g - start.x) * d > 0.0),
                         reverse=(d < 0))
    gi = 0

    x, y, dy = start.x, start.y, start.dy
    samples: list[tuple[State, float]] = [(start, _hamiltonian_xyd(x, y, dy))]
    poles: list[PoleData] = []
    fits: list[PoleFit] = []
    tail: list[State] = [start]
    h_step = cfg.h_init * d
    facold = 1e-4

    def emit(st: State) -> None:
        samples.append((st, hamiltonian(st)))

    while (x_end - x) * d > 0.0:
        clamped = False
        if (x + h_step - x_end) * d > 0.0:
            h_step = x_end - x
            clamped = True
        if cfg.max_step is not None and abs(h_step) > cfg.max_step:
            h_step = cfg.max_step * d
            clamped = False
        if abs(h_step) < _H_MIN:
            raise StepUnderflow(f"step size {h_step} below {_H_MIN}")
        y5, d5, ey, ed = _rk_attempt(x, y, dy, h_step)
        err = _error_norm(y, dy, y5, d5, ey, ed, cfg.rtol, cfg.atol)
        if math.isnan(err):
            h_step *= 0.1
            continue
        if err > 1.0:
            h_step *= max(_MIN_FACTOR, min(1.0, _SAFETY * err ** -0.2))
            continue

        x_new = x_end if clamped else x + h_step
        while gi < len(gridpts) and (gridpts[gi] - x) * d > 0.0 and (x_new - gridpts[gi]) * d > 0.0:
            g = gridpts[gi]
            yg, dg = _hermite(x, y, dy, x_new, y5, d5, g)
            emit(State(g, yg, dg))
            gi += 1
        st_new = State(x_new, y5, d5)
        emit(st_new)
        tail.append(st_new)
        if len(tail) > 600:
            del tail[0]

        fac = _SAFETY * (err ** -_EXPO if err > 0.0 else _MAX_FACTOR) * facold ** _BETA
        facold = max(err, 1e-4)
        h_step = (x_new - x) * max(_MIN_FACTOR, min(_MAX_FACTOR, fac)) if clamped \
            else h_step * max(_MIN_FACTOR, min(_MAX_FACTOR, fac))
        x, y, dy = x_new, y5, d5

        if abs(y) >= cfg.y_detect:
            fit = fit_pole(tail, cfg)
            poles.append(fit.data)
            fits.append(fit)
            if len(poles) > cfg.max_poles:
                raise MaxPolesExceeded(f"more than {cfg.max_poles} poles crossed")
            x_restart = fit.data.p + cfg.restart_offset * d
            while gi < len(gridpts) and (gridpts[gi] - x) * d > 0.0 \
                    and (x_restart - gridpts[gi]) * d > 0.0:
                g = gridpts[gi]
                if g == fit.data.p:
                    # grid point exactly on the pole: report the series value
                    # a hair beyond it rather than failing
                    near = laurent_eval(fit.data, cfg.series_degree, g + 1e-9 * d)
                    emit(State(g, near.y, near.dy))
                else:
                    emit(laurent_eval(fit.data, cfg.series_degree, g))
                gi += 1
            if (x_restart - x_end) * d >= 0.0:
                break
            seed = seed_from_pole(fit.data, "left" if d < 0 else "right", cfg)
            emit(seed)
            tail = [seed]
            x, y, dy = seed.x, seed.y, seed.dy
            h_step = cfg.h_init * d
            facold = 1e-4

    return Trajectory(samples=samples, poles=poles, direction=int(d),
                      config_echo=cfg, pole_fits=fits)
