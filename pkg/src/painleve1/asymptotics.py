"""Asymptotic families of real Painleve I transcendents as x -> -inf.

Oscillatory family (amplitude a, phase constant phi):

    theta(x) = (4*24^(1/4)/5)(-x)^(5/4) - (5a/8) ln(-x) + phi
    y(x) ~ -sqrt(-x/6) + sqrt(a) (-24x)^(-1/8) cos theta
    H(x) ~ -4(-x/6)^(3/2) + a(-3x/2)^(1/4) + sqrt(a) (-24x)^(-3/8) sin theta

Singular family (b, psi), valid away from the poles where sin omega = 0:

    omega(x) = (2*24^(1/4)/5)(-x)^(5/4) + (5b/8) ln(-x) + psi
    y(x) ~ -sqrt(-x/6) + sqrt(-x) / ((sqrt(6)/3) sin^2 omega)
    H(x) ~ -4(-x/6)^(3/2) - b(-24x)^(1/4) - (-3x/2)^(1/4) cot omega

predict_poles solves omega(x_n) = n pi by Newton; near x_n the Hamiltonian
behaves like 1/(x - x_n) with residue exactly 1.

Only the leading-order families above are implemented.  Full expansions in
descending powers (with harmonics of the phase) exist beyond these leading
terms but are out of scope; the comparison harness measures the leading
error decay instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import NoConvergence, NonRealCorrection
from .stokes import OscParams, SingParams

ROOT4_24 = 24.0 ** 0.25
OSC_FREQ = 4.0 * ROOT4_24 / 5.0     # coefficient of (-x)^(5/4) in theta
SING_FREQ = 2.0 * ROOT4_24 / 5.0    # coefficient of (-x)^(5/4) in omega

# Excluded pole neighborhood: |sin omega| below this flags the value as
# unreliable.  0.1 keeps the correction term bounded by 100x its midcell
# size while retaining >93% of each cell.
DEFAULT_MASK_EPS = 0.1


@dataclass(frozen=True)
class AsymEval:
    """One asymptotic evaluation: y and H, the unwrapped phase, and (in the
    singular case) the pole proximity |sin omega| with a reliability flag."""

    x: float
    y: float
    h: float
    phase: float
    pole_proximity: Optional[float] = None
    reliable: bool = True


def _check_x(x: float) -> None:
    if not x < 0.0:
        raise ValueError(f"asymptotic formulas require x < 0, got {x}")


def phase_osc(x: float, p: OscParams) -> float:
    """theta(x), unwrapped."""
    _check_x(x)
    return OSC_FREQ * (-x) ** 1.25 - (5.0 * p.a / 8.0) * math.log(-x) + p.phi


def _osc_eval(x: float, p: OscParams) -> AsymEval:
    theta = phase_osc(x, p)
    sqrt_a = math.sqrt(p.a)
    y = -math.sqrt(-x / 6.0) + sqrt_a * (-24.0 * x) ** -0.125 * math.cos(theta)
    h = (-4.0 * (-x / 6.0) ** 1.5
         + p.a * (-1.5 * x) ** 0.25
         + sqrt_a * (-24.0 * x) ** -0.375 * math.sin(theta))
    return AsymEval(x=x, y=y, h=h, phase=theta)


def osc_y(x: float, p: OscParams) -> AsymEval:
    """Oscillatory asymptotic evaluation (y in the .y field)."""
    return _osc_eval(x, p)


def osc_h(x: float, p: OscParams) -> AsymEval:
    """Oscillatory Hamiltonian asymptotic evaluation (in the .h field)."""
    return _osc_eval(x, p)


def phase_sing(x: float, p: SingParams) -> float:
    """omega(x), unwrapped."""
    _check_x(x)
    return SING_FREQ * (-x) ** 1.25 + (5.0 * p.b / 8.0) * math.log(-x) + p.psi


def sing_phase_derivative(x: float, p: SingParams) -> float:
    """d omega/dx = -(24^(1/4)/2)(-x)^(1/4) + (5b/8)/x."""
    _check_x(x)
    return -(ROOT4_24 / 2.0) * (-x) ** 0.25 + 5.0 * p.b / (8.0 * x)


def _sing_eval(x: float, p: SingParams, mask_eps: float) -> AsymEval:
    omega = phase_sing(x, p)
    s = math.sin(omega)
    prox = abs(s)
    reliable = prox >= mask_eps
    if prox == 0.0:
        y = math.inf
        h = math.inf
    else:
        y = -math.sqrt(-x / 6.0) + math.sqrt(-x) / ((math.sqrt(6.0) / 3.0) * s * s)
        h = (-4.0 * (-x / 6.0) ** 1.5
             - p.b * (-24.0 * x) ** 0.25
             - (-1.5 * x) ** 0.25 * (math.cos(omega) / s))
    return AsymEval(x=x, y=y, h=h, phase=omega, pole_proximity=prox, reliable=reliable)


def sing_y(x: float, p: SingParams, mask_eps: float = DEFAULT_MASK_EPS) -> AsymEval:
    """Singular asymptotic evaluation; .reliable is False within the mask."""
    return _sing_eval(x, p, mask_eps)


def sing_h(x: float, p: SingParams, mask_eps: float = DEFAULT_MASK_EPS) -> AsymEval:
    """Singular Hamiltonian asymptotic evaluation; same masking as sing_y."""
    return _sing_eval(x, p, mask_eps)


def separatrix_y(x: float, s1: complex, sm1: complex) -> float:
    """Separatrix solution with its exponentially small correction.

    Leading order of the pole-free branch, sqrt(-x/6), plus
    (s1 - s_m1)/(4*24^(1/4) sqrt(pi)) (-x)^(-1/8) exp(-(4*24^(1/4)/5)(-x)^(5/4)).
    The multiplier difference must be real (reality conditions make it
    2 Re s1); a residual imaginary part raises NonRealCorrection.
    """
    _check_x(x)
    diff = complex(s1) - complex(sm1)
    if abs(diff.imag) > 1e-10:
        raise NonRealCorrection(f"Im(s1 - s_m1) = {diff.imag}")
    amp = diff.real / (4.0 * ROOT4_24 * math.sqrt(math.pi))
    return (math.sqrt(-x / 6.0)
            + amp * (-x) ** -0.125 * math.exp(-OSC_FREQ * (-x) ** 1.25))


def predict_poles(p: SingParams, n_lo: int, n_hi: int) -> list[tuple[int, float]]:
    """Pole locations x_n of the singular family: omega(x_n) = n pi.

    Newton from the b = 0 closed form x = -((5(n pi - psi))/(2*24^(1/4)))^(4/5),
    polished to |omega(x_n) - n pi| < 1e-10.  Returns (n, x_n) pairs with
    x_n strictly decreasing in n.
    """
    out: list[tuple[int, float]] = []
    for n in range(n_lo, n_hi + 1):
        target = n * math.pi
        lead = target - p.psi
        if lead <= 0.0:
            raise NoConvergence(f"n = {n} places the pole outside x < 0")
        x = -((5.0 * lead) / (2.0 * ROOT4_24)) ** 0.8
        converged = False
        for _ in range(50):
            f = phase_sing(x, p) - target
            x_new = x - f / sing_phase_derivative(x, p)
            if x_new >= 0.0:
                x_new = 0.5 * x
            if abs(x_new - x) <= 1e-13 * abs(x):
                x = x_new
                converged = True
                break
            x = x_new
        if not converged or abs(phase_sing(x, p) - target) >= 1e-10:
            raise NoConvergence(f"pole n = {n} did not converge")
        out.append((n, x))
    for (_, xa), (_, xb) in zip(out, out[1:]):
        if not xb < xa:
            raise NoConvergence("predicted poles are not strictly decreasing")
    return out
