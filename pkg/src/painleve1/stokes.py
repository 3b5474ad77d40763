"""Stokes-multiplier data model, constraint algebra, and connection formulas.

A real solution of y'' = 6y^2 + x is parametrized by five Stokes
multipliers s_k, k = -2..2, subject to the cyclic constraint

    1 + s_k s_{k+1} = -i s_{k+3},    s_{k+5} = s_k,

and, for real solutions, the reality conditions conj(s2) = -s_{-2},
conj(s0) = -s0, conj(s1) = -s_{-1}.  The solution class as x -> -inf is
decided by |s2|: oscillatory (<1), separatrix (=1), singular (>1).  The
connection formulas map s2 to the asymptotic amplitude/phase constants
(a, phi) of the oscillatory family and (b, psi) of the singular family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DegenerateProduct, OutOfRegime
from .specfun import arg_gamma, reduce_angle

# coefficient of the amplitude in both connection phases: (19/8)ln2 + (5/8)ln3
PHASE_LOG_COEFF = (19.0 / 8.0) * math.log(2.0) + (5.0 / 8.0) * math.log(3.0)

CLASSIFY_TOL = 1e-9

_KEYS = ("s_m2", "s_m1", "s_0", "s_1", "s_2")


class SolutionClass(Enum):
    OSCILLATORY = "oscillatory"
    SEPARATRIX = "separatrix"
    SINGULAR = "singular"


@dataclass(frozen=True)
class StokesMultipliers:
    """The five multipliers s_{-2}..s_2, indexable cyclically (s_{k+5} = s_k)."""

    s_m2: complex
    s_m1: complex
    s_0: complex
    s_1: complex
    s_2: complex

    def __getitem__(self, k: int) -> complex:
        i = (k + 2) % 5
        return (self.s_m2, self.s_m1, self.s_0, self.s_1, self.s_2)[i]

    def to_json_dict(self) -> dict:
        return {key: [getattr(self, key).real, getattr(self, key).imag] for key in _KEYS}

    @classmethod
    def from_json_dict(cls, d: dict) -> "StokesMultipliers":
        return cls(*(complex(d[key][0], d[key][1]) for key in _KEYS))


@dataclass(frozen=True)
class OscParams:
    """Oscillatory connection constants: amplitude a >= 0, phase phi in (-pi, pi].

    phi_applicable is False when a = 0 (s2 = 0): the cosine term vanishes
    and the phase is undefined; phi is reported as 0 in that case.
    """

    a: float
    phi: float
    phi_applicable: bool = True


@dataclass(frozen=True)
class SingParams:
    """Singular connection constants: b real, psi in (-pi, pi]."""

    b: float
    psi: float


def complete_from_pair(s2: complex, sm2: complex) -> StokesMultipliers:
    """Complete (s2, s_m2) to all five multipliers.

    Uses s0 = i(1 + s2 s_m2), s1 = (i - s_m2)/(1 + s2 s_m2),
    s_m1 = (i - s2)/(1 + s2 s_m2).  Raises DegenerateProduct when
    1 + s2 s_m2 vanishes (the separatrix-adjacent case where the pair does
    not determine the remaining multipliers).
    """
    s2 = complex(s2)
    sm2 = complex(sm2)
    d = 1.0 + s2 * sm2
    if abs(d) <= 1e-12:
        raise DegenerateProduct("1 + s2*s_m2 vanishes; supply s1, s_m1 directly")
    s0 = 1j * d
    s1 = (1j - sm2) / d
    sm1 = (1j - s2) / d
    return StokesMultipliers(sm2, sm1, s0, s1, s2)


def constraint_residual(s: StokesMultipliers) -> float:
    """max_k |1 + s_k s_{k+1} + i s_{k+3}| over k = -2..2, indices mod 5."""
    return max(abs(1.0 + s[k] * s[k + 1] + 1j * s[k + 3]) for k in range(-2, 3))


def reality_residual(s: StokesMultipliers) -> float:
    """|conj s2 + s_m2| + |conj s0 + s0| + |conj s1 + s_m1| (0 for real solutions)."""
    return (abs(s.s_2.conjugate() + s.s_m2)
            + abs(s.s_0.conjugate() + s.s_0)
            + abs(s.s_1.conjugate() + s.s_m1))


def classify(s: StokesMultipliers, tol: float = CLASSIFY_TOL) -> SolutionClass:
    """Trichotomy by |s2|: <1 oscillatory, =1 separatrix, >1 singular."""
    r = abs(s.s_2)
    if abs(r - 1.0) <= tol:
        return SolutionClass.SEPARATRIX
    return SolutionClass.OSCILLATORY if r < 1.0 else SolutionClass.SINGULAR


def osc_params(s2: complex) -> OscParams:
    """Connection constants (a, phi) of the oscillatory family, |s2| < 1.

    a = -ln(1 - |s2|^2)/pi
    phi = arg s2 - ((19/8)ln2 + (5/8)ln3) a - arg Gamma(-ia/2) - pi/4
    """
    s2 = complex(s2)
    mod2 = abs(s2) ** 2
    if mod2 >= 1.0:
        raise OutOfRegime(f"|s2| = {abs(s2)} >= 1: not oscillatory")
    if mod2 == 0.0:
        return OscParams(0.0, 0.0, phi_applicable=False)
    a = -math.log1p(-mod2) / math.pi
    phi = (math.atan2(s2.imag, s2.real)
           - PHASE_LOG_COEFF * a
           - arg_gamma(complex(0.0, -a / 2.0))
           - math.pi / 4.0)
    return OscParams(a, reduce_angle(phi))


def sing_params(s2: complex) -> SingParams:
    """Connection constants (b, psi) of the singular family, |s2| > 1.

    b = ln(|s2|^2 - 1)/(2 pi)
    psi = (1/2) arg s2 + ((19/8)ln2 + (5/8)ln3) b + (1/2) arg Gamma(1/2 - ib) + pi/4
    """
    s2 = complex(s2)
    mod2 = abs(s2) ** 2
    if mod2 <= 1.0:
        raise OutOfRegime(f"|s2| = {abs(s2)} <= 1: not singular")
    b = math.log(mod2 - 1.0) / (2.0 * math.pi)
    psi = (0.5 * math.atan2(s2.imag, s2.real)
           + PHASE_LOG_COEFF * b
           + 0.5 * arg_gamma(complex(0.5, -b))
           + math.pi / 4.0)
    return SingParams(b, reduce_angle(psi))


def invert_osc(p: OscParams, arg_s2: float) -> complex:
    """s2 with |s2| = sqrt(1 - e^(-pi a)) and the given argument."""
    if p.a < 0.0:
        raise OutOfRegime(f"a = {p.a} < 0")
    mod = math.sqrt(-math.expm1(-math.pi * p.a))
    return complex(mod * math.cos(arg_s2), mod * math.sin(arg_s2))


def invert_sing(p: SingParams, arg_s2: float) -> complex:
    """s2 with |s2| = sqrt(1 + e^(2 pi b)) and the given argument."""
    mod = math.sqrt(1.0 + math.exp(2.0 * math.pi * p.b))
    return complex(mod * math.cos(arg_s2), mod * math.sin(arg_s2))


# Legacy constants (d, chi) and (rho, sigma) in the forms published before
# the sign corrections: chi carried +3pi/4 where -pi/4 is correct, sigma
# carried -pi/4 where +pi/4 is correct.  The *_corrected forms apply the
# correction and must agree with osc_params/sing_params identically.

def legacy_osc_corrected(s2: complex) -> tuple[float, float]:
    """(d^2, corrected chi): legacy oscillatory constants after the sign fix."""
    s2 = complex(s2)
    mod2 = abs(s2) ** 2
    if not 0.0 < mod2 < 1.0:
        raise OutOfRegime(f"|s2|^2 = {mod2} outside (0, 1)")
    d_sq = -math.log(1.0 - mod2) / math.pi
    chi = (math.atan2(s2.imag, s2.real)
           - PHASE_LOG_COEFF * d_sq
           - arg_gamma(complex(0.0, -d_sq / 2.0))
           + 3.0 * math.pi / 4.0)
    chi_corrected = chi - math.pi  # 3pi/4 -> -pi/4
    return d_sq, reduce_angle(chi_corrected)


def legacy_sing_corrected(s2: complex) -> tuple[float, float]:
    """(rho, corrected sigma): legacy singular constants after the sign fix."""
    s2 = complex(s2)
    mod2 = abs(s2) ** 2
    if mod2 <= 1.0:
        raise OutOfRegime(f"|s2|^2 = {mod2} <= 1")
    rho = math.log(mod2 - 1.0) / (2.0 * math.pi)
    sigma = (0.5 * math.atan2(s2.imag, s2.real)
             + PHASE_LOG_COEFF * rho
             + 0.5 * arg_gamma(complex(0.5, -rho))
             - math.pi / 4.0)
    sigma_corrected = sigma + math.pi / 2.0  # -pi/4 -> +pi/4
    return rho, reduce_angle(sigma_corrected)
