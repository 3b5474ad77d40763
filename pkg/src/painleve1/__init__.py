"""Real Painleve I transcendents: pole-vaulting integration, Stokes
connection formulas, and asymptotic verification at desk scale."""

from .errors import (AtPole, DegenerateProduct, DegreeTooSmall, EmptyAfterMask,
                     FitIllConditioned, InsufficientCells, MaxPolesExceeded,
                     NoConvergence, NonRealCorrection, OutOfRegime,
                     Painleve1Error, PoleOfGamma, StepUnderflow)
from .specfun import arg_gamma, gamma, log_gamma, reduce_angle
from .stokes import (OscParams, SingParams, SolutionClass, StokesMultipliers,
                     classify, complete_from_pair, constraint_residual,
                     invert_osc, invert_sing, osc_params, reality_residual,
                     sing_params)
from .asymptotics import (AsymEval, osc_h, osc_y, phase_osc, phase_sing,
                          predict_poles, separatrix_y, sing_h, sing_y)
from .ode import (IntegratorConfig, PoleData, State, Trajectory,
                  detect_and_fit_pole, hamiltonian, integrate, laurent_coeffs,
                  laurent_eval, rhs, seed_from_pole, step)
from .harness import (CompareReport, Preset, appendix_b_stokes, fit_params,
                      run_compare, zero_ic_preset, zero_pole_preset)

__version__ = "0.1.0"

__all__ = [
    "AsymEval", "AtPole", "CompareReport", "DegenerateProduct", "DegreeTooSmall",
    "EmptyAfterMask", "FitIllConditioned", "InsufficientCells", "IntegratorConfig",
    "MaxPolesExceeded", "NoConvergence", "NonRealCorrection", "OscParams",
    "OutOfRegime", "Painleve1Error", "PoleData", "PoleOfGamma", "Preset",
    "SingParams", "SolutionClass", "State", "StepUnderflow", "StokesMultipliers",
    "Trajectory", "appendix_b_stokes", "arg_gamma", "classify",
    "complete_from_pair", "constraint_residual", "detect_and_fit_pole",
    "fit_params", "gamma", "hamiltonian", "integrate", "invert_osc",
    "invert_sing", "laurent_coeffs", "laurent_eval", "log_gamma", "osc_h",
    "osc_params", "osc_y", "phase_osc", "phase_sing", "predict_poles",
    "reality_residual", "reduce_angle", "rhs", "run_compare", "seed_from_pole",
    "separatrix_y", "sing_h", "sing_params", "sing_y", "step",
    "zero_ic_preset", "zero_pole_preset",
]
