"""Exception hierarchy shared by all painleve1 modules."""


class Painleve1Error(Exception):
    """Base class for all numerical and domain errors raised by this package."""


class PoleOfGamma(Painleve1Error):
    """Argument of log_gamma within 1e-12 of a nonpositive integer."""


class DegenerateProduct(Painleve1Error):
    """1 + s2*s_m2 vanishes; the pair does not determine s0, s1, s_m1."""


class OutOfRegime(Painleve1Error):
    """|s2| on the wrong side of 1 for the requested connection formula."""


class NonRealCorrection(Painleve1Error):
    """s1 - s_m1 has a nonnegligible imaginary part in the separatrix formula."""


class NoConvergence(Painleve1Error):
    """Newton iteration failed to converge."""


class DegreeTooSmall(Painleve1Error):
    """Laurent truncation degree below the minimum (4)."""


class AtPole(Painleve1Error):
    """Laurent series evaluated exactly at its pole."""


class StepUnderflow(Painleve1Error):
    """Adaptive step size fell below 1e-14."""


class FitIllConditioned(Painleve1Error):
    """Pole fit lacks usable samples, or the blowup has the wrong sign."""


class MaxPolesExceeded(Painleve1Error):
    """Safety bound on pole crossings per integration exceeded."""


class InsufficientCells(Painleve1Error):
    """Too few oscillation cells or poles for parameter fitting."""


class EmptyAfterMask(Painleve1Error):
    """Pole-proximity mask left fewer than 10 comparison points."""
