"""Eigenvalue-free threshold arithmetic.

Given the three tail bounds (field size beta, Kato-part size omega1, virial
size omega2) the operator has no eigenvalues above

    Lambda = (beta + omega1 + sqrt((beta + omega1)^2 + 2 omega2))^2 / 4.

Splitting the potential proportionally and optimizing the split always
lands on one of the two endpoint splittings, so the optimizer evaluates
exactly those.  Specializations cover spin-coupled (Pauli), relativistic
(Dirac) and flux-line operators.
"""

import math
from dataclasses import dataclass, field as dataclass_field
from typing import Union

import numpy as np

from .errors import RejectedInput

_EQUAL_TOL = 1e-12


def _check_bound(name, value):
    v = float(value)
    if math.isnan(v) or v < 0:
        raise RejectedInput(f"{name} must be a nonnegative real, got {value}")
    return v


@dataclass
class ThresholdReport:
    """Threshold value with its inputs and how the split was chosen.

    split_parameter is 0.0 or 1.0 for the winning endpoint splitting (the
    proportion of the potential routed to the Kato slot), or "constant"
    when both endpoints agree.  provenance records where each input came
    from (estimator, manual entry, ...).
    """

    beta: float
    omega1: float
    omega2: float
    lam: float
    split_parameter: Union[float, str] = "constant"
    provenance: dict = dataclass_field(default_factory=dict)

    def recompute(self) -> float:
        """Threshold recomputed from the stored inputs.

        For reports produced by optimize_split this is the unoptimized
        value, an upper bound for the stored endpoint optimum.
        """
        return compute_lambda(self.beta, self.omega1, self.omega2)


def compute_lambda(beta, omega1, omega2) -> float:
    """Threshold (beta + omega1 + sqrt((beta + omega1)^2 + 2 omega2))^2 / 4.

    Any infinite input yields +inf: no exclusion window.  Monotone
    non-decreasing in each argument, and scales as Lambda(t b, t w1, t^2 w2)
    = t^2 Lambda(b, w1, w2).
    """
    b = _check_bound("beta", beta)
    w1 = _check_bound("omega1", omega1)
    w2 = _check_bound("omega2", omega2)
    if math.isinf(b) or math.isinf(w1) or math.isinf(w2):
        return math.inf
    s = b + w1
    return 0.25 * (s + math.sqrt(s * s + 2.0 * w2)) ** 2


def bang_bang_g(b, c, s):
    """g(s) = b + s + sqrt((b + s)^2 + 2 c (1 - s)) on 0 <= s <= 1.

    The minimum over s is attained at an endpoint: at s = 0 when c < 2b + 2,
    at s = 1 when c > 2b + 2, and g is constant when c = 2b + 2.  s may be
    an array for grid sweeps.
    """
    b = _check_bound("b", b)
    c = _check_bound("c", c)
    arr = np.asarray(s, dtype=float)
    if np.any((arr < 0.0) | (arr > 1.0)):
        raise RejectedInput(f"s must lie in [0, 1], got {s}")
    t = b + arr
    out = t + np.sqrt(t * t + 2.0 * c * (1.0 - arr))
    return float(out) if np.ndim(s) == 0 else out


def optimize_split(beta, omega1, omega2) -> ThresholdReport:
    """Best threshold over proportional splittings of the potential.

    Evaluates the two endpoint splittings: all of the potential in the
    virial slot (inputs (beta, 0, omega2), split_parameter 0) or all of it
    in the Kato slot (inputs (beta, omega1, 0), split_parameter 1), and
    returns the smaller.  When they agree to within 1e-12 the report says
    "constant".  The winning endpoint matches the sign of
    omega2 - 2 omega1 (beta + omega1).
    """
    b = _check_bound("beta", beta)
    w1 = _check_bound("omega1", omega1)
    w2 = _check_bound("omega2", omega2)
    lam0 = compute_lambda(b, 0.0, w2)
    lam1 = compute_lambda(b, w1, 0.0)
    provenance = {"endpoint_0": lam0, "endpoint_1": lam1}
    if abs(lam0 - lam1) <= _EQUAL_TOL * max(1.0, abs(lam0), abs(lam1)):
        return ThresholdReport(b, w1, w2, lam0, "constant", provenance)
    if lam0 < lam1:
        return ThresholdReport(b, w1, w2, lam0, 0.0, provenance)
    return ThresholdReport(b, w1, w2, lam1, 1.0, provenance)


def pauli_threshold(beta, omega) -> float:
    """Eigenvalue-free threshold for the 2d spin-coupled operator.

    omega is the larger of the two one-sided virial bounds of the field.
    Returns min(4 beta^2, (beta + omega + sqrt((beta + omega)^2 + 2 omega))^2 / 4).
    """
    b = _check_bound("beta", beta)
    w = _check_bound("omega", omega)
    if math.isinf(b) or math.isinf(w):
        return math.inf
    s = b + w
    return min(4.0 * b * b, 0.25 * (s + math.sqrt(s * s + 2.0 * w)) ** 2)


def dirac_window(beta, omega, m) -> tuple:
    """Symmetric interval outside which the 2d Dirac operator has no eigenvalues.

    Eigenvalues E satisfy E^2 - m^2 <= Lambda_P, so the excluded region is
    |E| > sqrt(Lambda_P + m^2); returns (-sqrt(..), +sqrt(..)).
    """
    mm = _check_bound("m", m)
    edge = math.sqrt(pauli_threshold(beta, omega) + mm * mm)
    return (-edge, edge)


def aharonov_bohm_threshold(omega1, omega2) -> float:
    """Threshold for flux-line operators: the beta = 0 specialization."""
    return compute_lambda(0.0, omega1, omega2)
