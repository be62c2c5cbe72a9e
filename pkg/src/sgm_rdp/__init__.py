"""Renyi differential privacy accounting for the Sampled Gaussian Mechanism."""

from .accountant import (
    RdpCurve,
    SgmParams,
    compute_log_a,
    compute_log_a_frac,
    compute_log_a_int,
    compute_rdp,
    rdp_curve,
)
from .budget import DEFAULT_ORDERS, DpGuarantee, DpTarget, calibrate_sigma, compose, to_dp
from .closed_form import BoundReport, bound_a1, bound_a2, closed_form_bound
from .errors import Infeasible, InvalidDelta, InvalidOrder, NonConvergence, ToleranceNotMet

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "DEFAULT_ORDERS",
    "DpGuarantee",
    "DpTarget",
    "Infeasible",
    "InvalidDelta",
    "InvalidOrder",
    "NonConvergence",
    "RdpCurve",
    "SgmParams",
    "ToleranceNotMet",
    "bound_a1",
    "bound_a2",
    "calibrate_sigma",
    "closed_form_bound",
    "compose",
    "compute_log_a",
    "compute_log_a_frac",
    "compute_log_a_int",
    "compute_rdp",
    "rdp_curve",
    "to_dp",
]
