"""Composition, conversion to (eps, delta)-DP and noise calibration."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .accountant import RdpCurve, SgmParams, rdp_curve
from .errors import Infeasible, InvalidDelta

DEFAULT_ORDERS: tuple[float, ...] = (
    (1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 3.0, 3.5, 4.0, 4.5)
    + tuple(float(a) for a in range(5, 65))
    + (128.0, 256.0)
)

SIGMA_LO = 1e-2
SIGMA_HI = 1e4
SIGMA_MAX = 1e8
CALIBRATION_RTOL = 1e-4


@dataclass(frozen=True)
class DpTarget:
    eps: float
    delta: float

    def __post_init__(self):
        if not self.eps > 0.0:
            raise ValueError(f"target eps must be positive, got {self.eps!r}")
        if not 0.0 < self.delta < 1.0:
            raise InvalidDelta(f"delta must lie in (0, 1), got {self.delta!r}")


@dataclass(frozen=True)
class DpGuarantee:
    eps: float
    delta: float
    best_order: float


def compose(curve: RdpCurve, steps: int) -> RdpCurve:
    """RDP of ``steps`` sequential runs: eps adds up per order."""
    if steps < 1:
        raise ValueError("steps must be a positive integer")
    return RdpCurve(tuple((a, steps * e) for a, e in curve.points), curve.steps * steps)


def to_dp(curve: RdpCurve, delta: float) -> DpGuarantee:
    """Tightest (eps, delta) over the curve via eps(a) + ln(1/delta) / (a - 1).

    Ties go to the smallest order.
    """
    if not 0.0 < delta < 1.0:
        raise InvalidDelta(f"delta must lie in (0, 1), got {delta!r}")
    if not curve.points:
        raise ValueError("curve has no points")
    log_inv_delta = -math.log(delta)
    best_eps, best_order = math.inf, curve.points[0][0]
    for order, eps in curve.points:
        candidate = eps + log_inv_delta / (order - 1.0)
        if candidate < best_eps:
            best_eps, best_order = candidate, order
    return DpGuarantee(best_eps, delta, best_order)


def dp_eps(q: float, sigma: float, steps: int, delta: float,
           orders: Sequence[float] = DEFAULT_ORDERS) -> DpGuarantee:
    """Forward pipeline: per-step curve, composed ``steps`` times, converted."""
    curve = rdp_curve(SgmParams(q, sigma), orders)
    return to_dp(compose(curve, steps), delta)


def calibrate_sigma(q: float, steps: int, target: DpTarget,
                    orders: Optional[Sequence[float]] = None,
                    sigma_lo: float = SIGMA_LO, sigma_hi: float = SIGMA_HI,
                    sigma_max: float = SIGMA_MAX) -> float:
    """Smallest noise multiplier meeting ``target`` after ``steps`` steps.

    Bisects on log sigma to relative width 1e-4 and returns the feasible end,
    relying on eps being non-increasing in sigma. The upper end is widened
    by factors of 10 up to ``sigma_max`` before giving up.

    Raises:
        Infeasible: no sigma up to ``sigma_max`` meets the target.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q!r}")
    if steps < 1:
        raise ValueError("steps must be a positive integer")
    orders = tuple(DEFAULT_ORDERS if orders is None else orders)
    if not orders or min(orders) <= 1.0:
        raise ValueError("orders must be non-empty and all > 1")
    if q == 0.0:
        return sigma_lo

    def feasible(sigma: float) -> bool:
        return dp_eps(q, sigma, steps, target.delta, orders).eps <= target.eps

    if feasible(sigma_lo):
        return sigma_lo
    lo, hi = sigma_lo, sigma_hi
    while not feasible(hi):
        if hi >= sigma_max:
            raise Infeasible(
                f"target eps={target.eps} at delta={target.delta} not reachable "
                f"with sigma <= {hi:g} (q={q}, steps={steps})"
            )
        lo, hi = hi, hi * 10.0
    while hi / lo - 1.0 > CALIBRATION_RTOL:
        mid = math.sqrt(lo * hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi
