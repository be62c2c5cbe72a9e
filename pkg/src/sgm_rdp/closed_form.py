"""Closed-form RDP bound for the Sampled Gaussian Mechanism.

For q <= 1/5, sigma >= 4 and alpha satisfying two order conditions, one step
is (alpha, 2 q^2 alpha / sigma^2)-RDP. The bound comes from splitting A_alpha
at z0 = 1/2 + sigma^2 L, L = ln(1 + 1/(q (alpha - 1))), into a left part A1
(bounded unconditionally) and a right tail A2 (bounded under the conditions).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .accountant import SgmParams
from .errors import InvalidOrder

MAX_Q = 0.2
MIN_SIGMA = 4.0


@dataclass(frozen=True)
class BoundReport:
    eps_bound: Optional[float]
    cond_range: bool
    cond_alpha1: bool
    cond_alpha2: bool
    L: float
    z0: float

    @property
    def holds(self) -> bool:
        return self.cond_range and self.cond_alpha1 and self.cond_alpha2

    @property
    def r0(self) -> float:
        return math.exp(self.L)


def _log_term(q: float, alpha: float) -> float:
    if q == 0.0:
        return math.inf
    return math.log1p(1.0 / (q * (alpha - 1.0)))


def alpha1_rhs(params: SgmParams, alpha: float) -> float:
    """Right side of the first order condition, sigma^2 L / 2 - 2 ln sigma."""
    s = params.sigma
    return 0.5 * s * s * _log_term(params.q, alpha) - 2.0 * math.log(s)


def alpha2_rhs(params: SgmParams, alpha: float) -> float:
    """Right side of the second order condition, evaluated at ``alpha``."""
    q, s = params.q, params.sigma
    if q == 0.0:
        return math.inf
    L = _log_term(q, alpha)
    num = 0.5 * s * s * L * L - math.log(5.0) - 2.0 * math.log(s)
    den = L + math.log(q * alpha) + 1.0 / (2.0 * s * s)
    # L + ln(q alpha) = ln(q alpha + alpha / (alpha - 1)) > 0
    if not den > 0.0:
        raise RuntimeError(f"non-positive denominator {den!r} in order condition")
    return num / den


def _conditions(params: SgmParams, alpha: float) -> tuple[bool, bool, bool]:
    cond_range = params.q <= MAX_Q and params.sigma >= MIN_SIGMA
    cond1 = 1.0 < alpha <= alpha1_rhs(params, alpha)
    cond2 = alpha <= alpha2_rhs(params, alpha)
    return cond_range, cond1, cond2


def closed_form_bound(params: SgmParams, alpha: float) -> BoundReport:
    """Evaluate the closed-form bound with every hypothesis checked.

    ``eps_bound`` is None unless all three conditions hold.
    """
    if not alpha > 1.0:
        raise InvalidOrder(f"order must exceed 1, got {alpha!r}")
    q, s = params.q, params.sigma
    L = _log_term(q, alpha)
    z0 = 0.5 + s * s * L
    cond_range, cond1, cond2 = _conditions(params, alpha)
    eps = 2.0 * q * q * alpha / (s * s) if (cond_range and cond1 and cond2) else None
    return BoundReport(eps, cond_range, cond1, cond2, L, z0)


def bound_a1(params: SgmParams, alpha: float) -> float:
    """Unconditional bound on the part of A_alpha left of z0."""
    q, s = params.q, params.sigma
    return 1.0 + q * q * alpha * (alpha - 1.0) * math.expm1(1.0 / (s * s))


def bound_a2(params: SgmParams, alpha: float) -> Optional[float]:
    """Bound on the tail of A_alpha right of z0; None outside its hypotheses."""
    if not alpha > 1.0:
        raise InvalidOrder(f"order must exceed 1, got {alpha!r}")
    if not all(_conditions(params, alpha)):
        return None
    q, s = params.q, params.sigma
    return 0.9 * q * q * alpha * (alpha - 1.0) / (s * s)


def max_feasible_order(params: SgmParams, orders) -> Optional[float]:
    """Largest order in ``orders`` at which the closed-form bound applies."""
    ok = [a for a in orders if closed_form_bound(params, a).eps_bound is not None]
    return max(ok) if ok else None
