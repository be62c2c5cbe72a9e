"""Exact Renyi DP of the Sampled Gaussian Mechanism.

Everything works on the one-dimensional reduction: mu0 = N(0, sigma^2) versus
the mixture mu = (1 - q) N(0, sigma^2) + q N(1, sigma^2), with

    A_alpha = E_{z ~ mu0} [(mu(z) / mu0(z)) ** alpha],
    eps(alpha) = ln(A_alpha) / (alpha - 1).

A_alpha dominates the reverse moment B_alpha, so eps above is the RDP of the
mechanism at order alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidOrder, NonConvergence
from .logmath import NEG_INF, LogSum, log_add_exp, log_erfc

MAX_SERIES_TERMS = 10_000
# Terms are negligible once they sit this far below the running total.
_STOP_GAP = 60 * math.log(2.0)
# Partial sums kept for the alternating-tail acceleration.
_EULER_DEPTH = 16
_LOG_HALF = math.log(0.5)


@dataclass(frozen=True)
class SgmParams:
    """Sampling rate ``q`` and noise multiplier ``sigma`` of one SGM step.

    ``sigma`` is in units of the query's l2-sensitivity.
    """

    q: float
    sigma: float

    def __post_init__(self):
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"q must lie in [0, 1], got {self.q!r}")
        if not self.sigma > 0.0 or math.isinf(self.sigma):
            raise ValueError(f"sigma must be positive and finite, got {self.sigma!r}")


@dataclass(frozen=True)
class RdpCurve:
    """RDP guarantees at a set of orders, after ``steps`` compositions."""

    points: tuple[tuple[float, float], ...]
    steps: int = 1

    def __post_init__(self):
        object.__setattr__(self, "points", tuple((float(a), float(e)) for a, e in self.points))
        if self.steps < 1:
            raise ValueError("steps must be a positive integer")
        prev = 1.0
        for order, eps in self.points:
            if not order > prev:
                raise ValueError("orders must be > 1 and strictly increasing")
            if not eps >= 0.0:
                raise ValueError(f"eps must be non-negative, got {eps!r} at order {order}")
            prev = order

    @property
    def orders(self) -> list[float]:
        return [a for a, _ in self.points]

    @property
    def eps(self) -> list[float]:
        return [e for _, e in self.points]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]], steps: int = 1) -> RdpCurve:
        return cls(tuple(sorted(pairs)), steps)


def is_integer_order(alpha: float) -> bool:
    return float(alpha).is_integer()


def compute_log_a_int(params: SgmParams, alpha: int) -> float:
    """ln A_alpha for integer alpha >= 2 via the finite binomial expansion.

    A_alpha = sum_k C(alpha, k) (1-q)^(alpha-k) q^k exp((k^2 - k) / (2 sigma^2));
    every term is positive.
    """
    q, sigma = params.q, params.sigma
    alpha = int(alpha)
    if alpha < 2:
        raise InvalidOrder(f"integer order must be >= 2, got {alpha}")
    if q == 0.0:
        return 0.0
    two_var = 2.0 * sigma * sigma
    if q == 1.0:
        return (alpha * alpha - alpha) / two_var
    log_q = math.log(q)
    log_1mq = math.log1p(-q)
    log_a = NEG_INF
    log_coef = 0.0  # ln C(alpha, k), updated incrementally
    for k in range(alpha + 1):
        if k > 0:
            log_coef += math.log(alpha - k + 1) - math.log(k)
        term = log_coef + (alpha - k) * log_1mq + k * log_q + (k * k - k) / two_var
        log_a = log_add_exp(log_a, term)
    return log_a


def _euler_tail(partials: Sequence[float]) -> float:
    """Limit estimate of an alternating series from its last partial sums.

    Repeated pairwise averaging (the Euler transform in partial-sum form).
    """
    s = list(partials)
    while len(s) > 1:
        s = [0.5 * (a + b) for a, b in zip(s, s[1:])]
    return s[0]


def compute_log_a_frac(params: SgmParams, alpha: float) -> float:
    """ln A_alpha for real alpha > 1 via the two half-line binomial series.

    The real line is split at z1 = 1/2 + sigma^2 ln(1/q - 1), where
    (1 - q) mu0 = q mu1. Left of z1 the expansion is in powers of
    q mu1/mu0 over 1 - q, right of z1 in the reverse ratio; each term
    integrates in closed form against mu0 through erfc.

    Also valid at integer alpha, where both series terminate.
    """
    q, sigma = params.q, params.sigma
    if not alpha > 1.0:
        raise InvalidOrder(f"order must exceed 1, got {alpha!r}")
    if not 0.0 < q < 1.0:
        raise ValueError(f"fractional path needs 0 < q < 1, got {q!r}")

    log_q = math.log(q)
    log_1mq = math.log1p(-q)
    two_var = 2.0 * sigma * sigma
    z1 = 0.5 + sigma * sigma * (log_1mq - log_q)
    scale = 1.0 / (math.sqrt(2.0) * sigma)

    acc = LogSum()
    coef_sign, log_coef = 1, 0.0  # running C(alpha, k)
    # Tail bookkeeping, in units of e^tail_ref (the total when tracking began).
    tail_ref = None
    tail_sum = 0.0
    partials: list[float] = []
    prev_estimate = None

    for k in range(MAX_SERIES_TERMS):
        if k > 0:
            d = alpha - (k - 1)
            if d == 0.0:
                coef_sign = 0
            else:
                if d < 0:
                    coef_sign = -coef_sign
                log_coef += math.log(abs(d)) - math.log(k)

        if coef_sign == 0:
            log_s1 = log_s2 = NEG_INF
        else:
            j = alpha - k
            log_s1 = (log_coef + j * log_1mq + k * log_q + (k * k - k) / two_var
                      + _LOG_HALF + log_erfc((k - z1) * scale))
            log_s2 = (log_coef + k * log_1mq + j * log_q + (j * j - j) / two_var
                      + _LOG_HALF + log_erfc((z1 - j) * scale))
            acc.add(coef_sign, log_s1)
            acc.add(coef_sign, log_s2)

        if k <= alpha + 1:
            continue

        log_total = acc.log_value()
        if max(log_s1, log_s2) < log_total - _STOP_GAP:
            return log_total

        # Past alpha + 1 the terms alternate in sign. Near the split point the
        # binomial series decays only polynomially, so the plain stopping rule
        # can need ~1e5 terms; the Euler transform of the tail converges fast.
        if tail_ref is None:
            tail_ref = log_total
            continue
        u = coef_sign * (math.exp(log_s1 - tail_ref) + math.exp(log_s2 - tail_ref))
        tail_sum += u
        partials.append(tail_sum)
        if len(partials) > _EULER_DEPTH:
            partials.pop(0)
            # Estimate of A / e^tail_ref - 1.
            estimate = _euler_tail(partials)
            if prev_estimate is not None and abs(estimate - prev_estimate) < math.exp(-_STOP_GAP):
                return tail_ref + math.log1p(estimate)
            prev_estimate = estimate

    raise NonConvergence(
        f"fractional series for q={q}, sigma={sigma}, alpha={alpha} "
        f"did not converge in {MAX_SERIES_TERMS} terms"
    )


def compute_log_a(params: SgmParams, alpha: float) -> float:
    """ln A_alpha, routed to the binomial sum iff alpha is exactly integral."""
    if not alpha > 1.0:
        raise InvalidOrder(f"order must exceed 1, got {alpha!r}")
    if params.q == 0.0:
        return 0.0
    if params.q == 1.0:
        return (alpha * alpha - alpha) / (2.0 * params.sigma ** 2)
    if is_integer_order(alpha):
        return compute_log_a_int(params, int(alpha))
    return compute_log_a_frac(params, alpha)


def compute_rdp(params: SgmParams, alpha: float) -> float:
    """RDP epsilon of one SGM step at order ``alpha``.

    Raises:
        InvalidOrder: alpha <= 1.
        NonConvergence: the fractional series did not converge.
    """
    if not alpha > 1.0:
        raise InvalidOrder(f"order must exceed 1, got {alpha!r}")
    if params.q == 0.0:
        return 0.0
    if params.q == 1.0:
        return alpha / (2.0 * params.sigma ** 2)
    return max(compute_log_a(params, alpha) / (alpha - 1.0), 0.0)


def rdp_curve(params: SgmParams, orders: Iterable[float], steps: int = 1) -> RdpCurve:
    """Single-step RDP at each order, scaled by ``steps``."""
    orders = sorted(float(a) for a in orders)
    return RdpCurve(tuple((a, steps * compute_rdp(params, a)) for a in orders), steps)
