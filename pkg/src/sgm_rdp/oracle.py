"""Independent numerical checks of the accountant.

Direct adaptive quadrature of A_alpha and B_alpha, a seeded Monte Carlo
estimate of A_alpha, and a pointwise check of the inequality behind
A_alpha >= B_alpha. None of this shares code with the series evaluation in
:mod:`sgm_rdp.accountant`.

The quadrature integrates the excess over 1 rather than the moment itself.
With w(z) = (1 - q) + q mu1(z)/mu0(z) and E_{mu0}[w] = 1,

    E_{mu0}[w^b] - 1 = E_{mu0}[w^b - 1 - b (w - 1)],

and the bracket is non-negative for b > 1 (A_alpha, b = alpha) and for
b < 0 (B_alpha, b = 1 - alpha). This keeps full relative precision in
A_alpha - 1, which is what ln A_alpha needs when it is tiny.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .accountant import SgmParams
from .errors import InvalidOrder, ToleranceNotMet

# 7-point Gauss / 15-point Kronrod pair on [-1, 1].
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

KRONROD_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes (0-based 1, 3, ..., 13).
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])

MAX_DEPTH = 60
MAX_PANELS = 50_000
_LOG_NORM = 0.5 * math.log(2.0 * math.pi)
_SERIES_TERMS = 64


@dataclass(frozen=True)
class QuadratureResult:
    """Value of A_alpha or B_alpha from quadrature.

    ``value`` may overflow to inf for extreme parameters; ``log_value`` is
    always finite and is what ratio checks should use.
    """

    value: float
    est_error: float
    evaluations: int
    log_value: float


class Panel(NamedTuple):
    neg_err: float  # heap key: largest error first
    a: float
    b: float
    depth: int
    shift: float  # panel integral = exp(shift) * kronrod
    kronrod: float
    error: float  # in units of exp(shift)


def _exp_or_inf(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _check(params: SgmParams, alpha: float, tol: float) -> None:
    if not alpha > 1.0:
        raise InvalidOrder(f"order must exceed 1, got {alpha!r}")
    if not tol > 0.0:
        raise ValueError("tol must be positive")


def _log_excess(log_ratio: np.ndarray, q: float, b: float) -> np.ndarray:
    """ln(w^b - 1 - b (w - 1)) with w = 1 + q (e^log_ratio - 1)."""
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        t = q * np.expm1(log_ratio)
        log_w = np.logaddexp(math.log1p(-q), math.log(q) + log_ratio)
        out = np.empty_like(log_ratio)

        small = np.abs(t) * (abs(b) + 1.0) <= 0.5
        if small.any():
            ts = t[small]
            # sum_{k>=2} C(b, k) t^k, ratio of consecutive terms <= 1/2
            coef = b * (b - 1.0) / 2.0
            power = ts * ts
            total = coef * power
            for k in range(2, _SERIES_TERMS):
                coef *= (b - k) / (k + 1.0)
                power = power * ts
                total = total + coef * power
            out[small] = np.log(total)

        big = ~small
        if big.any():
            lw = log_w[big]
            tb = t[big]
            lpow = b * lw
            direct = lpow < 700.0
            res = np.empty_like(lw)
            if direct.any():
                res[direct] = np.log(np.expm1(lpow[direct]) - b * tb[direct])
            far = ~direct
            if far.any():
                # w^b dominates: ln f = L + ln(1 - (1 + b t) e^-L), here b > 1.
                lr = log_ratio[big][far]
                log_lin = np.where(
                    np.isfinite(tb[far]),
                    np.log1p(b * tb[far]),
                    math.log(b) + math.log(q) + lr,
                )
                res[far] = lpow[far] + np.log1p(-np.exp(log_lin - lpow[far]))
            out[big] = res
    return out


def _log_integrand(z: np.ndarray, params: SgmParams, b: float) -> np.ndarray:
    s2 = params.sigma ** 2
    log_mu0 = -z * z / (2.0 * s2) - math.log(params.sigma) - _LOG_NORM
    log_ratio = (2.0 * z - 1.0) / (2.0 * s2)
    return log_mu0 + _log_excess(log_ratio, params.q, b)


def _integrate_log(log_f, lo: float, hi: float, n_init: int, tol: float):
    """Global adaptive G7-K15 quadrature of exp(log_f) over [lo, hi].

    The integrand must be non-negative. Each panel is evaluated as
    exp(max log) times a scaled sum, so huge or tiny magnitudes are fine.
    Returns (log integral, log error estimate, evaluations).
    """
    evaluations = 0

    def panel(a: float, b: float, depth: int) -> Panel:
        nonlocal evaluations
        half = 0.5 * (b - a)
        g = log_f(0.5 * (a + b) + half * KRONROD_NODES)
        evaluations += 15
        shift = float(np.max(g))
        if shift == -math.inf:
            return Panel(math.inf, a, b, depth, -math.inf, 0.0, 0.0)
        vals = np.exp(g - shift)
        k = half * float(vals @ KRONROD_WEIGHTS)
        gs = half * float(vals @ GAUSS_WEIGHTS)
        err = abs(k - gs)
        # error in absolute units is exp(shift) * err; keyed through logs
        key = -(shift + math.log(err)) if err > 0.0 else math.inf
        return Panel(key, a, b, depth, shift, k, err)

    edges = np.linspace(lo, hi, n_init + 1)
    heap = [panel(float(a), float(b), 0) for a, b in zip(edges[:-1], edges[1:])]
    heapq.heapify(heap)

    while True:
        shifts = np.array([p.shift for p in heap])
        top = float(np.max(shifts))
        w = np.exp(shifts - top)
        total = float(w @ np.array([p.kronrod for p in heap]))
        error = float(w @ np.array([p.error for p in heap]))
        if total <= 0.0:
            return -math.inf, -math.inf, evaluations
        if error <= tol * total:
            return top + math.log(total), top + math.log(error) if error > 0 else -math.inf, evaluations
        worst = heapq.heappop(heap)
        if worst.depth >= MAX_DEPTH or len(heap) >= MAX_PANELS:
            raise ToleranceNotMet(
                f"relative error {error / total:.3g} above tol {tol:g} "
                f"after {evaluations} evaluations"
            )
        mid = 0.5 * (worst.a + worst.b)
        heapq.heappush(heap, panel(worst.a, mid, worst.depth + 1))
        heapq.heappush(heap, panel(mid, worst.b, worst.depth + 1))


def _quad_moment(params: SgmParams, alpha: float, b: float, tol: float) -> QuadratureResult:
    q, sigma = params.q, params.sigma
    if q == 0.0:
        return QuadratureResult(1.0, 0.0, 0, 0.0)
    if q == 1.0:
        # mu = mu1; both moments equal exp((alpha^2 - alpha) / (2 sigma^2)).
        log_v = (alpha * alpha - alpha) / (2.0 * sigma * sigma)
        return QuadratureResult(_exp_or_inf(log_v), 0.0, 0, log_v)
    # Mass sits near 0, 1 and alpha with width sigma. K covers the Gaussian
    # tail to well below tol (the extra 10 sigma shrinks it by >e^-50).
    k_width = math.sqrt(2.0 * math.log(4.0 / tol)) + alpha / sigma + 10.0
    lo = min(0.0, alpha) - sigma * k_width
    hi = max(1.0, alpha) + sigma * k_width
    n_init = max(16, min(2000, int(math.ceil((hi - lo) / sigma))))
    log_excess, log_err, n_eval = _integrate_log(
        lambda z: _log_integrand(z, params, b), lo, hi, n_init, tol)
    log_value = float(np.logaddexp(0.0, log_excess))
    return QuadratureResult(_exp_or_inf(log_value), _exp_or_inf(log_err), n_eval, log_value)


def quad_a(params: SgmParams, alpha: float, tol: float = 1e-10) -> QuadratureResult:
    """A_alpha = E_{mu0}[(mu/mu0)^alpha] by adaptive quadrature."""
    _check(params, alpha, tol)
    return _quad_moment(params, alpha, alpha, tol)


def quad_b(params: SgmParams, alpha: float, tol: float = 1e-10) -> QuadratureResult:
    """B_alpha = E_{mu}[(mu0/mu)^alpha] = E_{mu0}[(mu/mu0)^(1 - alpha)]."""
    _check(params, alpha, tol)
    return _quad_moment(params, alpha, 1.0 - alpha, tol)


def mc_estimate_a(params: SgmParams, alpha: float, samples: int = 10**6,
                  seed: int = 0, chunk: int = 1 << 20) -> tuple[float, float]:
    """Monte Carlo mean and standard error of A_alpha under z ~ N(0, sigma^2)."""
    if samples < 10_000:
        raise ValueError("samples must be at least 1e4")
    q, sigma = params.q, params.sigma
    if q == 0.0:
        return 1.0, 0.0
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    remaining = samples
    while remaining:
        n = min(chunk, remaining)
        z = rng.normal(0.0, sigma, n)
        x = ((1.0 - q) + q * np.exp((2.0 * z - 1.0) / (2.0 * sigma * sigma))) ** alpha
        total += float(x.sum())
        total_sq += float((x * x).sum())
        remaining -= n
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    return mean, math.sqrt(var / samples)


def check_pointwise_lemma(u: float, v: float, q: float, alpha: float) -> bool:
    """Pointwise domination of the B-integrand by the A-integrand.

    With P = (1-q) u + q v and Q = (1-q) v + q u, checks
    v (P/v)^a + u (Q/u)^a >= P (v/P)^a + Q (u/Q)^a up to 1e-12 relative.
    Evaluated in log space so large alpha cannot overflow.
    """
    if not (u > 0 and v > 0):
        raise ValueError("u and v must be positive")
    p = (1.0 - q) * u + q * v
    qq = (1.0 - q) * v + q * u
    lu, lv, lp, lq = math.log(u), math.log(v), math.log(p), math.log(qq)
    lhs = np.logaddexp(lv + alpha * (lp - lv), lu + alpha * (lq - lu))
    rhs = np.logaddexp(lp + alpha * (lv - lp), lq + alpha * (lu - lq))
    return bool(rhs <= lhs + math.log1p(1e-12))


class Fixture(NamedTuple):
    q: float
    sigma: float
    alpha: float
    value: float
    tol: float


def write_fixtures(path: str | Path, records: Iterable[Fixture]) -> None:
    """One whitespace-separated line per record: q sigma alpha value tol."""
    lines = ["# q sigma alpha value tol"]
    lines += [" ".join(repr(float(x)) for x in r) for r in records]
    Path(path).write_text("\n".join(lines) + "\n")


def read_fixtures(path: str | Path) -> list[Fixture]:
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append(Fixture(*map(float, line.split())))
    return out
