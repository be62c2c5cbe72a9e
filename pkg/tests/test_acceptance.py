"""Acceptance criteria, each at its stated tolerance and runtime limit.

The terminal summary (see conftest.py) prints one PASS/FAIL line per criterion.
"""

import io
import math
import time
from collections import defaultdict

import numpy as np
import pytest

from sgm_rdp import cli
from sgm_rdp.accountant import (
    SgmParams,
    compute_log_a,
    compute_log_a_frac,
    compute_log_a_int,
    compute_rdp,
    rdp_curve,
)
from sgm_rdp.budget import DEFAULT_ORDERS, DpTarget, calibrate_sigma, dp_eps
from sgm_rdp.closed_form import closed_form_bound
from sgm_rdp.oracle import check_pointwise_lemma, quad_a, quad_b
from sgm_rdp.plotting import max_orders_by_q
from sgm_rdp.sweep import read_csv

from conftest import ACCEPTANCE_RESULTS

ORACLE_Q = (0.01, 0.05, 0.1, 0.2)
ORACLE_SIGMA = (1.0, 4.0, 10.0)
ORACLE_ALPHA = (1.5, 2.5, 4.0, 8.0, 16.0, 32.0)


class Timer:
    def __init__(self, limit: float):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.2f}s, limit {self.limit}s"


@pytest.mark.acceptance("AC1 plain-Gaussian degeneration")
def test_ac1_plain_gaussian(record_property):
    worst = 0.0
    with Timer(1.0):
        for sigma in (0.5, 1.0, 2.0, 4.0, 10.0):
            for alpha in (1.5, 2.0, 3.0, 8.0, 32.0, 64.0):
                got = compute_rdp(SgmParams(1.0, sigma), alpha)
                want = alpha / (2 * sigma * sigma)
                worst = max(worst, abs(got - want) / want)
    record_property("detail", f"max rel err {worst:.1e}")
    assert worst <= 1e-10


@pytest.mark.acceptance("AC2 integer order two")
def test_ac2_order_two(record_property):
    worst = 0.0
    with Timer(1.0):
        for q in (0.001, 0.01, 0.1, 0.5):
            for sigma in (1.0, 4.0, 10.0):
                got = compute_log_a(SgmParams(q, sigma), 2)
                want = math.log1p(q * q * math.expm1(1 / sigma ** 2))
                worst = max(worst, abs(got - want))
    record_property("detail", f"max abs err {worst:.1e}")
    assert worst <= 1e-12


@pytest.mark.acceptance("AC3 fractional and integer paths agree")
def test_ac3_path_agreement(record_property):
    worst = 0.0
    with Timer(10.0):
        for q in (0.01, 0.1, 0.5):
            for sigma in (1.0, 4.0, 10.0):
                p = SgmParams(q, sigma)
                for alpha in range(2, 33):
                    exact = compute_log_a_int(p, alpha)
                    frac = compute_log_a_frac(p, float(alpha))
                    worst = max(worst, abs(frac - exact) / abs(exact))
    record_property("detail", f"max rel diff {worst:.1e}")
    assert worst <= 1e-9


@pytest.mark.acceptance("AC4 agreement with quadrature oracle")
def test_ac4_oracle_equivalence(record_property):
    worst = 0.0
    with Timer(120.0):
        for q in ORACLE_Q:
            for sigma in ORACLE_SIGMA:
                p = SgmParams(q, sigma)
                for alpha in ORACLE_ALPHA:
                    eps = compute_rdp(p, alpha)
                    ref = quad_a(p, alpha, tol=1e-10).log_value / (alpha - 1)
                    worst = max(worst, abs(eps - ref) / ref)
    record_property("detail", f"max rel diff {worst:.1e}")
    assert worst <= 1e-6


@pytest.mark.acceptance("AC5 A dominates B")
def test_ac5_a_dominates_b(record_property):
    margin = math.inf
    with Timer(120.0):
        for q in ORACLE_Q + (0.5,):
            for sigma in ORACLE_SIGMA:
                p = SgmParams(q, sigma)
                for alpha in ORACLE_ALPHA:
                    la = quad_a(p, alpha).log_value
                    lb = quad_b(p, alpha).log_value
                    # a >= b - 1e-9 a  <=>  ln a + ln(1 + 1e-9) >= ln b
                    assert la + math.log1p(1e-9) >= lb, (q, sigma, alpha)
                    margin = min(margin, la - lb)
    record_property("detail", f"min ln(A/B) {margin:.2e}")


@pytest.mark.acceptance("AC6 closed-form soundness")
def test_ac6_closed_form_soundness(record_property):
    ratios = []
    with Timer(60.0):
        for q in ORACLE_Q:
            for sigma in (4.0, 10.0):
                p = SgmParams(q, sigma)
                for alpha in range(2, 65):
                    rep = closed_form_bound(p, alpha)
                    if rep.eps_bound is None:
                        continue
                    exact = compute_rdp(p, alpha)
                    assert rep.eps_bound >= exact, (q, sigma, alpha)
                    ratios.append(rep.eps_bound / exact)
    assert ratios
    record_property(
        "detail",
        f"{len(ratios)} points, bound/exact ratio in [{min(ratios):.2f}, {max(ratios):.2f}]",
    )


@pytest.mark.acceptance("AC7 condition cutoffs and convergence")
def test_ac7_sweep_shape(tmp_path, record_property):
    qs = [float(f"{x:.6g}") for x in np.logspace(-4, math.log10(0.2), 20)]
    orders = list(range(2, 513))
    figure = tmp_path / "sweep.png"
    out = io.StringIO()
    argv = ["--quiet", "sweep", "--q", ",".join(map(repr, qs)), "--sigma", "4,10",
            "--orders", ",".join(map(str, orders)), "--plot", str(figure)]
    assert cli.main(argv, out=out) == 0
    assert figure.exists()
    rows = read_csv(out.getvalue())
    assert len(rows) == len(qs) * 2 * len(orders)

    # (a) the largest order passing both conditions never grows with q
    table = max_orders_by_q(rows)
    cutoffs = {}
    for sigma in (4.0, 10.0):
        series = [table[sigma][q][2] for q in qs]
        assert all(m is not None for m in series), sigma
        assert all(a >= b for a, b in zip(series, series[1:])), (sigma, series)
        cutoffs[sigma] = (series[0], series[-1])

    # (b) bound and exact curves close in on each other as q shrinks
    gaps = defaultdict(dict)
    for r in rows:
        if r.eps_bound is not None:
            gaps[(r.sigma, r.alpha)][r.q] = (r.eps_bound - r.eps_exact, r.eps_bound / r.eps_exact)
    checked = 0
    small_q_ratio = []
    for key, by_q in gaps.items():
        seq = [by_q[q] for q in qs if q in by_q]
        if len(seq) < 2:
            continue
        checked += 1
        diffs = [d for d, _ in seq]
        assert all(d >= 0 for d in diffs), key
        assert all(a <= b for a, b in zip(diffs, diffs[1:])), key
        small_q_ratio.append(seq[0][1])
    assert checked > 0
    record_property(
        "detail",
        "max alpha at q=1e-4..0.2: "
        + ", ".join(f"sigma={s:g}: {a:g}..{b:g}" for s, (a, b) in cutoffs.items())
        + f"; ratio at smallest q in [{min(small_q_ratio):.2f}, {max(small_q_ratio):.2f}]",
    )


@pytest.mark.acceptance("AC8 property suites")
def test_ac8_properties(record_property):
    rng = np.random.default_rng(8)
    with Timer(60.0):
        # monotonicity of eps in order, q and sigma
        violations = 0
        for _ in range(300):
            q = float(10 ** rng.uniform(-4, 0))
            sigma = float(10 ** rng.uniform(-0.3, 1.3))
            a1, a2 = sorted(float(x) for x in 1 + 10 ** rng.uniform(-1.5, 2, 2))
            p = SgmParams(q, sigma)
            e1, e2 = compute_rdp(p, a1), compute_rdp(p, a2)
            violations += e1 < 0 or e1 > e2 * (1 + 1e-9)
            q2 = min(1.0, q * float(10 ** rng.uniform(0, 1)))
            violations += compute_rdp(SgmParams(q2, sigma), a1) < e1 * (1 - 1e-9)
            s2 = sigma * float(10 ** rng.uniform(0, 1))
            violations += compute_rdp(SgmParams(q, s2), a1) > e1 * (1 + 1e-9)
        assert violations == 0

        # pointwise domination of the B integrand by the A integrand
        n = 100_000
        u = np.exp(rng.uniform(-10, 10, n))
        v = np.exp(rng.uniform(-10, 10, n))
        q = rng.uniform(0, 1, n)
        alpha = np.exp(rng.uniform(0, math.log(64.0), n))
        alpha[alpha <= 1.0] = np.nextafter(1.0, 2.0)
        bad = sum(
            not check_pointwise_lemma(float(a), float(b), float(c), float(d))
            for a, b, c, d in zip(u, v, q, alpha)
        )
        assert bad == 0

        # symmetric inequality within 1/r0 <= u/v <= r0
        m = 10_000
        qs = rng.uniform(0, 1, m)
        al = np.exp(rng.uniform(1e-9, math.log(64.0), m))
        r0 = 1 + 1 / (qs * (al - 1))
        vs = np.exp(rng.uniform(-5, 5, m))
        us = vs * np.exp(rng.uniform(-1, 1, m) * np.log(r0))
        y = (1 - qs) + qs * us / vs
        z = (1 - qs) + qs * vs / us
        lhs = vs * y ** al + us * z ** al
        rhs = (us + vs) + qs * qs * al * (al - 1) * (us * us / vs + vs * vs / us - (us + vs))
        assert int(np.sum(lhs > rhs * (1 + 1e-12))) == 0

        # x^2/y + y^2/x - (x + y) >= 0
        x = np.exp(rng.uniform(-14, 14, m))
        w = np.exp(rng.uniform(-14, 14, m))
        excess = x * x / w + w * w / x - (x + w)
        assert int(np.sum(excess < -1e-12 * (x + w))) == 0
    record_property("detail", "0 violations (900 monotonicity, 1e5 pointwise, 1e4 symmetric, 1e4 non-negativity)")


@pytest.mark.acceptance("AC9 calibration round trip")
def test_ac9_calibration(record_property):
    with Timer(10.0):
        target = dp_eps(0.01, 4.0, 1000, 1e-5, DEFAULT_ORDERS).eps
        sigma = calibrate_sigma(0.01, 1000, DpTarget(target, 1e-5), DEFAULT_ORDERS)
    err = abs(sigma - 4.0) / 4.0
    record_property("detail", f"sigma={sigma:.7f}, rel err {err:.1e}")
    assert err <= 1e-3


@pytest.mark.acceptance("AC10 performance")
def test_ac10_performance(record_property):
    times = []
    for q, sigma in [(0.01, 1.0), (0.01, 4.0), (0.001, 0.8), (0.1, 2.0), (0.5, 0.5), (0.2, 10.0)]:
        start = time.perf_counter()
        curve = rdp_curve(SgmParams(q, sigma), DEFAULT_ORDERS)
        times.append(time.perf_counter() - start)
        assert len(curve.points) == len(DEFAULT_ORDERS)
    total = sum(e["duration"] for e in ACCEPTANCE_RESULTS.values())
    record_property("detail", f"slowest curve {1000 * max(times):.1f} ms; acceptance total {total:.1f}s")
    assert max(times) < 0.1
    assert total < 300.0
