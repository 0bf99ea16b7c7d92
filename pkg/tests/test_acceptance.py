"""End-to-end acceptance checks for the secrecy-outage simulator.

Each test prints a single PASS/FAIL line naming the property it covers, so
the verbose pytest run doubles as an acceptance report. The checks combine
exact structural properties (dominance under common random numbers, the
untrusted-relay impossibility result) with statistical comparisons at
n = 10^5 samples.

One check, fdj-beats-fdr-at-low-rate, is expected to fail: under the
documented capacity-gap models the jamming penalty at the eavesdropper
never exceeds the rate cost of the extra hop protection, so the FDJ outage
event contains the FDR outage event for every target rate. The test states
the property honestly and is left red rather than weakened.
"""

import math
import time

import numpy as np
import pytest
from scipy import integrate

from fdsec.channel import LinkBudget
from fdsec.cli import main
from fdsec.experiments import optimize_alpha, preset, run_sweep
from fdsec.montecarlo import EstimatorConfig, SchemeSpec, estimate_sop, estimate_sop_crn
from fdsec.secrecy import TargetRate, direct_wiretap_sop_oracle

N = 100_000
R0 = TargetRate(1.0)


def _report(name, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def _rows_by_scheme(rows):
    out = {}
    for r in rows:
        out.setdefault(r.scheme, []).append(r)
    return out


@pytest.fixture(scope="module")
def fig6_run():
    start = time.perf_counter()
    rows = run_sweep(preset("fig6", n_samples=N))
    return rows, time.perf_counter() - start


@pytest.fixture(scope="module")
def fig3_run():
    return run_sweep(preset("fig3", n_samples=N))


@pytest.fixture(scope="module")
def fig3_run_r2():
    return run_sweep(preset("fig3", r0=2.0, n_samples=N))


@pytest.fixture(scope="module")
def fig4_run():
    return run_sweep(preset("fig4", n_samples=N))


def test_criterion_01_untrusted_relay_never_secret(fig6_run):
    rows, elapsed = fig6_run
    conv = _rows_by_scheme(rows)["Conventional FDR"]
    exact = all(r.p_hat == 1.0 for r in conv)
    _report("untrusted-relay-sop-exactly-one",
            exact and len(conv) == 11 and elapsed < 30.0,
            f"{len(conv)} grid points, max |p-1| = "
            f"{max(abs(r.p_hat - 1.0) for r in conv):.1e}, {elapsed:.1f} s")


def test_criterion_02_source_jamming_restores_secrecy(fig6_run):
    rows, _ = fig6_run
    sbj = sorted(_rows_by_scheme(rows)["SBJ(a=0.50)"], key=lambda r: r.x_value)
    at_zero = next(r for r in sbj if r.x_value == 0.0)
    ordered = all(a.p_hat <= b.p_hat or a.ci_lo <= b.ci_hi
                  for a, b in zip(sbj, sbj[1:]))
    _report("sbj-sop-below-0.9-and-monotone-in-li",
            at_zero.p_hat < 0.9 and ordered,
            f"sop(0 dB) = {at_zero.p_hat:.5f}, adjacency ordered = {ordered}")


def test_criterion_03_first_hop_matters_more():
    cfg = EstimatorConfig(n_samples=N, seed=0xC0FFEE)
    weak_sr = estimate_sop(SchemeSpec("sbj", alpha=0.5),
                           LinkBudget.from_db(20, 40, 10, 10, 20), R0, cfg)
    weak_rd = estimate_sop(SchemeSpec("sbj", alpha=0.5),
                           LinkBudget.from_db(40, 20, 10, 10, 20), R0, cfg)
    separated = weak_sr.ci_lo > weak_rd.ci_hi
    _report("sbj-first-hop-asymmetry",
            weak_sr.p_hat > weak_rd.p_hat and separated,
            f"sop(weak S-R) = {weak_sr.p_hat:.4f} > "
            f"sop(weak R-D) = {weak_rd.p_hat:.4f}, CIs disjoint = {separated}")


def test_criterion_04_optimal_power_split():
    # The objective is nearly flat for alpha in [0.35, 0.55] at low LI, so
    # the located minimizer wobbles by several hundredths across seeds; the
    # seed is pinned like any other statistical tolerance here.
    cfg = EstimatorConfig(n_samples=N, seed=7)
    a_low, _ = optimize_alpha(LinkBudget.from_db(40, 40, 10, 10, -10), R0, cfg)
    a_high, _ = optimize_alpha(LinkBudget.from_db(40, 40, 10, 10, 30), R0, cfg)
    budget = LinkBudget.from_db(40, 40, 10, 10, 0)
    ends = estimate_sop_crn([SchemeSpec("sbj", alpha=0.0),
                             SchemeSpec("sbj", alpha=1.0)], budget, R0, cfg)
    endpoints_exact = all(e.p_hat == 1.0 for e in ends)
    _report("sbj-alpha-near-half-at-low-li",
            0.4 <= a_low <= 0.6 and a_high < 0.4 and endpoints_exact,
            f"alpha*(-10 dB) = {a_low:.4f}, alpha*(30 dB) = {a_high:.4f}, "
            f"sop(alpha in {{0,1}}) = 1 exact = {endpoints_exact}")


def test_criterion_05_hybrid_dominates_pointwise(fig3_run, fig4_run):
    by3 = _rows_by_scheme(fig3_run)
    single_ok = all(h.p_hat <= min(a.p_hat, b.p_hat)
                    for h, a, b in zip(by3["H-HD-FDR"], by3["HDR"], by3["FDR"]))
    by4 = _rows_by_scheme(fig4_run)
    multi_ok = all(h.p_hat <= min(a.p_hat, b.p_hat)
                   for h, a, b in zip(by4["H-HD-FD-RS"], by4["O-FD-RS"],
                                      by4["Optimal-HD-RS"]))
    _report("hybrid-mode-dominance-under-crn", single_ok and multi_ok,
            f"single-relay pointwise = {single_ok}, "
            f"relay-selection pointwise = {multi_ok}")


def test_criterion_06_selection_quality_ordering(fig4_run):
    by = _rows_by_scheme(fig4_run)
    ok = all(o.p_hat <= m.p_hat <= r.p_hat
             for o, m, r in zip(by["O-FD-RS"], by["MM-FD-RS"],
                                by["Random-FD-RS"]))
    _report("optimal-below-maxmin-below-random", ok,
            f"ordering holds at all {len(by['O-FD-RS'])} grid points = {ok}")


def test_criterion_07_fd_hd_crossover_in_li(fig3_run):
    by = _rows_by_scheme(fig3_run)
    hdr = {r.x_value: r.p_hat for r in by["HDR"]}
    fdr = {r.x_value: r.p_hat for r in by["FDR"]}
    low_ok = fdr[-10.0] < hdr[-10.0]
    high_ok = fdr[40.0] > hdr[40.0]
    _report("fdr-better-at-low-li-worse-at-high-li", low_ok and high_ok,
            f"sop at -10 dB: FDR {fdr[-10.0]:.5f} vs HDR {hdr[-10.0]:.5f}; "
            f"at 40 dB: FDR {fdr[40.0]:.5f} vs HDR {hdr[40.0]:.5f}")


def test_criterion_08a_fdj_beats_fdr_at_low_rate(fig3_run):
    # Known red: with the documented gap models the FDJ outage event
    # contains the FDR outage event at every target rate, so this ordering
    # cannot occur. Kept as an honest statement of the intended property.
    by = _rows_by_scheme(fig3_run)
    fdj = {r.x_value: r.p_hat for r in by["FDJ"]}
    fdr = {r.x_value: r.p_hat for r in by["FDR"]}
    ok = fdj[-10.0] < fdr[-10.0]
    _report("fdj-beats-fdr-at-low-rate", ok,
            f"r0 = 1, -10 dB: FDJ {fdj[-10.0]:.5f} vs FDR {fdr[-10.0]:.5f}")


def test_criterion_08b_fdj_loses_to_fdr_at_high_rate(fig3_run_r2):
    by = _rows_by_scheme(fig3_run_r2)
    fdj = {r.x_value: r.p_hat for r in by["FDJ"]}
    fdr = {r.x_value: r.p_hat for r in by["FDR"]}
    ok = fdj[-10.0] > fdr[-10.0]
    _report("fdj-loses-to-fdr-at-high-rate", ok,
            f"r0 = 2, -10 dB: FDJ {fdj[-10.0]:.5f} vs FDR {fdr[-10.0]:.5f}")


def test_criterion_09_estimator_matches_closed_form():
    start = time.perf_counter()
    cfg = EstimatorConfig(n_samples=N, seed=0xC0FFEE)
    rho = 2.0 ** R0.r0
    worst_sigma, worst_quad = 0.0, 0.0
    for gd_db in (0.0, 10.0, 20.0):
        for ge_db in (-5.0, 0.0, 5.0):
            gd, ge = 10.0 ** (gd_db / 10.0), 10.0 ** (ge_db / 10.0)
            exact = direct_wiretap_sop_oracle(gd, ge, R0)

            def integrand(y):
                t = rho * (1.0 + y) - 1.0
                return (1.0 - math.exp(-t / gd)) * math.exp(-y / ge) / ge

            quad_val, _ = integrate.quad(integrand, 0.0, np.inf)
            worst_quad = max(worst_quad, abs(exact - quad_val))
            budget = LinkBudget(gd, 1.0, ge, 0.0, 0.0)
            est = estimate_sop(SchemeSpec("direct-wiretap"), budget, R0, cfg)
            se = math.sqrt(exact * (1.0 - exact) / N)
            worst_sigma = max(worst_sigma, abs(est.p_hat - exact) / se)
    elapsed = time.perf_counter() - start
    _report("estimator-within-3-sigma-of-oracle",
            worst_sigma < 3.0 and worst_quad < 1e-6 and elapsed < 60.0,
            f"worst deviation = {worst_sigma:.2f} sigma, oracle vs quadrature "
            f"= {worst_quad:.1e}, {elapsed:.1f} s")


def test_criterion_10_serial_parallel_byte_identical(tmp_path, monkeypatch):
    serial, parallel = tmp_path / "serial.csv", tmp_path / "parallel.csv"
    monkeypatch.setenv("FDSEC_WORKERS", "1")
    assert main(["sweep", "--preset", "fig3", "--seed", "7",
                 "--out", str(serial)]) == 0
    monkeypatch.delenv("FDSEC_WORKERS")
    assert main(["sweep", "--preset", "fig3", "--seed", "7",
                 "--out", str(parallel)]) == 0
    identical = serial.read_bytes() == parallel.read_bytes()
    _report("sweep-reproducible-across-worker-counts", identical,
            f"{serial.stat().st_size} bytes, byte-identical = {identical}")
