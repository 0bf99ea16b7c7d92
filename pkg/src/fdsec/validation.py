"""Built-in release-gate checks runnable from the CLI (`fdsec validate`).

Each check is independent of the code path it validates where possible:
the wiretap closed form is checked against numerical quadrature, the
estimator against the closed form, and the dominance relations against
their defining pointwise inequalities under common random numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .channel import LinkBudget
from .secrecy import TargetRate, direct_wiretap_sop_oracle, outage_indicator
from .montecarlo import EstimatorConfig, SchemeSpec, estimate_sop, estimate_sop_crn
from .single_relay import sbj_sc_array

_CHECK_SEED = 20_240_601
_CHECK_N = 20_000


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _quad_wiretap_sop(gd_bar: float, ge_bar: float, r0: float) -> float:
    rho = 2.0 ** r0
    if ge_bar == 0.0:
        return 1.0 - np.exp(-(rho - 1.0) / gd_bar)
    def integrand(y):
        thresh = rho * (1.0 + y) - 1.0
        return (1.0 - np.exp(-thresh / gd_bar)) * np.exp(-y / ge_bar) / ge_bar
    val, _ = integrate.quad(integrand, 0.0, np.inf)
    return val


def _check_wiretap_closed_form() -> CheckResult:
    worst = 0.0
    for gd in (1.0, 10.0, 100.0):
        for ge in (0.0, 1.0, 10.0):
            for r0 in (0.5, 1.0, 2.0):
                exact = direct_wiretap_sop_oracle(gd, ge, TargetRate(r0))
                quad = _quad_wiretap_sop(gd, ge, r0)
                worst = max(worst, abs(exact - quad))
    ok = worst < 1e-6
    return CheckResult("wiretap-closed-form-vs-quadrature", ok,
                       f"max |closed form - quadrature| = {worst:.2e}")


def _check_estimator_vs_oracle() -> CheckResult:
    budget = LinkBudget(10.0, 1.0, 1.0, 0.0, 0.0)  # sr = destination, se = wiretap
    rate = TargetRate(1.0)
    cfg = EstimatorConfig(n_samples=_CHECK_N, seed=_CHECK_SEED)
    est = estimate_sop(SchemeSpec("direct-wiretap"), budget, rate, cfg)
    exact = direct_wiretap_sop_oracle(10.0, 1.0, rate)
    se = (exact * (1.0 - exact) / _CHECK_N) ** 0.5
    ok = abs(est.p_hat - exact) < 3.0 * se
    return CheckResult("estimator-vs-closed-form", ok,
                       f"p_hat={est.p_hat:.5f}, exact={exact:.5f}, 3se={3 * se:.5f}")


def _check_untrusted_always_outage() -> CheckResult:
    budget = LinkBudget.from_db(40, 40, 10, 10, 0)
    cfg = EstimatorConfig(n_samples=_CHECK_N, seed=_CHECK_SEED)
    est = estimate_sop(SchemeSpec("conventional-fdr"), budget, TargetRate(1.0), cfg)
    ok = est.p_hat == 1.0
    return CheckResult("untrusted-fdr-always-outage", ok, f"p_hat={est.p_hat!r}")


def _check_outage_boundary_strict() -> CheckResult:
    # Secrecy capacity exactly at the target rate is not an outage, so in
    # deterministic mode the estimated SOP must be exactly 0.
    budget = LinkBudget.from_db(40, 40, 10, 10, 0, mode="deterministic")
    sc = float(sbj_sc_array(0.5, budget.gamma_sr_bar, budget.gamma_rd_bar,
                            budget.gamma_rr_bar))
    rate = TargetRate(sc)
    cfg = EstimatorConfig(n_samples=100, seed=_CHECK_SEED)
    est = estimate_sop(SchemeSpec("sbj", alpha=0.5), budget, rate, cfg)
    ok = est.p_hat == 0.0 and not outage_indicator(sc, rate)
    return CheckResult("outage-boundary-strict", ok,
                       f"p_hat={est.p_hat!r} at sc == r0 = {sc:.4f}")


def _check_hybrid_crn_dominance() -> CheckResult:
    budget = LinkBudget.from_db(40, 40, 10, 10, 20)
    cfg = EstimatorConfig(n_samples=_CHECK_N, seed=_CHECK_SEED)
    hdr, fdr, hyb = estimate_sop_crn(
        [SchemeSpec("hdr"), SchemeSpec("fdr"), SchemeSpec("hybrid-hd-fd")],
        budget, TargetRate(1.0), cfg)
    ok = hyb.p_hat <= min(hdr.p_hat, fdr.p_hat)
    return CheckResult("hybrid-crn-dominance", ok,
                       f"hybrid={hyb.p_hat:.5f}, hdr={hdr.p_hat:.5f}, fdr={fdr.p_hat:.5f}")


def _check_selection_crn_dominance() -> CheckResult:
    budget = LinkBudget.from_db(30, 30, 10, 10, 10, num_relays=4)
    cfg = EstimatorConfig(n_samples=_CHECK_N, seed=_CHECK_SEED)
    rnd, mm, ofd = estimate_sop_crn(
        [SchemeSpec("random-fd-rs"), SchemeSpec("mm-fd-rs"), SchemeSpec("o-fd-rs")],
        budget, TargetRate(1.0), cfg)
    ok = ofd.p_hat <= mm.p_hat <= rnd.p_hat
    return CheckResult("selection-crn-dominance", ok,
                       f"o-fd={ofd.p_hat:.5f}, mm={mm.p_hat:.5f}, random={rnd.p_hat:.5f}")


def _check_sbj_alpha_endpoints() -> CheckResult:
    budget = LinkBudget.from_db(40, 40, 10, 10, 0)
    cfg = EstimatorConfig(n_samples=_CHECK_N, seed=_CHECK_SEED)
    rate = TargetRate(1.0)
    at0, at1 = estimate_sop_crn(
        [SchemeSpec("sbj", alpha=0.0), SchemeSpec("sbj", alpha=1.0)],
        budget, rate, cfg)
    ok = at0.p_hat == 1.0 and at1.p_hat == 1.0
    return CheckResult("sbj-alpha-endpoint-identity", ok,
                       f"SOP(0)={at0.p_hat!r}, SOP(1)={at1.p_hat!r}")


def _check_determinism() -> CheckResult:
    budget = LinkBudget.from_db(40, 40, 10, 10, 10)
    cfg = EstimatorConfig(n_samples=_CHECK_N, seed=_CHECK_SEED, batch_size=1024)
    rate = TargetRate(1.0)
    a = estimate_sop(SchemeSpec("fdr"), budget, rate, cfg)
    b = estimate_sop(SchemeSpec("fdr"), budget, rate, cfg)
    ok = a == b
    return CheckResult("estimate-repeatability", ok, f"p_hat={a.p_hat:.5f}")


def run_checks() -> list[CheckResult]:
    """Run every built-in check and return the report."""
    return [
        _check_wiretap_closed_form(),
        _check_estimator_vs_oracle(),
        _check_untrusted_always_outage(),
        _check_outage_boundary_strict(),
        _check_hybrid_crn_dominance(),
        _check_selection_crn_dominance(),
        _check_sbj_alpha_endpoints(),
        _check_determinism(),
    ]
