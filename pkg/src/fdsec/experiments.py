"""Declarative sweeps, figure presets, and the SBJ power-allocation optimizer.

A sweep varies either the average loop-interference SNR (gamma_rr_db) or
the SBJ power split (alpha) over a grid, evaluating every scheme at every
grid point on common random numbers. Grid point g draws its batches from
the substream block g * GRID_SUBSTREAM_STRIDE, so grid points can run in
any order (or in parallel) without changing a single draw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .channel import LinkBudget, RandomStream, sample_batch
from .secrecy import TargetRate
from .montecarlo import EstimatorConfig, SchemeSpec, SopEstimate, estimate_sop_crn, wilson_interval
from .single_relay import sbj_sc_array

DEFAULT_SEED = 0xC0FFEE
GRID_SUBSTREAM_STRIDE = 1 << 32

_GAMMA_RR_GRID_DB = [float(x) for x in range(-10, 45, 5)]  # 11 points
_ALPHA_GRID = [i / 20.0 for i in range(21)]
_FIG7_GAMMA_RR_DB = [-10.0, 0.0, 10.0, 20.0, 30.0]

PRESET_NAMES = ("fig3", "fig4", "fig6", "fig7")


@dataclass(frozen=True)
class SweepSpec:
    """Declarative experiment: one swept variable, fixed budget, schemes, rate."""

    x_name: str  # "gamma_rr_db" | "alpha"
    grid: tuple
    budget: LinkBudget
    schemes: tuple
    rate: TargetRate
    estimator: EstimatorConfig

    def __post_init__(self):
        if self.x_name not in ("gamma_rr_db", "alpha"):
            raise ValueError(f"unknown swept variable {self.x_name!r}")
        if len(self.grid) == 0:
            raise ValueError("sweep grid must be non-empty")
        grid = tuple(float(x) for x in self.grid)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("sweep grid must be strictly increasing")
        if self.x_name == "alpha" and (grid[0] < 0.0 or grid[-1] > 1.0):
            raise ValueError("alpha grid must lie in [0, 1]")
        object.__setattr__(self, "grid", grid)
        if len(self.schemes) == 0:
            raise ValueError("scheme list must be non-empty")
        object.__setattr__(self, "schemes", tuple(self.schemes))


@dataclass(frozen=True)
class OutputRow:
    scheme: str
    x_name: str
    x_value: float
    p_hat: float
    ci_lo: float
    ci_hi: float
    n: int
    seed: int


def _schemes_at(spec: SweepSpec, x: float):
    if spec.x_name == "alpha":
        # Labels stay fixed across the sweep: a curve is identified by its
        # scheme, not by the grid value it is currently evaluated at.
        return tuple(replace(s, alpha=x) if s.kind == "sbj" else s
                     for s in spec.schemes)
    return spec.schemes


def _budget_at(spec: SweepSpec, x: float) -> LinkBudget:
    if spec.x_name == "gamma_rr_db":
        return spec.budget.with_gamma_rr_db(x)
    return spec.budget


def run_sweep(spec: SweepSpec) -> list[OutputRow]:
    """|grid| x |schemes| rows; CRN across schemes at each grid point."""
    rows = []
    for g, x in enumerate(spec.grid):
        schemes = _schemes_at(spec, x)
        budget = _budget_at(spec, x)
        estimates = estimate_sop_crn(schemes, budget, spec.rate, spec.estimator,
                                     substream_base=g * GRID_SUBSTREAM_STRIDE)
        for scheme, est in zip(schemes, estimates):
            rows.append(OutputRow(scheme=scheme.label, x_name=spec.x_name,
                                  x_value=float(x), p_hat=est.p_hat,
                                  ci_lo=est.ci_lo, ci_hi=est.ci_hi,
                                  n=est.n, seed=est.seed))
    return rows


def preset(name: str, r0: float = 1.0, n_samples: int = 100_000,
           seed: int = DEFAULT_SEED, batch_size: int = 4096) -> SweepSpec:
    """Built-in experiment scenarios mirroring the comparison figures.

    fig3: single-relay schemes (HDR, FDR, H-HD-FDR, FDJ) versus gamma_rr at
          40/40 dB legitimate links and 10/10 dB eavesdropper links.
    fig4: relay selection and beamforming with 4 relays at 30/30/10/10 dB.
    fig6: SBJ (alpha = 0.5) against the conventional untrusted-relay FDR
          versus gamma_rr at 40/40 dB.
    fig7: SBJ SOP versus alpha, one curve per gamma_rr in {-10,...,30} dB.

    The target secrecy rate defaults to 1 bit/channel use and is recorded in
    every output row.
    """
    cfg = EstimatorConfig(n_samples=n_samples, seed=seed, batch_size=batch_size)
    rate = TargetRate(r0)
    if name == "fig3":
        return SweepSpec(
            x_name="gamma_rr_db", grid=tuple(_GAMMA_RR_GRID_DB),
            budget=LinkBudget.from_db(40, 40, 10, 10, 0, num_relays=1),
            schemes=(SchemeSpec("hdr"), SchemeSpec("fdr"),
                     SchemeSpec("hybrid-hd-fd"), SchemeSpec("fdj")),
            rate=rate, estimator=cfg)
    if name == "fig4":
        return SweepSpec(
            x_name="gamma_rr_db", grid=tuple(_GAMMA_RR_GRID_DB),
            budget=LinkBudget.from_db(30, 30, 10, 10, 0, num_relays=4),
            schemes=(SchemeSpec("random-fd-rs"), SchemeSpec("mm-fd-rs"),
                     SchemeSpec("o-fd-rs"), SchemeSpec("optimal-hd-rs"),
                     SchemeSpec("hybrid-hd-fd-rs"), SchemeSpec("beamforming")),
            rate=rate, estimator=cfg)
    if name == "fig6":
        return SweepSpec(
            x_name="gamma_rr_db", grid=tuple(_GAMMA_RR_GRID_DB),
            budget=LinkBudget.from_db(40, 40, 10, 10, 0, num_relays=1),
            schemes=(SchemeSpec("sbj", alpha=0.5), SchemeSpec("conventional-fdr")),
            rate=rate, estimator=cfg)
    if name == "fig7":
        return SweepSpec(
            x_name="alpha", grid=tuple(_ALPHA_GRID),
            budget=LinkBudget.from_db(40, 40, 10, 10, 0, num_relays=1),
            schemes=tuple(SchemeSpec("sbj", alpha=0.5, gamma_rr_db=g,
                                     label=f"SBJ(grr={g:g}dB)")
                          for g in _FIG7_GAMMA_RR_DB),
            rate=rate, estimator=cfg)
    raise ValueError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")


# ---------------------------------------------------------------------------
# SBJ power-allocation optimizer
# ---------------------------------------------------------------------------

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _collect_sbj_links(budget: LinkBudget, cfg: EstimatorConfig,
                       substream_base: int = 0):
    """Materialize the (gamma_sr, gamma_rd, gamma_rr) realization set using
    the same batch/substream layout as the estimator."""
    gsr, grd, grr = [], [], []
    remaining, b = cfg.n_samples, 0
    while remaining > 0:
        size = min(cfg.batch_size, remaining)
        stream = RandomStream(cfg.seed, substream_base + b)
        batch = sample_batch(budget, stream, size)
        gsr.append(batch.gamma_sr)
        grd.append(batch.gamma_rd)
        grr.append(batch.gamma_rr)
        remaining -= size
        b += 1
    return np.concatenate(gsr), np.concatenate(grd), np.concatenate(grr)


def optimize_alpha(budget: LinkBudget, rate: TargetRate, cfg: EstimatorConfig,
                   grid_points: int = 21, refine: bool = True):
    """Minimize the SBJ SOP over alpha in [0, 1] on a fixed realization set.

    Common random numbers make the objective a deterministic, noiseless
    function of alpha, so a uniform grid scan (optionally refined by a
    golden-section search over the bracketing interval) suffices. Ties break
    toward the smallest alpha. Returns (alpha_star, SopEstimate).
    """
    if grid_points < 3:
        raise ValueError(f"grid_points must be >= 3, got {grid_points!r}")
    gsr, grd, grr = _collect_sbj_links(budget, cfg)
    r0 = rate.r0

    def sop(alpha: float) -> float:
        return float(np.count_nonzero(sbj_sc_array(alpha, gsr, grd, grr) < r0)) / cfg.n_samples

    grid = np.linspace(0.0, 1.0, grid_points)
    values = [sop(a) for a in grid]
    best_i = int(np.argmin(values))  # first minimum = smallest alpha on ties
    best_alpha, best_val = float(grid[best_i]), values[best_i]

    if refine:
        lo = float(grid[max(best_i - 1, 0)])
        hi = float(grid[min(best_i + 1, grid_points - 1)])
        a, b = lo, hi
        c = b - _INV_PHI * (b - a)
        d = a + _INV_PHI * (b - a)
        fc, fd = sop(c), sop(d)
        for _ in range(48):
            if b - a < 1e-4:
                break
            if fc <= fd:
                b, d, fd = d, c, fc
                c = b - _INV_PHI * (b - a)
                fc = sop(c)
            else:
                a, c, fc = c, d, fd
                d = a + _INV_PHI * (b - a)
                fd = sop(d)
        for cand, val in ((c, fc), (d, fd)):
            # The refined point may never be worse than the best grid point;
            # on equal objective keep the smaller alpha.
            if val < best_val or (val == best_val and cand < best_alpha):
                best_alpha, best_val = float(cand), val

    lo_ci, hi_ci = wilson_interval(best_val, cfg.n_samples)
    est = SopEstimate(p_hat=best_val, ci_lo=lo_ci, ci_hi=hi_ci,
                      n=cfg.n_samples, seed=cfg.seed)
    return best_alpha, est
