"""SOP estimation with Wilson confidence intervals and CRN comparisons.

Determinism contract: the estimate for a given (seed, n_samples, batch_size)
is bit-identical regardless of how many workers run the batches. Batch b
draws its channel uniforms from substream `substream_base + b`; auxiliary
draws (random relay selection) come from a disjoint substream block so that
adding or removing schemes never perturbs the channel realizations. Outage
counts are integers, so accumulation order cannot matter.

Worker count is taken from the FDSEC_WORKERS environment variable: unset
means all available cores, 1 means fully serial.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .channel import LinkBudget, RandomStream, RealizationBatch, db_to_linear, sample_batch
from .secrecy import TargetRate, capacity
from . import multi_relay as mr
from . import single_relay as sl
from .single_relay import SchemeId

Z95 = 1.959964

WORKERS_ENV_VAR = "FDSEC_WORKERS"

# Substream layout: channel batches live at substream_base + b, auxiliary
# (selection) draws at AUX_SUBSTREAM_OFFSET + substream_base + b.
AUX_SUBSTREAM_OFFSET = 1 << 63


@dataclass(frozen=True)
class EstimatorConfig:
    n_samples: int
    seed: int
    batch_size: int = 4096

    def __post_init__(self):
        if int(self.n_samples) < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples!r}")
        if int(self.batch_size) < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size!r}")


@dataclass(frozen=True)
class SopEstimate:
    """Estimated secrecy outage probability with a 95% Wilson interval."""

    p_hat: float
    ci_lo: float
    ci_hi: float
    n: int
    seed: int


def wilson_interval(p_hat: float, n: int, z: float = Z95):
    """95% Wilson score interval; well behaved at p_hat in {0, 1}."""
    if not 0.0 <= p_hat <= 1.0:
        raise ValueError(f"p_hat must lie in [0, 1], got {p_hat!r}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (p_hat + z2 / (2.0 * n)) / denom
    half = z * math.sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)) / denom
    lo = max(0.0, center - half)
    hi = min(1.0, center + half)
    # the score bound touches the endpoint exactly when p_hat does; avoid
    # returning 0.999... purely from rounding
    if p_hat == 0.0:
        lo = 0.0
    if p_hat == 1.0:
        hi = 1.0
    return lo, hi


# ---------------------------------------------------------------------------
# Scheme specification and dispatch
# ---------------------------------------------------------------------------

SINGLE_RELAY_KINDS = ("hdr", "fdr", "hybrid-hd-fd", "fdj", "sbj", "conventional-fdr")
MULTI_RELAY_KINDS = ("random-fd-rs", "mm-fd-rs", "o-fd-rs", "optimal-hd-rs",
                     "hybrid-hd-fd-rs", "beamforming")
ALL_KINDS = SINGLE_RELAY_KINDS + MULTI_RELAY_KINDS + ("direct-wiretap",)

_DEFAULT_LABELS = {
    "hdr": "HDR",
    "fdr": "FDR",
    "hybrid-hd-fd": "H-HD-FDR",
    "fdj": "FDJ",
    "sbj": "SBJ",
    "conventional-fdr": "Conventional FDR",
    "random-fd-rs": "Random-FD-RS",
    "mm-fd-rs": "MM-FD-RS",
    "o-fd-rs": "O-FD-RS",
    "optimal-hd-rs": "Optimal-HD-RS",
    "hybrid-hd-fd-rs": "H-HD-FD-RS",
    "beamforming": "ZF-Beamforming",
    "direct-wiretap": "Direct wiretap",
}


@dataclass(frozen=True)
class SchemeSpec:
    """A scheme to estimate: kind plus the parameters the kind needs.

    `gamma_rr_db` overrides the budget's loop-interference average for this
    scheme only; the override is applied to the same underlying uniforms, so
    overridden schemes remain CRN-coherent with the rest of the list.
    """

    kind: str
    alpha: Optional[float] = None
    gamma_rr_db: Optional[float] = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in ALL_KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.kind == "sbj":
            if self.alpha is None:
                raise ValueError("sbj scheme requires alpha")
            sl.SbjParams(self.alpha)  # reuse range validation
        if not self.label:
            object.__setattr__(self, "label", self._default_label())

    def _default_label(self) -> str:
        base = _DEFAULT_LABELS[self.kind]
        parts = []
        if self.kind == "sbj":
            parts.append(f"a={self.alpha:.2f}")
        if self.gamma_rr_db is not None:
            parts.append(f"grr={self.gamma_rr_db:g}dB")
        # Space-joined so labels stay comma-free in CSV output.
        return f"{base}({' '.join(parts)})" if parts else base

    @classmethod
    def from_scheme_id(cls, scheme_id: SchemeId, alpha: Optional[float] = None,
                       **kwargs) -> "SchemeSpec":
        return cls(kind=scheme_id.value, alpha=alpha, **kwargs)


def _effective_gamma_rr(spec: SchemeSpec, batch: RealizationBatch,
                        budget: LinkBudget) -> np.ndarray:
    if spec.gamma_rr_db is None:
        return batch.gamma_rr
    mean = db_to_linear(spec.gamma_rr_db)
    if budget.deterministic or batch.u_rr is None:
        return np.full(batch.n, mean)
    return -mean * np.log(batch.u_rr)


def scheme_sc(spec: SchemeSpec, batch: RealizationBatch, budget: LinkBudget,
              aux_u: Optional[np.ndarray] = None) -> np.ndarray:
    """Secrecy capacities of `spec` on every realization in `batch`."""
    kind = spec.kind
    if kind in SINGLE_RELAY_KINDS or kind == "direct-wiretap":
        gsr, grd = batch.gamma_sr, batch.gamma_rd
        gse, gre = batch.gamma_se, batch.gamma_re
        grr = _effective_gamma_rr(spec, batch, budget)
        if kind == "hdr":
            return sl.hdr_sc_array(gsr, grd, gse, gre)
        if kind == "fdr":
            return sl.fdr_sc_array(gsr, grd, gse, gre, grr)
        if kind == "hybrid-hd-fd":
            return sl.hybrid_sc_array(gsr, grd, gse, gre, grr)
        if kind == "fdj":
            return sl.fdj_sc_array(gsr, grd, gse, gre, grr)
        if kind == "sbj":
            return sl.sbj_sc_array(spec.alpha, gsr, grd, grr)
        if kind == "conventional-fdr":
            return sl.sbj_sc_array(1.0, gsr, grd, grr)
        # direct-wiretap: no relay; source-destination SNR reuses the sr
        # draw and the wiretap link reuses the se draw.
        return np.maximum(capacity(gsr) - capacity(gse), 0.0)

    gsr, grd, gre, grr = batch.relay_view()
    gse = batch.gamma_se
    if kind == "random-fd-rs":
        if aux_u is None:
            raise ValueError("random selection requires auxiliary uniforms")
        return mr.random_rs_sc(gsr, grd, gse, gre, grr, aux_u)
    if kind == "mm-fd-rs":
        return mr.max_min_rs_sc(gsr, grd, gse, gre, grr)
    if kind == "o-fd-rs":
        return mr.optimal_fd_rs_sc(gsr, grd, gse, gre, grr)
    if kind == "optimal-hd-rs":
        return mr.optimal_hd_rs_sc(gsr, grd, gse, gre)
    if kind == "hybrid-hd-fd-rs":
        return mr.hybrid_rs_sc(gsr, grd, gse, gre, grr)
    return mr.beamforming_sc(gsr, grd, gse, gre, grr)


# ---------------------------------------------------------------------------
# Estimation
# ---------------------------------------------------------------------------

def _batch_sizes(n_samples: int, batch_size: int):
    full, rest = divmod(n_samples, batch_size)
    sizes = [batch_size] * full
    if rest:
        sizes.append(rest)
    return sizes


def _batch_outage_counts(schemes: Sequence[SchemeSpec], budget: LinkBudget,
                         r0: float, seed: int, substream_base: int,
                         batch_index: int, size: int) -> np.ndarray:
    stream = RandomStream(seed, substream_base + batch_index)
    batch = sample_batch(budget, stream, size)
    aux_u = None
    if any(s.kind == "random-fd-rs" for s in schemes):
        aux = RandomStream(seed, AUX_SUBSTREAM_OFFSET + substream_base + batch_index)
        aux_u = aux.uniforms(size)
    counts = np.empty(len(schemes), dtype=np.int64)
    for i, spec in enumerate(schemes):
        sc = scheme_sc(spec, batch, budget, aux_u)
        counts[i] = int(np.count_nonzero(sc < r0))
    return counts


def _worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV_VAR, "")
    if raw.strip():
        count = int(raw)
        if count < 1:
            raise ValueError(f"{WORKERS_ENV_VAR} must be >= 1, got {raw!r}")
        return count
    return os.cpu_count() or 1


def estimate_sop_crn(schemes: Sequence[SchemeSpec], budget: LinkBudget,
                     rate: TargetRate, cfg: EstimatorConfig,
                     substream_base: int = 0) -> list[SopEstimate]:
    """Estimate the SOP of every scheme on identical channel realizations.

    Common random numbers make dominance relations between schemes hold
    pointwise, so comparisons like "hybrid <= min(HD, FD)" are exact on the
    estimates, not just statistically.
    """
    if not schemes:
        raise ValueError("scheme list must be non-empty")
    if any(s.kind in MULTI_RELAY_KINDS for s in schemes) and budget.num_relays < 1:
        raise ValueError("multi-relay schemes need num_relays >= 1")
    if any(s.kind == "beamforming" for s in schemes) and budget.num_relays < 2:
        raise ValueError("beamforming requires num_relays >= 2")

    sizes = _batch_sizes(cfg.n_samples, cfg.batch_size)
    schemes = tuple(schemes)
    args = [(schemes, budget, rate.r0, cfg.seed, substream_base, b, size)
            for b, size in enumerate(sizes)]

    workers = _worker_count()
    if workers > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(args))) as pool:
            per_batch = list(pool.map(_batch_outage_counts_star, args,
                                      chunksize=max(1, len(args) // (4 * workers))))
    else:
        per_batch = [_batch_outage_counts(*a) for a in args]

    totals = np.sum(np.stack(per_batch), axis=0)
    estimates = []
    for count in totals:
        p_hat = count / cfg.n_samples
        lo, hi = wilson_interval(p_hat, cfg.n_samples)
        estimates.append(SopEstimate(p_hat=float(p_hat), ci_lo=lo, ci_hi=hi,
                                     n=cfg.n_samples, seed=cfg.seed))
    return estimates


def _batch_outage_counts_star(a):
    return _batch_outage_counts(*a)


def estimate_sop(scheme: SchemeSpec, budget: LinkBudget, rate: TargetRate,
                 cfg: EstimatorConfig, substream_base: int = 0) -> SopEstimate:
    """Estimate the SOP of a single scheme (bit-identical to a one-element
    CRN list)."""
    return estimate_sop_crn([scheme], budget, rate, cfg, substream_base)[0]
