"""Relay-selection criteria and idealized zero-forcing beamforming.

Selection schemes pick one of K relays per realization and evaluate it with
the corresponding single-relay model; inter-relay interference is not
modeled (relays are assumed far apart). The beamforming scheme is an
idealized desk-scale model: all relay paths are nulled at the eavesdropper
at the cost of the weakest relay's degree of freedom, and the destination
collects the sum of the remaining K-1 end-to-end SINRs. See README
"Model notes" for the caveats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, RandomStream
from .secrecy import SecrecySample
from . import single_relay as sr


@dataclass(frozen=True)
class MultiRelayRealization:
    """Per-relay instantaneous SNR vectors plus the shared source-eavesdropper SNR."""

    gamma_sr: np.ndarray
    gamma_rd: np.ndarray
    gamma_re: np.ndarray
    gamma_rr: np.ndarray
    gamma_se: float

    def __post_init__(self):
        k = len(self.gamma_sr)
        if k < 1:
            raise ValueError("at least one relay is required")
        for name in ("gamma_rd", "gamma_re", "gamma_rr"):
            if len(getattr(self, name)) != k:
                raise ValueError("per-relay vectors must share one length")
        if self.gamma_se < 0.0:
            raise ValueError("gamma_se must be >= 0")

    @property
    def num_relays(self) -> int:
        return len(self.gamma_sr)

    @classmethod
    def from_realization(cls, real: ChannelRealization) -> "MultiRelayRealization":
        if real.relay_sr is not None:
            return cls(gamma_sr=real.relay_sr, gamma_rd=real.relay_rd,
                       gamma_re=real.relay_re, gamma_rr=real.relay_rr,
                       gamma_se=real.gamma_se)
        return cls(gamma_sr=np.array([real.gamma_sr]),
                   gamma_rd=np.array([real.gamma_rd]),
                   gamma_re=np.array([real.gamma_re]),
                   gamma_rr=np.array([real.gamma_rr]),
                   gamma_se=real.gamma_se)


@dataclass(frozen=True)
class SelectionResult:
    chosen_index: int
    sample: SecrecySample
    mode: str = "fd"


# ---------------------------------------------------------------------------
# Vectorized kernels over (n, K) link matrices with shared gamma_se (n,)
# ---------------------------------------------------------------------------

def fdr_sc_matrix(gsr, grd, gse, gre, grr):
    """Per-relay FD secrecy capacities, shape (n, K); gse broadcasts over K."""
    return sr.fdr_sc_array(gsr, grd, np.asarray(gse)[..., None], gre, grr)


def hdr_sc_matrix(gsr, grd, gse, gre):
    return sr.hdr_sc_array(gsr, grd, np.asarray(gse)[..., None], gre)


def max_min_metric(gsr, grd, grr):
    # Conventional-capacity bottleneck with the relay's own residual LI
    # folded in; needs no wiretap CSI.
    return np.minimum(gsr / (1.0 + grr), grd)


def random_index(u, num_relays: int):
    idx = np.minimum((np.asarray(u) * num_relays).astype(int), num_relays - 1)
    return idx


def random_rs_sc(gsr, grd, gse, gre, grr, u):
    idx = random_index(u, gsr.shape[1])
    rows = np.arange(gsr.shape[0])
    return sr.fdr_sc_array(gsr[rows, idx], grd[rows, idx], gse,
                           gre[rows, idx], grr[rows, idx])


def max_min_rs_sc(gsr, grd, gse, gre, grr):
    idx = np.argmax(max_min_metric(gsr, grd, grr), axis=1)
    rows = np.arange(gsr.shape[0])
    return sr.fdr_sc_array(gsr[rows, idx], grd[rows, idx], gse,
                           gre[rows, idx], grr[rows, idx])


def optimal_fd_rs_sc(gsr, grd, gse, gre, grr):
    return np.max(fdr_sc_matrix(gsr, grd, gse, gre, grr), axis=1)


def optimal_hd_rs_sc(gsr, grd, gse, gre):
    return np.max(hdr_sc_matrix(gsr, grd, gse, gre), axis=1)


def hybrid_rs_sc(gsr, grd, gse, gre, grr):
    per_relay = np.maximum(fdr_sc_matrix(gsr, grd, gse, gre, grr),
                           hdr_sc_matrix(gsr, grd, gse, gre))
    return np.max(per_relay, axis=1)


def beamforming_sc(gsr, grd, gse, gre, grr):
    """Idealized ZF beamforming over (n, K) matrices; needs K >= 2."""
    if gsr.shape[1] < 2:
        raise ValueError("beamforming requires at least 2 relays")
    a = gsr / (1.0 + grr)
    e2e = a * grd / (a + grd + 1.0)
    # K-1 largest per-relay SINRs = row sum minus the row minimum.
    combined = np.sum(e2e, axis=1) - np.min(e2e, axis=1)
    c_d = np.log2(1.0 + combined)
    c_e = np.log2(1.0 + np.asarray(gse, dtype=float))
    return np.maximum(c_d - c_e, 0.0)


# ---------------------------------------------------------------------------
# Scalar selection operations
# ---------------------------------------------------------------------------

def _chosen_sample_fd(real: MultiRelayRealization, idx: int) -> SecrecySample:
    c_d, c_e = sr.fdr_components(real.gamma_sr[idx], real.gamma_rd[idx],
                                 real.gamma_se, real.gamma_re[idx],
                                 real.gamma_rr[idx])
    return sr._sample(c_d, c_e)


def _chosen_sample_hd(real: MultiRelayRealization, idx: int) -> SecrecySample:
    c_d, c_e = sr.hdr_components(real.gamma_sr[idx], real.gamma_rd[idx],
                                 real.gamma_se, real.gamma_re[idx])
    return sr._sample(c_d, c_e)


def select_random(real: MultiRelayRealization, stream: RandomStream) -> SelectionResult:
    """Uniformly random relay, operated in FD mode (one uniform consumed)."""
    idx = int(random_index(stream.uniforms(), real.num_relays))
    return SelectionResult(chosen_index=idx, sample=_chosen_sample_fd(real, idx))


def select_max_min(real: MultiRelayRealization) -> SelectionResult:
    """Max-min bottleneck selection; ties break toward the lowest index."""
    metric = max_min_metric(real.gamma_sr, real.gamma_rd, real.gamma_rr)
    idx = int(np.argmax(metric))
    return SelectionResult(chosen_index=idx, sample=_chosen_sample_fd(real, idx))


def select_optimal_fd(real: MultiRelayRealization) -> SelectionResult:
    """FD relay maximizing the secrecy capacity (needs wiretap CSI)."""
    scs = fdr_sc_matrix(real.gamma_sr[None, :], real.gamma_rd[None, :],
                        np.array([real.gamma_se]), real.gamma_re[None, :],
                        real.gamma_rr[None, :])[0]
    idx = int(np.argmax(scs))
    return SelectionResult(chosen_index=idx, sample=_chosen_sample_fd(real, idx))


def select_optimal_hd(real: MultiRelayRealization) -> SelectionResult:
    """HD relay maximizing the secrecy capacity."""
    scs = hdr_sc_matrix(real.gamma_sr[None, :], real.gamma_rd[None, :],
                        np.array([real.gamma_se]), real.gamma_re[None, :])[0]
    idx = int(np.argmax(scs))
    return SelectionResult(chosen_index=idx, sample=_chosen_sample_hd(real, idx), mode="hd")


def select_hybrid(real: MultiRelayRealization) -> SelectionResult:
    """Per relay pick the better of HD/FD, then pick the best relay.

    Ties between relays break toward the lowest index; per-relay mode ties
    break toward FD.
    """
    fd = fdr_sc_matrix(real.gamma_sr[None, :], real.gamma_rd[None, :],
                       np.array([real.gamma_se]), real.gamma_re[None, :],
                       real.gamma_rr[None, :])[0]
    hd = hdr_sc_matrix(real.gamma_sr[None, :], real.gamma_rd[None, :],
                       np.array([real.gamma_se]), real.gamma_re[None, :])[0]
    per_relay = np.maximum(fd, hd)
    idx = int(np.argmax(per_relay))
    if fd[idx] >= hd[idx]:
        return SelectionResult(chosen_index=idx, sample=_chosen_sample_fd(real, idx))
    return SelectionResult(chosen_index=idx, sample=_chosen_sample_hd(real, idx), mode="hd")


def beamforming_idealized(real: MultiRelayRealization) -> SecrecySample:
    """Idealized ZF beamforming sample; rejects K < 2 (nulling impossible)."""
    if real.num_relays < 2:
        raise ValueError("beamforming requires at least 2 relays")
    a = real.gamma_sr / (1.0 + real.gamma_rr)
    e2e = a * real.gamma_rd / (a + real.gamma_rd + 1.0)
    combined = float(np.sum(e2e) - np.min(e2e))
    c_d = float(np.log2(1.0 + combined))
    c_e = float(np.log2(1.0 + real.gamma_se))
    return SecrecySample(c_d=c_d, c_e=c_e, sc=max(0.0, c_d - c_e))
