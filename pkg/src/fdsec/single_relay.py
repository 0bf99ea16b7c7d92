"""Per-realization secrecy evaluation of the single-relay schemes.

Two groups live here:

* trusted relay with an external eavesdropper: HDR, FDR, hybrid HD/FD
  switching, and FDJ (relay-assisted jamming);
* untrusted full-duplex relay, no external eavesdropper: SBJ (source-based
  jamming) and its alpha = 1 special case, the conventional FDR scheme whose
  secrecy capacity is identically zero.

Only the SBJ SINRs follow published closed forms. The HDR/FDR/FDJ
expressions are explicit model choices: two-hop amplify-and-forward SINR,
residual loop interference as additive noise at the relay input, eavesdropper
MRC across half-duplex phases, and stronger-stream decoding under full-duplex
inter-symbol interference. Comparisons that hinge on these choices are
qualitative; see README "Model notes".

Each evaluate function is a deterministic pure function of its realization
and is safe to call concurrently. Array inputs broadcast elementwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channel import ChannelRealization
from .secrecy import SecrecySample


class SchemeId(Enum):
    HDR = "hdr"
    FDR = "fdr"
    HYBRID_HD_FD = "hybrid-hd-fd"
    FDJ = "fdj"
    SBJ = "sbj"
    CONVENTIONAL_UNTRUSTED_FDR = "conventional-fdr"


@dataclass(frozen=True)
class SbjParams:
    """Power allocation ratio between the confidential and jamming signals."""

    alpha: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and 0.0 <= self.alpha <= 1.0):
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha!r}")


def _two_hop_af(a, b):
    # End-to-end SINR of an amplify-and-forward hop pair; the +1 keeps the
    # all-zero limit at 0 without special-casing.
    return a * b / (a + b + 1.0)


def _log2p1(x):
    return np.log2(1.0 + x)


# ---------------------------------------------------------------------------
# SBJ / conventional untrusted FDR
# ---------------------------------------------------------------------------

def sbj_sinr_arrays(alpha, gamma_sr, gamma_rd, gamma_rr):
    """Vectorized SINRs at the untrusted relay and at the destination."""
    gsr = np.asarray(gamma_sr, dtype=float)
    grd = np.asarray(gamma_rd, dtype=float)
    grr = np.asarray(gamma_rr, dtype=float)
    gamma_r = alpha * gsr / ((1.0 - alpha) * gsr + grr + 1.0)
    denom = grd * grr * (alpha * gsr + 1.0) / (gsr + 1.0) + gsr + grd + grr + 1.0
    gamma_d = alpha * gsr * grd / denom
    return gamma_r, gamma_d


def sbj_sinrs(params: SbjParams, gamma_sr: float, gamma_rd: float,
              gamma_rr: float):
    """SINRs (gamma_R, gamma_D) at the relay and the destination.

    The destination is assumed to cancel the jamming component perfectly
    (it knows the jamming sequence and the global CSI), so only the source
    power split and the relay's residual loop interference remain.
    """
    if gamma_sr < 0.0 or gamma_rd < 0.0 or gamma_rr < 0.0:
        raise ValueError("SNR inputs must be >= 0")
    gamma_r, gamma_d = sbj_sinr_arrays(params.alpha, gamma_sr, gamma_rd, gamma_rr)
    return float(gamma_r), float(gamma_d)


def sbj_sc_array(alpha, gamma_sr, gamma_rd, gamma_rr):
    gamma_r, gamma_d = sbj_sinr_arrays(alpha, gamma_sr, gamma_rd, gamma_rr)
    return np.maximum(_log2p1(gamma_d) - _log2p1(gamma_r), 0.0)


def sbj_evaluate(params: SbjParams, real: ChannelRealization) -> SecrecySample:
    """Secrecy sample with the untrusted relay playing the eavesdropper.

    Full-duplex operation, so no 1/2 rate factor. At alpha = 1 (conventional
    FDR without jamming) gamma_D <= gamma_R holds algebraically and the
    secrecy capacity is identically zero.
    """
    gamma_r, gamma_d = sbj_sinrs(params, real.gamma_sr, real.gamma_rd, real.gamma_rr)
    c_d = _log2p1(gamma_d)
    c_e = _log2p1(gamma_r)
    return SecrecySample(c_d=float(c_d), c_e=float(c_e), sc=max(0.0, float(c_d - c_e)))


# ---------------------------------------------------------------------------
# Trusted relay, external eavesdropper
# ---------------------------------------------------------------------------

def hdr_components(gamma_sr, gamma_rd, gamma_se, gamma_re):
    """HD relaying: two slots (1/2 factor), eavesdropper MRC over both."""
    gsr = np.asarray(gamma_sr, dtype=float)
    c_d = 0.5 * _log2p1(_two_hop_af(gsr, np.asarray(gamma_rd, dtype=float)))
    c_e = 0.5 * _log2p1(np.asarray(gamma_se, dtype=float) + np.asarray(gamma_re, dtype=float))
    return c_d, c_e


def fdr_components(gamma_sr, gamma_rd, gamma_se, gamma_re, gamma_rr):
    """FD relaying: residual LI at the relay input; the eavesdropper sees the
    source and relay streams simultaneously and decodes the stronger one
    treating the other as noise. Full rate, no 1/2 factor."""
    gsr = np.asarray(gamma_sr, dtype=float)
    grr = np.asarray(gamma_rr, dtype=float)
    gse = np.asarray(gamma_se, dtype=float)
    gre = np.asarray(gamma_re, dtype=float)
    a = gsr / (1.0 + grr)
    c_d = _log2p1(_two_hop_af(a, np.asarray(gamma_rd, dtype=float)))
    c_e = _log2p1(np.maximum(gse / (1.0 + gre), gre / (1.0 + gse)))
    return c_d, c_e


def fdj_components(gamma_sr, gamma_rd, gamma_se, gamma_re, gamma_rr):
    """FD jamming: HD data flow (1/2 factor); the relay jams while receiving,
    the source jams while the relay forwards, so the eavesdropper sees each
    data stream through jamming interference and combines the phases by MRC.
    The relay's own jamming leaks back through the residual LI channel."""
    gsr = np.asarray(gamma_sr, dtype=float)
    grr = np.asarray(gamma_rr, dtype=float)
    gse = np.asarray(gamma_se, dtype=float)
    gre = np.asarray(gamma_re, dtype=float)
    a = gsr / (1.0 + grr)
    c_d = 0.5 * _log2p1(_two_hop_af(a, np.asarray(gamma_rd, dtype=float)))
    c_e = 0.5 * _log2p1(gse / (1.0 + gre) + gre / (1.0 + gse))
    return c_d, c_e


def hdr_sc_array(gamma_sr, gamma_rd, gamma_se, gamma_re):
    c_d, c_e = hdr_components(gamma_sr, gamma_rd, gamma_se, gamma_re)
    return np.maximum(c_d - c_e, 0.0)


def fdr_sc_array(gamma_sr, gamma_rd, gamma_se, gamma_re, gamma_rr):
    c_d, c_e = fdr_components(gamma_sr, gamma_rd, gamma_se, gamma_re, gamma_rr)
    return np.maximum(c_d - c_e, 0.0)


def fdj_sc_array(gamma_sr, gamma_rd, gamma_se, gamma_re, gamma_rr):
    c_d, c_e = fdj_components(gamma_sr, gamma_rd, gamma_se, gamma_re, gamma_rr)
    return np.maximum(c_d - c_e, 0.0)


def hybrid_sc_array(gamma_sr, gamma_rd, gamma_se, gamma_re, gamma_rr):
    return np.maximum(
        hdr_sc_array(gamma_sr, gamma_rd, gamma_se, gamma_re),
        fdr_sc_array(gamma_sr, gamma_rd, gamma_se, gamma_re, gamma_rr),
    )


def _sample(c_d, c_e) -> SecrecySample:
    c_d = float(c_d)
    c_e = float(c_e)
    return SecrecySample(c_d=c_d, c_e=c_e, sc=max(0.0, c_d - c_e))


def hdr_evaluate(real: ChannelRealization) -> SecrecySample:
    return _sample(*hdr_components(real.gamma_sr, real.gamma_rd,
                                   real.gamma_se, real.gamma_re))


def fdr_evaluate(real: ChannelRealization) -> SecrecySample:
    return _sample(*fdr_components(real.gamma_sr, real.gamma_rd,
                                   real.gamma_se, real.gamma_re, real.gamma_rr))


def fdj_evaluate(real: ChannelRealization) -> SecrecySample:
    return _sample(*fdj_components(real.gamma_sr, real.gamma_rd,
                                   real.gamma_se, real.gamma_re, real.gamma_rr))


def hybrid_hd_fd_evaluate(real: ChannelRealization) -> SecrecySample:
    """Mode switching: the relay picks whichever of HD/FD yields the larger
    secrecy capacity on this realization; ties go to FD."""
    hd = hdr_evaluate(real)
    fd = fdr_evaluate(real)
    return fd if fd.sc >= hd.sc else hd
