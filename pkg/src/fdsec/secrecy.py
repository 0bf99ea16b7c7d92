"""Capacity and secrecy arithmetic shared by every scheme.

All capacities are in bits per channel use (base-2 logarithms). A secrecy
outage occurs when the secrecy capacity falls strictly below the target
secrecy rate; ties count as secure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SecrecySample:
    """Per-realization (c_d, c_e, sc) triple for one scheme."""

    c_d: float
    c_e: float
    sc: float

    def __post_init__(self):
        if self.c_d < 0.0 or self.c_e < 0.0:
            raise ValueError("capacities must be >= 0")


@dataclass(frozen=True)
class TargetRate:
    """Target secrecy rate in bits per channel use."""

    r0: float

    def __post_init__(self):
        if not (math.isfinite(self.r0) and self.r0 >= 0.0):
            raise ValueError(f"target rate must be finite and >= 0, got {self.r0!r}")


def capacity(gamma):
    """Shannon capacity log2(1 + gamma) of a link with linear SNR gamma."""
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0.0):
        raise ValueError(f"SNR must be >= 0, got {gamma!r}")
    out = np.log2(1.0 + g)
    return float(out) if np.isscalar(gamma) else out


def secrecy_capacity(c_d, c_e):
    """max(0, c_d - c_e): positive only when the legitimate link is better."""
    out = np.maximum(np.asarray(c_d, dtype=float) - np.asarray(c_e, dtype=float), 0.0)
    return float(out) if np.isscalar(c_d) and np.isscalar(c_e) else out


def outage_indicator(sc: float, rate: TargetRate) -> bool:
    """True iff the secrecy capacity is strictly below the target rate."""
    return sc < rate.r0


def direct_wiretap_sop_oracle(gamma_d_bar: float, gamma_e_bar: float,
                              rate: TargetRate) -> float:
    """Exact SOP of a direct (no-relay) Rayleigh wiretap link.

    With rho = 2^r0 and independent exponential SNRs at destination and
    eavesdropper:

        SOP = 1 - [gd / (gd + rho * ge)] * exp(-(rho - 1) / gd)

    Derivation: P(1 + g_d < rho * (1 + g_e)) integrated over the eavesdropper
    density; verified against numerical quadrature in the test suite.
    """
    if gamma_d_bar <= 0.0:
        raise ValueError(f"destination average SNR must be > 0, got {gamma_d_bar!r}")
    if gamma_e_bar < 0.0:
        raise ValueError(f"eavesdropper average SNR must be >= 0, got {gamma_e_bar!r}")
    rho = 2.0 ** rate.r0
    scale = gamma_d_bar / (gamma_d_bar + rho * gamma_e_bar)
    return 1.0 - scale * math.exp(-(rho - 1.0) / gamma_d_bar)
