"""Average link budgets and Rayleigh-fading channel realizations.

Everything runs in the SNR domain: under flat Rayleigh fading the
instantaneous SNR of a link is exponentially distributed with mean equal to
the link's average SNR, so complex channel coefficients are never formed.

Uniform-draw consumption is fixed so substreams stay aligned no matter how
work is partitioned across workers:

* each realization consumes 5 uniforms for the scalar links, in the order
  sr, rd, se, re, rr;
* when the budget has K > 1 relays, 4 more uniforms per relay follow, in
  relay index order, each block ordered sr_i, rd_i, re_i, rr_i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

_TWO_POW_64 = 1 << 64
_U53 = 1 << 53


def db_to_linear(x_db: float) -> float:
    """Convert a decibel value to linear scale, 10^(x/10)."""
    x = float(x_db)
    if not math.isfinite(x):
        raise ValueError(f"dB value must be finite, got {x_db!r}")
    return 10.0 ** (x / 10.0)


def linear_to_db(x: float) -> float:
    """Convert a positive linear value to decibels."""
    x = float(x)
    if not (math.isfinite(x) and x > 0.0):
        raise ValueError(f"linear value must be finite and > 0, got {x!r}")
    return 10.0 * math.log10(x)


class RandomStream:
    """Single-owner uniform stream addressed by (seed, substream).

    Backed by the counter-based Philox generator keyed with the address pair,
    so distinct substreams of the same seed are independent and a stream's
    output depends only on its address, never on what other streams did.
    Uniforms are strictly inside (0, 1): they are (k + 0.5) / 2^53 for a
    53-bit integer k.
    """

    def __init__(self, seed: int, substream: int = 0):
        if not (0 <= int(seed) < _TWO_POW_64):
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
        if not (0 <= int(substream) < _TWO_POW_64):
            raise ValueError(f"substream must be a 64-bit unsigned integer, got {substream!r}")
        self.seed = int(seed)
        self.substream = int(substream)
        key = (self.seed << 64) | self.substream
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def uniforms(self, *shape: int) -> np.ndarray:
        """Draw uniforms in the open interval (0, 1), C-order within `shape`."""
        k = self._gen.integers(0, _U53, size=shape if shape else 1)
        u = (k + 0.5) * 2.0 ** -53
        return u if shape else float(u[0])

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, substream={self.substream})"


@dataclass(frozen=True)
class LinkBudget:
    """Average (mean) linear-scale SNRs of every link in the system.

    `mode` is "stochastic" for Rayleigh draws or "deterministic" for a test
    mode in which every draw equals its mean exactly.
    """

    gamma_sr_bar: float
    gamma_rd_bar: float
    gamma_se_bar: float
    gamma_re_bar: float
    gamma_rr_bar: float
    num_relays: int = 1
    mode: str = "stochastic"

    def __post_init__(self):
        for name in ("gamma_sr_bar", "gamma_rd_bar", "gamma_se_bar",
                     "gamma_re_bar", "gamma_rr_bar"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")
        if int(self.num_relays) < 1:
            raise ValueError(f"num_relays must be >= 1, got {self.num_relays!r}")
        if self.mode not in ("stochastic", "deterministic"):
            raise ValueError(f"mode must be 'stochastic' or 'deterministic', got {self.mode!r}")

    @classmethod
    def from_db(cls, gamma_sr_db: float, gamma_rd_db: float, gamma_se_db: float,
                gamma_re_db: float, gamma_rr_db: float, num_relays: int = 1,
                mode: str = "stochastic") -> "LinkBudget":
        return cls(
            gamma_sr_bar=db_to_linear(gamma_sr_db),
            gamma_rd_bar=db_to_linear(gamma_rd_db),
            gamma_se_bar=db_to_linear(gamma_se_db),
            gamma_re_bar=db_to_linear(gamma_re_db),
            gamma_rr_bar=db_to_linear(gamma_rr_db),
            num_relays=num_relays,
            mode=mode,
        )

    @property
    def deterministic(self) -> bool:
        return self.mode == "deterministic"

    def with_gamma_rr_db(self, gamma_rr_db: float) -> "LinkBudget":
        return replace(self, gamma_rr_bar=db_to_linear(gamma_rr_db))

    def to_db_dict(self) -> dict:
        """Budget in dB for reporting; zero means render as -inf dB."""
        def db(v):
            return linear_to_db(v) if v > 0.0 else float("-inf")
        return {
            "gamma_sr_db": db(self.gamma_sr_bar),
            "gamma_rd_db": db(self.gamma_rd_bar),
            "gamma_se_db": db(self.gamma_se_bar),
            "gamma_re_db": db(self.gamma_re_bar),
            "gamma_rr_db": db(self.gamma_rr_bar),
            "num_relays": self.num_relays,
            "mode": self.mode,
        }


def sample_exponential(mean, u):
    """Inverse-CDF exponential draw: -mean * ln(u); identically 0 when mean=0.

    `u` must lie strictly in (0, 1). Accepts scalars or numpy arrays.
    """
    mean_arr = np.asarray(mean, dtype=float)
    u_arr = np.asarray(u, dtype=float)
    if np.any(mean_arr < 0.0) or not np.all(np.isfinite(mean_arr)):
        raise ValueError(f"mean must be finite and >= 0, got {mean!r}")
    if np.any(u_arr <= 0.0) or np.any(u_arr >= 1.0):
        raise ValueError("uniform input must lie strictly in (0, 1)")
    out = -mean_arr * np.log(u_arr)
    if np.isscalar(mean) and np.isscalar(u):
        return float(out)
    return out


@dataclass(frozen=True)
class ChannelRealization:
    """One instantaneous draw of all per-link SNRs (linear scale).

    For budgets with K > 1 relays the per-relay vectors are populated
    (length K); gamma_se is shared across relays.
    """

    gamma_sr: float
    gamma_rd: float
    gamma_se: float
    gamma_re: float
    gamma_rr: float
    relay_sr: Optional[np.ndarray] = None
    relay_rd: Optional[np.ndarray] = None
    relay_re: Optional[np.ndarray] = None
    relay_rr: Optional[np.ndarray] = None

    def __post_init__(self):
        for name in ("gamma_sr", "gamma_rd", "gamma_se", "gamma_re", "gamma_rr"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")


@dataclass
class RealizationBatch:
    """Vectorized channel realizations; each field is shape (n,) or (n, K).

    `u_rr` keeps the raw uniforms behind the loop-interference draws so a
    scheme with a different gamma_rr budget can be evaluated on the same
    underlying randomness (common random numbers across budgets).
    """

    gamma_sr: np.ndarray
    gamma_rd: np.ndarray
    gamma_se: np.ndarray
    gamma_re: np.ndarray
    gamma_rr: np.ndarray
    relay_sr: Optional[np.ndarray] = None
    relay_rd: Optional[np.ndarray] = None
    relay_re: Optional[np.ndarray] = None
    relay_rr: Optional[np.ndarray] = None
    u_rr: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return self.gamma_sr.shape[0]

    def relay_view(self):
        """Per-relay (n, K) arrays; K = 1 views alias the scalar links."""
        if self.relay_sr is not None:
            return self.relay_sr, self.relay_rd, self.relay_re, self.relay_rr
        return (self.gamma_sr[:, None], self.gamma_rd[:, None],
                self.gamma_re[:, None], self.gamma_rr[:, None])


def sample_batch(budget: LinkBudget, stream: RandomStream, n: int) -> RealizationBatch:
    """Draw `n` realizations from `stream` in the documented uniform order."""
    if n < 1:
        raise ValueError(f"batch size must be >= 1, got {n}")
    k = budget.num_relays
    if budget.deterministic:
        ones = np.ones(n)
        batch = RealizationBatch(
            gamma_sr=budget.gamma_sr_bar * ones,
            gamma_rd=budget.gamma_rd_bar * ones,
            gamma_se=budget.gamma_se_bar * ones,
            gamma_re=budget.gamma_re_bar * ones,
            gamma_rr=budget.gamma_rr_bar * ones,
        )
        if k > 1:
            batch.relay_sr = budget.gamma_sr_bar * np.ones((n, k))
            batch.relay_rd = budget.gamma_rd_bar * np.ones((n, k))
            batch.relay_re = budget.gamma_re_bar * np.ones((n, k))
            batch.relay_rr = budget.gamma_rr_bar * np.ones((n, k))
        return batch

    u5 = stream.uniforms(n, 5)
    logs = -np.log(u5)
    batch = RealizationBatch(
        gamma_sr=budget.gamma_sr_bar * logs[:, 0],
        gamma_rd=budget.gamma_rd_bar * logs[:, 1],
        gamma_se=budget.gamma_se_bar * logs[:, 2],
        gamma_re=budget.gamma_re_bar * logs[:, 3],
        gamma_rr=budget.gamma_rr_bar * logs[:, 4],
        u_rr=u5[:, 4],
    )
    if k > 1:
        uk = stream.uniforms(n, k, 4)
        logs_k = -np.log(uk)
        batch.relay_sr = budget.gamma_sr_bar * logs_k[:, :, 0]
        batch.relay_rd = budget.gamma_rd_bar * logs_k[:, :, 1]
        batch.relay_re = budget.gamma_re_bar * logs_k[:, :, 2]
        batch.relay_rr = budget.gamma_rr_bar * logs_k[:, :, 3]
    return batch


def sample_realization(budget: LinkBudget, stream: RandomStream) -> ChannelRealization:
    """Draw a single ChannelRealization (5 uniforms, plus 4 per relay if K > 1)."""
    b = sample_batch(budget, stream, 1)
    return ChannelRealization(
        gamma_sr=float(b.gamma_sr[0]),
        gamma_rd=float(b.gamma_rd[0]),
        gamma_se=float(b.gamma_se[0]),
        gamma_re=float(b.gamma_re[0]),
        gamma_rr=float(b.gamma_rr[0]),
        relay_sr=None if b.relay_sr is None else b.relay_sr[0].copy(),
        relay_rd=None if b.relay_rd is None else b.relay_rd[0].copy(),
        relay_re=None if b.relay_re is None else b.relay_re[0].copy(),
        relay_rr=None if b.relay_rr is None else b.relay_rr[0].copy(),
    )
