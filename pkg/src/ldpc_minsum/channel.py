"""BPSK over AWGN, channel LLRs, and the per-trial seed scheme."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class LlrMode(enum.Enum):
    SCALED = "scaled"  # 2 y / sigma^2
    RAW = "raw"  # y


@dataclass(frozen=True)
class ChannelParams:
    sigma2: float
    llr_mode: LlrMode = LlrMode.SCALED

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ValueError(f"sigma2 must be > 0, got {self.sigma2}")
        object.__setattr__(self, "llr_mode", LlrMode(self.llr_mode))


def modulate_bpsk(bits) -> np.ndarray:
    """Map bit 0 to +1 and bit 1 to -1."""
    bits = np.asarray(bits)
    if bits.size and not np.isin(bits, (0, 1)).all():
        raise ValueError("bits must be 0 or 1")
    return 1.0 - 2.0 * bits.astype(np.float64)


def trial_seed(master_seed: int, point: int, trial: int) -> int:
    """64-bit seed for trial ``trial`` of sweep point ``point``.

    Derived through numpy's ``SeedSequence`` hashing of the triple, so it is
    independent of the order in which trials are scheduled.
    """
    ss = np.random.SeedSequence([int(master_seed), int(point), int(trial)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def transmit_awgn(symbols, sigma2: float, seed: int) -> np.ndarray:
    """Add i.i.d. N(0, sigma2) noise drawn from a PCG64 generator seeded by ``seed``.

    Gaussian variates come from numpy's ziggurat sampler. ``sigma2 == 0`` is
    an exact pass-through.
    """
    symbols = np.asarray(symbols, dtype=np.float64)
    if sigma2 < 0:
        raise ValueError(f"sigma2 must be >= 0, got {sigma2}")
    if sigma2 == 0:
        return symbols.copy()
    rng = np.random.default_rng(seed)
    return symbols + np.sqrt(sigma2) * rng.standard_normal(symbols.shape)


def llr_init(y, params: ChannelParams) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64)
    if params.llr_mode is LlrMode.RAW:
        return y.copy()
    return 2.0 * y / params.sigma2


def ebn0_to_sigma2(ebn0_db: float, rate: float) -> float:
    """Noise variance for unit-energy BPSK at the given Eb/N0 and code rate."""
    if not 0 < rate <= 1:
        raise ValueError(f"code rate must lie in (0, 1], got {rate}")
    return 1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0))
