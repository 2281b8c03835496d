"""Engine-independent decoding loop: hard decisions, syndromes, stopping."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels
from .arith import FLOAT64, NumericMode, VariantRule, quantize
from .compact import CompactDecoder
from .reference import ReferenceDecoder
from .single_scan import SingleScanDecoder
from .tanner import ParityCheckMatrix

ENGINES = {
    "reference": ReferenceDecoder,
    "single_scan": SingleScanDecoder,
    "compact": CompactDecoder,
}

TraceFn = Callable[[int, np.ndarray, np.ndarray], None]


@dataclass
class DecoderConfig:
    max_iter: int = 50
    variant: VariantRule = field(default_factory=VariantRule.plain)
    mode: NumericMode = FLOAT64
    early_stop: bool = True
    trace: Optional[TraceFn] = None

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass
class DecodeResult:
    bits: np.ndarray
    converged: bool
    iterations_used: int
    posterior: np.ndarray  # in the engine's numeric units (raw integers in fixed mode)


def hard_decision(z) -> np.ndarray:
    """Bit 0 where the LLR is strictly positive, 1 otherwise (zero decodes to 1)."""
    return (np.asarray(z) <= 0).astype(np.uint8)


def syndrome(H: ParityCheckMatrix, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.uint8)
    if x.shape != (H.n_vars,):
        raise ValueError(f"word length {x.shape} does not match N = {H.n_vars}")
    return np.bitwise_xor.reduceat(x[H.check_vars], H.check_ptr[:-1]).astype(np.uint8)


def is_codeword(H: ParityCheckMatrix, x) -> bool:
    return kernels.syndrome_weight(H.check_ptr, H.check_vars, np.asarray(x, dtype=np.uint8)) == 0


def make_engine(H: ParityCheckMatrix, engine, mode: NumericMode = FLOAT64):
    """Instantiate an engine from a registry name or class; instances pass through."""
    if isinstance(engine, str):
        try:
            engine = ENGINES[engine]
        except KeyError:
            raise ValueError(f"unknown engine {engine!r}; choose from {sorted(ENGINES)}") from None
    if isinstance(engine, type):
        return engine(H, mode)
    if engine.H is not H or engine.mode != mode:
        raise ValueError("engine instance was built for a different code or numeric mode")
    return engine


def _check_accumulator(z: np.ndarray, mode: NumericMode, max_dv: int) -> None:
    limit = 2 ** (mode.accumulator_bits(max_dv) - 1) - 1
    peak = int(np.abs(z).max())
    if peak > limit:
        raise OverflowError(f"posterior magnitude {peak} exceeds accumulator limit {limit}")


def run_decode(H: ParityCheckMatrix, z0, engine="single_scan", cfg: DecoderConfig | None = None) -> DecodeResult:
    """Decode one frame of channel LLRs.

    The channel hard decision is tested first, so a frame that is already a
    codeword returns with ``iterations_used == 0`` (only with ``early_stop``;
    with it off the loop always runs ``max_iter`` iterations).
    """
    cfg = cfg or DecoderConfig()
    mode = cfg.mode
    if not cfg.variant.covers(cfg.max_iter):
        raise ValueError(f"variant schedule has {len(cfg.variant.schedule)} entries, max_iter is {cfg.max_iter}")
    z0 = np.asarray(z0, dtype=np.float64)
    if z0.shape != (H.n_vars,):
        raise ValueError(f"LLR vector length {z0.shape} does not match N = {H.n_vars}")
    z0q = np.asarray(quantize(z0, mode), dtype=mode.dtype)
    dec = make_engine(H, engine, mode)

    if cfg.early_stop:
        bits = hard_decision(z0q)
        if is_codeword(H, bits):
            return DecodeResult(bits, True, 0, z0q.copy())

    dec.start(z0q)
    max_dv = int(H.var_degrees.max())
    for k in range(1, cfg.max_iter + 1):
        dec.iterate(k, *cfg.variant.kernel_params(k, mode))
        z = dec.posterior
        if mode.is_fixed:
            _check_accumulator(z, mode, max_dv)
        if cfg.trace is not None:
            zv = z.view()
            zv.flags.writeable = False
            cfg.trace(k, dec.messages(), zv)
        if cfg.early_stop:
            bits = hard_decision(z)
            if is_codeword(H, bits):
                return DecodeResult(bits, True, k, z.copy())

    z = dec.posterior.copy()
    bits = hard_decision(z)
    return DecodeResult(bits, is_codeword(H, bits), cfg.max_iter, z)
