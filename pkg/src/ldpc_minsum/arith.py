"""Numeric modes (float / saturating fixed point) and the normalized/offset rules."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

# Variant codes understood by the compiled kernels.
PLAIN, NORMALIZED, OFFSET = 0, 1, 2


@dataclass(frozen=True)
class NumericMode:
    """``fixed`` messages are integers in units of ``2**-frac``, saturated to ``±message_max``."""

    kind: str = "float64"
    bits: int = 0
    frac: int = 0

    def __post_init__(self):
        if self.kind == "float64":
            return
        if self.kind != "fixed":
            raise ValueError(f"unknown numeric mode {self.kind!r}")
        if not 2 <= self.bits <= 16:
            raise ValueError(f"fixed-point width must be in [2, 16], got {self.bits}")
        if not 0 <= self.frac < self.bits:
            raise ValueError(f"fraction bits must be in [0, {self.bits}), got {self.frac}")

    @classmethod
    def fixed(cls, bits: int, frac: int) -> "NumericMode":
        return cls("fixed", bits, frac)

    @classmethod
    def parse(cls, text: str) -> "NumericMode":
        """``float`` / ``float64`` or ``fixed:b:f``."""
        if text in ("float", "float64"):
            return FLOAT64
        parts = text.split(":")
        if len(parts) == 3 and parts[0] == "fixed":
            return cls.fixed(int(parts[1]), int(parts[2]))
        raise ValueError(f"cannot parse numeric mode {text!r}")

    @property
    def is_fixed(self) -> bool:
        return self.kind == "fixed"

    @property
    def dtype(self):
        return np.int64 if self.is_fixed else np.float64

    @property
    def message_max(self) -> float:
        return float(2 ** (self.bits - 1) - 1) if self.is_fixed else math.inf

    @property
    def scale(self) -> float:
        return float(2**self.frac) if self.is_fixed else 1.0

    def accumulator_bits(self, max_var_degree: int) -> int:
        """Width that holds a posterior sum of ``max_var_degree + 1`` saturated messages."""
        return self.bits + math.ceil(math.log2(max(max_var_degree, 1))) + 1

    def to_real(self, values) -> np.ndarray:
        return np.asarray(values, dtype=np.float64) / self.scale

    def __str__(self):
        return f"fixed:{self.bits}:{self.frac}" if self.is_fixed else "float"


FLOAT64 = NumericMode()


def quantize(x, mode: NumericMode):
    """Round-half-even onto the fixed-point grid and saturate; identity in float mode."""
    if not mode.is_fixed:
        return np.asarray(x, dtype=np.float64) if np.ndim(x) else float(x)
    q = np.clip(np.rint(np.asarray(x, dtype=np.float64) * mode.scale), -mode.message_max, mode.message_max)
    q = q.astype(np.int64)
    return q if q.ndim else int(q)


def sgn(x) -> int:
    """+1 for ``x >= 0``, -1 otherwise."""
    return -1 if x < 0 else 1


class VariantKind(enum.Enum):
    PLAIN = "plain"
    NORMALIZED = "normalized"
    OFFSET = "offset"


@dataclass(frozen=True)
class VariantRule:
    """Check-output post-processing with a per-iteration parameter schedule.

    A one-element schedule is broadcast to every iteration.
    """

    kind: VariantKind = VariantKind.PLAIN
    schedule: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", VariantKind(self.kind))
        object.__setattr__(self, "schedule", tuple(float(v) for v in self.schedule))
        if self.kind is VariantKind.PLAIN:
            if self.schedule:
                raise ValueError("plain rule takes no schedule")
            return
        if not self.schedule:
            raise ValueError(f"{self.kind.value} rule needs a schedule")
        for v in self.schedule:
            if self.kind is VariantKind.NORMALIZED and not 0 < v < 1:
                raise ValueError(f"normalization factor must be in (0, 1), got {v}")
            if self.kind is VariantKind.OFFSET and not v > 0:
                raise ValueError(f"offset must be > 0, got {v}")

    @classmethod
    def plain(cls) -> "VariantRule":
        return cls(VariantKind.PLAIN)

    @classmethod
    def normalized(cls, lam: float | Sequence[float]) -> "VariantRule":
        return cls(VariantKind.NORMALIZED, tuple(np.atleast_1d(lam)))

    @classmethod
    def offset(cls, beta: float | Sequence[float]) -> "VariantRule":
        return cls(VariantKind.OFFSET, tuple(np.atleast_1d(beta)))

    @classmethod
    def parse(cls, text: str) -> "VariantRule":
        """``plain``, ``norm:0.8`` or ``offset:0.5``; ``/`` separates a schedule."""
        name, _, arg = text.partition(":")
        if name == "plain" and not arg:
            return cls.plain()
        values = tuple(float(v) for v in arg.split("/")) if arg else ()
        if name in ("norm", "normalized"):
            return cls.normalized(values)
        if name == "offset":
            return cls.offset(values)
        raise ValueError(f"cannot parse variant {text!r}")

    def covers(self, max_iter: int) -> bool:
        return len(self.schedule) <= 1 or len(self.schedule) >= max_iter

    def value(self, k: int) -> float:
        """Parameter for iteration ``k`` (1-based)."""
        if self.kind is VariantKind.PLAIN:
            return 0.0
        if len(self.schedule) == 1:
            return self.schedule[0]
        return self.schedule[k - 1]

    def kernel_params(self, k: int, mode: NumericMode) -> tuple[int, float, float]:
        """``(code, lam, beta)`` for the compiled kernels; beta is in message units."""
        if self.kind is VariantKind.NORMALIZED:
            return NORMALIZED, self.value(k), 0.0
        if self.kind is VariantKind.OFFSET:
            return OFFSET, 1.0, float(quantize(self.value(k), mode))
        return PLAIN, 1.0, 0.0

    def __str__(self):
        if self.kind is VariantKind.PLAIN:
            return "plain"
        tag = "norm" if self.kind is VariantKind.NORMALIZED else "offset"
        return f"{tag}:" + "/".join(f"{v:g}" for v in self.schedule)


def apply_variant(magnitude, rule: VariantRule, k: int = 1, mode: NumericMode = FLOAT64):
    """Post-process a nonnegative check-output magnitude.

    In fixed mode the scaled value is re-quantized (round-half-even) and the
    offset is subtracted in raw units.
    """
    code, lam, beta = rule.kernel_params(k, mode)
    mag = np.asarray(magnitude, dtype=np.float64)
    if code == NORMALIZED:
        out = lam * mag
        if mode.is_fixed:
            out = np.rint(out)
    elif code == OFFSET:
        out = np.maximum(mag - beta, 0.0)
    else:
        out = mag
    if mode.is_fixed:
        out = out.astype(np.int64)
    return out if out.ndim else out.item()
