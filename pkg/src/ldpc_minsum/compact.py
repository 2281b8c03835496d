"""Memory-efficient single-scan decoder.

A check's outgoing magnitudes take only two values: the smallest incoming
magnitude everywhere except at the position of that smallest input, which
gets the second smallest. So per check we keep ``first`` (the common
magnitude), ``second`` (the exceptional one), ``pos`` (where the exception
sits) and one sign bit per edge, instead of a full message per edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .arith import FLOAT64, NumericMode, VariantRule
from .tanner import ParityCheckMatrix


def _pos_dtype(max_dc: int):
    return np.uint8 if max_dc <= 256 else np.uint16 if max_dc <= 65536 else np.uint32


@dataclass
class CompactCheckState:
    """Per-check ``first``/``second``/``pos`` plus bit-packed edge signs (bit set = negative).

    ``pos`` is the offset inside the check's neighbor list; ``positions`` maps
    it to a variable index.
    """

    H: ParityCheckMatrix
    first: np.ndarray
    second: np.ndarray
    pos: np.ndarray
    signs: np.ndarray
    z_prev: np.ndarray
    z_accum: np.ndarray

    @classmethod
    def initial(cls, H: ParityCheckMatrix, z0, mode: NumericMode = FLOAT64) -> "CompactCheckState":
        # first == second == 0 makes every recovered message 0, whatever the signs and positions.
        z0 = np.asarray(z0, dtype=mode.dtype)
        return cls(
            H,
            np.zeros(H.n_checks, dtype=mode.dtype),
            np.zeros(H.n_checks, dtype=mode.dtype),
            np.zeros(H.n_checks, dtype=_pos_dtype(int(H.check_degrees.max()))),
            np.zeros((H.n_edges + 7) // 8, dtype=np.uint8),
            z0.copy(),
            z0.copy(),
        )

    @property
    def positions(self) -> np.ndarray:
        return self.H.check_vars[self.H.check_ptr[:-1] + self.pos]

    def sign(self, edge: int) -> int:
        return -1 if (self.signs[edge >> 3] >> (edge & 7)) & 1 else 1

    def expand(self) -> np.ndarray:
        """All check-to-variable messages, edge-indexed."""
        out = np.empty(self.H.n_edges, dtype=self.first.dtype)
        kernels.compact_expand(self.H.check_ptr, self.first, self.second, self.pos, self.signs, out)
        return out


def recover_message(state: CompactCheckState, m: int, n: int):
    """Message from check ``m`` to variable ``n``: sign times (second if n is the stored position else first)."""
    try:
        e = state.H.edge_id(m, n)
    except KeyError:
        raise ValueError(f"variable {n} is not a neighbor of check {m}") from None
    mag = state.second[m] if e - int(state.H.check_ptr[m]) == int(state.pos[m]) else state.first[m]
    return state.sign(e) * mag


def compact_iterate(
    state: CompactCheckState,
    z0,
    H: ParityCheckMatrix,
    rule: VariantRule,
    k: int,
    mode: NumericMode = FLOAT64,
    scratch: np.ndarray | None = None,
) -> CompactCheckState:
    """Advance ``state`` by one iteration in place; afterwards ``state.z_prev`` is the new posterior."""
    if scratch is None:
        scratch = np.empty(int(H.check_degrees.max()), dtype=np.float64)
    code, lam, beta = rule.kernel_params(k, mode)
    kernels.compact_pass(
        H.check_ptr,
        H.check_vars,
        state.first,
        state.second,
        state.pos,
        state.signs,
        state.z_prev,
        state.z_accum,
        np.asarray(z0, dtype=mode.dtype),
        code,
        lam,
        beta,
        mode.message_max,
        mode.is_fixed,
        scratch,
    )
    state.z_prev, state.z_accum = state.z_accum, state.z_prev
    return state


def storage_report(H: ParityCheckMatrix, mode: NumericMode) -> dict:
    """Persistent message storage in bits, compact vs one ``b``-bit value per edge.

    Float mode is costed at 64 bits per value.
    """
    b = mode.bits if mode.is_fixed else 64
    pos_bits = math.ceil(math.log2(int(H.check_degrees.max())))
    compact = H.n_checks * (2 * b + pos_bits) + H.n_edges
    return {
        "value_bits": b,
        "position_bits": pos_bits,
        "compact_bits": compact,
        "flat_bits": H.n_edges * b,
    }


class CompactDecoder:
    name = "compact"

    def __init__(self, H: ParityCheckMatrix, mode: NumericMode = FLOAT64):
        self.H = H
        self.mode = mode
        self.z0 = np.zeros(H.n_vars, dtype=mode.dtype)
        self.state = CompactCheckState.initial(H, self.z0, mode)
        self._scratch = np.empty(int(H.check_degrees.max()), dtype=np.float64)

    def start(self, z0: np.ndarray) -> None:
        st = self.state
        self.z0[:] = z0
        st.first[:] = 0
        st.second[:] = 0
        st.pos[:] = 0
        st.signs[:] = 0
        st.z_prev[:] = z0
        st.z_accum[:] = z0

    def iterate(self, k: int, code: int, lam: float, beta: float) -> None:
        H, mode, st = self.H, self.mode, self.state
        kernels.compact_pass(
            H.check_ptr,
            H.check_vars,
            st.first,
            st.second,
            st.pos,
            st.signs,
            st.z_prev,
            st.z_accum,
            self.z0,
            code,
            lam,
            beta,
            mode.message_max,
            mode.is_fixed,
            self._scratch,
        )
        st.z_prev, st.z_accum = st.z_accum, st.z_prev

    @property
    def posterior(self) -> np.ndarray:
        return self.state.z_prev

    def messages(self) -> np.ndarray:
        out = self.state.expand()
        out.flags.writeable = False
        return out
