"""Single-scan min-sum decoder.

Variable-to-check messages are never stored: a check rebuilds them as
``Z_prev[n] - L[m, n]`` from the previous posterior and its own previous
output, then adds its new outputs straight into the next posterior. Only the
check-to-variable addressing is needed.

The posterior is double-buffered (``z_prev`` / ``z_accum``). Accumulating into
the buffer that later checks still read from would turn the flooding schedule
into a serial one and break equivalence with the two-scan decoder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .arith import FLOAT64, NumericMode, VariantRule
from .reference import _readonly
from .tanner import ParityCheckMatrix


@dataclass
class SingleScanState:
    l: np.ndarray
    z_prev: np.ndarray
    z_accum: np.ndarray

    @classmethod
    def initial(cls, H: ParityCheckMatrix, z0, mode: NumericMode = FLOAT64) -> "SingleScanState":
        z0 = np.asarray(z0, dtype=mode.dtype)
        return cls(np.zeros(H.n_edges, dtype=mode.dtype), z0.copy(), z0.copy())


def single_scan_iterate(
    state: SingleScanState,
    z0,
    H: ParityCheckMatrix,
    rule: VariantRule,
    k: int,
    mode: NumericMode = FLOAT64,
    scratch: np.ndarray | None = None,
) -> SingleScanState:
    """Advance ``state`` by one iteration in place; afterwards ``state.z_prev`` is the new posterior."""
    if scratch is None:
        scratch = np.empty(int(H.check_degrees.max()), dtype=np.float64)
    code, lam, beta = rule.kernel_params(k, mode)
    kernels.single_scan_pass(
        H.check_ptr,
        H.check_vars,
        state.l,
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


def storage_report(H: ParityCheckMatrix) -> dict:
    """Persistent value counts: one L per edge, two posterior buffers, check-to-variable addressing only."""
    return {"edge_values": H.n_edges, "node_values": 2 * H.n_vars, "address_tables": 1}


class SingleScanDecoder:
    name = "single_scan"

    def __init__(self, H: ParityCheckMatrix, mode: NumericMode = FLOAT64):
        self.H = H
        self.mode = mode
        self.z0 = np.zeros(H.n_vars, dtype=mode.dtype)
        self.state = SingleScanState.initial(H, self.z0, mode)
        self._scratch = np.empty(int(H.check_degrees.max()), dtype=np.float64)

    def start(self, z0: np.ndarray) -> None:
        self.z0[:] = z0
        self.state.l[:] = 0
        self.state.z_prev[:] = z0
        self.state.z_accum[:] = z0

    def iterate(self, k: int, code: int, lam: float, beta: float) -> None:
        H, mode, st = self.H, self.mode, self.state
        kernels.single_scan_pass(
            H.check_ptr, H.check_vars, st.l, st.z_prev, st.z_accum, self.z0, code, lam, beta, mode.message_max, mode.is_fixed, self._scratch
        )
        st.z_prev, st.z_accum = st.z_accum, st.z_prev

    @property
    def posterior(self) -> np.ndarray:
        return self.state.z_prev

    def messages(self) -> np.ndarray:
        return _readonly(self.state.l)
