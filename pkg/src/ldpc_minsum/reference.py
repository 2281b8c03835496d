"""Standard two-scan (flooding) min-sum decoder.

Keeps both per-edge message arrays and both addressing tables; the other
engines are checked against it.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .arith import FLOAT64, NumericMode, VariantRule
from .tanner import ParityCheckMatrix


def _readonly(arr: np.ndarray) -> np.ndarray:
    view = arr.view()
    view.flags.writeable = False
    return view


def check_update(zv, H: ParityCheckMatrix, rule: VariantRule, k: int = 1, mode: NumericMode = FLOAT64) -> np.ndarray:
    """Check-to-variable messages from variable-to-check messages (both edge-indexed)."""
    zv = np.asarray(zv, dtype=mode.dtype)
    out = np.empty(H.n_edges, dtype=mode.dtype)
    code, lam, beta = rule.kernel_params(k, mode)
    scratch = np.empty(int(H.check_degrees.max()), dtype=np.float64)
    kernels.reference_check_pass(H.check_ptr, zv, out, code, lam, beta, mode.message_max, mode.is_fixed, scratch)
    return out


def var_update(l, z0, H: ParityCheckMatrix, mode: NumericMode = FLOAT64) -> np.ndarray:
    """Variable-to-check messages; sums run over the other checks in ascending order."""
    out = np.empty(H.n_edges, dtype=mode.dtype)
    kernels.reference_var_pass(
        H.var_ptr, H.var_edges, np.asarray(z0, dtype=mode.dtype), np.asarray(l, dtype=mode.dtype), out, mode.message_max
    )
    return out


def posterior(l, z0, H: ParityCheckMatrix, mode: NumericMode = FLOAT64) -> np.ndarray:
    out = np.empty(H.n_vars, dtype=mode.dtype)
    kernels.posterior_pass(H.var_ptr, H.var_edges, np.asarray(z0, dtype=mode.dtype), np.asarray(l, dtype=mode.dtype), out)
    return out


def storage_report(H: ParityCheckMatrix) -> dict:
    """Persistent value counts: L and Z_mn per edge, one posterior per variable, both address tables."""
    return {"edge_values": 2 * H.n_edges, "node_values": H.n_vars, "address_tables": 2}


class ReferenceDecoder:
    name = "reference"

    def __init__(self, H: ParityCheckMatrix, mode: NumericMode = FLOAT64):
        self.H = H
        self.mode = mode
        dt = mode.dtype
        self.l = np.zeros(H.n_edges, dtype=dt)
        self.zv = np.zeros(H.n_edges, dtype=dt)
        self.z = np.zeros(H.n_vars, dtype=dt)
        self.z0 = np.zeros(H.n_vars, dtype=dt)
        self._scratch = np.empty(int(H.check_degrees.max()), dtype=np.float64)

    def start(self, z0: np.ndarray) -> None:
        self.z0[:] = z0
        self.z[:] = z0
        self.l[:] = 0
        # Initial variable-to-check messages restate the channel values.
        self.zv[:] = np.clip(z0[self.H.check_vars], -self.mode.message_max, self.mode.message_max)

    def iterate(self, k: int, code: int, lam: float, beta: float) -> None:
        H, mode = self.H, self.mode
        kernels.reference_check_pass(H.check_ptr, self.zv, self.l, code, lam, beta, mode.message_max, mode.is_fixed, self._scratch)
        kernels.reference_var_pass(H.var_ptr, H.var_edges, self.z0, self.l, self.zv, mode.message_max)
        kernels.posterior_pass(H.var_ptr, H.var_edges, self.z0, self.l, self.z)

    @property
    def posterior(self) -> np.ndarray:
        return self.z

    def messages(self) -> np.ndarray:
        return _readonly(self.l)
