"""Compiled inner loops shared by the three min-sum engines.

Every kernel is generic over the message dtype: ``float64`` arrays for float
mode, ``int64`` arrays (raw fixed-point units) for fixed mode. Magnitudes are
handled in float64 inside a check, which is exact for integers below 2**53.

``mmax`` is the message saturation bound (``inf`` in float mode) and
``fixed`` selects round-half-even re-quantization after normalization.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .arith import NORMALIZED, OFFSET


@njit(cache=True)
def variant_magnitude(mag, code, lam, beta, fixed):
    if code == NORMALIZED:
        out = lam * mag
        if fixed:
            out = np.rint(out)
        return out
    if code == OFFSET:
        out = mag - beta
        return out if out > 0.0 else 0.0
    return mag


@njit(cache=True)
def two_minima(vals, d, mmax):
    """Scan ``vals[:d]`` once for (min1, min2, argmin1, odd number of negatives).

    Magnitudes are saturated at ``mmax``. Ties keep the lowest position as
    argmin and set ``min2 == min1``.
    """
    min1 = np.inf
    min2 = np.inf
    arg = 0
    neg = False
    for i in range(d):
        v = vals[i]
        if v < 0:
            neg = not neg
            a = -v
        else:
            a = v
        if a > mmax:
            a = mmax
        if a < min1:
            min2 = min1
            min1 = a
            arg = i
        elif a < min2:
            min2 = a
    return min1, min2, arg, neg


@njit(cache=True)
def reference_check_pass(check_ptr, zv, out_l, code, lam, beta, mmax, fixed, scratch):
    """Horizontal scan: variable-to-check messages ``zv`` -> check-to-variable ``out_l``."""
    n_checks = check_ptr.shape[0] - 1
    for m in range(n_checks):
        lo = check_ptr[m]
        d = check_ptr[m + 1] - lo
        for i in range(d):
            scratch[i] = zv[lo + i]
        min1, min2, arg, neg = two_minima(scratch, d, mmax)
        a = variant_magnitude(min1, code, lam, beta, fixed)
        b = variant_magnitude(min2, code, lam, beta, fixed)
        for i in range(d):
            mag = b if i == arg else a
            if neg != (scratch[i] < 0):
                out_l[lo + i] = -mag
            else:
                out_l[lo + i] = mag


@njit(cache=True)
def reference_var_pass(var_ptr, var_edges, z0, l, out_zv, mmax):
    """Vertical scan: each outgoing message sums the channel value and all *other* incoming messages."""
    n_vars = var_ptr.shape[0] - 1
    for n in range(n_vars):
        lo = var_ptr[n]
        hi = var_ptr[n + 1]
        for j in range(lo, hi):
            acc = z0[n]
            for i in range(lo, hi):
                if i != j:
                    acc += l[var_edges[i]]
            if acc > mmax:
                acc = mmax
            elif acc < -mmax:
                acc = -mmax
            out_zv[var_edges[j]] = acc


@njit(cache=True)
def posterior_pass(var_ptr, var_edges, z0, l, out_z):
    n_vars = var_ptr.shape[0] - 1
    for n in range(n_vars):
        acc = z0[n]
        for i in range(var_ptr[n], var_ptr[n + 1]):
            acc += l[var_edges[i]]
        out_z[n] = acc


@njit(cache=True)
def single_scan_pass(check_ptr, check_vars, l, z_prev, z_accum, z0, code, lam, beta, mmax, fixed, scratch):
    """One merged scan. ``l`` is updated in place; ``z_accum`` receives the new posterior."""
    n_vars = z0.shape[0]
    for n in range(n_vars):
        z_accum[n] = z0[n]
    n_checks = check_ptr.shape[0] - 1
    for m in range(n_checks):
        lo = check_ptr[m]
        d = check_ptr[m + 1] - lo
        for i in range(d):
            scratch[i] = z_prev[check_vars[lo + i]] - l[lo + i]
        min1, min2, arg, neg = two_minima(scratch, d, mmax)
        a = variant_magnitude(min1, code, lam, beta, fixed)
        b = variant_magnitude(min2, code, lam, beta, fixed)
        for i in range(d):
            mag = b if i == arg else a
            val = -mag if neg != (scratch[i] < 0) else mag
            l[lo + i] = val
            z_accum[check_vars[lo + i]] += val


@njit(cache=True)
def compact_pass(check_ptr, check_vars, first, second, pos, signs, z_prev, z_accum, z0, code, lam, beta, mmax, fixed, scratch):
    """Single scan over the compact state; old messages are rebuilt from (first, second, pos, sign bit)."""
    n_vars = z0.shape[0]
    for n in range(n_vars):
        z_accum[n] = z0[n]
    n_checks = check_ptr.shape[0] - 1
    for m in range(n_checks):
        lo = check_ptr[m]
        d = check_ptr[m + 1] - lo
        a_old = first[m]
        b_old = second[m]
        p_old = pos[m]
        for i in range(d):
            e = lo + i
            mag = b_old if i == p_old else a_old
            if (signs[e >> 3] >> (e & 7)) & 1:
                scratch[i] = z_prev[check_vars[e]] + mag
            else:
                scratch[i] = z_prev[check_vars[e]] - mag
        min1, min2, arg, neg = two_minima(scratch, d, mmax)
        a = variant_magnitude(min1, code, lam, beta, fixed)
        b = variant_magnitude(min2, code, lam, beta, fixed)
        first[m] = a
        second[m] = b
        pos[m] = arg
        for i in range(d):
            e = lo + i
            mag = b if i == arg else a
            bit = np.uint8(1 << (e & 7))
            if neg != (scratch[i] < 0):
                signs[e >> 3] |= bit
                z_accum[check_vars[e]] += -mag
            else:
                signs[e >> 3] &= ~bit
                z_accum[check_vars[e]] += mag


@njit(cache=True)
def compact_expand(check_ptr, first, second, pos, signs, out_l):
    """Materialize every check-to-variable message from the compact state."""
    n_checks = check_ptr.shape[0] - 1
    for m in range(n_checks):
        lo = check_ptr[m]
        d = check_ptr[m + 1] - lo
        for i in range(d):
            e = lo + i
            mag = second[m] if i == pos[m] else first[m]
            out_l[e] = -mag if (signs[e >> 3] >> (e & 7)) & 1 else mag


@njit(cache=True)
def syndrome_weight(check_ptr, check_vars, bits):
    count = 0
    for m in range(check_ptr.shape[0] - 1):
        parity = 0
        for e in range(check_ptr[m], check_ptr[m + 1]):
            parity ^= bits[check_vars[e]]
        count += parity
    return count
