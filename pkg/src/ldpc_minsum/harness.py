"""Simulation sweeps, cross-engine verification, benchmarks and code statistics.

Every simulation transmits the all-zero codeword: the decoders are
sign-symmetric and the channel is symmetric, so error statistics do not
depend on the codeword. Frame ``t`` of sweep point ``p`` draws its noise
from ``trial_seed(master_seed, p, t)``, which makes results independent of
how trials are split across workers.
"""

from __future__ import annotations

import csv
import io
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Iterable, Sequence

import numpy as np

from . import compact, reference, single_scan
from .arith import FLOAT64, NumericMode, VariantRule
from .channel import ChannelParams, LlrMode, ebn0_to_sigma2, llr_init, modulate_bpsk, trial_seed, transmit_awgn
from .core import ENGINES, DecoderConfig, hard_decision, make_engine, run_decode
from .tanner import ParityCheckMatrix

TRIAL_BATCH = 64


@dataclass
class SweepSpec:
    code: ParityCheckMatrix
    ebn0_points: Sequence[float]
    frames: int = 1000
    max_iter: int = 50
    variant: VariantRule = field(default_factory=VariantRule.plain)
    mode: NumericMode = FLOAT64
    master_seed: int = 0
    engines: Sequence[str] = ("single_scan",)
    target_frame_errors: int | None = None
    llr_mode: LlrMode = LlrMode.SCALED
    code_label: str = ""

    def __post_init__(self):
        if not len(self.ebn0_points):
            raise ValueError("need at least one Eb/N0 point")
        if self.frames < 1:
            raise ValueError("frames must be >= 1")
        if not self.variant.covers(self.max_iter):
            raise ValueError("variant schedule does not cover max_iter")
        if isinstance(self.engines, str):
            self.engines = tuple(ENGINES) if self.engines == "all" else (self.engines,)
        for e in self.engines:
            if e not in ENGINES:
                raise ValueError(f"unknown engine {e!r}")

    def decoder_config(self) -> DecoderConfig:
        return DecoderConfig(self.max_iter, self.variant, self.mode)


@dataclass
class SweepRow:
    ebn0_db: float
    frames: int
    bit_errors: int
    frame_errors: int
    ber: float
    fer: float
    mean_iterations: float
    engine: str
    wall_time_s: float
    decoded_bits_per_s: float
    unconverged_frames: int
    undetected_errors: int


CSV_COLUMNS = [f.name for f in fields(SweepRow)]
TIMING_COLUMNS = ("wall_time_s", "decoded_bits_per_s")


def frame_llrs(H: ParityCheckMatrix, sigma2: float, seed: int, llr_mode: LlrMode = LlrMode.SCALED) -> np.ndarray:
    """Channel LLRs for one all-zero frame."""
    y = transmit_awgn(modulate_bpsk(np.zeros(H.n_vars, dtype=np.uint8)), sigma2, seed)
    return llr_init(y, ChannelParams(sigma2 if sigma2 > 0 else 1.0, llr_mode))


def _run_trials(job):
    H, engine, cfg, sigma2, llr_mode, master_seed, point, trials = job
    dec = make_engine(H, engine, cfg.mode)
    bit_err = frame_err = unconverged = undetected = iters = 0
    for t in trials:
        res = run_decode(H, frame_llrs(H, sigma2, trial_seed(master_seed, point, t), llr_mode), dec, cfg)
        wrong = int(res.bits.sum())
        bit_err += wrong
        iters += res.iterations_used
        if not res.converged:
            unconverged += 1
        elif wrong:
            undetected += 1
        if wrong or not res.converged:
            frame_err += 1
    return bit_err, frame_err, unconverged, undetected, iters, len(trials)


def simulate(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """BER/FER sweep; one row per (Eb/N0 point, engine)."""
    H = spec.code
    cfg = spec.decoder_config()
    n_info = H.n_vars - H.n_checks
    rows = []
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for engine in spec.engines:
            for p, ebn0 in enumerate(spec.ebn0_points):
                sigma2 = ebn0_to_sigma2(ebn0, H.rate)
                tallies = np.zeros(6, dtype=np.int64)
                t0 = time.perf_counter()
                chunks = [range(a, min(a + TRIAL_BATCH, spec.frames)) for a in range(0, spec.frames, TRIAL_BATCH)]
                done = False
                # Chunks are folded in trial order and the target-error test runs after
                # every chunk, so where a sweep stops does not depend on the worker count.
                for i in range(0, len(chunks), max(workers, 1)):
                    jobs = [(H, engine, cfg, sigma2, spec.llr_mode, spec.master_seed, p, c) for c in chunks[i : i + max(workers, 1)]]
                    for r in pool.map(_run_trials, jobs) if pool else map(_run_trials, jobs):
                        tallies += r
                        if spec.target_frame_errors is not None and tallies[1] >= spec.target_frame_errors:
                            done = True
                            break
                    if done:
                        break
                wall = time.perf_counter() - t0
                bit_err, frame_err, unconverged, undetected, iters, frames = (int(v) for v in tallies)
                rows.append(
                    SweepRow(
                        ebn0_db=float(ebn0),
                        frames=frames,
                        bit_errors=bit_err,
                        frame_errors=frame_err,
                        ber=bit_err / (frames * H.n_vars),
                        fer=frame_err / frames,
                        mean_iterations=iters / frames,
                        engine=engine,
                        wall_time_s=wall,
                        decoded_bits_per_s=frames * n_info / wall if wall > 0 else math.inf,
                        unconverged_frames=unconverged,
                        undetected_errors=undetected,
                    )
                )
    finally:
        if pool:
            pool.shutdown()
    return rows


def _fmt(v):
    return f"{v:.10g}" if isinstance(v, float) else str(v)


def rows_to_csv(rows: Iterable[SweepRow], metadata: dict | None = None, timing: bool = True) -> str:
    """CSV text with ``#`` metadata lines; ``timing=False`` blanks the wall-clock columns."""
    buf = io.StringIO()
    for key, value in (metadata or {}).items():
        buf.write(f"# {key}: {value}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        w.writerow(["" if (not timing and c in TIMING_COLUMNS) else _fmt(getattr(row, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def sweep_metadata(spec: SweepSpec) -> dict:
    return {
        "code": spec.code_label or repr(spec.code),
        "codeword": "all-zero",
        "master_seed": spec.master_seed,
        "mode": str(spec.mode),
        "variant": str(spec.variant),
        "max_iter": spec.max_iter,
        "llr": spec.llr_mode.value,
        "frame_error": "not converged or nonzero decoded word",
    }


# -- verification -----------------------------------------------------------

PAIRS = (("reference", "single_scan"), ("single_scan", "compact"), ("reference", "compact"))
FLOAT_REL_TOL = 1e-9
FLOAT_ABS_TOL = 1e-12
NEAR_ZERO = 1e-9


@dataclass
class PairStats:
    max_dl: float = 0.0
    max_dz: float = 0.0
    hard_mismatch_frames: list = field(default_factory=list)
    iteration_mismatch_frames: list = field(default_factory=list)
    violations: list = field(default_factory=list)


@dataclass
class VerifyCase:
    mode: NumericMode
    variant: VariantRule
    ebn0_db: float
    frames: int
    pairs: dict
    near_zero_frames: list

    @property
    def ok(self) -> bool:
        return all(not p.violations for p in self.pairs.values())


@dataclass
class VerifyReport:
    cases: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cases)

    def lines(self) -> list[str]:
        out = []
        for c in self.cases:
            for (a, b), st in c.pairs.items():
                out.append(
                    f"{'PASS' if not st.violations else 'FAIL'} mode={c.mode} variant={c.variant} "
                    f"ebn0={c.ebn0_db:g} {a}~{b}: frames={c.frames} max|dL|={st.max_dl:.3e} "
                    f"max|dZ|={st.max_dz:.3e} hard_mismatch={len(st.hard_mismatch_frames)} "
                    f"iter_mismatch={len(st.iteration_mismatch_frames)}"
                )
                out += [f"    {v}" for v in st.violations[:10]]
            for t in c.near_zero_frames:
                out.append(f"    logged: frame {t} mode={c.mode} variant={c.variant} ebn0={c.ebn0_db:g} has |Z_n| < {NEAR_ZERO:g}")
        return out


def _decode_traced(H, z0, engine, cfg):
    trace = []
    res = run_decode(
        H,
        z0,
        engine,
        DecoderConfig(cfg.max_iter, cfg.variant, cfg.mode, cfg.early_stop, lambda k, L, Z: trace.append((L.copy(), Z.copy()))),
    )
    return res, trace


def _within_float_tol(ref: np.ndarray, other: np.ndarray) -> bool:
    scale = float(np.abs(ref).max()) if ref.size else 0.0
    return float(np.abs(ref - other).max()) <= max(FLOAT_REL_TOL * scale, FLOAT_ABS_TOL)


def _compare(st: PairStats, t, run_a, run_b, exact: bool, near_zero: bool):
    (ra, ta), (rb, tb) = run_a, run_b
    for k, ((la, za), (lb, zb)) in enumerate(zip(ta, tb), start=1):
        dl = float(np.abs(la.astype(np.float64) - lb).max())
        dz = float(np.abs(za.astype(np.float64) - zb).max())
        st.max_dl = max(st.max_dl, dl)
        st.max_dz = max(st.max_dz, dz)
        if exact:
            if not (np.array_equal(la, lb) and np.array_equal(za, zb)):
                st.violations.append(f"frame {t} iteration {k}: messages differ (|dL|={dl:.3e}, |dZ|={dz:.3e})")
        elif not (_within_float_tol(la, lb) and _within_float_tol(za, zb)):
            st.violations.append(f"frame {t} iteration {k}: delta beyond tolerance (|dL|={dl:.3e}, |dZ|={dz:.3e})")
        if not np.array_equal(hard_decision(za), hard_decision(zb)):
            if t not in st.hard_mismatch_frames:
                st.hard_mismatch_frames.append(t)
    if ra.iterations_used != rb.iterations_used or not np.array_equal(ra.bits, rb.bits):
        st.iteration_mismatch_frames.append(t)
        if t not in st.hard_mismatch_frames:
            st.hard_mismatch_frames.append(t)
    if st.hard_mismatch_frames and st.hard_mismatch_frames[-1] == t and (exact or not near_zero):
        st.violations.append(f"frame {t}: hard decisions / iterations differ")


def verify(
    H: ParityCheckMatrix,
    frames: int,
    ebn0_points: Sequence[float],
    modes: Sequence[NumericMode] = (FLOAT64,),
    variants: Sequence[VariantRule] = (VariantRule.plain(),),
    max_iter: int = 30,
    master_seed: int = 0,
) -> VerifyReport:
    """Run all three engines on identical frames and compare their per-iteration traces.

    Fixed-point runs must agree bit for bit. In float mode compact and
    single-scan must agree exactly, and the reference may differ from them by
    summation-order rounding (``1e-9`` of the message scale, ``1e-12``
    floor); hard-decision differences are tolerated only on frames where a
    posterior came within ``1e-9`` of zero.
    """
    cases = []
    for mode in modes:
        for variant in variants:
            cfg = DecoderConfig(max_iter, variant, mode)
            engines = {name: make_engine(H, name, mode) for name in ENGINES}
            for p, ebn0 in enumerate(ebn0_points):
                sigma2 = ebn0_to_sigma2(ebn0, H.rate)
                pairs = {pair: PairStats() for pair in PAIRS}
                near_zero_frames = []
                for t in range(frames):
                    z0 = frame_llrs(H, sigma2, trial_seed(master_seed, p, t))
                    runs = {name: _decode_traced(H, z0, eng, cfg) for name, eng in engines.items()}
                    near_zero = not mode.is_fixed and any(
                        np.abs(z).min() < NEAR_ZERO for _, tr in runs.values() for _, z in tr
                    )
                    for a, b in PAIRS:
                        exact = mode.is_fixed or (a, b) == ("single_scan", "compact")
                        _compare(pairs[(a, b)], t, runs[a], runs[b], exact, near_zero)
                    if near_zero and any(t in st.hard_mismatch_frames for st in pairs.values()):
                        near_zero_frames.append(t)
                cases.append(VerifyCase(mode, variant, float(ebn0), frames, pairs, near_zero_frames))
    return VerifyReport(cases)


# -- benchmarking -----------------------------------------------------------


@dataclass
class BenchResult:
    engine: str
    times_s: list
    frames: int
    iterations: int
    info_bits: int

    @property
    def median_s(self) -> float:
        return statistics.median(self.times_s)

    @property
    def throughput(self) -> float:
        """Decoded information bits per second at the median repetition time."""
        return self.frames * self.info_bits / self.median_s


def bench(
    H: ParityCheckMatrix,
    iterations: int = 10,
    frames: int = 50,
    engines: Sequence[str] = tuple(ENGINES),
    repetitions: int = 5,
    ebn0_db: float = 2.0,
    variant: VariantRule | None = None,
    mode: NumericMode = FLOAT64,
    master_seed: int = 0,
) -> dict[str, BenchResult]:
    """Time a fixed number of iterations per frame (no early stop).

    One untimed warm-up decode per engine precedes measurement; repetitions
    interleave engines to spread out machine drift.
    """
    variant = variant or VariantRule.normalized(0.8)
    cfg = DecoderConfig(iterations, variant, mode, early_stop=False)
    sigma2 = ebn0_to_sigma2(ebn0_db, H.rate)
    llrs = [frame_llrs(H, sigma2, trial_seed(master_seed, 0, t)) for t in range(frames)]
    decs = {name: make_engine(H, name, mode) for name in engines}
    for name, dec in decs.items():
        run_decode(H, llrs[0], dec, cfg)
    times = {name: [] for name in engines}
    for _ in range(repetitions):
        for name, dec in decs.items():
            t0 = time.perf_counter()
            for z0 in llrs:
                run_decode(H, z0, dec, cfg)
            times[name].append(time.perf_counter() - t0)
    k = H.n_vars - H.n_checks
    return {name: BenchResult(name, times[name], frames, iterations, k) for name in engines}


def bench_ratios(results: dict[str, BenchResult]) -> dict[str, float]:
    out = {}
    ref = results.get("reference")
    ss = results.get("single_scan")
    cp = results.get("compact")
    if ref and ss:
        out["single_scan/reference"] = ss.throughput / ref.throughput
    if ref and cp:
        out["compact/reference"] = cp.throughput / ref.throughput
    if ss and cp:
        out["compact/single_scan"] = cp.throughput / ss.throughput
    return out


# -- code statistics --------------------------------------------------------


def code_info(H: ParityCheckMatrix, mode: NumericMode = NumericMode.fixed(6, 0)) -> dict:
    vh = np.bincount(H.var_degrees)
    ch = np.bincount(H.check_degrees)
    return {
        "n_vars": H.n_vars,
        "n_checks": H.n_checks,
        "n_edges": H.n_edges,
        "rate": H.rate,
        "var_degree_histogram": {int(d): int(c) for d, c in enumerate(vh) if c},
        "check_degree_histogram": {int(d): int(c) for d, c in enumerate(ch) if c},
        "storage": {
            "reference": reference.storage_report(H),
            "single_scan": single_scan.storage_report(H),
            "compact": compact.storage_report(H, mode),
        },
    }
