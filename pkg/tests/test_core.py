import numpy as np
import pytest

from conftest import noisy_llrs
from ldpc_minsum.arith import NumericMode, VariantRule
from ldpc_minsum.core import ENGINES, DecoderConfig, hard_decision, make_engine, run_decode, syndrome

FIXED82 = NumericMode.fixed(8, 2)


def test_hard_decision():
    assert hard_decision([2.5, -0.1, 0.0]).tolist() == [0, 1, 1]
    assert hard_decision(np.ones(4)).tolist() == [0, 0, 0, 0]
    z = np.random.default_rng(0).normal(size=50)
    assert np.array_equal(hard_decision(-z), 1 - hard_decision(z))


def test_syndrome(toy):
    assert syndrome(toy, [1, 1, 0]).tolist() == [0, 1]
    assert syndrome(toy, [0, 0, 0]).tolist() == [0, 0]
    assert syndrome(toy, [1, 1, 1]).tolist() == [0, 0]
    with pytest.raises(ValueError):
        syndrome(toy, [1, 1])


@pytest.mark.parametrize("engine", list(ENGINES))
def test_noiseless_frame_exits_immediately(code96, engine):
    res = run_decode(code96, np.full(code96.n_vars, 2.0), engine, DecoderConfig(10))
    assert res.converged and res.iterations_used == 0
    assert not res.bits.any()


@pytest.mark.parametrize("engine", list(ENGINES))
def test_capped_run(toy, engine):
    # one plain iteration leaves posterior [0, 1, 0]; zeros decode to 1, violating both checks
    res = run_decode(toy, np.array([1.0, -1.0, 1.0]), engine, DecoderConfig(1))
    assert not res.converged and res.iterations_used == 1
    assert res.bits.tolist() == [1, 0, 1]
    assert res.posterior.tolist() == [0.0, 1.0, 0.0]


@pytest.mark.parametrize("engine", list(ENGINES))
def test_early_stop_bits_satisfy_checks(code96, engine):
    for seed in range(10):
        res = run_decode(code96, noisy_llrs(code96, 0.7, seed), engine, DecoderConfig(30, VariantRule.normalized(0.8)))
        if res.converged:
            assert not syndrome(code96, res.bits).any()
        assert res.iterations_used <= 30


def test_toy_engines_agree(toy):
    z0 = np.array([0.6, -0.2, 1.3])
    results = [run_decode(toy, z0, e, DecoderConfig(5)) for e in ENGINES]
    for r in results[1:]:
        assert np.array_equal(r.bits, results[0].bits)
        assert np.allclose(r.posterior, results[0].posterior, rtol=0, atol=1e-12)
        assert r.iterations_used == results[0].iterations_used


def test_deterministic(code96):
    z0 = noisy_llrs(code96, 1.0, 3)
    a = run_decode(code96, z0, "compact", DecoderConfig(20))
    b = run_decode(code96, z0, "compact", DecoderConfig(20))
    assert np.array_equal(a.posterior, b.posterior) and a.iterations_used == b.iterations_used


def test_config_errors(toy):
    with pytest.raises(ValueError):
        DecoderConfig(0)
    with pytest.raises(ValueError, match="schedule"):
        run_decode(toy, np.ones(3), "reference", DecoderConfig(5, VariantRule.normalized([0.5, 0.6])))
    with pytest.raises(ValueError, match="length"):
        run_decode(toy, np.ones(4), "reference")
    with pytest.raises(ValueError, match="unknown engine"):
        run_decode(toy, np.ones(3), "layered")


def test_engine_instance_reuse(code96, toy):
    dec = make_engine(code96, "single_scan")
    z0 = noisy_llrs(code96, 1.0, 1)
    first = run_decode(code96, z0, dec, DecoderConfig(10))
    run_decode(code96, noisy_llrs(code96, 1.0, 2), dec, DecoderConfig(10))
    again = run_decode(code96, z0, dec, DecoderConfig(10))
    assert np.array_equal(first.posterior, again.posterior)
    with pytest.raises(ValueError):
        make_engine(toy, dec)


def test_trace_views_are_read_only(code96):
    seen = []

    def observer(k, L, Z):
        seen.append(k)
        with pytest.raises(ValueError):
            L[0] = 1.0
        with pytest.raises(ValueError):
            Z[0] = 1.0

    for engine in ENGINES:
        seen.clear()
        run_decode(code96, noisy_llrs(code96, 1.0, 0), engine, DecoderConfig(3, early_stop=False, trace=observer))
        assert seen == [1, 2, 3]


@pytest.mark.parametrize("engine", list(ENGINES))
def test_fixed_mode_accumulators_within_width(code96, engine):
    limit = 2 ** (FIXED82.accumulator_bits(3) - 1) - 1
    peaks = []

    def observer(k, L, Z):
        assert np.abs(L).max() <= FIXED82.message_max
        peaks.append(np.abs(Z).max())

    for seed in range(5):
        run_decode(code96, 5 * noisy_llrs(code96, 0.5, seed), engine, DecoderConfig(10, mode=FIXED82, early_stop=False, trace=observer))
    assert max(peaks) <= limit
