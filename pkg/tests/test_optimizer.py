import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grplus.core import Tolerance, is_positive, minors, proportional
from grplus.cyclic import normalize
from grplus.extremal import cyclic_matrix, loss_E, optimal_loss
from grplus.optimizer import (
    AngleRadiusParam,
    OptimizerConfig,
    cyclic_param,
    decode,
    encode,
    minimize,
    sample_positive,
    to_matrix,
)


def test_param_validation():
    with pytest.raises(ValueError):
        AngleRadiusParam(3, [0.0, 1.0, 2.0], [1, 1, 1])
    with pytest.raises(ValueError):
        AngleRadiusParam(3, [0.5, 0.4, 2.0], [1, 1, 1])
    with pytest.raises(ValueError):
        AngleRadiusParam(3, [0.5, 1.0, math.pi], [1, 1, 1])
    with pytest.raises(ValueError):
        AngleRadiusParam(3, [0.5, 1.0, 2.0], [1, 0, 1])


def test_cyclic_param_matches_C():
    for n in (4, 7, 12):
        P = minors(to_matrix(cyclic_param(n)))
        np.testing.assert_allclose(P.values(), minors(cyclic_matrix(n)).values(), atol=1e-14)


def test_sample_determinism():
    assert sample_positive(8, 42) == sample_positive(8, 42)
    assert sample_positive(8, 42) != sample_positive(8, 43)


def test_sample_gaps():
    p = sample_positive(30, 0)
    assert p.theta[0] >= 1e-3 and p.theta[-1] <= math.pi - 1e-3
    assert np.diff(p.theta).min() >= 1e-3 * (1 - 1e-12)
    assert np.all(np.abs(np.log(p.r)) <= 1)


def test_samples_all_positive_n8():
    bad = sum(not is_positive(minors(to_matrix(sample_positive(8, s))), Tolerance(0, 0))
              for s in range(10_000))
    assert bad == 0


def test_sample_n5_lower_bound():
    assert loss_E(minors(to_matrix(sample_positive(5, 0)))) >= 1.6180340 - 1e-9


def test_scale_invariance():
    p = sample_positive(7, 3)
    q = AngleRadiusParam(7, p.theta, 2 * p.r)
    a, b = loss_E(minors(to_matrix(p))), loss_E(minors(to_matrix(q)))
    assert abs(a - b) <= 1e-14 * a


def test_chart_roundtrip():
    p = sample_positive(9, 1)
    q = decode(encode(p), 9)
    np.testing.assert_allclose(q.theta, p.theta, rtol=1e-13)
    # Radii come back divided by r_1, which leaves E unchanged.
    np.testing.assert_allclose(q.r * p.r[0], p.r, rtol=1e-13)


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(n=2)
    with pytest.raises(ValueError):
        OptimizerConfig(n=5, restarts=0)
    with pytest.raises(ValueError):
        OptimizerConfig(n=5, ftol=0.0)
    assert OptimizerConfig(n=5).stage_iters == 360
    assert OptimizerConfig(n=5, max_iters=7).stage_iters == 7


def test_determinism():
    cfg = OptimizerConfig(n=5, restarts=2, max_iters=60, seed=3)
    a, b = minimize(cfg), minimize(cfg)
    assert a.best_E == b.best_E
    assert a.best_param == b.best_param
    assert a.traces == b.traces


def test_attainment_from_cyclic_start():
    for n in (5, 8, 11):
        res = minimize(OptimizerConfig(n=n, restarts=1, max_iters=20), initial=cyclic_param(n))
        assert abs(res.gap_to_theory) <= 1e-10


def test_initial_size_mismatch():
    with pytest.raises(ValueError):
        minimize(OptimizerConfig(n=5, restarts=1), initial=cyclic_param(6))


def test_trace_shape():
    res = minimize(OptimizerConfig(n=4, restarts=3, max_iters=50, seed=1))
    assert [t["restart"] for t in res.traces] == [0, 1, 2]
    for t in res.traces:
        assert t["final_E"] <= t["start_E"]
        assert t["stop"] in ("spread", "max_iters")
    assert res.best_E == pytest.approx(min(t["final_E"] for t in res.traces), rel=1e-12)
    d = res.to_dict()
    assert d["matrix"]["n"] == 4 and d["optimum"] == optimal_loss(4)


@settings(max_examples=10, deadline=None)
@given(st.integers(3, 9), st.integers(0, 2**32 - 1))
def test_soundness_property(n, seed):
    res = minimize(OptimizerConfig(n=n, restarts=1, max_iters=40, seed=seed))
    assert res.gap_to_theory >= -1e-9
    assert is_positive(minors(res.matrix))


@pytest.mark.parametrize("n", [4, 5, 6])
def test_converges_small_n(n):
    res = minimize(OptimizerConfig(n=n, restarts=5, seed=0))
    assert abs(res.gap_to_theory) <= 1e-5


def test_n5_optimum_is_C():
    res = minimize(OptimizerConfig(n=5, restarts=5, seed=0))
    P = normalize(minors(res.matrix))
    assert proportional(minors(cyclic_matrix(5)), P, Tolerance(rel=1e-4, abs=0))
