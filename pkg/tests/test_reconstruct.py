import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grplus.core import Tolerance, minors, pairs, proportional
from grplus.extremal import cyclic_matrix
from grplus.optimizer import sample_positive, to_matrix
from grplus.reconstruct import (
    OuterOrbitData,
    c_sequence,
    extract_outer,
    outer_pairs,
    reconstruct,
)


def test_c_sequence_examples():
    assert c_sequence(5).c == (1, 3, 5, 2, 4)
    assert c_sequence(7).c == (1, 4, 7, 3, 6, 2, 5)
    assert c_sequence(3).c == (1, 2, 3)


@pytest.mark.parametrize("n", range(3, 40, 2))
def test_c_sequence_is_bijection(n):
    c = c_sequence(n).c
    assert sorted(c) == list(range(1, n + 1))
    # Oracle: c(k) = 1 + k d mod n.
    d = n // 2
    assert c == tuple(1 + (k * d) % n for k in range(n))


def test_even_n_rejected():
    for n in (4, 6, 10):
        with pytest.raises(ValueError):
            c_sequence(n)
        with pytest.raises(ValueError):
            extract_outer(minors(cyclic_matrix(n)))


@pytest.mark.parametrize("n", range(3, 16, 2))
def test_extract_outer_count(n):
    data = extract_outer(minors(cyclic_matrix(n)))
    assert len(data) == 2 * n if n > 3 else len(data) == 3
    assert set(data.values) == set(outer_pairs(n))


def test_outer_pairs_n3_collapse():
    # For n = 3 the two outer orbits coincide and cover all three pairs.
    assert outer_pairs(3) == frozenset(pairs(3))


def test_data_validation():
    P = minors(cyclic_matrix(5))
    vals = {p: P[p] for p in outer_pairs(5)}
    with pytest.raises(ValueError):
        OuterOrbitData(5, {**vals, (1, 1): 1.0})
    missing = dict(vals)
    missing.pop((1, 2))
    with pytest.raises(ValueError):
        OuterOrbitData(5, missing)
    bad = dict(vals)
    bad[1, 2] = -1.0
    with pytest.raises(ValueError):
        OuterOrbitData(5, bad)


def test_index_discipline():
    n = 7
    data = extract_outer(minors(cyclic_matrix(n)))
    assert data.get(2, 1) == -data.get(1, 2)
    with pytest.raises(KeyError):
        data.get(1, 3)


def test_json_roundtrip():
    data = extract_outer(minors(to_matrix(sample_positive(9, 3))))
    back = OuterOrbitData.from_json_obj(json.loads(data.dumps()))
    assert back.n == 9 and back.values == data.values


@pytest.mark.parametrize("n", range(5, 22, 2))
def test_cyclic_roundtrip(n):
    C = cyclic_matrix(n)
    P = minors(C)
    Y = reconstruct(extract_outer(P))
    np.testing.assert_allclose(minors(Y).matrix, P.matrix, atol=1e-12)


def test_roundtrip_preserves_outer_values_exactly_scaled():
    n = 9
    P = minors(to_matrix(sample_positive(n, 5)))
    data = extract_outer(P)
    Q = minors(reconstruct(data))
    for p, v in data.values.items():
        assert Q[p] == pytest.approx(v, rel=1e-10)


def test_n3_reconstruction():
    P = minors(cyclic_matrix(3))
    Y = reconstruct(extract_outer(P))
    assert proportional(P, minors(Y), Tolerance(rel=1e-12, abs=0))


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([3, 5, 7, 9, 11]), st.integers(0, 2**32 - 1))
def test_reconstruction_property(n, seed):
    P = minors(to_matrix(sample_positive(n, seed)))
    Q = minors(reconstruct(extract_outer(P)))
    assert proportional(P, Q, Tolerance(rel=1e-9, abs=1e-12))
    assert np.all(Q.values() > 0)
