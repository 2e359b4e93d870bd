import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mkpolar.kernel import (Kernel, boxplus, builtin_kernel, format_kernel, kernel_hard_encode,
                            kernel_llr, kernel_llr_exact, kernel_mean_update,
                            kernel_spectrum_exhaustive, parse_kernel, row_set_distance)

finite = st.floats(min_value=-30, max_value=30, allow_nan=False)


def test_t3_rows(T3):
    assert T3.rows == ((1, 1, 1), (1, 0, 1), (0, 1, 1))


def test_t5_rows_and_spectrum(T5):
    assert T5.rows[0] == (1, 1, 1, 1, 1)
    assert T5.rows[4] == (0, 0, 1, 1, 1)
    assert T5.spectrum.distances == (5, 3, 2, 1, 1)


def test_unknown_kernel():
    with pytest.raises(KeyError):
        builtin_kernel("T4")


@pytest.mark.parametrize("rows", [((1, 0), (1, 0)), ((1, 2), (0, 1)), ((1, 0, 0), (0, 1, 0))])
def test_invalid_kernels_rejected(rows):
    with pytest.raises(ValueError):
        Kernel("bad", rows)


def test_parse_format_round_trip(T5):
    k = parse_kernel(format_kernel(T5), "T5")
    assert k.rows == T5.rows and k.rule == "T5"


@pytest.mark.parametrize("text", ["", "2\n10\n1", "2\n12\n11", "x\n10\n11"])
def test_parse_errors(text):
    with pytest.raises(ValueError):
        parse_kernel(text)


@pytest.mark.parametrize("name,u,x", [
    ("T2", (1, 0), (1, 0)),
    ("T3", (0, 0, 0), (0, 0, 0)),
    ("T3", (1, 1, 0), (0, 1, 0)),
])
def test_hard_encode(name, u, x):
    assert kernel_hard_encode(builtin_kernel(name), u).tolist() == list(x)


@pytest.mark.parametrize("name,i,L,u,expected", [
    ("T2", 1, (1.0, 2.0), (0,), 3.0),
    ("T2", 1, (1.0, 2.0), (1,), 1.0),
    # u0 = 1 flips both terms: -2 - 3
    ("T3", 2, (1.0, 2.0, 3.0), (1, 0), -5.0),
])
def test_kernel_llr_direct(name, i, L, u, expected):
    assert kernel_llr(builtin_kernel(name), i, L, u) == pytest.approx(expected)


def test_t3_last_position_matches_marginalization(T3):
    assert kernel_llr_exact(T3, 2, (1.0, 2.0, 3.0), (1, 0)) == pytest.approx(-5.0)


def test_t2_boxplus_value(T2):
    oracle = 2 * math.atanh(math.tanh(0.25) ** 2)
    assert kernel_llr(T2, 0, (0.5, 0.5)) == pytest.approx(oracle, abs=1e-12)
    assert oracle == pytest.approx(0.12011, abs=1e-5)
    assert kernel_llr_exact(T2, 0, (0.5, 0.5)) == pytest.approx(oracle, abs=1e-9)


@given(finite, finite)
def test_boxplus_matches_tanh_rule(a, b):
    ref = 2 * math.atanh(math.tanh(a / 2) * math.tanh(b / 2)) if abs(a) < 15 and abs(b) < 15 else None
    v = float(boxplus(a, b))
    if ref is not None:
        assert v == pytest.approx(ref, abs=1e-9)
    assert abs(v) <= min(abs(a), abs(b)) + 1e-12


@given(finite, finite)
def test_minsum_is_sign_min(a, b):
    assert float(boxplus(a, b, "minsum")) == pytest.approx(np.sign(a) * np.sign(b) * min(abs(a), abs(b)))


@pytest.mark.parametrize("name,positions", [("T2", (0, 1)), ("T3", (0, 1, 2)), ("T5", (0, 1, 3, 4))])
def test_reduced_forms_equal_marginalization(name, positions):
    k = builtin_kernel(name)
    rng = np.random.default_rng(7)
    L = rng.normal(2.0, 3.0, (k.size, 500))
    U = rng.integers(0, 2, (k.size, 500))
    for i in positions:
        red = kernel_llr(k, i, L, U[:i], cap=None)
        ex = kernel_llr_exact(k, i, L, U[:i])
        assert np.max(np.abs(red - ex)) < 1e-6


def test_t5_position2_is_an_approximation(T5):
    rng = np.random.default_rng(8)
    L = rng.normal(2.0, 3.0, (5, 1000))
    U = rng.integers(0, 2, (5, 1000))
    dev = np.abs(kernel_llr(T5, 2, L, U[:2], cap=None) - kernel_llr_exact(T5, 2, L, U[:2]))
    print(f"T5 f2 deviation: mean {dev.mean():.3f}, max {dev.max():.3f}")
    assert dev.max() > 1e-3


@pytest.mark.parametrize("name", ["T2", "T3", "T5"])
def test_last_position_zero_llrs(name):
    k = builtin_kernel(name)
    assert kernel_llr_exact(k, k.size - 1, np.zeros(k.size), np.zeros(k.size - 1, dtype=int)) == 0.0


def test_user_kernel_falls_back_to_marginalization():
    k = Kernel("R4", ((1, 0, 0, 0), (1, 1, 0, 0), (1, 0, 1, 0), (1, 1, 1, 1)))
    assert k.rule is None
    L = np.array([1.0, -2.0, 0.5, 3.0])
    assert kernel_llr(k, 1, L, (0,)) == pytest.approx(kernel_llr_exact(k, 1, L, (0,)))
    assert kernel_llr(k, 1, L, (0,), mode="minsum") == pytest.approx(kernel_llr_exact(k, 1, L, (0,), maxlog=True))


def test_llr_cap(T2):
    assert kernel_llr(T2, 1, (35.0, 30.0), (0,)) == 40.0


@pytest.mark.parametrize("name,i,m,expected", [
    ("T2", 1, (4, 4), 8.0),
    ("T3", 2, (4, 4, 4), 8.0),
])
def test_mean_update_sums(name, i, m, expected):
    assert kernel_mean_update(builtin_kernel(name), i, m) == pytest.approx(expected)


def test_mean_update_check_node(T2):
    assert kernel_mean_update(T2, 0, (4, 4)) == pytest.approx(2.28, abs=0.01)


@settings(max_examples=30)
@given(st.lists(st.floats(min_value=0, max_value=50), min_size=5, max_size=5))
def test_t5_mean_rules_nonnegative(m):
    T5 = builtin_kernel("T5")
    for i in range(5):
        assert kernel_mean_update(T5, i, m) >= 0


@pytest.mark.parametrize("name,expected", [("T2", (2, 1)), ("T3", (3, 2, 1)), ("T5", (5, 3, 2, 1, 1))])
def test_exhaustive_spectrum(name, expected):
    S = kernel_spectrum_exhaustive(builtin_kernel(name))
    assert S.distances == expected


def test_t2_optimal_single_row():
    assert kernel_spectrum_exhaustive(builtin_kernel("T2")).rows(1) == (1,)


@pytest.mark.parametrize("name", ["T2", "T3", "T5"])
def test_builtin_row_sets_achieve_distances(name):
    k = builtin_kernel(name)
    for dim, (d, rows) in enumerate(zip(k.spectrum.distances, k.spectrum.row_sets), start=1):
        assert row_set_distance(k.matrix, rows) == d
