import numpy as np
import pytest

from mkpolar.kernel import builtin_kernel, row_set_distance
from mkpolar.spectrum import (fold_kernels, greedy_sector_design, kronecker_kernel, kronecker_spectrum,
                              list_partitions, min_distance_bruteforce, sector_spectrum_vector,
                              exhaustive_spectrum_values, spectrum_from_csv, spectrum_sorted,
                              spectrum_to_csv)

from fixtures import T6_ROW_SETS, T9

B = builtin_kernel


def test_bruteforce_examples():
    assert min_distance_bruteforce(T9[[4, 5, 7, 8]]) == 4
    assert min_distance_bruteforce(np.eye(3, dtype=np.uint8)) == 1
    assert min_distance_bruteforce([[1, 1, 1]]) == 3


def test_bruteforce_errors():
    with pytest.raises(ValueError):
        min_distance_bruteforce([[1, 1, 0], [1, 1, 0]])
    with pytest.raises(ValueError):
        min_distance_bruteforce(np.eye(25, dtype=np.uint8))


@pytest.mark.parametrize("n,S,expected", [
    (2, (3, 2, 1), (12, 8, 4, 6, 4, 2, 6, 4, 2, 3, 2, 1)),
    (0, (5, 3, 2, 1, 1), (5, 3, 2, 1, 1)),
    (1, (2, 1), (4, 2, 2, 1)),
])
def test_sector_vector(n, S, expected):
    assert sector_spectrum_vector(n, S).tolist() == list(expected)


def test_spectrum_sorted_values():
    assert spectrum_sorted(2, B("T3").spectrum).distances == (12, 8, 6, 6, 4, 4, 4, 3, 2, 2, 2, 1)
    assert spectrum_sorted(1, B("T2").spectrum).distances == (4, 2, 2, 1)
    assert spectrum_sorted(0, B("T5").spectrum) == B("T5").spectrum


@pytest.mark.parametrize("k,p1,p2,expected", [
    (4, 3, 3, [(1, 3), (2, 2), (1, 1, 2)]),
    (1, 4, 5, [(1,)]),
    (6, 2, 3, [(3, 3)]),
])
def test_list_partitions(k, p1, p2, expected):
    assert list_partitions(k, p1, p2) == expected


def test_list_partitions_infeasible():
    with pytest.raises(ValueError):
        list_partitions(10, 3, 3)


def test_t9_spectrum():
    S = kronecker_spectrum(B("T3"), B("T3"))
    assert S.distances == (9, 6, 4, 4, 3, 2, 2, 2, 1)
    assert S.rows(4) == (4, 5, 7, 8)


def test_t6_spectrum_and_row_sets():
    S = kronecker_spectrum(B("T2"), B("T3"))
    assert S.distances == (6, 4, 3, 2, 2, 1)
    assert S.row_sets == T6_ROW_SETS


PAIRS = [("T2", "T2"), ("T2", "T3"), ("T3", "T2"), ("T3", "T3"), ("T2", "T5"), ("T5", "T2")]


@pytest.mark.parametrize("a,b", PAIRS)
def test_against_exhaustive_search(a, b):
    A, Bk = B(a), B(b)
    S = kronecker_spectrum(A, Bk)
    ex = exhaustive_spectrum_values(np.kron(A.matrix, Bk.matrix))
    assert S.distances == ex


def test_t3_t5_gap_reported():
    S = kronecker_spectrum(B("T3"), B("T5"))
    ex = exhaustive_spectrum_values(np.kron(B("T3").matrix, B("T5").matrix))
    gap = [e - d for d, e in zip(S.distances, ex)]
    print(f"T3xT5 algorithmic {S.distances}\nT3xT5 exhaustive  {ex}\ngap {gap}")
    assert all(g >= 0 for g in gap)


@pytest.mark.parametrize("a,b", PAIRS + [("T3", "T5"), ("T5", "T3")])
def test_order_symmetric_values(a, b):
    assert sorted(kronecker_spectrum(B(a), B(b)).distances) == sorted(kronecker_spectrum(B(b), B(a)).distances)


@pytest.mark.parametrize("a,b", [("T3", "T3"), ("T2", "T5"), ("T3", "T5")])
def test_row_sets_achieve_values(a, b):
    K = kronecker_kernel(B(a), B(b))
    for d, rows in zip(K.spectrum.distances, K.spectrum.row_sets):
        assert row_set_distance(K.matrix, rows) == d


@pytest.mark.parametrize("n,name", [(1, "T3"), (2, "T3"), (1, "T5"), (2, "T5")])
def test_sectors_equal_recursive_folding(n, name):
    folded = fold_kernels([B("T2")] * n + [B(name)]).spectrum.distances
    assert spectrum_sorted(n, B(name).spectrum).distances == folded


@pytest.mark.slow
def test_large_composite_uses_dual_route():
    S = kronecker_spectrum(B("T5"), B("T5"))
    assert S.size == 25 and S.distances[0] == 25 and S.distances[-1] == 1
    K = kronecker_kernel(B("T5"), B("T5"))
    assert all(row_set_distance(K.matrix, rows) == d for d, rows in zip(S.distances, S.row_sets))


def test_greedy_sector_steps():
    S = B("T3").spectrum
    vec = sector_spectrum_vector(2, S)
    for K in range(1, 13):
        info, values = greedy_sector_design(vec, S, K)
        assert len(info) == K
        # each sector holds an optimal row set of its current size
        for q in range(4):
            rows = tuple(r - 3 * q for r in info if 3 * q <= r < 3 * q + 3)
            assert rows == S.rows(len(rows))


def test_csv_round_trip():
    S = kronecker_spectrum(B("T2"), B("T3"))
    text = spectrum_to_csv(S)
    assert text.splitlines()[0] == "k,distance,row_set"
    assert spectrum_from_csv(text) == S
