import numpy as np
import pytest

from mkpolar.design import (DesignResult, ReliabilityProfile, canonical_order, dega_reliabilities,
                            distance_design, distinct_orders, hybrid_design, kernel_order_search,
                            reliability_design)
from mkpolar.kernel import Kernel
from mkpolar.spectrum import min_distance_bruteforce
from mkpolar.transform import KernelSequence, transform_matrix

from fixtures import DEGA_4, DEGA_12, HYBRID2_S12

SMALL = ["2x2x3", "3x2x2", "2x3x2", "2x5", "3x3", "2x2x2x2", "2x2x2x3", "3x5", "2x2x5"]


def _bf(res):
    return min_distance_bruteforce(transform_matrix(res.seq)[list(res.info)])


def test_dega_12(seq12):
    mu = dega_reliabilities(seq12, 0.5).means
    assert np.max(np.abs(mu - np.array(DEGA_12))) <= 0.05


def test_dega_4():
    mu = dega_reliabilities(KernelSequence.parse("2x2"), 0.5).means
    assert np.max(np.abs(mu - np.array(DEGA_4))) <= 0.05


@pytest.mark.parametrize("sigma2", [0.25, 0.5, 2.0])
def test_dega_single_t2_sum(sigma2):
    assert dega_reliabilities(KernelSequence.parse("2"), sigma2).means[1] == 4 / sigma2


@pytest.mark.parametrize("n", [1, 3, 6])
def test_dega_last_input_exact(n):
    mu = dega_reliabilities(KernelSequence.parse("x".join(["2"] * n)), 0.7).means
    assert mu[-1] == 2**n * 2 / 0.7
    assert np.all(mu >= 0)


def test_dega_rejects_rule_less_kernel():
    k = Kernel("R4", ((1, 0, 0, 0), (1, 1, 0, 0), (1, 0, 1, 0), (1, 1, 1, 1)))
    with pytest.raises(ValueError):
        dega_reliabilities(KernelSequence((k,)), 0.5)


def test_reliability_design_table(seq12):
    res = reliability_design(seq12, 4, 0.5)
    assert res.info == (8, 9, 10, 11)
    assert _bf(res) == 4


def test_reliability_design_edges(seq12):
    assert reliability_design(seq12, 12).info == tuple(range(12))
    assert reliability_design(KernelSequence.parse("2x2x2"), 1).info == (7,)
    with pytest.raises(ValueError):
        reliability_design(seq12, 13)


def test_reliability_ties_to_larger_index():
    prof = ReliabilityProfile(np.array([1.0, 3.0, 3.0, 2.0]), 0.5)
    assert prof.best(1) == (2,)


def test_reliability_scale_invariant(seq12):
    mu = dega_reliabilities(seq12, 0.5).means
    for K in range(13):
        assert ReliabilityProfile(mu, 0.5).best(K) == ReliabilityProfile(3.7 * mu, 0.5).best(K)


def test_distance_design_table(seq12):
    res = distance_design(seq12, 4)
    assert res.info == (3, 6, 10, 11)
    assert res.achieved_min_distance == 6 == _bf(res)


def test_distance_design_edges(seq12):
    full = distance_design(seq12, 12)
    assert full.info == tuple(range(12)) and full.achieved_min_distance == 1
    one = distance_design(seq12, 1)
    assert one.info == (9,) and one.achieved_min_distance == 12 == _bf(one)


@pytest.mark.parametrize("label", SMALL)
def test_distance_design_achieves_bruteforce(label):
    seq = KernelSequence.parse(label)
    for K in range(1, seq.N + 1):
        res = distance_design(seq, K)
        assert res.achieved_min_distance == _bf(res), (label, K)


def test_distance_design_canonical_order():
    res = distance_design(KernelSequence.parse("3x2x3x2"), 6)
    assert res.seq.label() == "2x2x3x3"
    assert canonical_order(KernelSequence.parse("5x2x3")).label() == "2x5x3"


@pytest.mark.parametrize("psi,expected", [(1, (6, 9, 10, 11)), (2, (6, 9, 10, 11))])
def test_hybrid_table(seq12, psi, expected):
    res = hybrid_design(seq12, 4, psi, 0.5)
    assert res.info == expected
    assert _bf(res) == 4


def test_hybrid_psi2_mixed_vector(seq12):
    mu = dega_reliabilities(KernelSequence.parse("2x2"), 0.5).means
    s12 = np.kron(mu[::-1], [3, 2, 1])
    assert np.max(np.abs(s12 - np.array(HYBRID2_S12))) <= 0.1


@pytest.mark.parametrize("label", SMALL)
def test_hybrid_extremes_reproduce_pure_designs(label):
    seq = KernelSequence.parse(label)
    for K in range(seq.N + 1):
        assert hybrid_design(seq, K, seq.s, 0.5).info == reliability_design(seq, K, 0.5).info
        h0, d = hybrid_design(seq, K, 0), distance_design(seq, K)
        assert (h0.info, h0.seq) == (d.info, d.seq)


def test_hybrid_psi_range(seq12):
    with pytest.raises(ValueError):
        hybrid_design(seq12, 4, 4)


def test_design_text_round_trip(seq12):
    res = distance_design(seq12, 4)
    text = res.to_text()
    assert "method=distance" in text and "frozen=0,1,2,4,5,7,8,9" in text and "min_distance=6" in text
    assert DesignResult.from_text(text) == res


def test_seven_orders_for_six_t2_and_t3():
    ks = KernelSequence.parse("2x2x2x2x2x2x3").kernels
    orders = distinct_orders(ks)
    assert len(orders) == 7 and len(set(orders)) == 7


def test_order_search_single():
    assert kernel_order_search(["T2"], 1).label() == "2"


def test_order_search_picks_best_sum():
    best = kernel_order_search([2, 3], 6, 0.5)
    scores = {}
    for label in ("2x3", "3x2"):
        mu = dega_reliabilities(KernelSequence.parse(label), 0.5).means
        scores[label] = np.sort(mu)[::-1][:6].sum()
    assert scores[best.label()] == max(scores.values())


def test_order_search_bound():
    with pytest.raises(ValueError):
        # 11! / (4! 4! 3!) = 11550 distinct orders
        kernel_order_search([2] * 4 + [3] * 4 + [5] * 3, 10)
