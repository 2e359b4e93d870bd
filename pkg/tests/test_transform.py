import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mkpolar.crc import CrcConfig
from mkpolar.transform import (CodeSpec, KernelSequence, compose, encode, expand_input, graph_encode,
                               polar_transform, stage_permutation, transform_matrix)

from fixtures import T9, T12

ORDERS = sorted({"x".join(p) for base in (("2", "2", "3"), ("2", "3"), ("3", "5"), ("2", "2", "2", "2"))
                 for p in itertools.permutations(base)})


def test_t12_matches_published(seq12):
    assert np.array_equal(transform_matrix(seq12), T12)


def test_t9_matches_published():
    assert np.array_equal(transform_matrix(KernelSequence.parse("3x3")), T9)


def test_single_factor():
    assert transform_matrix(KernelSequence.parse("2")).tolist() == [[1, 0], [1, 1]]


@pytest.mark.parametrize("label", ORDERS)
def test_recursive_and_graph_encoders_match_matrix(label):
    seq = KernelSequence.parse(label)
    rng = np.random.default_rng(len(label))
    U = rng.integers(0, 2, (200, seq.N)).astype(np.uint8)
    ref = U.astype(np.int64) @ transform_matrix(seq) % 2
    assert np.array_equal(polar_transform(seq, U), ref)
    assert all(np.array_equal(graph_encode(seq, u), r) for u, r in zip(U[:20], ref[:20]))


def test_row11_codeword(seq12):
    spec = CodeSpec(seq12, (8, 9, 10, 11))
    assert encode(spec, [0, 0, 0, 1]).tolist() == [0, 1, 1, 0, 1, 1, 0, 1, 1, 0, 1, 1]


def test_zero_info_zero_codeword(seq12):
    spec = CodeSpec(seq12, (8, 9, 10, 11))
    assert not encode(spec, [0, 0, 0, 0]).any()


def test_expand_input_placement(seq12):
    spec = CodeSpec.from_frozen(seq12, range(8))
    assert expand_input(spec, [1, 0, 1, 1]).tolist() == [0] * 8 + [1, 0, 1, 1]
    assert not expand_input(CodeSpec(seq12, ()), []).any()


def test_expand_input_with_crc(seq12):
    crc = CrcConfig.default(8)
    spec = CodeSpec(seq12, tuple(range(12)), crc)
    u = expand_input(spec, [1, 0, 1, 1])
    assert u[4:].tolist() == crc.compute([1, 0, 1, 1]).tolist()


def test_code_spec_text_round_trip(seq12):
    spec = CodeSpec(seq12, (3, 6, 10, 11), CrcConfig(0x3, 2))
    assert CodeSpec.parse(spec.format()) == spec


@pytest.mark.parametrize("text", [
    "kernels=2x2x3 K=5 frozen=0,1,2,3,4,5,6,7",
    "kernels=2x2x3 frozen=0",
    "kernels=2x7 K=1 frozen=0",
    "kernels=2x2x3 K=4 frozen=0,1,2,3,4,5,6,99",
])
def test_code_spec_parse_errors(text):
    with pytest.raises((ValueError, KeyError)):
        CodeSpec.parse(text)


def test_crc_must_be_shorter_than_k(seq12):
    with pytest.raises(ValueError):
        CodeSpec(seq12, (8, 9, 10, 11), CrcConfig.default(8))


def test_length_mismatch(seq12):
    with pytest.raises(ValueError):
        polar_transform(seq12, np.zeros(11, dtype=np.uint8))


@pytest.mark.parametrize("label", ["2x2x3", "3x2x2", "2x5x3"])
def test_stage_permutations(label):
    seq = KernelSequence.parse(label)
    perms = [stage_permutation(seq, i) for i in range(1, seq.s + 1)]
    for p in perms:
        assert sorted(p.tolist()) == list(range(seq.N))
    assert np.array_equal(compose(*perms), np.arange(seq.N))


def test_single_stage_identity():
    assert np.array_equal(stage_permutation(KernelSequence.parse("5"), 1), np.arange(5))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from(["2", "3", "5"]), min_size=1, max_size=4), st.data())
def test_transform_is_linear(parts, data):
    seq = KernelSequence.parse("x".join(parts))
    a = np.array(data.draw(st.lists(st.integers(0, 1), min_size=seq.N, max_size=seq.N)), dtype=np.uint8)
    b = np.array(data.draw(st.lists(st.integers(0, 1), min_size=seq.N, max_size=seq.N)), dtype=np.uint8)
    assert np.array_equal(polar_transform(seq, a ^ b), polar_transform(seq, a) ^ polar_transform(seq, b))
