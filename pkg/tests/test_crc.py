import numpy as np
import pytest
from hypothesis import given, strategies as st

from mkpolar.crc import CrcConfig


def _reference_crc(bits, poly, length):
    # polynomial long division of bits * x^length by the generator
    g = [1] + [(poly >> (length - 1 - j)) & 1 for j in range(length)]
    reg = list(bits) + [0] * length
    for i in range(len(bits)):
        if reg[i]:
            for j in range(length + 1):
                reg[i + j] ^= g[j]
    return reg[-length:]


@given(st.lists(st.integers(0, 1), min_size=1, max_size=60))
def test_crc8_matches_long_division(bits):
    crc = CrcConfig.default(8)
    assert crc.compute(bits).tolist() == _reference_crc(bits, 0x9B, 8)


def test_default_polynomial():
    assert CrcConfig.parse("8") == CrcConfig(0x9B, 8, 0)


def test_parse_explicit_and_format_round_trip():
    c = CrcConfig.parse("poly:0x07,len:8,init:0xff")
    assert (c.poly, c.length, c.init) == (0x07, 8, 0xFF)
    assert CrcConfig.parse(c.format()) == c


@pytest.mark.parametrize("text", ["poly:0x07", "7", "len:x"])
def test_parse_errors(text):
    with pytest.raises(ValueError):
        CrcConfig.parse(text)


def test_attach_check_and_detect_flip():
    crc = CrcConfig.default(8)
    rng = np.random.default_rng(0)
    payload = rng.integers(0, 2, 20)
    word = crc.attach(payload)
    assert crc.check(word)
    word[3] ^= 1
    assert not crc.check(word)
