"""Bitwise CRC over bit vectors (MSB-first, non-reflected, no final XOR)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# generator polynomials without the leading x^len term
DEFAULT_POLYS = {
    6: 0x21,
    8: 0x9B,
    10: 0x233,
    11: 0x621,
    16: 0x1021,
    24: 0xB2B117,
}


@dataclass(frozen=True)
class CrcConfig:
    poly: int
    length: int
    init: int = 0

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("CRC length must be positive")
        if not 0 <= self.poly < (1 << self.length):
            raise ValueError(f"polynomial 0x{self.poly:x} does not fit in {self.length} bits")

    @classmethod
    def default(cls, length: int) -> "CrcConfig":
        try:
            return cls(DEFAULT_POLYS[length], length)
        except KeyError:
            raise ValueError(f"no default polynomial for a {length}-bit CRC; give poly explicitly") from None

    @classmethod
    def parse(cls, text: str) -> "CrcConfig":
        """``"8"`` (default polynomial) or ``"poly:0x07,len:8[,init:0x00]"``."""
        text = text.strip()
        if text.isdigit():
            return cls.default(int(text))
        fields = {}
        for part in text.split(","):
            key, sep, value = part.partition(":")
            if not sep:
                raise ValueError(f"malformed CRC field {part!r}")
            fields[key.strip()] = int(value.strip(), 0)
        if "len" not in fields:
            raise ValueError("CRC spec needs len:<bits>")
        poly = fields.get("poly", DEFAULT_POLYS.get(fields["len"]))
        if poly is None:
            raise ValueError("CRC spec needs poly:<hex>")
        return cls(poly, fields["len"], fields.get("init", 0))

    def format(self) -> str:
        s = f"poly:0x{self.poly:x},len:{self.length}"
        return s + (f",init:0x{self.init:x}" if self.init else "")

    def compute(self, bits) -> np.ndarray:
        """CRC of ``bits`` as a length-``self.length`` bit vector, MSB first."""
        top = 1 << (self.length - 1)
        mask = (1 << self.length) - 1
        reg = self.init
        for b in np.asarray(bits, dtype=np.uint8):
            fb = ((reg & top) != 0) ^ bool(b)
            reg = (reg << 1) & mask
            if fb:
                reg ^= self.poly
        return np.array([(reg >> (self.length - 1 - j)) & 1 for j in range(self.length)], dtype=np.uint8)

    def attach(self, payload) -> np.ndarray:
        payload = np.asarray(payload, dtype=np.uint8)
        return np.concatenate([payload, self.compute(payload)])

    def check(self, word) -> bool:
        """True when the trailing ``length`` bits of ``word`` are the CRC of the rest."""
        word = np.asarray(word, dtype=np.uint8)
        if word.size < self.length:
            return False
        return bool(np.array_equal(self.compute(word[:-self.length]), word[-self.length:]))
