"""Published matrices and vectors used as fixed expected values."""

import numpy as np

T9_ROWS = [
    "111111111", "101101101", "011011011",
    "111000111", "101000101", "011000011",
    "000111111", "000101101", "000011011",
]
T12_ROWS = [
    "111000000000", "101000000000", "011000000000",
    "111111000000", "101101000000", "011011000000",
    "111000111000", "101000101000", "011000011000",
    "111111111111", "101101101101", "011011011011",
]


def as_matrix(rows):
    return np.array([[int(c) for c in r] for r in rows], dtype=np.uint8)


T9 = as_matrix(T9_ROWS)
T12 = as_matrix(T12_ROWS)

DEGA_12 = (0.09, 1.28, 2, 1.85, 7.3, 9.12, 2.75, 9.57, 11.56, 11.94, 29.42, 32)
DEGA_4 = (1, 4.56, 5.78, 16)
HYBRID2_S12 = (48, 32, 16, 17.34, 11.56, 5.78, 13.68, 9.12, 4.56, 3, 2, 1)
T6_ROW_SETS = ((3,), (4, 5), (0, 4, 5), (0, 3, 4, 5), (1, 2, 3, 4, 5), (0, 1, 2, 3, 4, 5))
