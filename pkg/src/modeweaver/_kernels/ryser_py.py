"""Pure-Python (numpy) Ryser permanent, used when the extension is absent."""

import numpy as np


def permanent_ryser(matrix: np.ndarray) -> complex:
    """Permanent of a square complex matrix via Ryser's formula.

    Subsets of columns are visited in Gray-code order so each step updates
    the running row sums with a single column add/subtract: O(2^n * n).
    The 0x0 permanent is 1 by convention.
    """
    a = np.asarray(matrix, dtype=np.complex128)
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    row_sums = np.zeros(n, dtype=np.complex128)
    total = 0.0 + 0.0j
    gray = 0
    for k in range(1, 1 << n):
        g = k ^ (k >> 1)
        bit = g ^ gray
        j = bit.bit_length() - 1
        if g & bit:
            row_sums += a[:, j]
        else:
            row_sums -= a[:, j]
        gray = g
        sign = -1.0 if (n - g.bit_count()) & 1 else 1.0
        total += sign * np.prod(row_sums)
    return complex(total)
