"""NumPy fallback kernels for the weighted-shift hot loops."""

import numpy as np


def apply_shift_terms(shifts, mults, f):
    """Evaluate sum_i mults[i] * (f rolled by shifts[i])."""
    out = np.zeros_like(f)
    for i in range(shifts.shape[0]):
        out += mults[i] * np.roll(f, shifts[i])
    return out


def compose_shift_terms(shifts_a, mults_a, shifts_b, mults_b, out_shifts, out_rows):
    """Accumulate the product of two term families.

    Term (a, m) composed with (b, p) contributes m * roll(p, a) at shift
    (a + b) mod n.  ``out_rows`` maps each canonical shift to its row in the
    result (or -1 when absent); ``out_shifts`` fixes the result size.
    """
    n = mults_a.shape[1]
    out = np.zeros((out_shifts.shape[0], n), dtype=np.complex128)
    for i in range(shifts_a.shape[0]):
        rows = out_rows[(shifts_a[i] + shifts_b) % n]
        out[rows] += mults_a[i] * np.roll(mults_b, shifts_a[i], axis=1)
    return out
