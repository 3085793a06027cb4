"""Integrals of matrix exponentials, vectorised over stacks of matrices.

Every correlation in this package is ``row @ expm(M x) @ vec`` for a small
constant generator ``M``; products with exponential filter kernels shift the
generator by a scalar.  Exact integrals then follow from block matrix
exponentials (Van Loan's construction), which stay accurate at the
parameter points where ``M`` is defective and eigen-expansions break down.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm


def expm_stack(b, x):
    """``expm(b * x)`` for a matrix ``b`` of shape (..., n, n) and scalar/array ``x``."""
    b = np.asarray(b, dtype=complex)
    x = np.asarray(x, dtype=float)
    return expm(b * x[..., None, None])


def integral_expm(b, length):
    """Return ``int_0^length expm(b s) ds`` (batched).

    ``b`` has shape (..., n, n); ``length`` broadcasts against the batch
    shape and may be ``inf`` when every eigenvalue of ``b`` has a negative
    real part.
    """
    b = np.asarray(b, dtype=complex)
    n = b.shape[-1]
    length = np.asarray(length, dtype=float)
    shape = np.broadcast_shapes(b.shape[:-2], length.shape)
    b = np.broadcast_to(b, shape + (n, n))
    length = np.broadcast_to(length, shape)
    out = np.empty(shape + (n, n), dtype=complex)
    inf = np.isinf(length)
    if np.any(inf):
        out[inf] = -np.linalg.inv(b[inf])
    fin = ~inf
    if np.any(fin):
        blk = np.zeros(shape + (2 * n, 2 * n), dtype=complex)[fin]
        blk[..., :n, :n] = b[fin]
        blk[..., :n, n:] = np.eye(n)
        big = expm(blk * length[fin][..., None, None])
        out[fin] = big[..., :n, n:]
    return out


def shifted(m, rate):
    """``m + rate * I`` for scalar or array ``rate`` (batched over rate)."""
    m = np.asarray(m, dtype=complex)
    rate = np.asarray(rate, dtype=complex)
    return m + rate[..., None, None] * np.eye(m.shape[-1])


def laplace_window(m, row, vec, rate, length):
    """``int_0^length exp(-rate x) row @ expm(m x) @ vec dx`` (batched over rate/length)."""
    k = integral_expm(shifted(m, -np.asarray(rate)), length)
    return np.einsum("i,...ij,j->...", row, k, vec)
