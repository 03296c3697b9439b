"""Hot-kernel backend selection.

Binds the public kernel functions to the compiled extension when it is
importable, otherwise to the numpy fallback in `_pure`.  Setting the
environment variable ``CHANINFO_PURE=1`` forces the fallback.  Both
backends follow the identical golden-section trajectory; outputs agree
to floating-point summation noise (`test_kernels` holds the contract).
"""
from __future__ import annotations

import os

import numpy as np
from numpy.typing import NDArray

from . import _pure

if os.environ.get("CHANINFO_PURE") == "1":
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

golden_iterations = _pure.golden_iterations


def chernoff_batch(
    p1: NDArray[np.float64], p2: NDArray[np.float64], tol: float = 1e-10
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Rowwise Chernoff information; see `_pure.chernoff_batch`."""
    p1 = np.ascontiguousarray(p1, dtype=np.float64)
    p2 = np.ascontiguousarray(p2, dtype=np.float64)
    if p1.shape != p2.shape or p1.ndim != 2:
        raise ValueError(f"need matching (n, k) arrays, got {p1.shape} and {p2.shape}")
    return _impl.chernoff_batch(p1, p2, tol)


def bin_means(
    z: NDArray[np.float64], order: NDArray[np.int64], edges: NDArray[np.int64]
) -> NDArray[np.float64]:
    """Segment means of z under a permutation; see `_pure.bin_means`."""
    z = np.ascontiguousarray(z, dtype=np.float64)
    order = np.ascontiguousarray(order, dtype=np.int64)
    edges = np.ascontiguousarray(edges, dtype=np.int64)
    return _impl.bin_means(z, order, edges)
