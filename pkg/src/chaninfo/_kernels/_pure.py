"""numpy implementations of the hot kernels.

Reference backend for `_core` (the compiled twin): both must agree to
within floating-point summation noise, which `test_kernels` pins down.
The golden-section trajectory is identical in both backends because the
bracket shrinks by a data-independent factor each iteration; the batch
runs the same fixed iteration count for every row.
"""
from __future__ import annotations

import math

import numpy as np
from numpy.typing import NDArray

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def golden_iterations(tol: float) -> int:
    """Iterations needed to shrink a unit bracket below tol."""
    return max(0, int(math.ceil(math.log(tol) / math.log(INVPHI))))


def chernoff_batch(
    p1: NDArray[np.float64], p2: NDArray[np.float64], tol: float = 1e-10
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Rowwise Chernoff information between paired mass vectors.

    For each row, minimizes log sum_j p1_j^alpha p2_j^(1-alpha) over
    alpha in [0, 1] by golden-section search (with endpoint checks) and
    returns minus the minimum.  Cells where either mass is zero are
    excluded (they contribute zero for every alpha in the open interval).
    Identical rows short-circuit to (0, 0.5); rows with disjoint support
    return (inf, nan).

    Parameters
    ----------
    p1, p2 : ndarray, shape (n, k)
    tol : float
        Final bracket width on alpha.

    Returns
    -------
    (values, alpha_stars) : ndarrays of shape (n,)
    """
    n = p1.shape[0]
    mask = (p1 > 0.0) & (p2 > 0.0)
    common = mask.any(axis=1)
    equal = np.all(p1 == p2, axis=1)
    logp1 = np.where(mask, np.log(np.where(mask, p1, 1.0)), 0.0)
    logp2 = np.where(mask, np.log(np.where(mask, p2, 1.0)), 0.0)
    coef = logp1 - logp2
    base = np.where(mask, logp2, -np.inf)

    def f(alpha: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.log(np.exp(base + alpha[:, None] * coef).sum(axis=1))

    lo = np.zeros(n)
    hi = np.ones(n)
    c = lo + INVPHI2 * (hi - lo)
    d = lo + INVPHI * (hi - lo)
    with np.errstate(divide="ignore", invalid="ignore"):
        fc = f(c)
        fd = f(d)
        for _ in range(golden_iterations(tol)):
            take_left = fc < fd
            hi = np.where(take_left, d, hi)
            lo = np.where(take_left, lo, c)
            xc = lo + INVPHI2 * (hi - lo)
            xd = lo + INVPHI * (hi - lo)
            fnew = f(np.where(take_left, xc, xd))
            c, fc, d, fd = (
                np.where(take_left, xc, d),
                np.where(take_left, fnew, fd),
                np.where(take_left, c, xd),
                np.where(take_left, fc, fnew),
            )
        xm = 0.5 * (lo + hi)
        best = f(xm)
        f0 = f(np.zeros(n))
        f1 = f(np.ones(n))
    alpha = xm.copy()
    at0 = f0 <= best
    alpha[at0] = 0.0
    best[at0] = f0[at0]
    at1 = f1 < best
    alpha[at1] = 1.0
    best[at1] = f1[at1]

    values = -best
    values[values == 0.0] = 0.0  # normalize -0.0
    values[equal] = 0.0
    alpha[equal] = 0.5
    values[~common] = np.inf
    alpha[~common] = np.nan
    return values, alpha


def bin_means(
    z: NDArray[np.float64], order: NDArray[np.int64], edges: NDArray[np.int64]
) -> NDArray[np.float64]:
    """Mean of z over index segments of the permutation ``order``.

    ``edges`` holds bin boundaries into ``order``; bin b covers
    order[edges[b]:edges[b+1]] and must be non-empty.
    """
    sums = np.add.reduceat(z[order], edges[:-1])
    return sums / np.diff(edges)
