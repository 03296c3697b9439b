"""Joint distributions and parameter sampling for symmetric channels.

A binary symmetric channel (BSC) transmits one of two symbols, sent with
probabilities (lambda, 1 - lambda), and flips it with probability epsilon.
Its m-ary generalization (MSC) keeps a symbol with probability 1 - epsilon
and moves it to each of the other m - 1 symbols with probability
epsilon / (m - 1); the BSC is the m = 2 special case.  Both channels are
fully described by the joint mass p(x, y) = p(x) p(y | x), assembled here
row by row.

Monte Carlo parameter sampling lives here as well so every consumer shares
one generator (Philox, counter based, so runs are reproducible across
machines) and one documented draw order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .errors import InvalidParameterError

# Mass-balance tolerance for distribution and marginal checks.
_ATOL = 1e-12

# Rejection sampling draws candidate blocks no larger than this many rows.
_MAX_CANDIDATE_ROWS = 1 << 22

# Generator identity recorded in experiment reports; the algorithm and the
# numpy build pin the bit stream.
RNG_ALGORITHM = f"numpy.random.Philox (numpy {np.__version__})"


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _open_unit(rng, size: int | tuple[int, ...]) -> NDArray[np.float64]:
    """Uniform draws on the open interval (0, 1).

    ``Generator.random`` samples [0, 1); exact zeros (probability 2**-53
    each) are redrawn so downstream logs never see a boundary value.  The
    redraw consumes extra stream only when a zero actually occurs, so the
    draw layout documented by the samplers holds in practice.
    """
    out = rng.random(size)
    while True:
        zero = out == 0.0
        if not zero.any():
            return out
        out[zero] = rng.random(int(zero.sum()))


def _freeze(a: NDArray[np.float64]) -> NDArray[np.float64]:
    a = np.ascontiguousarray(np.asarray(a, dtype=np.float64))
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DiscreteDistribution:
    """Probability mass vector: non-negative entries summing to one.

    Parameters
    ----------
    probs : array_like, shape (k,)
        Probability of each symbol.
    """

    probs: NDArray[np.float64]

    def __post_init__(self):
        p = _freeze(self.probs)
        object.__setattr__(self, "probs", p)
        if p.ndim != 1 or p.size == 0:
            raise InvalidParameterError("probs must be a non-empty vector")
        if np.any(p < 0.0):
            raise InvalidParameterError("probabilities must be non-negative")
        total = float(p.sum())
        if abs(total - 1.0) > _ATOL:
            raise InvalidParameterError(f"probabilities sum to {total!r}, not 1")

    def __len__(self) -> int:
        return self.probs.size


@dataclass(frozen=True)
class BscParams:
    """Binary symmetric channel parameters.

    Parameters
    ----------
    lam : float
        Probability of the first input symbol, strictly inside (0, 1).
    epsilon : float
        Crossover probability, strictly inside (0, 1).
    """

    lam: float
    epsilon: float

    def __post_init__(self):
        if not (0.0 < self.lam < 1.0):
            raise InvalidParameterError(f"lambda must lie in (0,1), got {self.lam!r}")
        if not (0.0 < self.epsilon < 1.0):
            raise InvalidParameterError(
                f"epsilon must lie in (0,1), got {self.epsilon!r}"
            )


@dataclass(frozen=True)
class MscParams:
    """m-ary symmetric channel parameters.

    Parameters
    ----------
    m : int
        Alphabet size, at least 2.
    lambdas : array_like, shape (m,)
        Input symbol probabilities; each strictly positive, summing to one.
    epsilon : float
        Total crossover mass in (0, 1); each wrong symbol receives
        epsilon / (m - 1).
    """

    m: int
    lambdas: NDArray[np.float64]
    epsilon: float

    def __post_init__(self):
        if self.m < 2:
            raise InvalidParameterError(f"m must be at least 2, got {self.m!r}")
        lam = _freeze(self.lambdas)
        object.__setattr__(self, "lambdas", lam)
        if lam.shape != (self.m,):
            raise InvalidParameterError(
                f"expected {self.m} input probabilities, got shape {lam.shape}"
            )
        if np.any(lam <= 0.0):
            raise InvalidParameterError("every input probability must be positive")
        total = float(lam.sum())
        if abs(total - 1.0) > _ATOL:
            raise InvalidParameterError(f"input probabilities sum to {total!r}, not 1")
        if not (0.0 < self.epsilon < 1.0):
            raise InvalidParameterError(
                f"epsilon must lie in (0,1), got {self.epsilon!r}"
            )


@dataclass(frozen=True)
class JointDistribution:
    """Joint mass p(x, y) over (input, output) with its marginals.

    The row marginal is p(x), the column marginal p(y); both are checked
    against the matrix sums on construction.
    """

    matrix: NDArray[np.float64]
    row_marginal: DiscreteDistribution = field(default=None)  # type: ignore[assignment]
    col_marginal: DiscreteDistribution = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        mat = _freeze(self.matrix)
        object.__setattr__(self, "matrix", mat)
        if mat.ndim != 2:
            raise InvalidParameterError("joint matrix must be two-dimensional")
        if np.any(mat < 0.0):
            raise InvalidParameterError("joint mass must be non-negative")
        total = float(mat.sum())
        if abs(total - 1.0) > _ATOL:
            raise InvalidParameterError(f"joint mass sums to {total!r}, not 1")
        rows = mat.sum(axis=1)
        cols = mat.sum(axis=0)
        if self.row_marginal is None:
            object.__setattr__(self, "row_marginal", DiscreteDistribution(rows))
        elif np.max(np.abs(rows - self.row_marginal.probs)) > _ATOL:
            raise InvalidParameterError("row marginal does not match row sums")
        if self.col_marginal is None:
            object.__setattr__(self, "col_marginal", DiscreteDistribution(cols))
        elif np.max(np.abs(cols - self.col_marginal.probs)) > _ATOL:
            raise InvalidParameterError("column marginal does not match column sums")

    @property
    def m(self) -> int:
        return self.matrix.shape[0]

    def marginal_product(self) -> NDArray[np.float64]:
        """Outer product of the marginals, same shape as the joint."""
        return np.outer(self.row_marginal.probs, self.col_marginal.probs)


def bsc_joint(params: BscParams) -> JointDistribution:
    """Joint distribution of a binary symmetric channel.

    Parameters
    ----------
    params : BscParams

    Returns
    -------
    JointDistribution
        2x2 matrix [[lam(1-eps), lam*eps], [(1-lam)eps, (1-lam)(1-eps)]].
    """
    lam, eps = params.lam, params.epsilon
    matrix = np.array(
        [
            [lam * (1.0 - eps), lam * eps],
            [(1.0 - lam) * eps, (1.0 - lam) * (1.0 - eps)],
        ]
    )
    return JointDistribution(matrix)


def msc_joint(params: MscParams) -> JointDistribution:
    """Joint distribution of an m-ary symmetric channel.

    Row i has lambda_i(1 - eps) on the diagonal and lambda_i * eps/(m-1)
    in each off-diagonal cell.  At eps = (m-1)/m every row is uniform and
    input and output are independent.
    """
    m, eps = params.m, params.epsilon
    off = eps / (m - 1)
    matrix = np.repeat(params.lambdas[:, None] * off, m, axis=1)
    np.fill_diagonal(matrix, params.lambdas * (1.0 - eps))
    return JointDistribution(matrix)


def _draw_bsc(
    rng: np.random.Generator, count: int
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    # One (count, 2) block consumed row-major: each sample's lambda and
    # epsilon are adjacent in the stream.
    u = _open_unit(rng, (count, 2))
    return u[:, 0].copy(), u[:, 1].copy()


def sample_bsc_arrays(
    rng_seed: int, count: int
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Bulk form of :func:`sample_bsc_params` used by the experiment harness.

    Both parameters are i.i.d. uniform on (0, 1); the draw layout is one
    (count, 2) block consumed row-major.

    Returns
    -------
    (lam, epsilon) : two arrays of shape (count,)
    """
    return _draw_bsc(_rng(rng_seed), count)


def sample_bsc_params(rng_seed: int, count: int) -> list[BscParams]:
    """Sample BSC parameters i.i.d. uniform on (0, 1), deterministically."""
    lam, eps = sample_bsc_arrays(rng_seed, count)
    return [BscParams(float(a), float(b)) for a, b in zip(lam, eps)]


def sample_msc_arrays(
    rng_seed: int, count: int, m: int
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Bulk form of :func:`sample_msc_params`.

    The first m - 1 input probabilities are i.i.d. uniform on (0, 1),
    accepted only when their sum stays below one (rejection keeps each
    marginal uniform on (0, 1) rather than renormalizing); the last input
    probability is the remainder.  The acceptance rate is 1/(m-1)!, the
    simplex-slice volume of the cube, so candidate blocks are sized at
    twice the expected need (capped to bound memory for large m) and the
    first block almost always fills the request; the epsilon block
    follows the candidates in the stream.

    Returns
    -------
    (lambdas, epsilon) : arrays of shape (count, m) and (count,)
    """
    if m < 2:
        raise InvalidParameterError(f"m must be at least 2, got {m!r}")
    return _draw_msc(_rng(rng_seed), count, m)


def _draw_msc(
    rng: np.random.Generator, count: int, m: int
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    fact = math.factorial(m - 1)
    kept: list[NDArray[np.float64]] = []
    have = 0
    while have < count:
        rows = min(2 * (count - have) * fact + 64, _MAX_CANDIDATE_ROWS)
        block = _open_unit(rng, (rows, m - 1))
        good = block[block.sum(axis=1) < 1.0]
        kept.append(good)
        have += good.shape[0]
    head = np.concatenate(kept)[:count]
    lambdas = np.concatenate([head, 1.0 - head.sum(axis=1, keepdims=True)], axis=1)
    eps = _open_unit(rng, count)
    return lambdas, eps


def sample_msc_params(rng_seed: int, count: int, m: int) -> list[MscParams]:
    """Sample MSC parameters on the open simplex, deterministically."""
    lambdas, eps = sample_msc_arrays(rng_seed, count, m)
    return [MscParams(m, row, float(e)) for row, e in zip(lambdas, eps)]
