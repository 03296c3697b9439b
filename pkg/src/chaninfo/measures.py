"""Information measures on discrete distributions and channel joints.

Two families are implemented, both in natural-log units internally:

* Divergence-based: relative entropy D(p || q), Shannon entropy, and
  Shannon mutual information I(X;Y) = D(p(x,y) || p(x)p(y)).
* Exponent-based: Chernoff information
  C(P1, P2) = -min over alpha in [0,1] of log sum_x P1^alpha P2^(1-alpha),
  and the Chernoff mutual information, which applies C to the joint
  versus the product of its marginals.

Two additional binary-channel operations evaluate a per-row reading of
the same quantities: the divergence (or Chernoff information) between
the first row's conditional output distribution P(Y | X = x1) and the
output marginal P(Y).  For lambda = 0.5 these coincide with the mutual
informations above; for lambda != 0.5 they differ, so both readings are
first-class and selectable wherever a measure kind is accepted.

The Chernoff objective alpha -> log sum P1^alpha P2^(1-alpha) is convex
(log-convexity of the integrand), so golden-section search is exact for
it.  Cells where either mass is zero are excluded from the sum: that is
the continuous limit of the integrand on the open interval, and it keeps
the objective finite whenever the supports overlap at all.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .channels import BscParams, DiscreteDistribution, JointDistribution, MscParams
from .errors import InvalidParameterError
from .scalar_opt import minimize_scalar

LN2 = math.log(2.0)


class MeasureKind(enum.Enum):
    """Selectable measure variants.

    ``shannon_mi`` and ``chernoff_mi`` are the joint-versus-marginal
    definitions and accept any channel; the ``*_paper_bsc`` variants are
    the per-row readings and accept only binary channels.
    """

    SHANNON_MI = "shannon_mi"
    CHERNOFF_MI = "chernoff_mi"
    SHANNON_PAPER_BSC = "shannon_paper_bsc"
    CHERNOFF_PAPER_BSC = "chernoff_paper_bsc"

    @property
    def is_chernoff(self) -> bool:
        return self in (MeasureKind.CHERNOFF_MI, MeasureKind.CHERNOFF_PAPER_BSC)

    @property
    def is_bsc_only(self) -> bool:
        return self in (MeasureKind.SHANNON_PAPER_BSC, MeasureKind.CHERNOFF_PAPER_BSC)


@dataclass(frozen=True)
class MeasureValue:
    """A non-negative information value with its reporting base.

    Attributes
    ----------
    value : float
        The measure, in units of ``log_base``; +inf marks a support
        violation (relative entropy or disjoint Chernoff supports).
    log_base : str
        ``"nats"`` or ``"bits"``.
    alpha_star : float or None
        The optimizing exponent; present exactly when the measure
        involved the alpha-minimization (None for the +inf marker).
    """

    value: float
    log_base: str = "nats"
    alpha_star: float | None = None

    def __post_init__(self):
        if self.log_base not in ("nats", "bits"):
            raise InvalidParameterError(f"unknown log base {self.log_base!r}")
        if math.isnan(self.value) or self.value < 0.0:
            raise InvalidParameterError(f"measure value must be >= 0, got {self.value!r}")
        if self.alpha_star is not None and not (0.0 <= self.alpha_star <= 1.0):
            raise InvalidParameterError(f"alpha_star outside [0,1]: {self.alpha_star!r}")

    def in_bits(self) -> "MeasureValue":
        """The same measure converted to base-2 units."""
        if self.log_base == "bits":
            return self
        return MeasureValue(self.value / LN2, "bits", self.alpha_star)


def _clip_negative_noise(total: float) -> float:
    # Sums of p*log(p/q) terms are non-negative exactly; floating-point
    # cancellation can leave an O(ulp) negative residue.
    return total if total > 0.0 else 0.0


def kl_divergence(p: DiscreteDistribution, q: DiscreteDistribution) -> MeasureValue:
    """Relative entropy D(p || q) = sum p log(p / q) in nats.

    Terms with p(x) = 0 contribute zero; any cell with p(x) > 0 and
    q(x) = 0 makes the divergence infinite (+inf marker).
    """
    pa, qa = p.probs, q.probs
    if len(pa) != len(qa):
        raise InvalidParameterError(
            f"length mismatch: {len(pa)} versus {len(qa)} symbols"
        )
    live = pa > 0.0
    if np.any(qa[live] == 0.0):
        return MeasureValue(math.inf)
    ps = pa[live]
    total = float(np.sum(ps * (np.log(ps) - np.log(qa[live]))))
    return MeasureValue(_clip_negative_noise(total))


def entropy(p: DiscreteDistribution) -> MeasureValue:
    """Shannon entropy -sum p log p in nats, with 0 log 0 = 0."""
    ps = p.probs[p.probs > 0.0]
    return MeasureValue(float(-np.sum(ps * np.log(ps))))


def shannon_mi(j: JointDistribution) -> MeasureValue:
    """Mutual information D(p(x,y) || p(x)p(y)) in nats.

    Zero-mass cells contribute nothing; the marginal product is positive
    wherever the joint is, so the divergence is always finite.
    """
    cells = j.matrix.ravel()
    prod = j.marginal_product().ravel()
    live = cells > 0.0
    cs = cells[live]
    total = float(np.sum(cs * (np.log(cs) - np.log(prod[live]))))
    return MeasureValue(_clip_negative_noise(total))


def _chernoff_objective(
    p1: NDArray[np.float64], p2: NDArray[np.float64]
) -> "callable":
    mask = (p1 > 0.0) & (p2 > 0.0)
    base = np.log(p2[mask])
    coef = np.log(p1[mask]) - base

    def f(alpha: float) -> float:
        return float(np.log(np.sum(np.exp(base + alpha * coef))))

    return f


def chernoff_information(
    p1: DiscreteDistribution, p2: DiscreteDistribution, tol: float = 1e-10
) -> MeasureValue:
    """Chernoff information between two mass vectors, in nats.

    Minimizes the convex objective log sum p1^alpha p2^(1-alpha) over
    alpha in [0, 1] via :func:`chaninfo.scalar_opt.minimize_scalar`,
    including endpoint checks.  Equal inputs return 0 with alpha_star
    0.5 by convention (every alpha is optimal); disjoint supports return
    the +inf marker with no alpha_star.
    """
    a, b = p1.probs, p2.probs
    if len(a) != len(b):
        raise InvalidParameterError(
            f"length mismatch: {len(a)} versus {len(b)} symbols"
        )
    mask = (a > 0.0) & (b > 0.0)
    if not mask.any():
        return MeasureValue(math.inf)
    if np.array_equal(a, b):
        return MeasureValue(0.0, alpha_star=0.5)
    res = minimize_scalar(_chernoff_objective(a, b), 0.0, 1.0, tol)
    # The objective is <= 0 at both endpoints, so -value is never negative.
    value = -res.value if res.value != 0.0 else 0.0
    return MeasureValue(value, alpha_star=res.argmin)


def chernoff_mi(j: JointDistribution, tol: float = 1e-10) -> MeasureValue:
    """Chernoff information between the joint and its marginal product."""
    flat = DiscreteDistribution(j.matrix.ravel())
    prod = DiscreteDistribution(j.marginal_product().ravel())
    return chernoff_information(flat, prod, tol)


def _bsc_row_and_marginal(
    params: BscParams,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    # First-row conditional P(Y | X = x1) and output marginal P(Y).
    lam, eps = params.lam, params.epsilon
    q1 = lam * (1.0 - eps) + (1.0 - lam) * eps
    return np.array([1.0 - eps, eps]), np.array([q1, 1.0 - q1])


def shannon_paper_bsc(params: BscParams) -> MeasureValue:
    """Per-row Shannon reading for a binary channel, in nats.

    Evaluates the two-term form

        (1-eps) log((1-eps)/q1) + eps log(eps/q2),
        q1 = lam(1-eps) + (1-lam)eps,  q2 = lam*eps + (1-lam)(1-eps),

    the divergence of the first row's output conditional from the output
    marginal.  Coincides with :func:`shannon_mi` at lam = 0.5 only.
    """
    lam, eps = params.lam, params.epsilon
    q1 = lam * (1.0 - eps) + (1.0 - lam) * eps
    q2 = lam * eps + (1.0 - lam) * (1.0 - eps)
    total = (1.0 - eps) * math.log((1.0 - eps) / q1) + eps * math.log(eps / q2)
    return MeasureValue(_clip_negative_noise(total))


def chernoff_paper_bsc(params: BscParams, tol: float = 1e-10) -> MeasureValue:
    """Per-row Chernoff reading for a binary channel, in nats.

    Evaluates -min over alpha of
    log[(1-eps)^alpha q^(1-alpha) + eps^alpha (1-q)^(1-alpha)]
    with q = lam(1-eps) + (1-lam)eps: the Chernoff information between
    the first row's output conditional and the output marginal.
    """
    row, marginal = _bsc_row_and_marginal(params)
    return chernoff_information(
        DiscreteDistribution(row), DiscreteDistribution(marginal), tol
    )


def evaluate_measure(
    kind: MeasureKind, params: BscParams | MscParams, tol: float = 1e-10
) -> MeasureValue:
    """Evaluate a measure kind at one channel parameter point.

    The per-row kinds accept only :class:`BscParams`; the definitional
    kinds build the channel joint for either parameter type.
    """
    from .channels import bsc_joint, msc_joint

    if kind.is_bsc_only:
        if not isinstance(params, BscParams):
            raise InvalidParameterError(
                f"{kind.value} accepts binary-channel parameters only"
            )
        if kind is MeasureKind.SHANNON_PAPER_BSC:
            return shannon_paper_bsc(params)
        return chernoff_paper_bsc(params, tol)
    joint = bsc_joint(params) if isinstance(params, BscParams) else msc_joint(params)
    if kind is MeasureKind.SHANNON_MI:
        return shannon_mi(joint)
    return chernoff_mi(joint, tol)
