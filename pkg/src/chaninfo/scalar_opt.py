"""Golden-section minimization of a unimodal function on [a, b].

Derivative-free and deterministic: the bracket shrinks by the inverse
golden ratio each iteration regardless of the function values, so the
evaluation abscissas depend only on (a, b, tol).  The original endpoints
are always evaluated too, so boundary minima are returned exactly at a
or b rather than at an interior point tol away.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import EvaluationError, InvalidParameterError

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class ScalarMinResult:
    """Outcome of a one-dimensional minimization.

    Attributes
    ----------
    argmin : float
        Location of the minimum, inside the search interval.
    value : float
        Function value at ``argmin``.
    evaluations : int
        Number of objective evaluations performed.
    """

    argmin: float
    value: float
    evaluations: int


def minimize_scalar(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-10
) -> ScalarMinResult:
    """Minimize a unimodal function on the closed interval [a, b].

    Parameters
    ----------
    f : callable
        Objective; must be finite on [a, b] and unimodal for the argmin
        guarantee to hold.
    a, b : float
        Interval endpoints, a < b.
    tol : float
        Final bracket width; the returned argmin is within tol of the
        true minimizer for unimodal f.

    Returns
    -------
    ScalarMinResult

    Raises
    ------
    InvalidParameterError
        If a >= b or tol <= 0.
    EvaluationError
        If the objective returns a non-finite value; carries the abscissa.
    """
    if not (a < b):
        raise InvalidParameterError(f"need a < b, got a={a!r}, b={b!r}")
    if not tol > 0.0:
        raise InvalidParameterError(f"tol must be positive, got {tol!r}")

    count = 0

    def feval(x: float) -> float:
        nonlocal count
        count += 1
        v = float(f(x))
        if not math.isfinite(v):
            raise EvaluationError(f"objective returned {v!r} at x={x!r}", abscissa=x)
        return v

    fa = feval(a)
    fb = feval(b)
    lo, hi = a, b
    c = lo + INVPHI2 * (hi - lo)
    d = lo + INVPHI * (hi - lo)
    fc = feval(c)
    fd = feval(d)
    while (hi - lo) > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = lo + INVPHI2 * (hi - lo)
            fc = feval(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + INVPHI * (hi - lo)
            fd = feval(d)
    xm = 0.5 * (lo + hi)
    fm = feval(xm)
    argmin, value = xm, fm
    # Boundary minima returned exactly at the endpoints; a wins ties.
    if fa <= value:
        argmin, value = a, fa
    if fb < value:
        argmin, value = b, fb
    return ScalarMinResult(argmin=argmin, value=value, evaluations=count)
