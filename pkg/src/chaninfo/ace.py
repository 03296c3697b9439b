"""Alternating conditional expectations for additive decompositions.

Given samples (x_1..x_p, y), the fit alternates between two loops to
minimize the normalized residual

    e2 = E[(theta(y) - sum_k phi_k(x_k))^2] / E[theta(y)^2]

subject to E[phi_k] = 0 and Var[theta] = 1.  The inner loop sweeps the
predictors, replacing each phi_k by the smoothed conditional expectation
of the partial residual given x_k; the outer loop replaces theta by the
standardized smoothed conditional expectation of sum(phi) given y.  Each
loop stops when the e2 improvement drops below the tolerance or its
iteration cap is reached.  When an outer iteration fails to decrease e2
the previous state is restored, so the recorded e2 trace is
non-increasing by construction.

The smoother is an equal-frequency binned mean: sort by the conditioning
variable, split into bins of (nearly) equal count, and take the bin mean
of both coordinates.  Curves are piecewise-linear through those knots
with constant extrapolation beyond the end knots.  Bins whose knots
collide (possible under heavy ties) are merged until knots are strictly
increasing.

Determinism: rows are first brought into a canonical order (lexicographic
over the predictors in sorted-name order, then the response), and the
inner sweep visits predictors in sorted-name order.  Fits are therefore
bit-identical under row shuffles and predictor column permutations.

The solution is sign-ambiguous (negating theta and every phi preserves
e2); the returned sign is fixed so that corr(theta(y), y) >= 0.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from . import _kernels as kernels
from .errors import DegenerateInputError, InvalidParameterError

FLOAT_FMT = "%.17g"


def _as_float_vector(v, name: str) -> NDArray[np.float64]:
    a = np.asarray(v, dtype=np.float64)
    if a.ndim != 1:
        raise InvalidParameterError(f"{name} must be one-dimensional")
    return a


@dataclass(frozen=True)
class TransformationCurve:
    """Piecewise-linear curve through (knot, value) pairs.

    Evaluation interpolates linearly between knots and extrapolates as a
    constant beyond the end knots.  ``bins_reduced`` flags curves whose
    smoother ran with fewer bins than requested (small-sample fallback).
    """

    knots: NDArray[np.float64]
    values: NDArray[np.float64]
    bins_reduced: bool = False

    def __post_init__(self):
        k = _as_float_vector(self.knots, "knots")
        v = _as_float_vector(self.values, "values")
        if len(k) == 0:
            raise InvalidParameterError("curve needs at least one knot")
        if len(k) != len(v):
            raise InvalidParameterError(
                f"knot/value length mismatch: {len(k)} versus {len(v)}"
            )
        if np.any(np.diff(k) <= 0.0):
            raise InvalidParameterError("knots must be strictly increasing")
        k.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "knots", k)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.knots)

    def __call__(self, x) -> NDArray[np.float64]:
        return np.interp(x, self.knots, self.values)


@dataclass(frozen=True)
class Dataset:
    """Numeric sample table: an (n, p) predictor block plus a response.

    ``column_names`` lists the p predictor names followed by the
    response name.  Inputs must be finite and provide at least 10 rows
    per predictor so every smoother bin sees data.
    """

    predictors: NDArray[np.float64]
    response: NDArray[np.float64]
    column_names: tuple[str, ...]

    def __post_init__(self):
        x = np.asarray(self.predictors, dtype=np.float64)
        y = _as_float_vector(self.response, "response")
        if x.ndim != 2 or x.shape[1] < 1:
            raise InvalidParameterError("predictors must be a 2-d table")
        n, p = x.shape
        if len(y) != n:
            raise InvalidParameterError(
                f"row mismatch: {n} predictor rows, {len(y)} responses"
            )
        names = tuple(str(c) for c in self.column_names)
        if len(names) != p + 1:
            raise InvalidParameterError(
                f"need {p + 1} column names (p predictors + response), got {len(names)}"
            )
        if len(set(names)) != len(names):
            raise InvalidParameterError("column names must be unique")
        if not np.isfinite(x).all() or not np.isfinite(y).all():
            raise InvalidParameterError("non-finite entries in dataset")
        if n < 10 * p:
            raise InvalidParameterError(
                f"need at least 10 rows per predictor: n={n}, p={p}"
            )
        x = np.ascontiguousarray(x)
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "predictors", x)
        object.__setattr__(self, "response", y)
        object.__setattr__(self, "column_names", names)

    @property
    def n(self) -> int:
        return self.predictors.shape[0]

    @property
    def p(self) -> int:
        return self.predictors.shape[1]

    @property
    def predictor_names(self) -> tuple[str, ...]:
        return self.column_names[:-1]

    @property
    def response_name(self) -> str:
        return self.column_names[-1]


@dataclass(frozen=True)
class AceConfig:
    """Fit knobs.

    ``bins=None`` selects max(20, n // 200) at fit time; explicit values
    must be at least 5.  ``tol`` is the absolute e2 improvement below
    which a loop stops.
    """

    bins: int | None = None
    tol: float = 1e-6
    max_inner: int = 20
    max_outer: int = 50

    def __post_init__(self):
        if self.bins is not None and self.bins < 5:
            raise InvalidParameterError(f"bins must be >= 5, got {self.bins}")
        if not self.tol > 0.0:
            raise InvalidParameterError(f"tol must be positive, got {self.tol}")
        if self.max_inner < 1 or self.max_outer < 1:
            raise InvalidParameterError("iteration caps must be >= 1")

    def resolve_bins(self, n: int) -> int:
        return self.bins if self.bins is not None else max(20, n // 200)


@dataclass(frozen=True)
class AceResult:
    """Fitted transformations plus convergence diagnostics.

    ``phis`` follows the dataset's predictor order.  ``correlation`` is
    the Pearson correlation between theta(y_i) and sum_k phi_k(x_ik)
    over the training sample; ``e2_trace`` holds e2 after each completed
    outer iteration and is non-increasing.
    """

    theta: TransformationCurve
    phis: tuple[TransformationCurve, ...]
    e2: float
    correlation: float
    outer_iterations: int
    e2_trace: tuple[float, ...]
    predictor_names: tuple[str, ...]
    response_name: str

    def named_curves(self) -> dict[str, TransformationCurve]:
        """Curves keyed for serialization: theta plus phi_<predictor>."""
        out = {"theta": self.theta}
        for name, phi in zip(self.predictor_names, self.phis):
            out[f"phi_{name}"] = phi
        return out


class _Binning:
    """Precomputed equal-frequency binning of one conditioning variable."""

    __slots__ = ("order", "edges", "knots", "reduced")

    def __init__(self, x: NDArray[np.float64], bins: int):
        n = len(x)
        self.reduced = n < bins
        if self.reduced:
            bins = max(2, n // 5)
        bins = max(1, min(bins, n))
        self.order = np.argsort(x, kind="stable")
        edges = (np.arange(bins + 1, dtype=np.int64) * n) // bins
        knots = kernels.bin_means(x, self.order, edges)
        # Ties in x can leave adjacent bins with equal means; merge those
        # bins until the knots are strictly increasing (sorted data makes
        # bin means non-decreasing, so only equality occurs).
        while len(edges) > 2:
            dup = knots[1:] <= knots[:-1]
            if not dup.any():
                break
            keep = np.ones(len(edges), dtype=bool)
            keep[1:-1] = ~dup
            edges = edges[keep]
            knots = kernels.bin_means(x, self.order, edges)
        self.edges = edges
        self.knots = knots

    def means(self, z: NDArray[np.float64]) -> NDArray[np.float64]:
        return kernels.bin_means(z, self.order, self.edges)


def conditional_expectation(x, z, bins: int) -> TransformationCurve:
    """Binned-mean estimate of E[z | x] as a piecewise-linear curve.

    x is sorted (stably, so ties keep input order), split into ``bins``
    equal-count groups, and each knot/value is the within-group mean of
    x and z.  Fewer samples than bins fall back to max(2, n // 5) groups
    and set the curve's ``bins_reduced`` flag.
    """
    xa = _as_float_vector(x, "x")
    za = _as_float_vector(z, "z")
    if len(xa) != len(za):
        raise InvalidParameterError(
            f"length mismatch: {len(xa)} versus {len(za)} samples"
        )
    if len(xa) == 0:
        raise InvalidParameterError("empty input")
    if bins < 1:
        raise InvalidParameterError(f"bins must be >= 1, got {bins}")
    grid = _Binning(xa, bins)
    return TransformationCurve(grid.knots, grid.means(za), grid.reduced)


def ace_fit(data: Dataset, config: AceConfig | None = None) -> AceResult:
    """Fit the additive decomposition theta(y) ~ sum_k phi_k(x_k).

    See the module docstring for the loop structure, smoother,
    canonical ordering, and sign convention.  Raises
    DegenerateInputError when the response has zero variance.
    """
    cfg = config if config is not None else AceConfig()
    n, p = data.n, data.p
    if data.response.std() == 0.0:
        raise DegenerateInputError("response has zero variance")

    sweep = sorted(range(p), key=lambda k: data.predictor_names[k])
    keys = [data.response] + [data.predictors[:, k] for k in reversed(sweep)]
    row_order = np.lexsort(keys)
    cols = [np.ascontiguousarray(data.predictors[row_order, k]) for k in range(p)]
    y = data.response[row_order]

    bins = cfg.resolve_bins(n)
    grids = [_Binning(cols[k], bins) for k in range(p)]
    ygrid = _Binning(y, bins)

    mu, sd = y.mean(), y.std()
    theta_s = (y - mu) / sd
    theta_vals = (ygrid.knots - mu) / sd
    phis_s = np.zeros((n, p))
    phi_vals: list[NDArray[np.float64]] = [
        np.zeros(len(grids[k].knots)) for k in range(p)
    ]
    sumphi = np.zeros(n)

    def e2_now() -> float:
        r = theta_s - sumphi
        return float((r @ r) / (theta_s @ theta_s))

    trace: list[float] = []
    last_outer = e2_now()
    for _ in range(cfg.max_outer):
        snapshot = (
            theta_s,
            theta_vals,
            phis_s.copy(),
            list(phi_vals),
            sumphi.copy(),
        )
        last_inner = e2_now()
        for _ in range(cfg.max_inner):
            for k in sweep:
                resid = theta_s - (sumphi - phis_s[:, k])
                vals = grids[k].means(resid)
                sampled = np.interp(cols[k], grids[k].knots, vals)
                center = sampled.mean()
                sampled = sampled - center
                sumphi += sampled - phis_s[:, k]
                phis_s[:, k] = sampled
                phi_vals[k] = vals - center
            cur = e2_now()
            if last_inner - cur < cfg.tol:
                break
            last_inner = cur

        tvals = ygrid.means(sumphi)
        tsamp = np.interp(y, ygrid.knots, tvals)
        tsd = tsamp.std()
        if tsd == 0.0:
            break
        tmean = tsamp.mean()
        theta_s = (tsamp - tmean) / tsd
        theta_vals = (tvals - tmean) / tsd

        cur = e2_now()
        if cur > last_outer:
            theta_s, theta_vals, phis_s, phi_vals, sumphi = snapshot
            break
        trace.append(cur)
        if last_outer - cur < cfg.tol:
            break
        last_outer = cur

    if sumphi.std() == 0.0:
        correlation = 0.0
    else:
        correlation = float(np.corrcoef(theta_s, sumphi)[0, 1])
    if float(np.corrcoef(theta_s, y)[0, 1]) < 0.0:
        theta_vals = -theta_vals
        phi_vals = [-v for v in phi_vals]

    return AceResult(
        theta=TransformationCurve(ygrid.knots, theta_vals, ygrid.reduced),
        phis=tuple(
            TransformationCurve(grids[k].knots, phi_vals[k], grids[k].reduced)
            for k in range(p)
        ),
        e2=e2_now(),
        correlation=correlation,
        outer_iterations=len(trace),
        e2_trace=tuple(trace),
        predictor_names=data.predictor_names,
        response_name=data.response_name,
    )


def maximal_correlation(x, y, config: AceConfig | None = None) -> float:
    """Estimated maximal correlation between two samples.

    Runs the single-predictor fit and returns its correlation: the
    Pearson correlation after the best transformations of both sides.
    """
    xa = _as_float_vector(x, "x")
    ya = _as_float_vector(y, "y")
    data = Dataset(xa[:, None], ya, ("x", "y"))
    return ace_fit(data, config).correlation


def write_curves_csv(curves: dict[str, TransformationCurve], path) -> None:
    """Write curves as (curve_name, knot, value) rows.

    Rows are sorted by curve name and then by knot; floats use 17
    significant digits so a read-back is exact.
    """
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["curve_name", "knot", "value"])
        for name in sorted(curves):
            c = curves[name]
            for knot, value in zip(c.knots, c.values):
                w.writerow([name, FLOAT_FMT % knot, FLOAT_FMT % value])


def read_curves_csv(path) -> dict[str, TransformationCurve]:
    """Inverse of :func:`write_curves_csv` (bins_reduced is not stored)."""
    rows: dict[str, list[tuple[float, float]]] = {}
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r, None)
        if header != ["curve_name", "knot", "value"]:
            raise InvalidParameterError(f"unexpected curves header: {header!r}")
        for name, knot, value in r:
            rows.setdefault(name, []).append((float(knot), float(value)))
    out = {}
    for name, pts in rows.items():
        pts.sort()
        out[name] = TransformationCurve(
            np.array([k for k, _ in pts]), np.array([v for _, v in pts])
        )
    return out
