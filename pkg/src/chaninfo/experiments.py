"""Monte Carlo harness: sample channels, evaluate measures, decompose, compare.

One experiment draws n parameter vectors for a channel family, evaluates
each configured information measure on every draw, fits the additive
decomposition to each measure's dataset, and then compares the fitted
transformations across measures.  The central comparison standardizes
each predictor curve over a shared evaluation grid and reports its RMS
difference and correlation against the other measure's curve: when those
are near 0 and 1, the two measures share the same inner decomposition
and differ only through their outer transformation of the response.

Everything here is deterministic given the configuration: parameters come
from a counter-based generator with a documented draw layout, fits are
canonicalized, and serialization uses fixed float formatting, so repeated
runs produce byte-identical artifacts.
"""
from __future__ import annotations

import dataclasses
import json
import math
import time
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from . import _kernels as kernels
from . import channels
from .ace import FLOAT_FMT, AceConfig, AceResult, Dataset, TransformationCurve, ace_fit
from .channels import RNG_ALGORITHM, BscParams
from .errors import DegenerateInputError, InvalidParameterError
from .measures import MeasureKind, evaluate_measure

_DEFAULT_N = {"bsc": 20000, "msc": 60000}

# Correlations reported alongside our own, for side-by-side display.
PAPER_TARGETS = {
    "bsc": {"shannon": 0.9994, "chernoff": 0.9991},
    "msc": {"shannon": 0.9999, "chernoff": 0.9999},
}

# Comparison and shape statistics are evaluated on grids of this size.
_GRID_POINTS = 200

_DEFAULT_MEASURES = (MeasureKind.SHANNON_MI, MeasureKind.CHERNOFF_MI)


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a channel family, sample size, seed, and measures.

    ``n`` and ``m`` default per channel (n: 20000 for bsc, 60000 for msc;
    m: 4).  ``measures`` defaults to the definitional pair; the per-row
    variants are valid for the bsc channel only.
    """

    channel: str
    n: int | None = None
    seed: int = 1
    measures: tuple[MeasureKind, ...] = _DEFAULT_MEASURES
    ace: AceConfig = AceConfig()
    m: int | None = None

    def __post_init__(self):
        if self.channel not in ("bsc", "msc"):
            raise InvalidParameterError(f"unknown channel {self.channel!r}")
        object.__setattr__(self, "measures", tuple(self.measures))
        if not self.measures:
            raise InvalidParameterError("at least one measure kind is required")
        if len(set(self.measures)) != len(self.measures):
            raise InvalidParameterError("duplicate measure kinds")
        if self.channel == "msc":
            for kind in self.measures:
                if kind.is_bsc_only:
                    raise InvalidParameterError(
                        f"{kind.value} is defined for the bsc channel only"
                    )
        if self.resolved_n < 1000:
            raise InvalidParameterError(
                f"n must be at least 1000, got {self.resolved_n}"
            )
        if self.m is not None and self.m < 2:
            raise InvalidParameterError(f"m must be at least 2, got {self.m!r}")

    @property
    def resolved_n(self) -> int:
        return self.n if self.n is not None else _DEFAULT_N[self.channel]

    @property
    def resolved_m(self) -> int:
        return self.m if self.m is not None else 4

    @property
    def m_inferred(self) -> bool:
        """True when the msc alphabet size fell back to the default."""
        return self.channel == "msc" and self.m is None

    @property
    def predictor_names(self) -> tuple[str, ...]:
        if self.channel == "bsc":
            return ("lambda", "epsilon")
        lams = ["lambda"] + [f"lambda{i}" for i in range(2, self.resolved_m)]
        return tuple(lams) + ("epsilon",)


@dataclass(frozen=True)
class MeasureRun:
    """One measure's dataset and fit within an experiment."""

    kind: MeasureKind
    dataset: Dataset
    fit: AceResult
    rejected_samples: int
    shape: dict

    @property
    def response_min(self) -> float:
        return float(self.dataset.response.min())


@dataclass(frozen=True)
class CurveComparison:
    """Closeness of one predictor's transformation across two fits."""

    curve_name: str
    rms_difference: float
    curve_correlation: float
    sign_aligned: bool


@dataclass(frozen=True)
class ComparisonReport:
    """Cross-measure comparison of two fitted decompositions.

    Predictor curves are standardized over a shared grid and sign-aligned
    before the RMS/correlation statistics.  The response transformations
    legitimately differ across measures, so they are summarized only by
    ``theta_monotone_fraction``: the fraction of aligned smoother bins
    (equal sample quantiles) where both curves increase.  ``orderings``
    summarizes the per-sample sign of the response difference when the
    comparison comes from paired datasets, and is empty otherwise.
    """

    curves: tuple[CurveComparison, ...]
    theta_monotone_fraction: float
    orderings: dict


@dataclass(frozen=True)
class ExperimentReport:
    """Everything run_experiment produces.

    ``wall_clock_seconds`` is informational and deliberately excluded
    from the serialized report so fixed-seed reruns stay byte-identical.
    """

    config: ExperimentConfig
    rng_algorithm: str
    m_inferred: bool
    runs: tuple[MeasureRun, ...]
    comparisons: tuple[ComparisonReport, ...]
    paper_targets: dict
    wall_clock_seconds: float


def _bsc_cells(lam: NDArray, eps: NDArray) -> NDArray[np.float64]:
    # Flattened 2x2 joints, one row per draw: [p11, p12, p21, p22].
    return np.stack(
        [
            lam * (1.0 - eps),
            lam * eps,
            (1.0 - lam) * eps,
            (1.0 - lam) * (1.0 - eps),
        ],
        axis=1,
    )


def _msc_cells(lambdas: NDArray, eps: NDArray, m: int) -> NDArray[np.float64]:
    # Flattened m x m joints: diagonal lam_i(1-eps), off-diagonal
    # lam_i * eps/(m-1).
    n = len(eps)
    off = eps / (m - 1)
    cells = np.broadcast_to((lambdas * off[:, None])[:, :, None], (n, m, m)).copy()
    idx = np.arange(m)
    cells[:, idx, idx] = lambdas * (1.0 - eps)[:, None]
    return cells.reshape(n, m * m)


def _product_cells(cells: NDArray, m: int) -> NDArray[np.float64]:
    n = cells.shape[0]
    j = cells.reshape(n, m, m)
    rows = j.sum(axis=2)
    cols = j.sum(axis=1)
    return (rows[:, :, None] * cols[:, None, :]).reshape(n, m * m)


def _shannon_rows(cells: NDArray, m: int) -> NDArray[np.float64]:
    prod = _product_cells(cells, m)
    mask = cells > 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(mask, cells * np.log(np.where(mask, cells / prod, 1.0)), 0.0)
    return terms.sum(axis=1)


class _ParameterBlock:
    """Parameter draws for a batch of rows, with the measure evaluators."""

    __slots__ = ("channel", "m", "lam", "lambdas", "eps", "predictors")

    def __init__(self, rng, channel: str, m: int, count: int):
        self.channel = channel
        self.m = m
        if channel == "bsc":
            self.lam, self.eps = channels._draw_bsc(rng, count)
            self.lambdas = None
            self.predictors = np.stack([self.lam, self.eps], axis=1)
        else:
            self.lambdas, self.eps = channels._draw_msc(rng, count, m)
            self.lam = None
            self.predictors = np.concatenate(
                [self.lambdas[:, : m - 1], self.eps[:, None]], axis=1
            )

    def responses(self, kind: MeasureKind, tol: float = 1e-10) -> NDArray[np.float64]:
        if self.channel == "bsc":
            if kind is MeasureKind.SHANNON_PAPER_BSC:
                lam, eps = self.lam, self.eps
                q1 = lam * (1.0 - eps) + (1.0 - lam) * eps
                q2 = lam * eps + (1.0 - lam) * (1.0 - eps)
                return (1.0 - eps) * np.log((1.0 - eps) / q1) + eps * np.log(eps / q2)
            if kind is MeasureKind.CHERNOFF_PAPER_BSC:
                q1 = self.lam * (1.0 - self.eps) + (1.0 - self.lam) * self.eps
                p1 = np.stack([1.0 - self.eps, self.eps], axis=1)
                p2 = np.stack([q1, 1.0 - q1], axis=1)
                return kernels.chernoff_batch(p1, p2, tol)[0]
            cells = _bsc_cells(self.lam, self.eps)
            m = 2
        else:
            cells = _msc_cells(self.lambdas, self.eps, self.m)
            m = self.m
        if kind is MeasureKind.SHANNON_MI:
            return _shannon_rows(cells, m)
        return kernels.chernoff_batch(cells, _product_cells(cells, m), tol)[0]


def _build_with_rejections(
    config: ExperimentConfig, kind: MeasureKind
) -> tuple[Dataset, int]:
    if config.channel == "msc" and kind.is_bsc_only:
        raise InvalidParameterError(
            f"{kind.value} is defined for the bsc channel only"
        )
    rng = channels._rng(config.seed)
    n = config.resolved_n
    block = _ParameterBlock(rng, config.channel, config.resolved_m, n)
    predictors = block.predictors
    y = block.responses(kind)
    rejected = 0
    while True:
        bad = ~np.isfinite(y)
        if not bad.any():
            break
        idx = np.flatnonzero(bad)
        rejected += len(idx)
        patch = _ParameterBlock(rng, config.channel, config.resolved_m, len(idx))
        predictors[idx] = patch.predictors
        y[idx] = patch.responses(kind)
    # Exact zeros are possible at independence points; float cancellation
    # can land a hair below, so clamp the noise floor.
    y = np.maximum(y, 0.0)
    names = config.predictor_names + (f"y_{kind.value}",)
    return Dataset(predictors, y, names), rejected


def build_dataset(config: ExperimentConfig, kind: MeasureKind) -> Dataset:
    """Sample parameters and evaluate one measure on every draw.

    Deterministic given the config seed; rows whose response is not
    finite are replaced with fresh draws from the same stream (counted in
    the experiment report, and not expected for in-range parameters).
    """
    return _build_with_rejections(config, kind)[0]


def _standardize_grid(v: NDArray[np.float64]) -> NDArray[np.float64]:
    s = v.std()
    c = v - v.mean()
    return c / s if s > 0.0 else c


def _grid_over(a: TransformationCurve, b: TransformationCurve) -> NDArray[np.float64]:
    lo = max(a.knots[0], b.knots[0])
    hi = min(a.knots[-1], b.knots[-1])
    if not hi > lo:
        raise DegenerateInputError("curve knot ranges do not overlap")
    return np.linspace(lo, hi, _GRID_POINTS)


def compare_curve_sets(
    curves_a: dict[str, TransformationCurve],
    curves_b: dict[str, TransformationCurve],
) -> ComparisonReport:
    """Compare two named curve sets (as serialized to curves CSV).

    Both sets must contain the same names: a ``theta`` response curve and
    one ``phi_*`` curve per predictor.  Each phi pair is evaluated on the
    intersection of the knot ranges (never extrapolating), standardized
    over that grid, and sign-aligned by correlation before the RMS and
    correlation statistics.
    """
    if set(curves_a) != set(curves_b):
        raise InvalidParameterError(
            f"curve sets differ: {sorted(curves_a)} versus {sorted(curves_b)}"
        )
    if "theta" not in curves_a:
        raise InvalidParameterError("curve sets lack a theta curve")
    records = []
    for name in sorted(n for n in curves_a if n != "theta"):
        grid = _grid_over(curves_a[name], curves_b[name])
        va = _standardize_grid(curves_a[name](grid))
        vb = _standardize_grid(curves_b[name](grid))
        if va.std() > 0.0 and vb.std() > 0.0:
            corr = float(np.corrcoef(va, vb)[0, 1])
        else:
            corr = 0.0
        aligned = corr >= 0.0
        if not aligned:
            vb = -vb
            corr = -corr
        rms = float(np.sqrt(np.mean((va - vb) ** 2)))
        records.append(CurveComparison(name, rms, corr, aligned))

    ta, tb = curves_a["theta"], curves_b["theta"]
    steps = min(len(ta), len(tb)) - 1
    if steps >= 1:
        da = np.diff(ta.values[: steps + 1]) > 0.0
        db = np.diff(tb.values[: steps + 1]) > 0.0
        fraction = float(np.mean(da & db))
    else:
        fraction = 0.0
    return ComparisonReport(tuple(records), fraction, {})


def compare_decompositions(a: AceResult, b: AceResult) -> ComparisonReport:
    """Compare two fitted decompositions over the same predictors.

    Thin wrapper over :func:`compare_curve_sets` keyed by the fits'
    predictor names, which must match.
    """
    if a.predictor_names != b.predictor_names:
        raise InvalidParameterError(
            f"predictor names differ: {a.predictor_names} versus {b.predictor_names}"
        )
    return compare_curve_sets(a.named_curves(), b.named_curves())


def _phi_symmetry_stats(curve: TransformationCurve) -> tuple[float, float]:
    # Mirror statistic around 0.5: max |phi(e) - phi(1-e)| over a paired
    # grid, in units of the curve's grid standard deviation.  A piecewise
    # linear curve cannot place a sharp interior minimum more precisely
    # than one knot spacing, so mirrored differences within one knot gap
    # of the minimum knot measure knot placement rather than curve shape;
    # the first statistic excludes that window, the second is the raw
    # maximum over the whole grid.
    k, v = curve.knots, curve.values
    if len(k) < 2:
        return 0.0, 0.0
    lo = max(k[0], 1.0 - k[-1])
    hi = min(k[-1], 1.0 - k[0])
    if not hi > lo:
        return 0.0, 0.0
    g = np.linspace(lo, hi, _GRID_POINTS)
    v1 = np.interp(g, k, v)
    v2 = np.interp(1.0 - g, k, v)
    s = v1.std()
    if s == 0.0:
        return 0.0, 0.0
    gaps = np.abs(v1 - v2) / s
    raw = float(gaps.max())
    j = int(np.argmin(v))
    left = k[j - 1] if j > 0 else k[0] - (k[1] - k[0])
    right = k[j + 1] if j + 1 < len(k) else k[-1] + (k[-1] - k[-2])
    near_min = ((g > left) & (g < right)) | (((1.0 - g) > left) & ((1.0 - g) < right))
    kept = ~near_min
    gated = float(gaps[kept].max()) if kept.any() else 0.0
    return gated, raw


def _flatness_ratio(curve: TransformationCurve, cutoff: float = 0.7) -> float:
    # Range of the curve over knots below the cutoff, relative to the
    # full knot range of values; near 0 means flat on the left.
    v = curve.values
    full = float(v.max() - v.min())
    if full == 0.0:
        return 0.0
    below = v[curve.knots < cutoff]
    if below.size == 0:
        return 0.0
    return float((below.max() - below.min()) / full)


def shape_checks(result: AceResult, channel: str) -> dict:
    """Named shape statistics of one fit, keyed by channel family.

    bsc: mirror symmetry of the epsilon curve around 0.5 (window-gated
    and raw, see the comparison docstring), the fraction of decreasing
    adjacent knot steps of the lambda curve, and the fraction of
    increasing adjacent knot steps of theta.  msc: the epsilon-curve
    argmin over its knots, a left-flatness ratio for each input-weight
    curve, and the theta fraction.
    """
    if channel not in ("bsc", "msc"):
        raise InvalidParameterError(f"unknown channel {channel!r}")
    by_name = dict(zip(result.predictor_names, result.phis))
    if "epsilon" not in by_name:
        raise InvalidParameterError("fit has no epsilon predictor")
    eps_curve = by_name["epsilon"]
    theta_fraction = float(np.mean(np.diff(result.theta.values) > 0.0))
    if channel == "bsc":
        gated, raw = _phi_symmetry_stats(eps_curve)
        lam_curve = by_name["lambda"]
        return {
            "phi2_asymmetry": gated,
            "phi2_asymmetry_raw": raw,
            "phi1_decreasing_fraction": float(
                np.mean(np.diff(lam_curve.values) < 0.0)
            ),
            "theta_increasing_fraction": theta_fraction,
        }
    argmin_knot = float(eps_curve.knots[int(np.argmin(eps_curve.values))])
    flatness = {
        name: _flatness_ratio(by_name[name])
        for name in result.predictor_names
        if name != "epsilon"
    }
    return {
        "phi4_argmin": argmin_knot,
        "phi_flatness_below_0_7": flatness,
        "theta_increasing_fraction": theta_fraction,
    }


def _orderings(
    kind_a: MeasureKind,
    kind_b: MeasureKind,
    y_a: NDArray[np.float64],
    y_b: NDArray[np.float64],
    channel: str,
) -> dict:
    # Sign distribution of (first measure - second measure) per sample;
    # pairs are ordered divergence-based first, so for the canonical
    # pairs the difference reads Shannon minus Chernoff.
    d = y_a - y_b
    out = {
        "measures": [kind_a.value, kind_b.value],
        "shannon_minus_chernoff": {
            "negative": int((d < 0.0).sum()),
            "zero": int((d == 0.0).sum()),
            "positive": int((d > 0.0).sum()),
        },
        "shannon_always_smaller": bool((d < 0.0).all()),
    }
    if channel == "bsc":
        # Fixed reference point where the two readings differ sharply;
        # evaluated live with the pair's own kinds.
        ref = BscParams(0.5, 0.1)
        out["reference_point"] = {
            "lambda": 0.5,
            "epsilon": 0.1,
            "shannon": evaluate_measure(kind_a, ref).value,
            "chernoff": evaluate_measure(kind_b, ref).value,
        }
    return out


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Build every configured dataset, fit each, and compare all pairs.

    Datasets share the parameter draws (same seed, same stream), so the
    pairwise ordering summaries are computed over paired samples.
    """
    t0 = time.perf_counter()
    runs = []
    for kind in config.measures:
        dataset, rejected = _build_with_rejections(config, kind)
        fit = ace_fit(dataset, config.ace)
        runs.append(
            MeasureRun(kind, dataset, fit, rejected, shape_checks(fit, config.channel))
        )

    comparisons = []
    for i in range(len(runs)):
        for j in range(i + 1, len(runs)):
            a, b = runs[i], runs[j]
            if a.kind.is_chernoff and not b.kind.is_chernoff:
                a, b = b, a
            if not np.array_equal(a.dataset.predictors, b.dataset.predictors):
                raise DegenerateInputError(
                    "datasets diverged; resampling broke the paired draws"
                )
            base = compare_decompositions(a.fit, b.fit)
            orderings = _orderings(
                a.kind, b.kind, a.dataset.response, b.dataset.response, config.channel
            )
            comparisons.append(dataclasses.replace(base, orderings=orderings))

    return ExperimentReport(
        config=config,
        rng_algorithm=RNG_ALGORITHM,
        m_inferred=config.m_inferred,
        runs=tuple(runs),
        comparisons=tuple(comparisons),
        paper_targets=dict(PAPER_TARGETS[config.channel]),
        wall_clock_seconds=time.perf_counter() - t0,
    )


def report_dict(report: ExperimentReport) -> dict:
    """The serializable form of a report (wall clock excluded)."""
    cfg = report.config
    out = {
        "config": {
            "channel": cfg.channel,
            "n": cfg.resolved_n,
            "seed": cfg.seed,
            "measures": [k.value for k in cfg.measures],
            "m": cfg.resolved_m,
            "ace": {
                "bins": cfg.ace.resolve_bins(cfg.resolved_n),
                "tol": cfg.ace.tol,
                "max_inner": cfg.ace.max_inner,
                "max_outer": cfg.ace.max_outer,
            },
        },
        "rng_algorithm": report.rng_algorithm,
        "m_inferred": report.m_inferred,
        "results": [
            {
                "measure": run.kind.value,
                "correlation": run.fit.correlation,
                "e2": run.fit.e2,
                "outer_iterations": run.fit.outer_iterations,
                "e2_trace": list(run.fit.e2_trace),
                "rejected_samples": run.rejected_samples,
                "response_min": run.response_min,
                "shape": run.shape,
            }
            for run in report.runs
        ],
        "comparisons": [
            {
                "measures": comp.orderings.get(
                    "measures", [c.value for c in cfg.measures[:2]]
                ),
                "curves": [
                    {
                        "curve_name": rec.curve_name,
                        "rms_difference": rec.rms_difference,
                        "curve_correlation": rec.curve_correlation,
                        "sign_aligned": rec.sign_aligned,
                    }
                    for rec in comp.curves
                ],
                "theta_monotone_fraction": comp.theta_monotone_fraction,
                "orderings": {
                    k: v for k, v in comp.orderings.items() if k != "measures"
                },
            }
            for comp in report.comparisons
        ],
        "paper_targets": report.paper_targets,
    }
    return out


def dumps_canonical(obj, indent: int = 2) -> str:
    """Deterministic JSON: insertion-order keys, 17-significant-digit floats.

    Rejects non-finite floats (JSON has no token for them) and non-string
    keys; accepts numpy scalars.
    """

    def emit(v, depth: int) -> str:
        pad = " " * (indent * depth)
        inner = " " * (indent * (depth + 1))
        if isinstance(v, bool) or isinstance(v, np.bool_):
            return "true" if v else "false"
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        if isinstance(v, (float, np.floating)):
            f = float(v)
            if not math.isfinite(f):
                raise InvalidParameterError(f"cannot serialize non-finite {f!r}")
            return FLOAT_FMT % f
        if isinstance(v, str):
            return json.dumps(v)
        if v is None:
            return "null"
        if isinstance(v, dict):
            if not v:
                return "{}"
            for key in v:
                if not isinstance(key, str):
                    raise InvalidParameterError(f"non-string key {key!r}")
            items = ",\n".join(
                f"{inner}{json.dumps(k)}: {emit(val, depth + 1)}"
                for k, val in v.items()
            )
            return "{\n" + items + "\n" + pad + "}"
        if isinstance(v, (list, tuple, np.ndarray)):
            seq = list(v)
            if not seq:
                return "[]"
            items = ",\n".join(f"{inner}{emit(val, depth + 1)}" for val in seq)
            return "[\n" + items + "\n" + pad + "]"
        raise InvalidParameterError(f"cannot serialize {type(v).__name__}")

    return emit(obj, 0)


def write_json(obj, path) -> None:
    """Write canonical JSON with a trailing newline."""
    with open(path, "w", newline="") as fh:
        fh.write(dumps_canonical(obj))
        fh.write("\n")


def write_table_csv(names, table: NDArray[np.float64], path) -> None:
    """One header row of column names, then one data row per sample (17 digits)."""
    np.savetxt(
        path,
        table,
        fmt=FLOAT_FMT,
        delimiter=",",
        header=",".join(names),
        comments="",
        newline="\n",
    )


def write_dataset_csv(dataset: Dataset, path) -> None:
    """Serialize a dataset: predictors in order, response as the last column."""
    table = np.column_stack([dataset.predictors, dataset.response])
    write_table_csv(dataset.column_names, table, path)


def read_table_csv(path) -> tuple[list[str], NDArray[np.float64]]:
    """Read a numeric CSV with one header row; returns (names, (n, k) array)."""
    with open(path, newline="") as fh:
        header = fh.readline().strip()
    if not header:
        raise InvalidParameterError(f"{path}: empty file")
    names = header.split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2, dtype=np.float64)
    if data.shape[1] != len(names):
        raise InvalidParameterError(
            f"{path}: {len(names)} header columns but {data.shape[1]} data columns"
        )
    return names, data


def dataset_from_table(
    names: list[str], data: NDArray[np.float64], response: str, predictors: list[str]
) -> Dataset:
    """Assemble a Dataset from named columns of a table."""
    index = {name: k for k, name in enumerate(names)}
    missing = [c for c in predictors + [response] if c not in index]
    if missing:
        raise InvalidParameterError(f"unknown columns: {', '.join(missing)}")
    x = np.column_stack([data[:, index[c]] for c in predictors])
    y = data[:, index[response]]
    return Dataset(x, y, tuple(predictors) + (response,))
