"""Channel information measures for discrete symmetric channels.

Shannon and Chernoff mutual information for binary and M-ary symmetric
channels, plus an alternating-conditional-expectations decomposition
that splits any such measure into one transformation per channel
parameter.  The experiments module ties the two together: simulate
parameter draws, evaluate the measures, decompose, and compare the
fitted transformations across measures.
"""
from ._kernels import BACKEND
from .ace import (
    AceConfig,
    AceResult,
    Dataset,
    TransformationCurve,
    ace_fit,
    conditional_expectation,
    maximal_correlation,
    read_curves_csv,
    write_curves_csv,
)
from .channels import (
    RNG_ALGORITHM,
    BscParams,
    DiscreteDistribution,
    JointDistribution,
    MscParams,
    bsc_joint,
    msc_joint,
    sample_bsc_params,
    sample_msc_params,
)
from .errors import (
    ChanInfoError,
    DegenerateInputError,
    EvaluationError,
    InvalidParameterError,
)
from .experiments import (
    PAPER_TARGETS,
    ComparisonReport,
    CurveComparison,
    ExperimentConfig,
    ExperimentReport,
    MeasureRun,
    build_dataset,
    compare_curve_sets,
    compare_decompositions,
    dumps_canonical,
    read_table_csv,
    report_dict,
    run_experiment,
    shape_checks,
    write_dataset_csv,
    write_json,
)
from .measures import (
    MeasureKind,
    MeasureValue,
    chernoff_information,
    chernoff_mi,
    entropy,
    evaluate_measure,
    kl_divergence,
    shannon_mi,
    shannon_paper_bsc,
    chernoff_paper_bsc,
)
from .scalar_opt import ScalarMinResult, minimize_scalar

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "RNG_ALGORITHM",
    "PAPER_TARGETS",
    "__version__",
    "AceConfig",
    "AceResult",
    "BscParams",
    "ChanInfoError",
    "ComparisonReport",
    "CurveComparison",
    "Dataset",
    "DegenerateInputError",
    "DiscreteDistribution",
    "EvaluationError",
    "ExperimentConfig",
    "ExperimentReport",
    "InvalidParameterError",
    "JointDistribution",
    "MeasureKind",
    "MeasureRun",
    "MeasureValue",
    "MscParams",
    "ScalarMinResult",
    "TransformationCurve",
    "ace_fit",
    "bsc_joint",
    "build_dataset",
    "chernoff_information",
    "chernoff_mi",
    "chernoff_paper_bsc",
    "compare_curve_sets",
    "compare_decompositions",
    "conditional_expectation",
    "dumps_canonical",
    "entropy",
    "evaluate_measure",
    "kl_divergence",
    "maximal_correlation",
    "minimize_scalar",
    "msc_joint",
    "read_curves_csv",
    "read_table_csv",
    "report_dict",
    "run_experiment",
    "sample_bsc_params",
    "sample_msc_params",
    "shannon_mi",
    "shannon_paper_bsc",
    "shape_checks",
    "write_curves_csv",
    "write_dataset_csv",
    "write_json",
]
