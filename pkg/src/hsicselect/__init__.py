"""Kernel dependence feature selection toolkit.

Ranks the features of a supervised dataset by backward elimination or
forward selection driven by an unbiased kernel dependence estimate, with
significance testing, baseline rankers (Pearson correlation, mutual
information), synthetic benchmark datasets, and a median-rank benchmark
harness. See the README for the CLI and the acceptance test suite.
"""

__version__ = "0.1.0"

from ._backend import backend_name, using_compiled_core
from .baselines import ScoreVector, mutual_info_rank, pearson_rank
from .benchmark import BenchmarkCell, BenchmarkReport, run_benchmark
from .data import (
    Dataset,
    LabelType,
    load_csv,
    save_csv,
    synth_multiclass,
    synth_regression,
    synth_xor,
    zscore_normalize,
)
from .errors import (
    ConventionError,
    DegenerateLabelsError,
    HsicSelectError,
    ParameterError,
    SampleSizeError,
    ShapeError,
)
from .estimator import (
    EstimatorMethod,
    HsicEstimate,
    SignificanceMode,
    SignificanceResult,
    asymptotic_p_value,
    hsic_biased,
    hsic_unbiased,
    hsic_ustat_oracle,
    hsic_variance,
    kta_unnormalized,
    mmd_statistic,
    permutation_test,
    with_variance,
)
from .kernels import (
    FULL_DIAGONAL,
    ZERO_DIAGONAL,
    DiagonalConvention,
    DistanceDecomposition,
    KernelMatrix,
    LabelKernelSpec,
    LabelKernelVariant,
    binary_label_matrix,
    gaussian_kernel_matrix,
    linear_kernel_matrix,
    median_heuristic,
    multiclass_label_matrix,
    regression_label_matrix,
    remove_feature,
)
from .selection import (
    FeatureRanking,
    SelectionConfig,
    SelectionRound,
    bahsic,
    candidate_scores,
    fohsic,
    rank_features,
    resolve_label_kernel,
    select_top,
    sigma_policy,
)

__all__ = [
    "__version__",
    "backend_name",
    "using_compiled_core",
    "ScoreVector",
    "mutual_info_rank",
    "pearson_rank",
    "BenchmarkCell",
    "BenchmarkReport",
    "run_benchmark",
    "Dataset",
    "LabelType",
    "load_csv",
    "save_csv",
    "synth_multiclass",
    "synth_regression",
    "synth_xor",
    "zscore_normalize",
    "ConventionError",
    "DegenerateLabelsError",
    "HsicSelectError",
    "ParameterError",
    "SampleSizeError",
    "ShapeError",
    "EstimatorMethod",
    "HsicEstimate",
    "SignificanceMode",
    "SignificanceResult",
    "asymptotic_p_value",
    "hsic_biased",
    "hsic_unbiased",
    "hsic_ustat_oracle",
    "hsic_variance",
    "kta_unnormalized",
    "mmd_statistic",
    "permutation_test",
    "with_variance",
    "FULL_DIAGONAL",
    "ZERO_DIAGONAL",
    "DiagonalConvention",
    "DistanceDecomposition",
    "KernelMatrix",
    "LabelKernelSpec",
    "LabelKernelVariant",
    "binary_label_matrix",
    "gaussian_kernel_matrix",
    "linear_kernel_matrix",
    "median_heuristic",
    "multiclass_label_matrix",
    "regression_label_matrix",
    "remove_feature",
    "FeatureRanking",
    "SelectionConfig",
    "SelectionRound",
    "bahsic",
    "candidate_scores",
    "fohsic",
    "rank_features",
    "resolve_label_kernel",
    "select_top",
    "sigma_policy",
]
