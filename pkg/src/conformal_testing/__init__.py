"""Online hypothesis testing with test martingales over reduced information:
conformal p-values from online compression models, Gaussian pivotal
normalizers, Bayes-Kelly betting, benchmark evidence processes, and the
Bernoulli changepoint experiment harness.
"""

from .core import (
    BinarySequence,
    CalibrationReport,
    EvidencePath,
    RandomizationStream,
    RealSequence,
    ThetaGrid,
    elementwise_combine,
    verify_evariable,
)
from .compression import (
    EMPTY_EXCH_SUMMARY,
    EMPTY_GAUSS_SUMMARY,
    ExchangeabilitySummary,
    GaussianVar1Summary,
    conformal_p_sequence,
    exch_forward,
    exch_p_value,
    gauss_var1_p_value,
)
from .pivotal import (
    PivotalNormalizer,
    nondomination_ratio,
    normalize,
    pivotal_example_path,
)
from .bk import (
    BettingDensity,
    ChangepointAlternative,
    CountPosterior,
    DEFAULT_ALTERNATIVE,
    bk_final_batch,
    bk_run,
    bk_update,
    mean_bk_final,
    predictive_density,
)
from .benchmarks import (
    BenchmarkTriple,
    FinalValueFunction,
    batch_benchmark,
    benchmark_triple,
    elementwise_natural_final,
    lower_benchmark,
    naturalize_finite_horizon,
    upper_benchmark,
)
from .harness import (
    ExperimentConfig,
    ProcessStats,
    ReplicationRecord,
    SummaryStats,
    generate_dataset,
    records_from_csv,
    records_to_csv,
    run_experiment,
    summarize,
)

__version__ = "0.1.0"

__all__ = [
    "BinarySequence",
    "RealSequence",
    "EvidencePath",
    "RandomizationStream",
    "ThetaGrid",
    "CalibrationReport",
    "elementwise_combine",
    "verify_evariable",
    "ExchangeabilitySummary",
    "GaussianVar1Summary",
    "EMPTY_EXCH_SUMMARY",
    "EMPTY_GAUSS_SUMMARY",
    "exch_forward",
    "exch_p_value",
    "gauss_var1_p_value",
    "conformal_p_sequence",
    "PivotalNormalizer",
    "normalize",
    "pivotal_example_path",
    "nondomination_ratio",
    "ChangepointAlternative",
    "DEFAULT_ALTERNATIVE",
    "CountPosterior",
    "BettingDensity",
    "predictive_density",
    "bk_update",
    "bk_run",
    "bk_final_batch",
    "mean_bk_final",
    "BenchmarkTriple",
    "FinalValueFunction",
    "lower_benchmark",
    "upper_benchmark",
    "batch_benchmark",
    "benchmark_triple",
    "naturalize_finite_horizon",
    "elementwise_natural_final",
    "ExperimentConfig",
    "ReplicationRecord",
    "ProcessStats",
    "SummaryStats",
    "generate_dataset",
    "run_experiment",
    "summarize",
    "records_to_csv",
    "records_from_csv",
]
