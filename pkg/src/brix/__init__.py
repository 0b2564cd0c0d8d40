"""brix: a blockchain readiness index engine.

Scores countries described by partially missing indicator vectors:
missing indicators are imputed from the most similar fully observed
countries, each country is scored by coverage-weighted cosine similarity
to an ideal reference country, and the resulting features are evaluated
with a supervised classification harness.
"""
from .core import (
    CoverageWeight,
    ImputationConfig,
    ImputationWarning,
    ImputedCountry,
    IndicatorVector,
    LinearWeighting,
    NoDonorsError,
    ScoredCountry,
    SigmoidWeighting,
    WeightingScheme,
    complete_pool,
    cosine_similarity,
    coverage,
    euclidean_similarity,
    ideal_country,
    impute,
    rank,
    score,
    select_donors,
    weight,
    zero_fill,
)
from .classifiers import (
    BinarySMO,
    DegenerateTrainingError,
    GaussianNB,
    SMOConfig,
    SVMClassifier,
)
from .evaluate import (
    LABEL_ORDER,
    EvalReport,
    LabeledPoint,
    SweepTable,
    baseline1_accuracy,
    baseline2_featurize,
    cross_validate,
    featurize,
    granularity_labels,
    sweep,
)
from .ingest import (
    IndicatorDef,
    ParseError,
    RawDataset,
    default_schema,
    normalize,
    parse_data,
    parse_labels,
    parse_schema,
)
from .synth import SynthConfig, generate

__version__ = "0.1.0"

__all__ = [
    "BinarySMO",
    "CoverageWeight",
    "DegenerateTrainingError",
    "EvalReport",
    "GaussianNB",
    "ImputationConfig",
    "ImputationWarning",
    "ImputedCountry",
    "IndicatorDef",
    "IndicatorVector",
    "LABEL_ORDER",
    "LabeledPoint",
    "LinearWeighting",
    "NoDonorsError",
    "ParseError",
    "RawDataset",
    "SMOConfig",
    "SVMClassifier",
    "ScoredCountry",
    "SigmoidWeighting",
    "SweepTable",
    "SynthConfig",
    "WeightingScheme",
    "baseline1_accuracy",
    "baseline2_featurize",
    "complete_pool",
    "cosine_similarity",
    "coverage",
    "cross_validate",
    "default_schema",
    "euclidean_similarity",
    "featurize",
    "generate",
    "granularity_labels",
    "ideal_country",
    "impute",
    "normalize",
    "parse_data",
    "parse_labels",
    "parse_schema",
    "rank",
    "score",
    "select_donors",
    "sweep",
    "weight",
    "zero_fill",
    "__version__",
]
