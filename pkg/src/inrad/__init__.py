"""inrad: anomaly detection via implicit neural representation error.

A small sine-activated network learns the map from encoded timestamps
to observed values; where the series refuses to be represented, the
residual is large, and that residual is the anomaly score.
"""

from .data import (
    AnomalySegment,
    DatasetBundle,
    ScalingStats,
    SynthSpec,
    TimeSeries,
    fit_scaling,
    generate_synthetic,
    load_dataset,
    load_entity,
    list_entities,
    scale,
    unscale,
)
from .encodings import (
    TemporalEncoderConfig,
    Timestamp,
    assign_synthetic_timestamps,
    format_timestamp,
    parse_timestamp,
    temporal_encode,
    temporal_encode_series,
    vanilla_encode,
    vanilla_star_encode,
)
from .errors import (
    ConfigError,
    EmptyInputError,
    FormatError,
    InputError,
    InradError,
    NumericError,
    ParseError,
    RangeError,
    SchemaError,
    ShapeError,
    SynthSpecError,
    TrainingError,
)
from .evaluation import (
    EvalResult,
    best_f1_search,
    label_segments,
    point_adjust,
    prf1,
    score_series,
    threshold_detect,
)
from .model import SirenConfig, SirenModel, forward, init_model, load_model, loss_and_grads, save_model
from .training import PipelineResult, TrainConfig, TrainReport, detect_pipeline, encode_for_mode, fit

__version__ = "0.1.0"

__all__ = [
    "AnomalySegment",
    "ConfigError",
    "DatasetBundle",
    "EmptyInputError",
    "EvalResult",
    "FormatError",
    "InputError",
    "InradError",
    "NumericError",
    "ParseError",
    "PipelineResult",
    "RangeError",
    "ScalingStats",
    "SchemaError",
    "ShapeError",
    "SirenConfig",
    "SirenModel",
    "SynthSpec",
    "SynthSpecError",
    "TemporalEncoderConfig",
    "TimeSeries",
    "Timestamp",
    "TrainConfig",
    "TrainReport",
    "TrainingError",
    "assign_synthetic_timestamps",
    "best_f1_search",
    "detect_pipeline",
    "encode_for_mode",
    "fit",
    "fit_scaling",
    "format_timestamp",
    "forward",
    "generate_synthetic",
    "init_model",
    "label_segments",
    "list_entities",
    "load_dataset",
    "load_entity",
    "load_model",
    "loss_and_grads",
    "parse_timestamp",
    "point_adjust",
    "prf1",
    "save_model",
    "scale",
    "score_series",
    "temporal_encode",
    "temporal_encode_series",
    "threshold_detect",
    "unscale",
    "vanilla_encode",
    "vanilla_star_encode",
]
