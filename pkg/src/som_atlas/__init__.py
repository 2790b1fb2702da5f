"""som-atlas: self-organizing maps for multidimensional sensor logs.

Train hexagonal Kohonen maps on numeric logs, classify and cluster the data,
detect correlated attributes through component-plane comparison, and render
per-attribute heatmaps. Training runs on a compiled kernel when available and
on a bit-identical numpy fallback otherwise (``som_atlas.kernels.BACKEND``).
"""

from .analysis import (
    AttributeRange,
    AttributeStats,
    BmuAssignment,
    ClusterModel,
    ComponentPlane,
    CorrelationReport,
    ForwardPrediction,
    classify,
    cluster_stats,
    component_plane,
    kmeans_codebook,
    plane_correlation,
    predict_forward,
    predict_reverse,
)
from .errors import CsvFormatError, ModelFormatError, SchemaMismatchError, SomAtlasError
from .hexgrid import HexGrid
from .ingest import (
    AttributeSpec,
    DataTable,
    NormalizedTable,
    append_time_counter,
    denormalize,
    normalize,
    parse_csv,
)
from .model_io import dumps_model, load_model, loads_model, save_model
from .pulse import PulseCurve, PulseFeatures, curve_from_table, extract_pulse_features
from .render import colormap, render_cluster_map, render_plane
from .som import (
    SomModel,
    TrainingSchedule,
    find_bmu,
    init_codebook,
    learning_rate,
    neighborhood,
    quantization_error,
    train,
    update_step,
)

__version__ = "0.1.0"

__all__ = [
    "AttributeRange",
    "AttributeSpec",
    "AttributeStats",
    "BmuAssignment",
    "ClusterModel",
    "ComponentPlane",
    "CorrelationReport",
    "CsvFormatError",
    "DataTable",
    "ForwardPrediction",
    "HexGrid",
    "ModelFormatError",
    "NormalizedTable",
    "PulseCurve",
    "PulseFeatures",
    "SchemaMismatchError",
    "SomAtlasError",
    "SomModel",
    "TrainingSchedule",
    "append_time_counter",
    "classify",
    "cluster_stats",
    "colormap",
    "component_plane",
    "curve_from_table",
    "denormalize",
    "dumps_model",
    "extract_pulse_features",
    "find_bmu",
    "init_codebook",
    "kmeans_codebook",
    "learning_rate",
    "load_model",
    "loads_model",
    "neighborhood",
    "normalize",
    "parse_csv",
    "plane_correlation",
    "predict_forward",
    "predict_reverse",
    "quantization_error",
    "render_cluster_map",
    "render_plane",
    "save_model",
    "train",
    "update_step",
]
