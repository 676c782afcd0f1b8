from .config import OBJECTIVE_WEIGHTS, ConfigError, TrainConfig, load_config, write_config
from .data import Dataset, IngestError, ingest
from .metrics import CSV_HEADER, MetricsReport, append_metrics_row, evaluate_graphs, generate_graphs
from .training import PROPERTIES, Trainer, TrainingDiverged, agent_targets

__all__ = [
    "CSV_HEADER",
    "ConfigError",
    "Dataset",
    "IngestError",
    "MetricsReport",
    "OBJECTIVE_WEIGHTS",
    "PROPERTIES",
    "TrainConfig",
    "Trainer",
    "TrainingDiverged",
    "agent_targets",
    "append_metrics_row",
    "evaluate_graphs",
    "generate_graphs",
    "ingest",
    "load_config",
    "write_config",
]
