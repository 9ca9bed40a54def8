"""Neural companion to idiomtk: trains a toy transformer classifier on
exported sequence files and writes predictions the evaluator can score."""

from .errors import DataError, NeuralshimError, UsageError
from .model import TrainConfig, fine_tune, load_artifact, predict
from .sequences import SequenceRow, read_sequences, write_predictions

__all__ = [
    "DataError",
    "NeuralshimError",
    "SequenceRow",
    "TrainConfig",
    "UsageError",
    "fine_tune",
    "load_artifact",
    "predict",
    "read_sequences",
    "write_predictions",
]
