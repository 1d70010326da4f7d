from .loss import LOSS_TERMS, LossResult, compute_loss, relative_l2
from .optimizer import adam_step
from .sampling import (
    Box,
    SampleSet,
    TargetSet,
    add_noise,
    build_samples,
    noise_sigma,
    resample_residual,
    rng_stream,
    sample_faces,
    sample_uniform,
)
from .trainer import HISTORY_COLUMNS, TrainResult, evaluate, train
from .types import AdamState, LossWeights, SampleCounts, TrainSchedule

__all__ = [
    "AdamState",
    "Box",
    "HISTORY_COLUMNS",
    "LOSS_TERMS",
    "LossResult",
    "LossWeights",
    "SampleCounts",
    "SampleSet",
    "TargetSet",
    "TrainResult",
    "TrainSchedule",
    "adam_step",
    "add_noise",
    "build_samples",
    "compute_loss",
    "evaluate",
    "noise_sigma",
    "relative_l2",
    "resample_residual",
    "rng_stream",
    "sample_faces",
    "sample_uniform",
    "train",
]
