"""WGAN augmentation of imbalanced tabular data under constrained generator/critic structures."""

from .arch import ArchSpec, Constraint, build, validate
from .base import NoResampling
from .data import Dataset, load_dataset, registry
from .exceptions import DataError, IsowganError, NumericFault, RejectedInputError
from .gan import GANAugmenter, GanModel, LossTrace, TrainConfig, WGANAugmenter, sample, train
from .smote import SMOTE

__version__ = "0.1.0"

__all__ = ["ArchSpec", "Constraint", "build", "validate", "NoResampling", "Dataset", "load_dataset", "registry",
           "DataError", "IsowganError", "NumericFault", "RejectedInputError", "GANAugmenter", "GanModel",
           "LossTrace", "TrainConfig", "WGANAugmenter", "sample", "train", "SMOTE"]
