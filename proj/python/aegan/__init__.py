"""Autoencoding GAN: training, checkpoints and evaluation on 2D mixtures and image folders."""

from ._aegan import (
    Config,
    ConfigError,
    DataError,
    Model,
    NumericalError,
    ShapeError,
    UsageError,
    dataset,
    gan_loss,
    initialize,
    linear_path,
    mode_coverage,
    reconstruction_loss,
    resume,
    train,
)

__all__ = [
    "Config",
    "ConfigError",
    "DataError",
    "Model",
    "NumericalError",
    "ShapeError",
    "UsageError",
    "dataset",
    "gan_loss",
    "initialize",
    "linear_path",
    "mode_coverage",
    "reconstruction_loss",
    "resume",
    "train",
]
