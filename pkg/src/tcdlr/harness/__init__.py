"""Experiment plumbing: synthetic data, metrics, file formats, sweeps and timing."""

from .io import FormatError, load_mask, load_tensor, save_mask, save_tensor
from .metrics import Metrics, psnr, relerr
from .synthetic import SynthSpec, gen_synthetic, sample_uniform

__all__ = [
    "FormatError",
    "Metrics",
    "SynthSpec",
    "gen_synthetic",
    "load_mask",
    "load_tensor",
    "psnr",
    "relerr",
    "sample_uniform",
    "save_mask",
    "save_tensor",
]
