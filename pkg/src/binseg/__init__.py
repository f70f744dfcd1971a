"""Two-phase segmentation of inhomogeneous, noisy grayscale images with a
binary level set, multiplicative bias correction and a three-step splitting
solver."""

from .image_core import load_image, load_mask, normalize, save_field, save_mask
from .metrics import ConfusionCounts, confusion, dice, jaccard, js
from .model import EnergyBreakdown, ModelParams, SolverState, energy
from .phantom import PhantomSpec, generate
from .solver import solve

__all__ = [
    "ConfusionCounts",
    "EnergyBreakdown",
    "ModelParams",
    "PhantomSpec",
    "SolverState",
    "confusion",
    "dice",
    "energy",
    "generate",
    "jaccard",
    "js",
    "load_image",
    "load_mask",
    "normalize",
    "save_field",
    "save_mask",
    "solve",
]
