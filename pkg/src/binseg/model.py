"""Energy of the bias-corrected binary level set model and its exact
coordinate minimizers for the region constants and the bias field.

The energy, summed over pixels with unit spacing, is::

    E = lam1 * sum (I - b c1)^2 (1 + phi)^2
      + lam2 * sum (I - b c2)^2 (1 - phi)^2
      + mu   * sum |grad phi|^2
      + nu   * sum (phi^2 - 1)^2

with ``grad`` the periodic forward difference.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import DegenerateBiasError, DimensionMismatchError, EmptyRegionError
from .image_core import freeze


@dataclass(frozen=True)
class ModelParams:
    lambda1: float = 1.0
    lambda2: float = 1.0
    mu: float = 1.0
    nu: float = 1.0
    tau1: float = 1000.0
    tau2: float = 4.0
    max_iters: int = 200
    tol: float = 0.0
    bias_smooth_sigma: float = 4.0
    bias_fixed: bool = False
    epsilon_div: float = 1e-8

    def __post_init__(self):
        for name in ("lambda1", "lambda2", "tau1", "tau2", "epsilon_div"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        for name in ("mu", "nu", "tol", "bias_smooth_sigma"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError(f"max_iters must be a positive integer, got {self.max_iters}")


@dataclass(frozen=True)
class EnergyBreakdown:
    data1: float
    data2: float
    reg: float
    penalty: float
    total: float


@dataclass
class SolverState:
    phi: np.ndarray
    c1: float
    c2: float
    bias: np.ndarray
    iter: int = 0
    energy_trace: list[EnergyBreakdown] = field(default_factory=list)
    converged: bool = False


def check_shapes(*fields) -> None:
    shapes = {np.shape(f) for f in fields}
    if len(shapes) > 1:
        raise DimensionMismatchError(f"grid dimensions disagree: {sorted(shapes)}")


def grad_sq(phi: np.ndarray) -> np.ndarray:
    """Pointwise |grad phi|^2 using periodic forward differences."""
    dx = np.roll(phi, -1, axis=1) - phi
    dy = np.roll(phi, -1, axis=0) - phi
    return dx * dx + dy * dy


def energy_terms(image, phi, bias, c1, c2, params: ModelParams) -> EnergyBreakdown:
    check_shapes(image, phi, bias)
    inside = (1.0 + phi) ** 2
    outside = (1.0 - phi) ** 2
    data1 = params.lambda1 * float(np.sum((image - bias * c1) ** 2 * inside))
    data2 = params.lambda2 * float(np.sum((image - bias * c2) ** 2 * outside))
    reg = params.mu * float(np.sum(grad_sq(phi)))
    penalty = params.nu * float(np.sum((phi * phi - 1.0) ** 2))
    return EnergyBreakdown(data1, data2, reg, penalty, data1 + data2 + reg + penalty)


def energy(image, state: SolverState, params: ModelParams) -> EnergyBreakdown:
    return energy_terms(image, state.phi, state.bias, state.c1, state.c2, params)


def _region_constant(image, weight, bias, params, region):
    num = float(np.sum(image * bias * weight))
    den = float(np.sum(bias * bias * weight))
    if den < params.epsilon_div:
        raise EmptyRegionError(f"empty {region} region")
    return num / den


def update_c1(image, phi, bias, params: ModelParams) -> float:
    """Least-squares constant inside the contour, sum(I b w) / sum(b^2 w), w = (1+phi)^2."""
    check_shapes(image, phi, bias)
    return _region_constant(image, (1.0 + phi) ** 2, bias, params, "inside")


def update_c2(image, phi, bias, params: ModelParams) -> float:
    check_shapes(image, phi, bias)
    return _region_constant(image, (1.0 - phi) ** 2, bias, params, "outside")


def update_bias(image, phi, c1: float, c2: float, params: ModelParams) -> np.ndarray:
    """Pointwise minimizer of the data terms in ``b``, optionally Gaussian-smoothed.

    Each pixel solves its own quadratic, so the unsmoothed result is the exact
    minimizer of the energy over free fields ``b``.  Smoothing uses periodic
    boundaries; the result is floored at ``epsilon_div``.
    """
    check_shapes(image, phi)
    if c1 == 0.0 and c2 == 0.0:
        raise DegenerateBiasError("c1 = c2 = 0: bias denominator vanishes everywhere")
    w1 = params.lambda1 * (1.0 + phi) ** 2
    w2 = params.lambda2 * (1.0 - phi) ** 2
    num = image * (w1 * c1 + w2 * c2)
    den = np.maximum(w1 * c1 * c1 + w2 * c2 * c2, params.epsilon_div)
    b = num / den
    if params.bias_smooth_sigma > 0:
        b = ndimage.gaussian_filter(b, params.bias_smooth_sigma, mode="wrap")
    return freeze(np.maximum(b, params.epsilon_div))
