"""Three-step splitting update of the level set and the outer sweep loop."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, EmptyRegionError
from .image_core import freeze
from .model import (
    ModelParams,
    SolverState,
    check_shapes,
    energy,
    update_bias,
    update_c1,
    update_c2,
)

log = logging.getLogger(__name__)

INITS = ("disk", "rectangle", "threshold")


@dataclass(frozen=True)
class DataCoefficients:
    A: np.ndarray
    B: np.ndarray


@dataclass(frozen=True)
class SpectralPlan:
    width: int
    height: int
    laplacian_symbol: np.ndarray


def make_plan(width: int, height: int) -> SpectralPlan:
    """Eigenvalues of the periodic five-point Laplacian, laid out like ``fft2`` output."""
    kx = 2.0 * np.cos(2.0 * np.pi * np.arange(width) / width)
    ky = 2.0 * np.cos(2.0 * np.pi * np.arange(height) / height)
    symbol = ky[:, None] + kx[None, :] - 4.0
    symbol[0, 0] = 0.0
    return SpectralPlan(width, height, freeze(symbol))


def compute_coefficients(image, bias, c1, c2, params: ModelParams) -> DataCoefficients:
    check_shapes(image, bias)
    A = params.lambda1 * (image - bias * c1) ** 2
    B = params.lambda2 * (image - bias * c2) ** 2
    return DataCoefficients(freeze(A), freeze(B))


def step1_data(phi, coeffs: DataCoefficients, tau1: float) -> np.ndarray:
    """Backward-Euler step of d(phi)/dt = -A (1 + phi) + B (1 - phi)."""
    check_shapes(phi, coeffs.A, coeffs.B)
    A, B = coeffs.A, coeffs.B
    return freeze((phi - tau1 * (A - B)) / (1.0 + tau1 * (A + B)))


def step2_diffuse(phi, plan: SpectralPlan, mu: float, tau2: float) -> np.ndarray:
    """Solve (Id - mu tau2 Laplacian) phi' = phi exactly on the periodic grid."""
    if np.shape(phi) != plan.laplacian_symbol.shape:
        raise DimensionMismatchError(
            f"plan is {plan.height}x{plan.width}, field is {np.shape(phi)}"
        )
    if mu == 0.0:
        return freeze(np.array(phi, dtype=np.float64))
    spectrum = np.fft.fft2(phi) / (1.0 - mu * tau2 * plan.laplacian_symbol)
    return freeze(np.fft.ifft2(spectrum).real)


def step3_project(phi) -> np.ndarray:
    """Sign projection onto {-1, +1}; zero goes to +1."""
    return freeze(np.where(np.asarray(phi) >= 0.0, 1.0, -1.0))


def initialize_phi(width: int, height: int, init: str, image=None) -> np.ndarray:
    """Binary starting contour.

    ``disk``: radius ``min(W, H) / 4`` about the grid centre; ``rectangle``:
    the centred block of half the width and height; ``threshold``: +1 where
    the image is at least its mean.
    """
    y, x = np.mgrid[0:height, 0:width]
    if init == "disk":
        cx, cy, r = (width - 1) / 2.0, (height - 1) / 2.0, min(width, height) / 4.0
        inside = (x - cx) ** 2 + (y - cy) ** 2 <= r * r
    elif init == "rectangle":
        hw, hh = width // 2, height // 2
        x0, y0 = (width - hw) // 2, (height - hh) // 2
        inside = (x >= x0) & (x < x0 + hw) & (y >= y0) & (y < y0 + hh)
    elif init == "threshold":
        if image is None:
            raise ValueError("threshold initialization needs the image")
        image = np.asarray(image, dtype=np.float64)
        if image.shape != (height, width):
            raise DimensionMismatchError(f"image is {image.shape}, expected {(height, width)}")
        # summation rounding can push the mean of a constant image above its value
        inside = image >= min(image.mean(), image.max())
    else:
        raise ValueError(f"unknown init {init!r}; choose from {INITS}")
    return freeze(np.where(inside, 1.0, -1.0))


def _try(update, previous, *args):
    try:
        return update(*args)
    except EmptyRegionError as exc:
        log.debug("%s; keeping %g", exc, previous)
        return previous


def solve(image, params: ModelParams | None = None, init: str = "threshold", phi0=None) -> SolverState:
    """Alternate c1, c2, b and the split level-set step until the mask settles.

    A sweep updates c1, c2, then b (skipped when ``bias_fixed``), then applies
    the data step, the spectral diffusion step and the sign projection.  The
    loop stops once the fraction of pixels that changed sign is at most
    ``params.tol``, or after ``params.max_iters`` sweeps.  ``phi0`` overrides
    the named initializer.
    """
    params = params or ModelParams()
    image = np.asarray(image, dtype=np.float64)
    height, width = image.shape
    phi = initialize_phi(width, height, init, image) if phi0 is None else step3_project(phi0)
    check_shapes(image, phi)
    bias = freeze(np.ones_like(image))
    plan = make_plan(width, height)

    fallback = float(image.mean())
    c1 = _try(update_c1, fallback, image, phi, bias, params)
    c2 = _try(update_c2, fallback, image, phi, bias, params)
    state = SolverState(phi=phi, c1=c1, c2=c2, bias=bias)
    state.energy_trace.append(energy(image, state, params))

    for _ in range(params.max_iters):
        c1 = _try(update_c1, state.c1, image, state.phi, state.bias, params)
        c2 = _try(update_c2, state.c2, image, state.phi, state.bias, params)
        if not params.bias_fixed:
            bias = update_bias(image, state.phi, c1, c2, params)
        coeffs = compute_coefficients(image, bias, c1, c2, params)
        trial = step1_data(state.phi, coeffs, params.tau1)
        trial = step2_diffuse(trial, plan, params.mu, params.tau2)
        phi = step3_project(trial)

        flipped = np.count_nonzero(phi != state.phi) / phi.size
        state = SolverState(
            phi=phi, c1=c1, c2=c2, bias=bias,
            iter=state.iter + 1, energy_trace=state.energy_trace,
        )
        state.energy_trace.append(energy(image, state, params))
        log.debug("sweep %d: c1=%.6g c2=%.6g flipped=%.3g", state.iter, c1, c2, flipped)
        if flipped <= params.tol:
            state.converged = True
            break
    return state
