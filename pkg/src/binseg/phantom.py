"""Synthetic two-phase images with a known mask and multiplicative bias."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import prng
from .errors import InvalidPhantomError
from .image_core import freeze

SHAPES = ("disk", "rectangle", "two-disks")
BIAS_KINDS = ("none", "linear-ramp", "cosine-bump")
NOISE_KINDS = ("none", "gaussian", "salt-pepper")

# noise streams drawn from one seed
_GAUSS_STREAM = 1
_FLIP_STREAM = 2
_SALT_STREAM = 3


@dataclass(frozen=True)
class PhantomSpec:
    width: int = 128
    height: int = 128
    shape: str = "disk"
    c_in: float = 0.6
    c_out: float = 0.4
    bias_amplitude: float = 0.0
    bias_kind: str = "none"
    noise_kind: str = "none"
    noise_level: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise InvalidPhantomError(f"dimensions must be >= 1, got {self.width}x{self.height}")
        if self.shape not in SHAPES:
            raise InvalidPhantomError(f"unknown shape {self.shape!r}; choose from {SHAPES}")
        if self.bias_kind not in BIAS_KINDS:
            raise InvalidPhantomError(f"unknown bias kind {self.bias_kind!r}")
        if self.noise_kind not in NOISE_KINDS:
            raise InvalidPhantomError(f"unknown noise kind {self.noise_kind!r}")
        if not 0.0 < self.c_in <= 1.0:
            raise InvalidPhantomError(f"c_in must lie in (0, 1], got {self.c_in}")
        if not 0.0 <= self.c_out < 1.0:
            raise InvalidPhantomError(f"c_out must lie in [0, 1), got {self.c_out}")
        if self.c_in == self.c_out:
            raise InvalidPhantomError("unsegmentable phantom: c_in equals c_out")
        # both bias kinds stay strictly positive only while the amplitude is below 1
        if not 0.0 <= self.bias_amplitude < 1.0:
            raise InvalidPhantomError(
                f"bias_amplitude must lie in [0, 1), got {self.bias_amplitude}"
            )
        if self.noise_level < 0.0:
            raise InvalidPhantomError(f"noise_level must be >= 0, got {self.noise_level}")
        if self.noise_kind == "salt-pepper" and self.noise_level > 1.0:
            raise InvalidPhantomError("salt-pepper noise_level is a fraction in [0, 1]")


def _coords(width: int, height: int):
    y, x = np.mgrid[0:height, 0:width]
    return x.astype(np.float64), y.astype(np.float64)


def shape_mask(spec: PhantomSpec) -> np.ndarray:
    """Boolean inside-region of the phantom geometry.

    The disk is deliberately off-centre and larger than the solver's default
    initial disk, so a run has to move the contour to reach the truth.
    """
    w, h = spec.width, spec.height
    x, y = _coords(w, h)
    m = min(w, h)
    if spec.shape == "disk":
        cx, cy, r = 0.55 * (w - 1), 0.45 * (h - 1), 0.3 * m
        return (x - cx) ** 2 + (y - cy) ** 2 <= r * r
    if spec.shape == "rectangle":
        return (np.abs(x - 0.5 * (w - 1)) <= 0.3 * w) & (np.abs(y - 0.5 * (h - 1)) <= 0.2 * h)
    r = m / 6.0
    left = (x - (w - 1) / 3.0) ** 2 + (y - 0.5 * (h - 1)) ** 2 <= r * r
    right = (x - 2.0 * (w - 1) / 3.0) ** 2 + (y - 0.5 * (h - 1)) ** 2 <= r * r
    return left | right


def bias_field(spec: PhantomSpec) -> np.ndarray:
    """Smooth positive field with unit mean over the grid."""
    w, h = spec.width, spec.height
    beta = spec.bias_amplitude
    x, y = _coords(w, h)
    if spec.bias_kind == "none":
        return np.ones((h, w))
    if spec.bias_kind == "linear-ramp":
        ramp = 2.0 * x / (w - 1) - 1.0 if w > 1 else np.zeros_like(x)
        b = 1.0 + beta * ramp
    else:
        b = 1.0 + beta * np.cos(np.pi * x / w) * np.cos(np.pi * y / h)
    return b / b.mean()


def generate(spec: PhantomSpec):
    """Build ``(image, truth_mask, true_bias)`` for ``spec``.

    ``image = clip(true_bias * c + noise, 0, 1)`` with ``c`` equal to ``c_in``
    inside the shape and ``c_out`` outside; ``truth_mask`` is +1 inside and
    -1 outside.  Output depends only on ``spec`` (seed included).
    """
    inside = shape_mask(spec)
    n_in = int(inside.sum())
    if n_in == 0 or n_in == inside.size:
        region = "inside" if n_in == 0 else "outside"
        raise InvalidPhantomError(
            f"degenerate {spec.shape} on {spec.width}x{spec.height}: empty {region} region"
        )
    bias = bias_field(spec)
    c = np.where(inside, spec.c_in, spec.c_out)
    image = bias * c
    n = image.size
    if spec.noise_kind == "gaussian" and spec.noise_level > 0:
        image = image + spec.noise_level * prng.normal(spec.seed, n, _GAUSS_STREAM).reshape(image.shape)
    elif spec.noise_kind == "salt-pepper" and spec.noise_level > 0:
        flip = prng.uniform(spec.seed, n, _FLIP_STREAM).reshape(image.shape) < spec.noise_level
        salt = prng.uniform(spec.seed, n, _SALT_STREAM).reshape(image.shape) < 0.5
        image = np.where(flip, np.where(salt, 1.0, 0.0), image)
    image = np.clip(image, 0.0, 1.0)
    truth = np.where(inside, 1.0, -1.0)
    return freeze(image), freeze(truth), freeze(bias)
