"""Ten seeded image degradations on a ten-step severity ladder.

Severity is linear: the parameter at level k is k/10 of the level-10
maximum (blur sigma 10 px, average window 20 px, motion kernel 25 px,
additive noise sigma 150, speckle sigma 1.0, salt-and-pepper probability
0.3, brightness shift 220, single-occlusion side 150 px), rounded half
away from zero where the parameter is integral. Multiple occlusions place
level**2 squares of 15 px so their nominal footprint matches the single
occlusion at the same level.

Stochastic kinds draw from numpy's PCG64 generator seeded with the 64-bit
spec seed, so (kind, level, seed, image) fully determines the output bit
for bit. Convolutions are reflect-padded; on images too small for one
reflection the kernel footprint is clipped instead of raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .image import validate_image

MIN_LEVEL = 1
MAX_LEVEL = 10

# Side of each small square painted by multiple_occlusions, in pixels.
OCCLUSION_TILE = 15


class CorruptionKind(Enum):
    """Closed set of supported degradations."""

    GAUSSIAN_BLUR = "gaussian_blur"
    AVERAGE_BLUR = "average_blur"
    MOTION_BLUR = "motion_blur"
    GAUSSIAN_NOISE = "gaussian_noise"
    SPECKLE_NOISE = "speckle_noise"
    SALT_PEPPER_NOISE = "salt_pepper_noise"
    DARKEN = "darken"
    BRIGHTEN = "brighten"
    SINGLE_OCCLUSION = "single_occlusion"
    MULTIPLE_OCCLUSIONS = "multiple_occlusions"

    @classmethod
    def parse(cls, name: str) -> "CorruptionKind":
        """Parse a kind name; any name outside the closed set is an error."""
        try:
            return cls(name)
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ValueError(
                f"unknown corruption kind {name!r}; expected one of: {valid}"
            ) from None


@dataclass(frozen=True)
class CorruptionSpec:
    """One fully determined corruption instance: kind, severity level, seed."""

    kind: CorruptionKind
    level: int
    seed: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.kind, CorruptionKind):
            object.__setattr__(self, "kind", CorruptionKind.parse(self.kind))
        if not MIN_LEVEL <= self.level <= MAX_LEVEL:
            raise ValueError(
                f"severity level must be in [{MIN_LEVEL}, {MAX_LEVEL}], got {self.level}"
            )
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


def _round_half_away(x: float) -> int:
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def magnitude(kind: CorruptionKind, level: int) -> float | int:
    """Severity-ladder parameter for ``kind`` at ``level``.

    For occlusions the returned value is the square side (single) or the
    square count (multiple); for darken the shift is negative.
    """
    if not MIN_LEVEL <= level <= MAX_LEVEL:
        raise ValueError(f"severity level must be in [{MIN_LEVEL}, {MAX_LEVEL}], got {level}")
    if kind is CorruptionKind.GAUSSIAN_BLUR:
        return float(level)  # sigma, max 10 px
    if kind is CorruptionKind.AVERAGE_BLUR:
        return 2 * level  # window, max 20 px
    if kind is CorruptionKind.MOTION_BLUR:
        return max(1, _round_half_away(2.5 * level))  # kernel length, max 25 px
    if kind is CorruptionKind.GAUSSIAN_NOISE:
        return 15.0 * level  # sigma, max 150
    if kind is CorruptionKind.SPECKLE_NOISE:
        return level / 10  # sigma, max 1.0
    if kind is CorruptionKind.SALT_PEPPER_NOISE:
        return 3 * level / 100  # probability, max 0.3
    if kind is CorruptionKind.DARKEN:
        return -22 * level  # shift, max -220
    if kind is CorruptionKind.BRIGHTEN:
        return 22 * level  # shift, max +220
    if kind is CorruptionKind.SINGLE_OCCLUSION:
        return 15 * level  # side, max 150 px
    if kind is CorruptionKind.MULTIPLE_OCCLUSIONS:
        return level * level  # square count; footprint matches single occlusion
    raise ValueError(f"unhandled corruption kind {kind!r}")


def _quantize(values: np.ndarray) -> np.ndarray:
    # Round half away from zero, then clamp to the 8-bit range.
    rounded = np.copysign(np.floor(np.abs(values) + 0.5), values)
    return np.clip(rounded, 0.0, 255.0).astype(np.uint8)


def _correlate1d(arr: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    # Anchor at index len(kernel) // 2; reflect padding at the borders.
    n = kernel.size
    anchor = n // 2
    pad = [(0, 0)] * arr.ndim
    pad[axis] = (anchor, n - 1 - anchor)
    padded = np.pad(arr, pad, mode="reflect")
    windows = sliding_window_view(padded, n, axis=axis)
    return windows @ kernel


def _correlate2d(arr: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    kh, kw = kernel.shape
    ay, ax = kh // 2, kw // 2
    padded = np.pad(arr, ((ay, kh - 1 - ay), (ax, kw - 1 - ax), (0, 0)), mode="reflect")
    windows = sliding_window_view(padded, (kh, kw), axis=(0, 1))
    return np.einsum("hwcij,ij->hwc", windows, kernel)


def gaussian_kernel(sigma: float, radius: int) -> np.ndarray:
    """Normalized 1-D Gaussian taps at integer offsets -radius..radius."""
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    weights = np.exp(-(offsets**2) / (2.0 * sigma * sigma))
    return weights / weights.sum()


def gaussian_blur(img: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur with kernel radius ceil(3 * sigma).

    The radius is capped at dim - 1 per axis so reflect padding never
    exceeds one full reflection.
    """
    validate_image(img)
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    h, w = img.shape[:2]
    radius = math.ceil(3.0 * sigma)
    out = img.astype(np.float64)
    ry, rx = min(radius, h - 1), min(radius, w - 1)
    if ry > 0:
        out = _correlate1d(out, gaussian_kernel(sigma, ry), axis=0)
    if rx > 0:
        out = _correlate1d(out, gaussian_kernel(sigma, rx), axis=1)
    return _quantize(out)


def average_blur(img: np.ndarray, window: int) -> np.ndarray:
    """window x window box filter with reflect padding.

    Even windows anchor at index window // 2, taking one extra tap before
    the anchor. Windows wider than one reflection are clipped per axis.
    """
    validate_image(img)
    window = int(window)
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    if window == 1:
        return img.copy()
    h, w = img.shape[:2]
    wy, wx = min(window, 2 * h - 1), min(window, 2 * w - 1)
    out = _correlate1d(img.astype(np.float64), np.full(wy, 1.0 / wy), axis=0)
    out = _correlate1d(out, np.full(wx, 1.0 / wx), axis=1)
    return _quantize(out)


def motion_kernel(length: int, angle_deg: float = 0.0) -> np.ndarray:
    """Normalized line kernel: ``length`` unit taps rasterized at ``angle_deg``.

    Angle 0 is horizontal; positive angles rotate counter-clockwise with the
    image y axis pointing down.
    """
    if length < 1:
        raise ValueError(f"kernel length must be >= 1, got {length}")
    if length == 1:
        return np.ones((1, 1))
    theta = math.radians(angle_deg)
    center = (length - 1) / 2.0
    kernel = np.zeros((length, length))
    for i in range(length):
        t = i - center
        col = _round_half_away(center + t * math.cos(theta))
        row = _round_half_away(center - t * math.sin(theta))
        kernel[min(max(row, 0), length - 1), min(max(col, 0), length - 1)] = 1.0
    return kernel / kernel.sum()


def motion_blur(img: np.ndarray, kernel_len: int, angle: float = 0.0) -> np.ndarray:
    """Convolve with a normalized line kernel of ``kernel_len`` pixels.

    The kernel is clipped to 2 * min(H, W) - 1 on very small images.
    """
    validate_image(img)
    kernel_len = int(kernel_len)
    if kernel_len < 1:
        raise ValueError(f"kernel length must be >= 1, got {kernel_len}")
    h, w = img.shape[:2]
    n = min(kernel_len, 2 * min(h, w) - 1)
    if n == 1:
        return img.copy()
    return _quantize(_correlate2d(img.astype(np.float64), motion_kernel(n, angle)))


def gaussian_noise(img: np.ndarray, sigma: float, seed: int = 0) -> np.ndarray:
    """Additive zero-mean Gaussian noise, one draw per pixel per channel."""
    validate_image(img)
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    rng = np.random.default_rng(seed)
    noisy = img.astype(np.float64) + rng.standard_normal(img.shape) * float(sigma)
    return _quantize(noisy)


def speckle_noise(img: np.ndarray, sigma: float, seed: int = 0) -> np.ndarray:
    """Multiplicative noise: out = in * (1 + N(0, sigma)), per pixel per channel."""
    validate_image(img)
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    rng = np.random.default_rng(seed)
    noisy = img.astype(np.float64) * (1.0 + rng.standard_normal(img.shape) * float(sigma))
    return _quantize(noisy)


def salt_pepper_noise(img: np.ndarray, p: float, seed: int = 0) -> np.ndarray:
    """Replace whole pixels with probability ``p``.

    A replaced pixel becomes 255 or 0 on all three channels together, with
    equal probability. The replacement mask is drawn before the polarity
    mask.
    """
    validate_image(img)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    h, w = img.shape[:2]
    replaced = rng.random((h, w)) < p
    salt = rng.random((h, w)) < 0.5
    out = img.copy()
    out[replaced & salt] = 255
    out[replaced & ~salt] = 0
    return out


def shift_brightness(img: np.ndarray, shift: int) -> np.ndarray:
    """Add ``shift`` to every channel and clamp to [0, 255]."""
    validate_image(img)
    shift = int(shift)
    if abs(shift) > 255:
        raise ValueError(f"|shift| must be <= 255, got {shift}")
    return np.clip(img.astype(np.int16) + shift, 0, 255).astype(np.uint8)


def single_occlusion(img: np.ndarray, side: int, seed: int = 0) -> np.ndarray:
    """Paint one black square of side min(side, min(H, W)).

    Placement is uniform over positions keeping the square fully inside;
    the column offset is drawn before the row offset.
    """
    validate_image(img)
    side = int(side)
    if side < 1:
        raise ValueError(f"side must be >= 1, got {side}")
    h, w = img.shape[:2]
    s = min(side, h, w)
    rng = np.random.default_rng(seed)
    x0 = int(rng.integers(0, w - s + 1))
    y0 = int(rng.integers(0, h - s + 1))
    out = img.copy()
    out[y0 : y0 + s, x0 : x0 + s] = 0
    return out


def multiple_occlusions(img: np.ndarray, level: int, seed: int = 0) -> np.ndarray:
    """Paint level**2 black 15 px squares at independent uniform positions.

    Overlap is allowed; all column offsets are drawn before the row
    offsets. Nominal coverage equals the single occlusion at the same
    level: level**2 * 15**2 = (15 * level)**2.
    """
    validate_image(img)
    if not MIN_LEVEL <= level <= MAX_LEVEL:
        raise ValueError(f"severity level must be in [{MIN_LEVEL}, {MAX_LEVEL}], got {level}")
    h, w = img.shape[:2]
    s = min(OCCLUSION_TILE, h, w)
    count = level * level
    rng = np.random.default_rng(seed)
    xs = rng.integers(0, w - s + 1, size=count)
    ys = rng.integers(0, h - s + 1, size=count)
    out = img.copy()
    for x0, y0 in zip(xs.tolist(), ys.tolist()):
        out[y0 : y0 + s, x0 : x0 + s] = 0
    return out


def apply(spec: CorruptionSpec, img: np.ndarray, *, angle: float = 0.0) -> np.ndarray:
    """Apply ``spec`` to ``img`` and return a new image of the same size.

    The input is never modified. ``angle`` only affects motion blur.
    """
    validate_image(img)
    kind, level, seed = spec.kind, spec.level, spec.seed
    value = magnitude(kind, level)
    if kind is CorruptionKind.GAUSSIAN_BLUR:
        return gaussian_blur(img, value)
    if kind is CorruptionKind.AVERAGE_BLUR:
        return average_blur(img, value)
    if kind is CorruptionKind.MOTION_BLUR:
        return motion_blur(img, value, angle)
    if kind is CorruptionKind.GAUSSIAN_NOISE:
        return gaussian_noise(img, value, seed)
    if kind is CorruptionKind.SPECKLE_NOISE:
        return speckle_noise(img, value, seed)
    if kind is CorruptionKind.SALT_PEPPER_NOISE:
        return salt_pepper_noise(img, value, seed)
    if kind in (CorruptionKind.DARKEN, CorruptionKind.BRIGHTEN):
        return shift_brightness(img, value)
    if kind is CorruptionKind.SINGLE_OCCLUSION:
        return single_occlusion(img, value, seed)
    if kind is CorruptionKind.MULTIPLE_OCCLUSIONS:
        return multiple_occlusions(img, level, seed)
    raise ValueError(f"unhandled corruption kind {kind!r}")
