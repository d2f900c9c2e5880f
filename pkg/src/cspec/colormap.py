"""Bijective mapping between complex coefficients and display colors.

A coefficient c with magnitude A and phase angle phi in [0, 2*pi) maps to

    hue        = phi / (2*pi)
    saturation = 1                  if A <= 1,   1 / (1 + ln A)  if A > 1
    brightness = 1 / (1 - ln A)     if A <= 1,   1                if A > 1

so amplitude 1 (full scale after a_ref normalization) is the fully-saturated,
fully-bright breakpoint; quieter coefficients darken, louder ones desaturate.
The map is exactly invertible on the continuous domain: reachable colors
always carry saturation = 1 or brightness = 1, and A is recovered as
exp(1 - 1/brightness) or exp(1/saturation - 1) respectively. A = 0 is black.

Increasing phase walks the hue wheel red (0) -> green (1/3) -> blue (2/3),
so a tone sitting above its coefficient center beats through an RGB sequence
and one below it through RBG.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

_TWO_PI = 2.0 * np.pi


class ColorClampWarning(UserWarning):
    """Raised (as a warning) when out-of-range color inputs were clamped."""


@dataclass(frozen=True)
class Hsb:
    hue: float         # phase cycles, [0, 1)
    saturation: float  # [0, 1]
    brightness: float  # [0, 1]

    def __post_init__(self):
        if not 0.0 <= self.hue < 1.0:
            raise ValueError(f"hue {self.hue} outside [0, 1)")
        if not 0.0 <= self.saturation <= 1.0:
            raise ValueError(f"saturation {self.saturation} outside [0, 1]")
        if not 0.0 <= self.brightness <= 1.0:
            raise ValueError(f"brightness {self.brightness} outside [0, 1]")


@dataclass(frozen=True)
class Rgb8:
    r: int
    g: int
    b: int

    def __post_init__(self):
        for v in (self.r, self.g, self.b):
            if not 0 <= v <= 255:
                raise ValueError("channels must be integers in 0..255")


def complex_to_hsb(c: complex) -> Hsb:
    """Color of one coefficient per the hue/saturation/brightness map."""
    c = complex(c)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise ValueError("coefficient must be finite")
    a = abs(c)
    if a == 0.0:
        return Hsb(0.0, 1.0, 0.0)
    phi = math.atan2(c.imag, c.real)
    if phi < 0.0:
        phi += _TWO_PI
    hue = (phi / _TWO_PI) % 1.0
    if a <= 1.0:
        return Hsb(hue, 1.0, 1.0 / (1.0 - math.log(a)))
    return Hsb(hue, 1.0 / (1.0 + math.log(a)), 1.0)


def hsb_to_complex(p: Hsb, strict: bool = True) -> complex:
    """Exact inverse of complex_to_hsb.

    Colors with saturation < 1 and brightness < 1 simultaneously are not
    produced by the forward map; with strict=True they raise "unreachable
    color", otherwise the nearer of the two branches is used (tolerant mode
    for quantized pixels).
    """
    s, b = p.saturation, p.brightness
    if b == 0.0:
        return 0j
    if b < 1.0 and s < 1.0:
        if strict:
            raise ValueError("unreachable color")
        # the coordinate nearer the breakpoint is the degenerate one; the
        # other carries the amplitude
        if s >= b:
            s = 1.0
        else:
            b = 1.0
    if s == 0.0:  # asymptote of the A > 1 branch
        if strict:
            raise ValueError("unreachable color")
        s = 1.0 / 255.0
    if b < 1.0:
        a = math.exp(1.0 - 1.0 / b)
    elif s < 1.0:
        a = math.exp(1.0 / s - 1.0)
    else:
        a = 1.0
    phi = _TWO_PI * p.hue
    return complex(a * math.cos(phi), a * math.sin(phi))


def _clamp01(x: float, what: str) -> float:
    if 0.0 <= x <= 1.0:
        return x
    warnings.warn(f"{what} {x} clamped to [0, 1]", ColorClampWarning)
    return min(max(x, 0.0), 1.0)


def hsb_to_rgb(p: Hsb) -> Rgb8:
    """Standard hexagonal HSV conversion to 8-bit RGB."""
    h = p.hue % 1.0
    s = _clamp01(p.saturation, "saturation")
    v = _clamp01(p.brightness, "brightness")
    r, g, b = _hsv_sector(h, s, v)
    return Rgb8(round(255.0 * r), round(255.0 * g), round(255.0 * b))


def rgb_to_hsb(q: Rgb8) -> Hsb:
    """Standard inverse HSV conversion from 8-bit RGB."""
    r, g, b = q.r / 255.0, q.g / 255.0, q.b / 255.0
    mx = max(r, g, b)
    mn = min(r, g, b)
    v = mx
    s = 0.0 if mx == 0.0 else (mx - mn) / mx
    if mx == mn:
        h = 0.0
    elif mx == r:
        h = ((g - b) / (mx - mn)) / 6.0
    elif mx == g:
        h = (2.0 + (b - r) / (mx - mn)) / 6.0
    else:
        h = (4.0 + (r - g) / (mx - mn)) / 6.0
    return Hsb(h % 1.0, s, v)


def _hsv_sector(h: float, s: float, v: float) -> tuple[float, float, float]:
    h6 = h * 6.0
    i = int(h6) % 6
    f = h6 - int(h6)
    pp = v * (1.0 - s)
    q = v * (1.0 - s * f)
    t = v * (1.0 - s * (1.0 - f))
    return ((v, t, pp), (q, v, pp), (pp, v, t),
            (pp, q, v), (t, pp, v), (v, pp, q))[i]


# ---------------------------------------------------------------------------
# Vectorized pipeline (used for whole images and streamed columns)
# ---------------------------------------------------------------------------

def complex_to_hsb_arrays(c: np.ndarray):
    """Vectorized forward map; returns (hue, saturation, brightness) arrays."""
    c = np.asarray(c, dtype=np.complex128)
    if not np.all(np.isfinite(c)):
        raise ValueError("coefficients must be finite")
    a = np.abs(c)
    phi = np.angle(c)
    phi = np.where(phi < 0.0, phi + _TWO_PI, phi)
    hue = (phi / _TWO_PI) % 1.0
    with np.errstate(divide="ignore"):
        ln_a = np.log(a, out=np.full(a.shape, -np.inf), where=a > 0)
    sat = np.where(a <= 1.0, 1.0, 1.0 / (1.0 + ln_a))
    bright = np.where(a <= 1.0, 1.0 / (1.0 - ln_a), 1.0)
    hue = np.where(a == 0.0, 0.0, hue)
    return hue, sat, bright


def hsv_to_rgb_arrays(h: np.ndarray, s: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Vectorized HSV -> RGB8; returns uint8 with a trailing axis of 3."""
    h6 = (np.asarray(h) % 1.0) * 6.0
    i = h6.astype(np.int64) % 6
    f = h6 - np.floor(h6)
    pp = v * (1.0 - s)
    q = v * (1.0 - s * f)
    t = v * (1.0 - s * (1.0 - f))
    r = np.choose(i, [v, q, pp, pp, t, v])
    g = np.choose(i, [t, v, v, q, pp, pp])
    b = np.choose(i, [pp, pp, t, v, v, q])
    rgb = np.stack([r, g, b], axis=-1)
    return np.clip(np.round(rgb * 255.0), 0, 255).astype(np.uint8)


def rgb_to_hsv_arrays(rgb: np.ndarray):
    """Vectorized RGB8 -> HSV; returns (hue, saturation, value) float arrays."""
    x = np.asarray(rgb, dtype=np.float64) / 255.0
    r, g, b = x[..., 0], x[..., 1], x[..., 2]
    mx = x.max(axis=-1)
    mn = x.min(axis=-1)
    span = mx - mn
    with np.errstate(invalid="ignore", divide="ignore"):
        h = np.where(mx == r, (g - b) / span,
                     np.where(mx == g, 2.0 + (b - r) / span, 4.0 + (r - g) / span))
        s = np.where(mx > 0.0, span / np.where(mx > 0.0, mx, 1.0), 0.0)
    h = np.where(span == 0.0, 0.0, h / 6.0) % 1.0
    return h, s, mx


def complex_to_rgb(c: np.ndarray) -> np.ndarray:
    """Coefficients -> RGB8 pixels (shape (..., 3))."""
    return hsv_to_rgb_arrays(*complex_to_hsb_arrays(c))


def rgb_to_complex(rgb: np.ndarray) -> np.ndarray:
    """Pixels -> coefficients (tolerant quantized inverse of complex_to_rgb)."""
    h, s, v = rgb_to_hsv_arrays(rgb)
    # brightness carries A when saturation is the coordinate nearer 1
    use_bright = (v < 1.0) & (s >= v)
    s = np.maximum(s, 1.0 / 255.0)  # cap the A -> inf asymptote at one LSB
    a = np.where(use_bright,
                 np.exp(1.0 - 1.0 / np.where(v > 0.0, v, 1.0)),
                 np.exp(1.0 / s - 1.0))
    a = np.where(v == 0.0, 0.0, a)
    return a * np.exp(2j * np.pi * h)


def render_column(coeffs: np.ndarray) -> np.ndarray:
    """One pixel per coefficient, lowest frequency first (bottom of image)."""
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.ndim != 1:
        raise ValueError("expected a 1-D coefficient column")
    return complex_to_rgb(c)
