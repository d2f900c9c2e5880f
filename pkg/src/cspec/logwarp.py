"""Warp linear-frequency coefficient columns onto a log-frequency row axis.

Each display row r targets the frequency f(r) = f_min * (f_max/f_min)^(r/(R-1)),
so frequency order is preserved (warped, never scrambled). Low-frequency rows,
where adjacent coefficient centers land more than one display row apart, are
interpolated between their bracketing bins; high-frequency rows copy the
nearest coefficient center (undersampling).

Rectangular interpolation lerps (re, im) componentwise; where neighboring bins
carry opposing phase this passes through zero amplitude, the "black line"
artifact, with opposite hue-rotation direction on either side. Polar
interpolation lerps magnitude and shortest-arc phase separately, avoiding the
zeros at the cost of an ambiguous phase path.
"""

from dataclasses import dataclass

import numpy as np

from .dsp import FrameSpec

MODES = ("rectangular", "polar")


def _wrap_phase(x: np.ndarray) -> np.ndarray:
    """Wrap to (-pi, pi]; exact-pi ties resolve to +pi."""
    w = np.mod(x, 2.0 * np.pi)
    return np.where(w > np.pi, w - 2.0 * np.pi, w)


@dataclass
class LogAxisSpec:
    """Row -> frequency map plus per-row interpolation plan."""

    f_min: float
    f_max: float
    rows: int
    sample_rate: int
    fft_size: int
    frequencies: np.ndarray   # f(r), strictly increasing, length rows
    interpolate: np.ndarray   # bool per row
    lower_bin: np.ndarray     # bracketing lower bin (interp) or nearest bin
    frac: np.ndarray          # fraction toward lower_bin+1; 0 for undersampled

    @property
    def n_bins(self) -> int:
        return self.fft_size // 2 + 1

    @property
    def switchover_hz(self) -> float | None:
        """Frequency of the lowest undersampled row, or None if all interpolate."""
        under = np.flatnonzero(~self.interpolate)
        if len(under) == 0:
            return None
        return float(self.frequencies[under[0]])


def build_log_axis(f_min: float, f_max: float, rows: int, frame_spec: FrameSpec,
                   sample_rate: int) -> LogAxisSpec:
    """Construct the per-row warp plan for a log-frequency display."""
    spacing = frame_spec.bin_spacing(sample_rate)
    n_bins = frame_spec.n_bins
    if f_min < spacing:
        raise ValueError("below first coefficient center")
    if f_max > sample_rate / 2.0 + 1e-9:
        raise ValueError("f_max above Nyquist")
    if f_max <= f_min:
        raise ValueError("f_max must exceed f_min")
    if rows < 2:
        raise ValueError("need at least 2 rows")

    r = np.arange(rows, dtype=np.float64)
    freqs = f_min * (f_max / f_min) ** (r / (rows - 1))
    freqs[-1] = f_max

    log_span = np.log(f_max / f_min)
    # display row each coefficient center lands on (bin 0 never participates:
    # f_min >= spacing keeps every bracket at or above bin 1)
    centers = np.arange(1, n_bins) * spacing
    landing = np.round((rows - 1) * np.log(centers / f_min) / log_span)

    pos = freqs / spacing
    k = np.minimum(pos.astype(np.int64), n_bins - 2)
    frac = pos - k
    # rows pinned at the top center have no upper neighbor to lerp toward
    at_top = pos >= n_bins - 1
    gap = landing[k] - landing[k - 1]  # rows between bracketing centers
    interp = (gap > 1.0) & ~at_top

    lower = k.copy()
    # undersampled rows copy the nearest center in log-frequency distance,
    # ties toward the lower bin: compare f^2 against the geometric mean
    upper_nearer = freqs * freqs > (k * spacing) * ((k + 1) * spacing)
    under = ~interp
    lower[under & upper_nearer] += 1
    lower[under & at_top] = np.minimum(lower[under & at_top], n_bins - 1)
    frac = np.where(interp, frac, 0.0)

    return LogAxisSpec(
        f_min=float(f_min), f_max=float(f_max), rows=int(rows),
        sample_rate=int(sample_rate), fft_size=frame_spec.fft_size,
        frequencies=freqs, interpolate=interp, lower_bin=lower, frac=frac,
    )


def warp_column(coeffs: np.ndarray, axis: LogAxisSpec,
                mode: str = "rectangular") -> np.ndarray:
    """Map one linear-frequency column onto the log axis (length axis.rows)."""
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.shape[-1] != axis.n_bins:
        raise ValueError(f"expected {axis.n_bins} coefficients, got {c.shape[-1]}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")

    out = c[..., axis.lower_bin].copy()
    sel = axis.interpolate
    if not sel.any():
        return out
    k = axis.lower_bin[sel]
    t = axis.frac[sel]
    lo = c[..., k]
    hi = c[..., k + 1]
    if mode == "rectangular":
        out[..., sel] = (1.0 - t) * lo + t * hi
    else:
        mag = (1.0 - t) * np.abs(lo) + t * np.abs(hi)
        dphi = _wrap_phase(np.angle(hi) - np.angle(lo))
        out[..., sel] = mag * np.exp(1j * (np.angle(lo) + t * dphi))
    return out


def locate_black_lines(coeffs: np.ndarray, axis: LogAxisSpec) -> list[int]:
    """Rows where rectangular warping collapses to (near) zero amplitude.

    Between bracketing bins of opposing phase the interpolated magnitude
    |(1-t)*c_k + t*c_{k+1}| dips through a local minimum; when that minimum
    falls below 1e-3 of the column's peak magnitude, the display row nearest
    the minimum is reported.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.shape != (axis.n_bins,):
        raise ValueError(f"expected {axis.n_bins} coefficients")
    peak = np.abs(c).max()
    if peak == 0.0:
        return []
    threshold = 1e-3 * peak

    out: list[int] = []
    interp_rows = np.flatnonzero(axis.interpolate)
    for k in np.unique(axis.lower_bin[interp_rows]):
        a, b = c[k], c[k + 1]
        if (a * np.conj(b)).real >= 0.0:  # phases not opposing
            continue
        d = b - a
        t_min = -((a * np.conj(d)).real) / abs(d) ** 2  # always in (0, 1) here
        if abs(a + t_min * d) >= threshold:
            continue
        span = interp_rows[axis.lower_bin[interp_rows] == k]
        out.append(int(span[np.argmin(np.abs(axis.frac[span] - t_min))]))
    return sorted(out)
