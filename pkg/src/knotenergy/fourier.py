"""Low-level periodic Fourier helpers on uniform power-of-two grids.

Everything here treats an (n,) or (n, dim) sample array as the values of a
1-periodic, band-limited (trigonometric-interpolant) function at u_j = j/n.
The rfft bin k = n/2 (Nyquist) is interpreted as the real mode
c * cos(pi*n*u), which is the unique real interpolant convention; odd-order
derivative multipliers zero it out.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "grid",
    "shift_samples",
    "derivative",
    "apply_even_symbol",
    "evaluate_trig",
    "dealiased_product",
    "region_mean",
    "PeriodicAntiderivative",
]


def grid(n: int) -> np.ndarray:
    """Parameter grid u_j = j/n."""
    return np.arange(n) / n


def _rfft(samples):
    return np.fft.rfft(samples, axis=0)


def _irfft(coeffs, n):
    return np.fft.irfft(coeffs, n=n, axis=0)


def _expand(factor, coeffs):
    # broadcast a per-frequency factor over possible trailing field axes
    if coeffs.ndim == 2:
        return factor[:, None]
    return factor


def shift_samples(samples: np.ndarray, w: float) -> np.ndarray:
    """Samples of the interpolant at u_j + w (exact for band-limited data)."""
    n = samples.shape[0]
    c = _rfft(samples)
    k = np.arange(n // 2 + 1)
    phase = np.exp(2j * np.pi * k * w)
    phase[-1] = np.cos(np.pi * n * w)  # Nyquist cosine mode
    return _irfft(c * _expand(phase, c), n)


def derivative(samples: np.ndarray, order: int = 1) -> np.ndarray:
    """Spectral derivative of the interpolant, sampled on the grid."""
    n = samples.shape[0]
    c = _rfft(samples)
    k = np.arange(n // 2 + 1)
    mult = (2j * np.pi * k) ** order
    if order % 2 == 1:
        mult[-1] = 0.0
    else:
        # even derivative of cos(pi n u) stays a real cosine mode
        mult = mult.real.astype(complex)
        mult[-1] = (-((np.pi * n) ** 2)) ** (order // 2)
    return _irfft(c * _expand(mult, c), n)


def apply_even_symbol(samples: np.ndarray, symbol_of_k) -> np.ndarray:
    """Apply a real even Fourier multiplier m(|k|); symbol_of_k maps the
    nonnegative frequency array [0..n/2] to multiplier values."""
    n = samples.shape[0]
    c = _rfft(samples)
    k = np.arange(n // 2 + 1)
    m = np.asarray(symbol_of_k(k), dtype=float)
    return _irfft(c * _expand(m, c), n)


def evaluate_trig(samples: np.ndarray, u) -> np.ndarray:
    """Evaluate the trigonometric interpolant at arbitrary parameters u.

    Returns shape u.shape (scalar samples) or u.shape + (dim,).
    """
    n = samples.shape[0]
    u = np.atleast_1d(np.asarray(u, dtype=float))
    c = _rfft(samples) / n
    k = np.arange(1, n // 2)
    ang = 2.0 * np.pi * np.multiply.outer(u, k)  # (..., n/2-1)
    cos_part = 2.0 * np.cos(ang)
    sin_part = -2.0 * np.sin(ang)
    # interior modes + mean + Nyquist cosine
    out = np.tensordot(cos_part, c[1:-1].real, axes=(u.ndim, 0))
    out += np.tensordot(sin_part, c[1:-1].imag, axes=(u.ndim, 0))
    out += c[0].real
    out += np.multiply.outer(np.cos(np.pi * n * u), c[-1].real)
    return out


def resample(samples: np.ndarray, m: int) -> np.ndarray:
    """Samples of the same interpolant on an m-point grid (m >= n even).

    The Nyquist bin is split into +-n/2 so the cosine convention is kept.
    """
    n = samples.shape[0]
    f = np.fft.fft(samples, axis=0)
    out_shape = (m,) + samples.shape[1:]
    out = np.zeros(out_shape, dtype=complex)
    out[: n // 2] = f[: n // 2]
    out[m - n // 2 + 1 :] = f[n // 2 + 1 :]
    out[n // 2] = f[n // 2] / 2.0
    out[m - n // 2] = f[n // 2] / 2.0
    return np.fft.ifft(out * (m / n), axis=0).real


def dealiased_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pointwise product computed on a 2x zero-padded grid, truncated back.

    High modes of the true product are dropped (truncation), never folded
    onto low modes (aliasing).
    """
    n = a.shape[0]
    if b.shape[0] != n:
        raise ValueError("grids do not match")
    m = 2 * n
    prod = resample(a, m) * resample(b, m)
    f = np.fft.fft(prod, axis=0) * (n / m)
    out_shape = (n,) + prod.shape[1:]
    out = np.zeros(out_shape, dtype=complex)
    out[: n // 2] = f[: n // 2]
    out[n // 2 + 1 :] = f[m - n // 2 + 1 :]
    out[n // 2] = f[n // 2] + f[m - n // 2]  # fold +-n/2 into the cosine bin
    return np.fft.ifft(out, axis=0).real


def region_mean(f: np.ndarray, s: np.ndarray) -> float:
    """integral of f * indicator(s <= 0) over one period, spectrally.

    s must sample a smooth periodic function; its zero crossings are refined
    by bisection on the trigonometric interpolant and the integral between
    them evaluated from the periodic antiderivative of f, so the region
    boundary costs no accuracy.
    """
    inside0 = s[0] <= 0
    if np.all(s <= 0):
        return float(f.mean())
    if np.all(s > 0):
        return 0.0
    n = s.shape[0]
    anti = PeriodicAntiderivative(f)
    s_next = np.roll(s, -1)
    roots = []
    for j in np.nonzero(s * s_next < 0)[0]:
        lo, hi = j / n, (j + 1) / n
        positive_lo = s[j] > 0
        for _ in range(52):
            mid = 0.5 * (lo + hi)
            val = float(evaluate_trig(s, np.array([mid]))[0])
            if (val > 0) == positive_lo:
                lo = mid
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    roots.sort()
    total = 0.0
    pos = 0.0
    in_far = inside0
    for r in roots:
        if in_far:
            total += float(anti.at(r) - anti.at(pos))
        pos = r
        in_far = not in_far
    if in_far:
        total += float(anti.at(1.0) - anti.at(pos))
    return total


class PeriodicAntiderivative:
    """Antiderivative F(u) = integral_0^u f of a sampled periodic function.

    F(u) = mean*u + P(u) - P(0) with P periodic; exact for the trigonometric
    interpolant of the samples.  Supports point queries and whole-grid
    queries at u_j + w.
    """

    def __init__(self, samples: np.ndarray):
        samples = np.asarray(samples, dtype=float)
        n = samples.shape[0]
        c = _rfft(samples)
        self.n = n
        self.mean = float(c[0].real) / n
        k = np.arange(n // 2 + 1)
        denom = 2j * np.pi * k
        denom[0] = 1.0
        a = c / denom
        a[0] = 0.0
        self._nyq = float(c[-1].real) / n  # handled analytically as a sine
        a[-1] = 0.0
        self._coeffs = a
        self._p_grid = _irfft(a, n)
        self._p0 = float(self._p_grid[0]) + 0.0

    def grid_values(self) -> np.ndarray:
        """F at the grid nodes u_j (F(0) = 0)."""
        return self.mean * grid(self.n) + self._p_grid - self._p0

    def at(self, u) -> np.ndarray:
        """F at arbitrary parameters (vectorized)."""
        u = np.asarray(u, dtype=float)
        p = evaluate_trig(_irfft(self._coeffs, self.n), u)
        nyq = self._nyq * np.sin(np.pi * self.n * u) / (np.pi * self.n)
        return self.mean * u + p + nyq - self._p0

    def shifted_grid(self, w: float) -> np.ndarray:
        """F(u_j + w) for the whole grid, via one inverse transform."""
        n = self.n
        k = np.arange(n // 2 + 1)
        phase = np.exp(2j * np.pi * k * w)
        p = _irfft(self._coeffs * phase, n)
        signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
        nyq = self._nyq * np.sin(np.pi * n * w) / (np.pi * n) * signs
        return self.mean * (grid(n) + w) + p + nyq - self._p0
