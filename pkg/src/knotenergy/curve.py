"""Discrete closed curves on ℝ/ℤ with spectral interpolation.

A curve is a uniform sample grid u_j = j/N (N a power of two) of a closed
curve in R^n, interpreted through its trigonometric interpolant.  All
geometric primitives (length, intrinsic distance, bi-Lipschitz constant,
arc-length reparametrization) are exact for that interpolant.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import fourier
from .errors import DegenerateCurve, DomainError

__all__ = [
    "PeriodicField",
    "ClosedCurve",
    "CurveGeometry",
    "geometry",
    "intrinsic_distance",
    "bilipschitz_constant",
    "reparametrize_arclength",
    "arclength_chart",
    "injectivity_margin",
    "is_arclength",
    "circle",
    "unit_length_circle",
    "ellipse",
    "torus_knot",
    "perturbed_circle",
    "lissajous",
    "load_curve",
    "dump_curve",
    "read_curve_json",
    "curve_to_json",
]

SPEED_FLOOR_REL = 1e-12
BILIPSCHITZ_FLOOR = 1e-9


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PeriodicField:
    """Samples of a 1-periodic scalar or vector function on the curve grid."""

    samples: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "samples", _readonly(self.samples))
        if not np.all(np.isfinite(self.samples)):
            raise DomainError("field samples must be finite")

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def dim(self) -> int:
        return 1 if self.samples.ndim == 1 else self.samples.shape[1]

    def derivative(self) -> "PeriodicField":
        return PeriodicField(fourier.derivative(self.samples))

    def at(self, u):
        return fourier.evaluate_trig(self.samples, u)


@dataclass(frozen=True, eq=False)
class ClosedCurve:
    """Closed curve sampled at u_j = j/N, N a power of two >= 16."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 2 or s.shape[1] < 2:
            raise DomainError("samples must be (N, dim) with dim >= 2")
        n = s.shape[0]
        if n < 16 or n & (n - 1):
            raise DomainError("N must be a power of two >= 16")
        if not np.all(np.isfinite(s)):
            raise DomainError("curve samples must be finite")
        object.__setattr__(self, "samples", _readonly(s))

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def dim(self) -> int:
        return self.samples.shape[1]

    def evaluate(self, u):
        """Point(s) on the interpolant; 1-periodic and exact at grid nodes."""
        return fourier.evaluate_trig(self.samples, np.asarray(u) % 1.0)

    def shifted_samples(self, w: float) -> np.ndarray:
        """Grid samples of gamma(u + w)."""
        return fourier.shift_samples(self.samples, w)

    def transformed(self, matrix=None, shift=None) -> "ClosedCurve":
        s = self.samples
        if matrix is not None:
            s = s @ np.asarray(matrix, dtype=float).T
        if shift is not None:
            s = s + np.asarray(shift, dtype=float)
        return ClosedCurve(s)


@dataclass(frozen=True, eq=False)
class CurveGeometry:
    """Derivative, speed, length and cumulative arclength of a curve."""

    derivative: PeriodicField
    speed: PeriodicField
    length: float
    cumulative_arclength: np.ndarray
    _arclen: fourier.PeriodicAntiderivative = field(repr=False)

    def arclength_at(self, u):
        """L(gamma|[0,u]) for arbitrary u (extended by L per period)."""
        return self._arclen.at(np.asarray(u, dtype=float))

    def arclength_shifted(self, w: float) -> np.ndarray:
        """L(gamma|[0, u_j + w]) for the whole grid."""
        return self._arclen.shifted_grid(w)


def geometry(curve: ClosedCurve, speed_floor: float = SPEED_FLOOR_REL) -> CurveGeometry:
    """Differentiate spectrally and integrate the speed.

    Raises DegenerateCurve when the sampled speed nearly vanishes somewhere.
    """
    deriv = fourier.derivative(curve.samples)
    speed = np.linalg.norm(deriv, axis=1)
    if speed.min() < speed_floor * speed.mean():
        raise DegenerateCurve("speed vanishes on the grid")
    arclen = fourier.PeriodicAntiderivative(speed)
    return CurveGeometry(
        derivative=PeriodicField(deriv),
        speed=PeriodicField(speed),
        length=arclen.mean,
        cumulative_arclength=_readonly(arclen.grid_values()),
        _arclen=arclen,
    )


def intrinsic_distance(curve: ClosedCurve, u, w) -> np.ndarray:
    """Shorter-arc distance between gamma(u+w) and gamma(u), |w| <= 1/2."""
    u = np.asarray(u, dtype=float)
    w = np.asarray(w, dtype=float)
    if np.any(np.abs(w) > 0.5 + 1e-15):
        raise DomainError("|w| must not exceed 1/2")
    geom = geometry(curve)
    ell = np.abs(geom.arclength_at(u + w) - geom.arclength_at(u))
    return np.minimum(ell, geom.length - ell)


def _offset_tables(curve: ClosedCurve):
    """Chord and arc distances for every grid pair, grouped by offset."""
    geom = geometry(curve)
    n, lam, length = curve.n, geom.cumulative_arclength, geom.length
    offsets = np.arange(1, n)
    chords = np.empty((n - 1, n))
    arcs = np.empty((n - 1, n))
    for i, d in enumerate(offsets):
        diff = np.roll(curve.samples, -d, axis=0) - curve.samples
        chords[i] = np.linalg.norm(diff, axis=1)
        ell = np.roll(lam, -d) - lam
        ell[n - d :] += length  # wrapped pairs
        arcs[i] = np.minimum(ell, length - ell)
    return offsets, chords, arcs, geom


def bilipschitz_constant(curve: ClosedCurve, floor: float = BILIPSCHITZ_FLOOR) -> float:
    """Largest c with min(chord, intrinsic distance) >= c|w| over grid pairs."""
    offsets, chords, arcs, _ = _offset_tables(curve)
    n = curve.n
    wabs = np.minimum(offsets / n, 1.0 - offsets / n)
    ratios = np.minimum(chords, arcs) / wabs[:, None]
    c = float(ratios.min())
    if c < floor:
        raise DegenerateCurve(f"bi-Lipschitz constant {c:.3e} below {floor:.1e}")
    return c


def injectivity_margin(curve: ClosedCurve) -> float:
    """Smallest chord among pairs at least L/8 apart along the curve."""
    offsets, chords, arcs, geom = _offset_tables(curve)
    far = arcs >= geom.length / 8.0
    if not far.any():
        return 0.0
    return float(chords[far].min())


def arclength_chart(curve: ClosedCurve, n_out: int | None = None) -> np.ndarray:
    """Parameters u_j with arclength(u_j) = j L / n_out (chart of the
    constant-speed reparametrization), by bracketed Newton to 1e-12."""
    geom = geometry(curve)
    n_out = n_out or curve.n
    length = geom.length
    targets = np.arange(n_out) / n_out * length

    # monotone node table brackets each target; bracketed Newton refines
    u_nodes = np.linspace(0.0, 1.0, 4 * curve.n + 1)
    lam_nodes = geom.arclength_at(u_nodes)
    idx = np.searchsorted(lam_nodes, targets, side="right") - 1
    idx = np.clip(idx, 0, len(u_nodes) - 2)
    lo, hi = u_nodes[idx], u_nodes[idx + 1]
    u = 0.5 * (lo + hi)
    for _ in range(60):
        res = geom.arclength_at(u) - targets
        if np.max(np.abs(res)) < 1e-12 * length:
            break
        above = res > 0
        hi = np.where(above, u, hi)
        lo = np.where(above, lo, u)
        speed_u = np.linalg.norm(fourier.evaluate_trig(geom.derivative.samples, u), axis=-1)
        u_new = u - res / speed_u
        outside = (u_new < lo) | (u_new > hi)
        u = np.where(outside, 0.5 * (lo + hi), u_new)
    u[0] = 0.0
    return u


def reparametrize_arclength(curve: ClosedCurve, n_out: int | None = None) -> ClosedCurve:
    """Resample the curve at constant speed, keeping the starting point."""
    return ClosedCurve(curve.evaluate(arclength_chart(curve, n_out)))


def is_arclength(curve: ClosedCurve, rel_tol: float = 1e-6) -> bool:
    """True when |gamma'| is constant to rel_tol."""
    geom = geometry(curve)
    s = geom.speed.samples
    return float(s.max() - s.min()) <= rel_tol * float(s.mean())


# ---------------------------------------------------------------------------
# generators

def circle(n: int = 256, radius: float = 1.0, center=(0.0, 0.0)) -> ClosedCurve:
    u = fourier.grid(n)
    x = center[0] + radius * np.cos(2 * np.pi * u)
    y = center[1] + radius * np.sin(2 * np.pi * u)
    return ClosedCurve(np.column_stack([x, y]))


def unit_length_circle(n: int = 256) -> ClosedCurve:
    """Circle of total length 1 (|gamma'| = 1), the paper-normalized shape."""
    return circle(n, radius=1.0 / (2 * np.pi))


def ellipse(n: int = 256, a: float = 1.0, b: float = 0.5) -> ClosedCurve:
    u = fourier.grid(n)
    return ClosedCurve(np.column_stack([a * np.cos(2 * np.pi * u), b * np.sin(2 * np.pi * u)]))


def torus_knot(n: int = 256, p: int = 2, q: int = 3, R: float = 2.0, r: float = 1.0) -> ClosedCurve:
    u = fourier.grid(n)
    tube = R + r * np.cos(2 * np.pi * q * u)
    return ClosedCurve(
        np.column_stack(
            [
                tube * np.cos(2 * np.pi * p * u),
                tube * np.sin(2 * np.pi * p * u),
                r * np.sin(2 * np.pi * q * u),
            ]
        )
    )


def perturbed_circle(
    n: int = 256, mode: int = 3, amplitude: float = 0.05, radius: float = 1.0
) -> ClosedCurve:
    """Circle with a radial cos(2 pi * mode * u) bump of the given relative size."""
    u = fourier.grid(n)
    rad = radius * (1.0 + amplitude * np.cos(2 * np.pi * mode * u))
    return ClosedCurve(np.column_stack([rad * np.cos(2 * np.pi * u), rad * np.sin(2 * np.pi * u)]))


def lissajous(n: int = 256) -> ClosedCurve:
    """Figure-eight-like curve with an exact self-touch; degenerate on purpose."""
    u = fourier.grid(n)
    return ClosedCurve(np.column_stack([np.sin(4 * np.pi * u), np.sin(2 * np.pi * u)]))


# ---------------------------------------------------------------------------
# JSON interchange

def curve_to_json(curve: ClosedCurve) -> str:
    return json.dumps({"dim": curve.dim, "samples": curve.samples.tolist()})


def read_curve_json(text: str) -> ClosedCurve:
    data = json.loads(text)
    try:
        dim = int(data["dim"])
        samples = np.asarray(data["samples"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed curve JSON: {exc}") from exc
    if samples.ndim != 2 or samples.shape[1] != dim:
        raise DomainError("curve JSON: samples do not match dim")
    return ClosedCurve(samples)


def dump_curve(curve: ClosedCurve, path) -> None:
    with open(path, "w") as fh:
        fh.write(curve_to_json(curve))


def load_curve(path) -> ClosedCurve:
    with open(path) as fh:
        return read_curve_json(fh.read())
