"""Regularity diagnostics: rearrangement norms, commutators, decay profiles.

Lorentz quantities are computed exactly on the step-function rearrangement
of the grid samples (cell measure 1/N), so p = q reduces to the plain L^p
norm with no quadrature error.  Windows are periodic arcs of [0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fourier
from .curve import PeriodicField
from .errors import (
    DomainError,
    HypothesisViolated,
    InsufficientSamples,
    NotUnit,
)
from .quadrature import gauss_panel, panel_boundaries
from .spectral import frac_laplacian

__all__ = [
    "LorentzSpec",
    "DecaySample",
    "decreasing_rearrangement",
    "lorentz_norm",
    "commutator_h",
    "normal_tangential_split",
    "gamma_term",
    "morrey_decay_profile",
    "iteration_lemma_check",
    "multiplier_estimate_probe",
]


@dataclass(frozen=True)
class LorentzSpec:
    """(p, q) exponents and a window: p in (1, inf) with any q, or (1,1), or
    (inf, inf).  window is "full" or an (a, b) arc of [0, 1), wrapping when
    b < a."""

    p: float
    q: float
    window: object = "full"

    def __post_init__(self):
        p, q = self.p, self.q
        ok = (1.0 < p < np.inf and 1.0 <= q) or (p == 1.0 and q == 1.0) or (
            np.isinf(p) and np.isinf(q)
        )
        if not ok:
            raise DomainError(f"unsupported Lorentz pair ({p}, {q})")


@dataclass(frozen=True)
class DecaySample:
    radius: float
    value: float
    center: float

    def __post_init__(self):
        if self.radius <= 0 or self.value < 0:
            raise DomainError("decay sample needs r > 0 and value >= 0")


def _samples(f) -> np.ndarray:
    return f.samples if isinstance(f, PeriodicField) else np.asarray(f, dtype=float)


def _window_mask(n: int, window) -> np.ndarray:
    if window == "full" or window is None:
        return np.ones(n, dtype=bool)
    a, b = float(window[0]) % 1.0, float(window[1]) % 1.0
    u = fourier.grid(n)
    if a <= b:
        return (u >= a) & (u < b)
    return (u >= a) | (u < b)


def decreasing_rearrangement(f, window="full") -> np.ndarray:
    """|f| sample values on the window, sorted nonincreasing (cells of 1/N)."""
    samples = _samples(f)
    if samples.ndim != 1:
        raise DomainError("rearrangement expects a scalar field")
    vals = np.abs(samples[_window_mask(samples.shape[0], window)])
    return np.sort(vals)[::-1]


def lorentz_norm(f, spec: LorentzSpec) -> float:
    """Exact Lorentz functional of the step rearrangement.

    For q < inf this is (sum_i v_i^q * (p/q) * ((i h)^{q/p} - ((i-1) h)^{q/p}))^{1/q}
    with h = 1/N; for q = inf, max_i (i h)^{1/p} v_i.
    """
    star = decreasing_rearrangement(f, spec.window)
    if star.size == 0:
        return 0.0
    n = _samples(f).shape[0]
    h = 1.0 / n
    t = h * np.arange(1, star.size + 1)
    if np.isinf(spec.q):
        if np.isinf(spec.p):
            return float(star[0])
        return float(np.max(t ** (1.0 / spec.p) * star))
    p, q = spec.p, spec.q
    t_prev = t - h
    chunks = (p / q) * (t ** (q / p) - t_prev ** (q / p))
    return float(np.sum(star**q * chunks) ** (1.0 / q))


def commutator_h(a, b, s: float) -> PeriodicField:
    """Leibniz defect |D|^s(ab) - a |D|^s b - b |D|^s a, de-aliased products."""
    if not 0.0 < s < 1.0:
        raise DomainError("commutator needs s in (0, 1)")
    av, bv = _samples(a), _samples(b)
    if av.ndim != 1 or bv.ndim != 1 or av.shape != bv.shape:
        raise DomainError("commutator expects matching scalar fields")
    lap = lambda x: frac_laplacian(x, s)
    prod = fourier.dealiased_product
    out = lap(prod(av, bv)) - prod(av, lap(bv)) - prod(bv, lap(av))
    return PeriodicField(out)


def normal_tangential_split(t, v):
    """Split v along/against the unit field t.

    Returns (<t, v> as a scalar field, all antisymmetric products
    t_i v_j - t_j v_i for i < j); the exact algebra gives
    |v|^2 = <t,v>^2 + sum of squared products pointwise.
    """
    tv, vv = _samples(t), _samples(v)
    if tv.ndim != 2 or tv.shape != vv.shape:
        raise DomainError("split expects matching vector fields")
    norms = np.linalg.norm(tv, axis=1)
    if np.max(np.abs(norms - 1.0)) > 1e-8:
        raise NotUnit("direction field must consist of unit vectors")
    normal = PeriodicField(np.sum(tv * vv, axis=1))
    dim = tv.shape[1]
    tangential = [
        PeriodicField(tv[:, i] * vv[:, j] - tv[:, j] * vv[:, i])
        for i in range(dim)
        for j in range(i + 1, dim)
    ]
    return normal, tangential


def gamma_term(gprime, u: float, nodes: int = 8, unit_tol: float = 1e-6) -> float:
    """Critical cubic term of the stationarity estimate at parameter u.

    Gamma(u) = int_{(-1,1)^3} int_{|w|<1/4} |g'(u) - g'(u+s2 w)| *
    |g'(u+s3 w) - g'(u+s4 w)|^2 / w^2 dw ds.  Separability in (s2) x (s3,s4)
    collapses the tensor Gauss sum; the w -> 0 cell is O(w^2) and dropped.
    """
    gp = _samples(gprime)
    if gp.ndim != 2:
        raise DomainError("gamma_term expects a vector derivative field")
    speeds = np.linalg.norm(gp, axis=1)
    if np.max(np.abs(speeds - 1.0)) > unit_tol:
        raise NotUnit("derivative field must be unit speed")
    n = gp.shape[0]
    sx, sw = np.polynomial.legendre.leggauss(nodes)  # on (-1, 1), weights sum 2
    g_u = fourier.evaluate_trig(gp, np.array([u]))[0]

    def j(w):
        pts = u + sx * w
        g_pts = fourier.evaluate_trig(gp, pts)  # (nodes, dim)
        f_vals = np.linalg.norm(g_pts - g_u, axis=1)
        f_int = float(np.dot(sw, f_vals))
        s1 = float(np.dot(sw, np.sum(g_pts * g_pts, axis=1)))
        bar = sw @ g_pts
        pair_int = 2.0 * 2.0 * s1 - 2.0 * float(np.dot(bar, bar))
        return f_int * pair_int / w**2

    bounds = panel_boundaries(1.0 / (8 * n), outer=0.25)
    total = 0.0
    for i in range(len(bounds) - 1):
        x, wt = gauss_panel(bounds[i + 1], bounds[i], 16)
        total += float(np.dot([j(xx) + j(-xx) for xx in x], wt))
    return total


def morrey_decay_profile(f, centers, radii):
    """(2, inf)-norm on shrinking arcs and the fitted log-log decay slope.

    Returns (samples, sigma); sigma is NaN when every window value vanishes
    (degenerate fit).
    """
    radii = np.asarray(radii, dtype=float)
    if radii.size < 3:
        raise InsufficientSamples("need at least 3 radii")
    if np.any(radii <= 0) or np.any(radii >= 0.25):
        raise DomainError("radii must lie in (0, 1/4)")
    samples = []
    for c in np.atleast_1d(centers):
        for r in radii:
            spec = LorentzSpec(2.0, np.inf, window=((c - r) % 1.0, (c + r) % 1.0))
            samples.append(DecaySample(radius=float(r), value=lorentz_norm(f, spec), center=float(c)))
    vals = np.array([s.value for s in samples])
    rs = np.array([s.radius for s in samples])
    good = vals > 0
    if not good.any():
        return samples, float("nan")
    slope = np.polyfit(np.log(rs[good]), np.log(vals[good]), 1)[0]
    return samples, float(slope)


def iteration_lemma_check(b, theta: float, eps: float, m: int, C: float):
    """Executable form of the dyadic iteration lemma.

    Verifies the recursion hypothesis for every representable k (raising
    HypothesisViolated otherwise), then certifies the half-rate decay
    b_k <= C_tilde 2^{-theta k / 2} with the smallest constant, checking it
    against the proof's explicit bound 2 sum_{l<=m} 2^{theta l/2} b_l + 2C.
    """
    b = np.asarray(b, dtype=float)
    if b.ndim != 1 or b.size <= m:
        raise DomainError("need a 1-D sequence longer than m")
    if np.any(b < 0) or not np.all(np.isfinite(b)):
        raise DomainError("sequence must be nonnegative and finite")
    if theta <= 0 or m < 1:
        raise DomainError("need theta > 0 and m >= 1")
    qhalf = 2.0 ** (-theta / 2.0)
    if eps > 2.0 ** (-theta * m) / 4.0:
        raise DomainError("eps too large for m (needs eps <= 2^{-theta m}/4)")
    if C * qhalf / (1.0 - qhalf) * 2.0 ** (-theta * m / 2.0) > 0.25:
        raise DomainError("m too small for C (proof smallness condition)")

    slack = 1e-12 * (1.0 + float(b.max()))
    for k in range(b.size - m):
        tail = sum(2.0 ** (-theta * l) * b[k - l] for l in range(1, k + 1))
        bound = eps * b[k] + C * (2.0 ** (-theta * (k + m)) + 2.0 ** (-theta * m) * tail)
        if b[k + m] > bound + slack:
            raise HypothesisViolated(k)

    k_arr = np.arange(b.size)
    weights = 2.0 ** (theta * k_arr / 2.0)
    c_tilde = float(np.max(b * weights))
    cert = 2.0 * float(np.sum(weights[: m + 1] * b[: m + 1])) + 2.0 * C
    return bool(c_tilde <= cert + slack), c_tilde


def multiplier_estimate_probe(
    alpha: float, delta: float, trials: int = 100_000, seed: int = 0
) -> float:
    """Monte-Carlo bound check for the kernel-difference inequality.

    Draws (x, y, xi) log-uniformly over six decades with random signs and
    returns the largest ratio of ||x-xi|^{-1+a} - |y-xi|^{-1+a}| to
    |x-y|^d (|y-xi|^{-1+a-d} + |x-xi|^{-1+a-d} 1_{|x-y|>2|x-xi|}).
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    if not 0.0 <= delta <= 1.0:
        raise DomainError("delta must lie in [0, 1]")
    if trials < 1000:
        raise DomainError("need at least 1000 trials")
    rng = np.random.default_rng(seed)
    mag = lambda size: 10.0 ** rng.uniform(-3.0, 3.0, size)
    sgn = lambda size: rng.choice([-1.0, 1.0], size)
    x = mag(trials) * sgn(trials)
    y = mag(trials) * sgn(trials)
    xi = mag(trials) * sgn(trials)
    dxxi = np.abs(x - xi)
    dyxi = np.abs(y - xi)
    dxy = np.abs(x - y)
    with np.errstate(divide="ignore", invalid="ignore"):
        num = np.abs(dxxi ** (alpha - 1.0) - dyxi ** (alpha - 1.0))
        den = dxy**delta * (
            dyxi ** (alpha - 1.0 - delta)
            + dxxi ** (alpha - 1.0 - delta) * (dxy > 2.0 * dxxi)
        )
        ratio = num / den
    ratio[~np.isfinite(ratio)] = 0.0
    ratio[dxy == 0.0] = 0.0
    return float(ratio.max())
