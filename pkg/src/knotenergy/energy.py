"""Chord-arc knot energies: the inverse-square energy and its (alpha, p) family.

The double integral is reduced to a 1-D integral of the u-averaged integrand
J(w), evaluated on Gauss nodes inside dyadic panels down to w = 1/(8N).  For
the inverse-square energy on arc-length curves the w -> 0 cell is closed with
the analytic integrand limit kappa(u)^2 L^2 / 12.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fourier
from .curve import (
    ClosedCurve,
    bilipschitz_constant,
    geometry,
    is_arclength,
    reparametrize_arclength,
)
from .errors import DomainError, NotArcLength
from .quadrature import WScheme, gauss_panel, panel_boundaries

__all__ = [
    "QuadratureScheme",
    "moebius_energy",
    "ohara_energy",
    "truncated_energy",
    "integrand_diagonal_limit",
]


@dataclass(frozen=True)
class QuadratureScheme:
    """Grid sizes, singular cutoff and diagonal policy for the (u, w) integrals.

    eps = 0 means: close the w = 0 cell with the analytic diagonal limit
    (arc-length inputs; others are reparametrized first).  n_w counts signed
    w-nodes; None sizes default to the curve grid.
    """

    n_u: int | None = None
    n_w: int | None = None
    eps: float = 0.0
    extrapolate: bool = False

    def __post_init__(self):
        if self.eps < 0 or self.eps >= 0.5:
            raise DomainError("eps must lie in [0, 1/2)")
        if self.n_u is not None and self.n_w is not None and self.n_w < self.n_u:
            raise DomainError("n_w must be at least n_u")

    def panel_nodes(self, n_panels: int) -> int:
        if self.n_w is None:
            return 16
        return max(8, int(self.n_w) // (2 * n_panels))


class _EnergyData:
    """Cached transforms for one curve."""

    def __init__(self, curve: ClosedCurve):
        bilipschitz_constant(curve)  # raises DegenerateCurve on near-collision
        self.geom = geometry(curve)
        self.curve = curve
        self.n = curve.n
        self.length = self.geom.length
        self._c = np.fft.rfft(curve.samples, axis=0)
        self._cs = np.fft.rfft(self.geom.speed.samples, axis=0)
        self._k = np.arange(self.n // 2 + 1)
        self._lam0 = self.geom.cumulative_arclength

    def _phase(self, w):
        phase = np.exp(2j * np.pi * self._k * w)
        phase[-1] = np.cos(np.pi * self.n * w)
        return phase

    def chord2(self, w: float) -> np.ndarray:
        d = np.fft.irfft(self._c * self._phase(w)[:, None], n=self.n, axis=0) - self.curve.samples
        return np.sum(d * d, axis=1)

    def speed_at(self, w: float) -> np.ndarray:
        return np.fft.irfft(self._cs * self._phase(w), n=self.n)

    def arc_dist(self, w: float) -> np.ndarray:
        ell = np.abs(self.geom.arclength_shifted(w) - self._lam0)
        return np.minimum(ell, self.length - ell)

    def diagonal_limit_mean(self) -> float:
        """u-average of kappa^2 L^2 / 12 (constant-speed curves)."""
        gpp = fourier.derivative(self.curve.samples, order=2)
        gp = self.geom.derivative.samples
        sp2 = self.geom.speed.samples ** 2
        kappa2 = (sp2 * np.sum(gpp * gpp, axis=1) - np.sum(gp * gpp, axis=1) ** 2) / sp2**3
        return float(np.mean(kappa2) * self.length**2 / 12.0)


def _arclength_form(curve: ClosedCurve) -> ClosedCurve:
    return curve if is_arclength(curve) else reparametrize_arclength(curve)


def moebius_energy(curve: ClosedCurve, scheme: QuadratureScheme | None = None) -> float:
    """Inverse-square chord-arc energy; 4 for round circles of any size.

    Non-arc-length inputs are reparametrized before quadrature (the energy
    is parametrization invariant); with eps = 0 the w = 0 cell uses the
    analytic curvature limit.
    """
    scheme = scheme or QuadratureScheme()
    data = _EnergyData(_arclength_form(curve))
    length, n = data.length, data.n

    def j(w):
        # speeds are the constant L; d = L|w| on the half-window
        return float(np.mean(length**2 / data.chord2(w))) - 1.0 / w**2

    if scheme.eps > 0.0:
        ws = WScheme(inner=1.0 / (8 * n), nodes=scheme.panel_nodes(12), eps=scheme.eps)
        value = ws.integrate(j, extrapolate=False)
        if scheme.extrapolate:
            value = _eps_richardson(value, j, scheme.eps, n)
        return float(value)

    bounds = panel_boundaries(1.0 / (8 * n))
    total = 0.0
    for i in range(len(bounds) - 1):
        x, wt = gauss_panel(bounds[i + 1], bounds[i], scheme.panel_nodes(len(bounds) - 1))
        total += float(np.dot([j(xx) + j(-xx) for xx in x], wt))
    w_floor = bounds[-1]
    j0 = data.diagonal_limit_mean()
    total += w_floor * (2.0 * j0 + j(w_floor) + j(-w_floor)) / 2.0
    return float(total)


def _eps_richardson(value_eps, j, eps, n):
    # one extra window [eps, 2 eps] gives F(2 eps); extrapolate linearly in eps
    hi = min(2.0 * eps, 0.5)
    x, wt = gauss_panel(eps, hi, 24)
    annulus = float(np.dot([j(xx) + j(-xx) for xx in x], wt))
    f2 = value_eps - annulus
    return 2.0 * value_eps - f2


def truncated_energy(curve: ClosedCurve, eps: float, scheme: QuadratureScheme | None = None) -> float:
    """Energy restricted to eps < |w| <= 1/2, any regular parametrization.

    Monotone nondecreasing as eps decreases; converges to moebius_energy.
    """
    if not 0.0 < eps <= 0.5:
        raise DomainError("eps must lie in (0, 1/2]")
    if eps == 0.5:
        return 0.0
    scheme = scheme or QuadratureScheme()
    data = _EnergyData(curve)
    length = data.length
    lam0 = data.geom.cumulative_arclength

    def j(w):
        # near-arc bracket everywhere plus a smooth far-branch correction
        # integrated against the branch indicator (kink-free quadrature)
        ell = np.abs(data.geom.arclength_shifted(w) - lam0)
        weight = data.speed_at(w) * data.geom.speed.samples
        base = (1.0 / data.chord2(w) - 1.0 / ell**2) * weight
        far_corr = (1.0 / ell**2 - 1.0 / (length - ell) ** 2) * weight
        return float(base.mean() + fourier.region_mean(far_corr, 0.5 * length - ell))

    ws = WScheme(inner=1.0 / (8 * data.n), nodes=scheme.panel_nodes(12), eps=eps)
    return float(ws.integrate(j, extrapolate=False))


def ohara_energy(
    curve: ClosedCurve, alpha: float, p: float, scheme: QuadratureScheme | None = None
) -> float:
    """(alpha, p) family with the (1/chord^alpha - 1/arc^alpha)^p integrand.

    alpha = 2, p = 1 coincides definitionally with moebius_energy and is
    delegated to it.  For (alpha - 2) p >= 1 the diagonal is not integrable,
    so a positive cutoff is required and the value is cutoff dependent.
    """
    if alpha < 2.0 or p < 1.0:
        raise DomainError("implemented family needs alpha >= 2 and p >= 1")
    scheme = scheme or QuadratureScheme()
    if alpha == 2.0 and p == 1.0:
        return moebius_energy(curve, scheme)
    convergent = (alpha - 2.0) * p < 1.0 - 1e-12
    if not convergent and scheme.eps <= 0.0:
        raise DomainError(
            "cutoff-dependent regime: (alpha-2)*p >= 1 requires a scheme with eps > 0"
        )
    data = _EnergyData(_arclength_form(curve))
    length, n = data.length, data.n

    def j(w):
        bracket = data.chord2(w) ** (-alpha / 2.0) - 1.0 / (length * abs(w)) ** alpha
        return float(np.mean(bracket**p)) * length**2

    if scheme.eps > 0.0:
        ws = WScheme(inner=1.0 / (8 * n), nodes=scheme.panel_nodes(12), eps=scheme.eps)
        return float(ws.integrate(j, extrapolate=False))

    bounds = panel_boundaries(1.0 / (8 * n))
    total = 0.0
    for i in range(len(bounds) - 1):
        x, wt = gauss_panel(bounds[i + 1], bounds[i], scheme.panel_nodes(len(bounds) - 1))
        total += float(np.dot([j(xx) + j(-xx) for xx in x], wt))
    # local power model J ~ c |w|^beta closes the [0, w_floor] cell
    w_floor = bounds[-1]
    beta = (2.0 - alpha) * p
    total += (j(w_floor) + j(-w_floor)) * w_floor / (1.0 + beta)
    return float(total)


def integrand_diagonal_limit(curve: ClosedCurve, u) -> float:
    """w -> 0 limit of the u-averaged-free energy integrand at parameter u.

    Equals kappa(u)^2 L^2 / 12 for constant-speed curves; raises NotArcLength
    otherwise.
    """
    if not is_arclength(curve):
        raise NotArcLength("diagonal limit assumes constant speed")
    geom = geometry(curve)
    u = np.asarray(u, dtype=float)
    gp = fourier.evaluate_trig(geom.derivative.samples, u)
    gpp = fourier.evaluate_trig(fourier.derivative(curve.samples, order=2), u)
    sp2 = np.sum(np.atleast_2d(gp) ** 2, axis=-1)
    kappa2 = (
        sp2 * np.sum(np.atleast_2d(gpp) ** 2, axis=-1)
        - np.sum(np.atleast_2d(gp) * np.atleast_2d(gpp), axis=-1) ** 2
    ) / sp2**3
    out = kappa2 * geom.length**2 / 12.0
    return float(out[0]) if out.size == 1 else out
