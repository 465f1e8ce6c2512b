"""Quadrature for the singular w-integrals.

All the double integrals in this package reduce, after averaging over the
periodic u variable, to one-dimensional integrals of a function J(w) on
[-1/2, 1/2] that is smooth away from w = 0 and (after the built-in
cancellations) extends continuously to 0.  We integrate with Gauss-Legendre
nodes inside dyadic panels [2^-j-1, 2^-j], mirrored in sign, and recover the
epsilon -> 0 limit by Richardson extrapolation on the two innermost dyadic
cutoffs (the omitted mass is eps*J(0) + O(eps^3) because the u-averaged
integrand is even in w).
"""

from __future__ import annotations

import numpy as np

__all__ = ["WScheme", "gauss_panel", "panel_boundaries"]

_GAUSS_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss(m: int):
    if m not in _GAUSS_CACHE:
        _GAUSS_CACHE[m] = np.polynomial.legendre.leggauss(m)
    return _GAUSS_CACHE[m]


def gauss_panel(a: float, b: float, m: int):
    """Gauss-Legendre nodes and weights on [a, b]."""
    x, w = _gauss(m)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w


def panel_boundaries(inner: float, outer: float = 0.5):
    """Dyadic boundaries outer, outer/2, ..., down to inner (inner included)."""
    bounds = [outer]
    b = outer
    while b / 2.0 > inner * (1.0 + 1e-12):
        b /= 2.0
        bounds.append(b)
    bounds.append(inner)
    return np.array(bounds)


class WScheme:
    """Signed dyadic-panel scheme with an epsilon ladder.

    Parameters
    ----------
    inner : smallest dyadic cutoff (ladder floor), e.g. 1/(8N).
    nodes : Gauss nodes per panel and sign.
    eps   : optional hard cutoff; integration runs over eps < |w| <= 1/2 and
            no limit extrapolation is attempted.
    """

    def __init__(self, inner: float, nodes: int = 16, eps: float = 0.0):
        if eps < 0 or eps >= 0.5:
            raise ValueError("eps must lie in [0, 1/2)")
        self.eps = float(eps)
        self.nodes = int(nodes)
        lo = max(inner, eps) if eps > 0 else inner
        self.bounds = panel_boundaries(lo)
        if eps > 0:
            self.bounds = self.bounds[self.bounds >= eps * (1.0 - 1e-12)]
            if abs(self.bounds[-1] - eps) > 1e-12 * eps:
                self.bounds = np.append(self.bounds, eps)
        xs, ws, panel_of = [], [], []
        for i in range(len(self.bounds) - 1):
            x, w = gauss_panel(self.bounds[i + 1], self.bounds[i], self.nodes)
            xs.append(x)
            ws.append(w)
            panel_of.append(np.full(x.shape, i))
        self.x = np.concatenate(xs)
        self.w = np.concatenate(ws)
        self.panel_of = np.concatenate(panel_of)

    def _per_panel(self, j_of_w):
        vals = [j_of_w(w) + j_of_w(-w) for w in self.x]
        stacked = np.stack([np.asarray(v, dtype=float) for v in vals])
        weighted = stacked * self.w.reshape((-1,) + (1,) * (stacked.ndim - 1))
        per_panel = np.zeros((len(self.bounds) - 1,) + stacked.shape[1:])
        np.add.at(per_panel, self.panel_of, weighted)
        return per_panel

    def integrate(self, j_of_w, extrapolate: bool = True):
        """Integral of j over +-[cutoff, 1/2]; j may be scalar or array valued.

        j_of_w is called once per signed node and must return the u-averaged
        integrand value.  With eps == 0 and extrapolate, the two innermost
        dyadic cutoffs are Richardson-combined to the eps -> 0 limit (the
        omitted mass is linear in the cutoff for integrands continuous at 0).
        """
        per_panel = self._per_panel(j_of_w)
        total = per_panel.sum(axis=0)
        if self.eps > 0 or not extrapolate or per_panel.shape[0] < 2:
            return total if total.ndim else float(total)
        out = 2.0 * total - (total - per_panel[-1])
        return out if out.ndim else float(out)

    def ladder_values(self, j_of_w):
        """(cutoffs, F(cutoff)) for every dyadic panel boundary."""
        per_panel = self._per_panel(j_of_w)
        return self.bounds[1:], np.cumsum(per_panel, axis=0)
