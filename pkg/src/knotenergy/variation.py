"""First variation of the chord-arc energy and its bilinear decomposition.

All forms are evaluated on the unit-length normalization (curve and test
field divided by the length): the first variation is invariant under joint
scaling, and the Q/T1/T2 decomposition and the stationarity equation
Q = T1 + T2 hold verbatim for |gamma'| = 1.  The three bilinear-form
integrands and the first-variation integrand satisfy the pointwise identity

    fv/2 = q - t1 - t2,

so all four are integrated with the same node set and the decomposition
survives discretization to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fourier
from .curve import ClosedCurve, PeriodicField, geometry, is_arclength
from .errors import DegenerateCurve, DomainError, NotArcLength
from .quadrature import WScheme

__all__ = [
    "TestField",
    "ELReport",
    "first_variation",
    "first_variation_general",
    "first_variation_windowed",
    "first_variation_gradient",
    "q_form",
    "q_limit",
    "t1_form",
    "t2_form",
    "el_residual",
    "g_alpha",
    "t_alpha_op",
    "t1_via_t_alpha",
    "t2_via_t_alpha",
    "gradient_vector",
    "trig_basis_fields",
    "normal_mode_field",
]

DEFAULT_NODES = 16
TAU_NODES = 24


@dataclass(frozen=True, eq=False)
class TestField:
    """Test direction h with its spectral derivative."""

    field: PeriodicField
    derivative: PeriodicField

    @classmethod
    def from_samples(cls, samples) -> "TestField":
        f = PeriodicField(samples)
        return cls(field=f, derivative=f.derivative())


@dataclass(frozen=True, eq=False)
class ELReport:
    """Q/T1/T2 values and the stationarity residual for one test field."""

    q_value: float
    t1_value: float
    t2_value: float
    residual: float
    per_mode_residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))


def _h_samples(h) -> np.ndarray:
    if isinstance(h, TestField):
        return np.asarray(h.field.samples, dtype=float)
    if isinstance(h, PeriodicField):
        return np.asarray(h.samples, dtype=float)
    return np.asarray(h, dtype=float)


class _Pair:
    """Unit-length-normalized (curve, test field) with cached transforms."""

    def __init__(self, curve: ClosedCurve, h, require_arclength: bool = True, rel_tol: float = 1e-6):
        if require_arclength and not is_arclength(curve, rel_tol):
            raise NotArcLength("operation requires a constant-speed curve")
        geom = geometry(curve)
        self.length = geom.length
        self.n = curve.n
        self.g = curve.samples / self.length
        hs = _h_samples(h)
        if hs.shape != curve.samples.shape:
            raise DomainError("test field must match the curve grid")
        self.h = hs / self.length
        self.gp = fourier.derivative(self.g)
        self.hp = fourier.derivative(self.h)
        self.dot_gphp = np.sum(self.gp * self.hp, axis=1)
        self.a = float(self.dot_gphp.mean())
        self._cg = np.fft.rfft(self.g, axis=0)
        self._ch = np.fft.rfft(self.h, axis=0)
        self._cgp = np.fft.rfft(self.gp, axis=0)
        self._chp = np.fft.rfft(self.hp, axis=0)

    def _shift(self, coeffs, w):
        n = self.n
        k = np.arange(n // 2 + 1)
        phase = np.exp(2j * np.pi * k * w)
        phase[-1] = np.cos(np.pi * n * w)
        return np.fft.irfft(coeffs * phase[:, None], n=n, axis=0)

    def deltas(self, w: float):
        dg = self._shift(self._cg, w) - self.g
        dh = self._shift(self._ch, w) - self.h
        return dg, dh

    def gp_at(self, w: float):
        return self._shift(self._cgp, w)

    def hp_at(self, w: float):
        return self._shift(self._chp, w)

    def scheme(self, nodes: int = DEFAULT_NODES, eps: float = 0.0) -> WScheme:
        return WScheme(inner=1.0 / (8 * self.n), nodes=nodes, eps=eps)


def _bundle_j(pair: _Pair, w: float) -> np.ndarray:
    """u-averaged integrands (q, t1, t2, fv) at one signed w."""
    dg, dh = pair.deltas(w)
    ch2 = np.sum(dg * dg, axis=1)
    dgdh = np.sum(dg * dh, axis=1)
    w2 = w * w
    q = pair.a / w2 - float(dgdh.mean()) / (w2 * w2)
    t1 = -float(np.mean(pair.dot_gphp * (1.0 / ch2 - 1.0 / w2)))
    t2 = float(np.mean(dgdh * (1.0 / ch2**2 - 1.0 / w2**2)))
    fv = 2.0 * float(np.mean(pair.dot_gphp / ch2 - dgdh / ch2**2))
    return np.array([q, t1, t2, fv])


def _bundle(curve, h, nodes=DEFAULT_NODES, extrapolate=True) -> np.ndarray:
    pair = _Pair(curve, h)
    return pair.scheme(nodes).integrate(lambda w: _bundle_j(pair, w), extrapolate=extrapolate)


def first_variation(curve: ClosedCurve, h, scheme=None) -> float:
    """Directional derivative of the chord-arc energy at an arc-length curve.

    Linear in h; matches central finite differences of the energy.
    """
    nodes = _nodes_of(scheme)
    return float(_bundle(curve, h, nodes)[3])


def q_form(curve: ClosedCurve, h, eps: float) -> float:
    """Leading bilinear form Q_eps over eps < |w| <= 1/2."""
    if not 0.0 < eps < 0.5:
        raise DomainError("eps must lie in (0, 1/2)")
    pair = _Pair(curve, h)
    return float(pair.scheme(eps=eps).integrate(lambda w: _bundle_j(pair, w), extrapolate=False)[0])


def q_limit(curve: ClosedCurve, h, scheme=None) -> float:
    """eps -> 0 limit of Q_eps (dyadic ladder, Richardson extrapolated)."""
    return float(_bundle(curve, h, _nodes_of(scheme))[0])


def t1_form(curve: ClosedCurve, h, scheme=None) -> float:
    """Lower-order form with the (1/chord^2 - 1/w^2) bracket (sign included)."""
    return float(_bundle(curve, h, _nodes_of(scheme))[1])


def t2_form(curve: ClosedCurve, h, scheme=None) -> float:
    """Lower-order form with the (1/chord^4 - 1/w^4) bracket."""
    return float(_bundle(curve, h, _nodes_of(scheme))[2])


def el_residual(curve: ClosedCurve, h, basis=None, scheme=None) -> ELReport:
    """Stationarity residual Q - T1 - T2 for h, plus optional basis sweep.

    Basis fields are normalized to unit grid L2 norm, so the per-mode
    residuals are per unit test-field norm.
    """
    nodes = _nodes_of(scheme)
    q, t1, t2, _ = _bundle(curve, h, nodes)
    per_mode = np.zeros(0)
    if basis is not None:
        vals = []
        for b in basis:
            bs = _h_samples(b)
            norm = np.sqrt(np.mean(np.sum(bs * bs, axis=1)))
            bq, bt1, bt2, _ = _bundle(curve, bs / norm, nodes)
            vals.append(bq - bt1 - bt2)
        per_mode = np.asarray(vals)
    return ELReport(
        q_value=float(q),
        t1_value=float(t1),
        t2_value=float(t2),
        residual=float(q - t1 - t2),
        per_mode_residuals=per_mode,
    )


def _nodes_of(scheme) -> int:
    if scheme is None:
        return DEFAULT_NODES
    n_w = getattr(scheme, "n_w", None)
    if not n_w:
        return DEFAULT_NODES
    return max(8, int(n_w) // 22)  # ~11 dyadic panels, two signs


# ---------------------------------------------------------------------------
# general (non-arc-length) first variation

def first_variation_general(curve: ClosedCurve, h, scheme=None) -> float:
    """First variation for any regular injective parametrization.

    Computed through the exact chain identity delta E(gamma; h) =
    delta E(gamma o sigma; h o sigma) with sigma the arc-length chart: the
    energy is parametrization invariant, so transporting the pair to
    constant speed changes nothing, and there the windowed first-variation
    formula converges to the true derivative.  (The windowed general-form
    integral, exposed as first_variation_windowed, does NOT converge to the
    derivative for tangential directions at non-constant speed: its
    derivative mass escapes into the shrinking cutoff window.)
    """
    from .curve import arclength_chart

    hs = _h_samples(h)
    if hs.shape != curve.samples.shape:
        raise DomainError("test field must match the curve grid")
    if is_arclength(curve):
        return first_variation(curve, hs, scheme)
    chart = arclength_chart(curve, curve.n)
    transported = ClosedCurve(curve.evaluate(chart))
    h_chart = fourier.evaluate_trig(hs, chart)
    return first_variation(transported, h_chart, scheme)


def first_variation_windowed(curve: ClosedCurve, h, eps: float, scheme=None) -> float:
    """Cutoff first variation of the truncated energy, any parametrization.

    Matches central finite differences of truncated_energy at the same eps.
    Includes the variation of the intrinsic distance with the arc-side
    branch chosen by comparing cumulative arclength to half the length
    (exact ties take the near branch); the far branch carries the
    total-length variation in addition to the sign-flipped arc term.
    """
    if not 0.0 < eps < 0.5:
        raise DomainError("eps must lie in (0, 1/2)")
    geom = geometry(curve)
    n, length = curve.n, geom.length
    hs = _h_samples(h)
    if hs.shape != curve.samples.shape:
        raise DomainError("test field must match the curve grid")
    hp = fourier.derivative(hs)
    speed = geom.speed.samples
    gp = geom.derivative.samples
    that = gp / speed[:, None]
    psi = fourier.PeriodicAntiderivative(np.sum(that * hp, axis=1))
    lam = fourier.PeriodicAntiderivative(speed)

    c_curve = np.fft.rfft(curve.samples, axis=0)
    c_h = np.fft.rfft(hs, axis=0)
    c_speed = np.fft.rfft(speed, axis=0)
    k = np.arange(n // 2 + 1)
    dot_gp_hp_over_sp2 = np.sum(gp * hp, axis=1) / speed**2
    lam0 = lam.grid_values()
    psi0 = psi.grid_values()

    def shift(c, w, vec):
        phase = np.exp(2j * np.pi * k * w)
        phase[-1] = np.cos(np.pi * n * w)
        f = phase[:, None] if vec else phase
        return np.fft.irfft(c * f, n=n, axis=0)

    def j(w):
        dg = shift(c_curve, w, True) - curve.samples
        dh = shift(c_h, w, True) - hs
        ch2 = np.sum(dg * dg, axis=1)
        speed_w = shift(c_speed, w, False)
        ell = np.abs(lam.shifted_grid(w) - lam0)
        d_far = length - ell
        # near branch varies the arc itself; the far branch is the total
        # length minus that arc, so its variation picks up delta(L) as well.
        # Everything is written as smooth near-branch terms plus a smooth
        # far-branch correction integrated against the branch indicator, so
        # the branch switch costs no quadrature accuracy.
        darc = np.sign(w) * (psi.shifted_grid(w) - psi0)
        weight = speed_w * speed
        base = (
            (1.0 / ch2 - 1.0 / ell**2) * dot_gp_hp_over_sp2
            - np.sum(dg * dh, axis=1) / ch2**2
            + darc / ell**3
        ) * weight
        far_corr = (
            (1.0 / ell**2 - 1.0 / d_far**2) * dot_gp_hp_over_sp2
            + (psi.mean - darc) / d_far**3
            - darc / ell**3
        ) * weight
        return 2.0 * float(base.mean() + fourier.region_mean(far_corr, 0.5 * length - ell))

    pairless = WScheme(inner=1.0 / (8 * n), nodes=_nodes_of(scheme), eps=eps)
    return float(pairless.integrate(j, extrapolate=False))


# ---------------------------------------------------------------------------
# G^alpha and the T^alpha operators

def _g_alpha_of_r(r, alpha: float):
    """(1 - r^alpha) / ((1 - r^2) * 2 r^alpha), continuous across r = 1."""
    r = np.asarray(r, dtype=float)
    out = np.empty_like(r)
    x = r - 1.0
    near = np.abs(x) < 1e-4
    xn = x[near]
    a = alpha
    num = a + a * (a - 1.0) * xn / 2.0 + a * (a - 1.0) * (a - 2.0) * xn**2 / 6.0
    out[near] = num / (2.0 + xn) / (2.0 * r[near] ** a)
    rf = r[~near]
    out[~near] = (1.0 - rf**a) / (1.0 - rf**2) / (2.0 * rf**a)
    return out


def g_alpha(z, alpha: float) -> float:
    """Chord-ratio kernel with its removable singularity at |z| = 1."""
    z = np.asarray(z, dtype=float)
    r = np.linalg.norm(z, axis=-1) if z.ndim > 0 and z.shape[-1] > 1 else np.abs(z)
    if np.any(r == 0.0):
        raise DomainError("g_alpha undefined at the origin")
    out = _g_alpha_of_r(np.atleast_1d(r), alpha)
    return float(out[0]) if out.size == 1 else out.reshape(np.shape(r))


def t_alpha_op(
    curve: ClosedCurve,
    h,
    alpha: float,
    s1: float,
    s2: float,
    tau1: float,
    tau2: float,
    scheme=None,
) -> float:
    """Linear operator with the G^alpha kernel and shifted derivative factors."""
    for name, val in (("s1", s1), ("s2", s2), ("tau1", tau1), ("tau2", tau2)):
        if not 0.0 <= val <= 1.0:
            raise DomainError(f"{name} must lie in [0, 1]")
    pair = _Pair(curve, h)

    def j(w):
        dg, _ = pair.deltas(w)
        r = np.linalg.norm(dg, axis=1) / abs(w)
        gk = _g_alpha_of_r(r, alpha)
        dtau = pair.gp_at(tau1 * w) - pair.gp_at(tau2 * w)
        dots = np.sum(pair.gp_at(s1 * w) * pair.hp_at(s2 * w), axis=1)
        return float(np.mean(gk * np.sum(dtau * dtau, axis=1) / w**2 * dots))

    return float(pair.scheme(_nodes_of(scheme)).integrate(j, extrapolate=True))


def _gauss01(m: int):
    x, w = np.polynomial.legendre.leggauss(m)
    return 0.5 * (x + 1.0), 0.5 * w


def t1_via_t_alpha(curve: ClosedCurve, h, nodes: int = TAU_NODES) -> float:
    """T1 reconstructed as -double integral of T^2_{0,0,tau1,tau2}.

    The tensor Gauss sum over (tau1, tau2) is factorized through
    sum_{ij} w_i w_j |a_i - a_j|^2 = 2 sum w|a|^2 - 2 |sum w a|^2.
    """
    pair = _Pair(curve, h)
    tx, tw = _gauss01(nodes)

    def j(w):
        dg, _ = pair.deltas(w)
        r = np.linalg.norm(dg, axis=1) / abs(w)
        gk = _g_alpha_of_r(r, 2.0)
        sq_sum = np.zeros(pair.n)
        bar = np.zeros_like(pair.gp)
        for t, wt in zip(tx, tw):
            gpt = pair.gp_at(t * w)
            sq_sum += wt * np.sum(gpt * gpt, axis=1)
            bar += wt * gpt
        s_fact = 2.0 * sq_sum - 2.0 * np.sum(bar * bar, axis=1)
        return -float(np.mean(gk * s_fact / w**2 * pair.dot_gphp))

    return float(pair.scheme().integrate(j, extrapolate=True))


def t2_via_t_alpha(curve: ClosedCurve, h, nodes: int = TAU_NODES) -> float:
    """T2 reconstructed as the fourfold parameter integral of T^4."""
    pair = _Pair(curve, h)
    tx, tw = _gauss01(nodes)

    def j(w):
        dg, _ = pair.deltas(w)
        r = np.linalg.norm(dg, axis=1) / abs(w)
        gk = _g_alpha_of_r(r, 4.0)
        sq_sum = np.zeros(pair.n)
        gbar = np.zeros_like(pair.gp)
        hbar = np.zeros_like(pair.hp)
        for t, wt in zip(tx, tw):
            gpt = pair.gp_at(t * w)
            sq_sum += wt * np.sum(gpt * gpt, axis=1)
            gbar += wt * gpt
            hbar += wt * pair.hp_at(t * w)
        s_fact = 2.0 * sq_sum - 2.0 * np.sum(gbar * gbar, axis=1)
        p_fact = np.sum(gbar * hbar, axis=1)
        return float(np.mean(gk * s_fact / w**2 * p_fact))

    return float(pair.scheme().integrate(j, extrapolate=True))


# ---------------------------------------------------------------------------
# gradient assembly

def trig_basis_scalars(n: int, count: int) -> list[np.ndarray]:
    """Unit-L2 scalar basis 1, sqrt2 cos, sqrt2 sin, ... on the grid."""
    u = fourier.grid(n)
    out = [np.ones(n)]
    k = 1
    while len(out) < count:
        out.append(np.sqrt(2.0) * np.cos(2 * np.pi * k * u))
        if len(out) < count:
            out.append(np.sqrt(2.0) * np.sin(2 * np.pi * k * u))
        k += 1
    return out[:count]


def trig_basis_fields(curve: ClosedCurve, basis_size: int) -> list[TestField]:
    """Coordinate-axis trigonometric test fields, axis-major ordering."""
    fields = []
    for axis in range(curve.dim):
        for scalar in trig_basis_scalars(curve.n, basis_size):
            samples = np.zeros((curve.n, curve.dim))
            samples[:, axis] = scalar
            fields.append(TestField.from_samples(samples))
    return fields


def normal_mode_field(curve: ClosedCurve, k: int, kind: str = "cos") -> TestField:
    """Unit-norm normal perturbation cos/sin(2 pi k u) * nu for planar curves."""
    if curve.dim != 2:
        raise DomainError("normal modes need a planar curve")
    geom = geometry(curve)
    tang = geom.derivative.samples / geom.speed.samples[:, None]
    nu = np.column_stack([-tang[:, 1], tang[:, 0]])
    u = fourier.grid(curve.n)
    osc = np.cos(2 * np.pi * k * u) if kind == "cos" else np.sin(2 * np.pi * k * u)
    samples = osc[:, None] * nu
    norm = np.sqrt(np.mean(np.sum(samples * samples, axis=1)))
    return TestField.from_samples(samples / norm)


def gradient_vector(curve: ClosedCurve, basis_size: int, scheme=None) -> np.ndarray:
    """First variation against the coordinate trig basis (axis-major)."""
    return np.array(
        [first_variation(curve, b, scheme) for b in trig_basis_fields(curve, basis_size)]
    )


def first_variation_gradient(curve: ClosedCurve, scheme=None) -> PeriodicField:
    """Grid L2 representative of the first variation.

    Satisfies first_variation(curve, h) = mean <Grad, h> for every grid test
    field h, up to quadrature: the h'-pairing is moved onto the gradient by
    the (exactly skew-adjoint) spectral derivative, the difference pairing by
    the substitution u -> u - w.
    """
    if not is_arclength(curve, 1e-3):
        raise NotArcLength("gradient assembly assumes near-constant speed")
    geom = geometry(curve)
    length, n = geom.length, curve.n
    g = curve.samples / length
    gp = fourier.derivative(g)
    cg = np.fft.rfft(g, axis=0)
    k = np.arange(n // 2 + 1)

    def shift(c, w):
        phase = np.exp(2j * np.pi * k * w)
        phase[-1] = np.cos(np.pi * n * w)
        return np.fft.irfft(c * phase[:, None], n=n, axis=0)

    def j(w):
        dg = shift(cg, w) - g
        dg_back = g - shift(cg, -w)
        ch2 = np.sum(dg * dg, axis=1)
        ch2_back = np.sum(dg_back * dg_back, axis=1)
        term_a = -fourier.derivative(2.0 * gp / ch2[:, None])
        term_b = 2.0 * (dg / ch2[:, None] ** 2 - dg_back / ch2_back[:, None] ** 2)
        return term_a + term_b

    scheme_w = WScheme(inner=1.0 / (8 * n), nodes=_nodes_of(scheme))
    grad = scheme_w.integrate(j, extrapolate=True)
    return PeriodicField(grad / length)
