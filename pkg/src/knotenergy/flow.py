"""Energy minimization by Sobolev-preconditioned gradient descent.

The raw L2 gradient field is preconditioned per coordinate with the
multiplier (1 + (2 pi k)^2)^{-sigma/2} (sigma = 3/2 matches the natural
finite-energy regularity), the step is chosen by Armijo backtracking on the
true energy, and the curve is re-reparametrized to constant speed on a fixed
cadence so the arc-length gradient formula stays valid.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import fourier
from .curve import ClosedCurve, PeriodicField, injectivity_margin, reparametrize_arclength
from .energy import moebius_energy
from .errors import DegenerateCurve, DomainError
from .variation import (
    el_residual,
    first_variation_gradient,
    normal_mode_field,
    trig_basis_fields,
)

__all__ = ["FlowOptions", "FlowState", "sobolev_gradient", "flow_step", "minimize", "stationarity_report"]


@dataclass(frozen=True)
class FlowOptions:
    max_steps: int = 200
    step0: float = 0.25
    beta: float = 0.5
    armijo_c1: float = 1e-4
    precondition_exponent: float = 1.5
    reparam_interval: int = 5
    grad_tol: float = 1e-3
    basis_size: int = 8
    max_backtracks: int = 30

    def __post_init__(self):
        if self.step0 <= 0 or not 0 < self.beta < 1 or not 0 < self.armijo_c1 < 1:
            raise DomainError("need step0 > 0, beta and armijo_c1 in (0, 1)")
        if self.max_steps < 0 or self.reparam_interval < 1 or self.grad_tol <= 0:
            raise DomainError("bad flow bounds")


@dataclass(frozen=True, eq=False)
class FlowState:
    curve: ClosedCurve
    energy: float
    grad_norm: float
    step_count: int
    energy_trace: tuple
    accepted_step: float
    terminated: bool = False
    termination_reason: str = ""
    margin_floor: float = field(default=0.0, repr=False)


def _precondition(grad: np.ndarray, sigma: float) -> np.ndarray:
    n = grad.shape[0]
    c = np.fft.rfft(grad, axis=0)
    k = np.arange(n // 2 + 1)
    mult = (1.0 + (2 * np.pi * k) ** 2) ** (-sigma / 2.0)
    return np.fft.irfft(c * mult[:, None], n=n, axis=0)


def sobolev_gradient(curve: ClosedCurve, sigma: float = 1.5) -> PeriodicField:
    """Preconditioned gradient field; its negative is a descent direction.

    sigma = 0 reproduces the raw L2 gradient exactly.
    """
    raw = first_variation_gradient(curve)
    if sigma == 0.0:
        return raw
    return PeriodicField(_precondition(raw.samples, sigma))


def _l2_norm(samples: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.sum(samples * samples, axis=1))))


def initial_state(curve: ClosedCurve, options: FlowOptions | None = None) -> FlowState:
    options = options or FlowOptions()
    curve = reparametrize_arclength(curve)
    energy = moebius_energy(curve)
    return FlowState(
        curve=curve,
        energy=energy,
        grad_norm=float("nan"),
        step_count=0,
        energy_trace=(energy,),
        accepted_step=0.0,
        margin_floor=0.5 * injectivity_margin(curve),
    )


def flow_step(state: FlowState, options: FlowOptions) -> FlowState:
    """One Armijo-backtracked descent step with the topology guard.

    Accepted steps strictly decrease the energy (measured after any due
    reparametrization); a persistent injectivity-margin violation terminates
    the flow with reason self_intersection_imminent.
    """
    if state.terminated:
        return state
    raw = first_variation_gradient(state.curve)
    grad_norm = _l2_norm(raw.samples)
    if grad_norm < options.grad_tol:
        return replace(state, grad_norm=grad_norm, terminated=True, termination_reason="grad_tol")
    direction = _precondition(raw.samples, options.precondition_exponent)
    direction = direction / _l2_norm(direction)
    slope = float(np.mean(np.sum(raw.samples * direction, axis=1)))

    reparam_due = (state.step_count + 1) % options.reparam_interval == 0
    t = options.step0 if state.accepted_step == 0.0 else min(
        options.step0, state.accepted_step / options.beta
    )
    margin_violations = 0
    for _ in range(options.max_backtracks):
        trial = ClosedCurve(state.curve.samples - t * direction)
        if injectivity_margin(trial) < state.margin_floor:
            margin_violations += 1
            t *= options.beta
            continue
        if reparam_due:
            trial = reparametrize_arclength(trial)
        try:
            energy = moebius_energy(trial)
        except DegenerateCurve:
            margin_violations += 1
            t *= options.beta
            continue
        if energy <= state.energy - options.armijo_c1 * t * slope and energy < state.energy:
            return replace(
                state,
                curve=trial,
                energy=energy,
                grad_norm=grad_norm,
                step_count=state.step_count + 1,
                energy_trace=state.energy_trace + (energy,),
                accepted_step=t,
            )
        t *= options.beta
    reason = (
        "self_intersection_imminent"
        if margin_violations == options.max_backtracks
        else "line_search_failed"
    )
    return replace(state, grad_norm=grad_norm, terminated=True, termination_reason=reason)


def minimize(curve0: ClosedCurve, options: FlowOptions | None = None) -> FlowState:
    """Descend from curve0 until grad_tol, max_steps, or a guard fires."""
    options = options or FlowOptions()
    state = initial_state(curve0, options)
    while not state.terminated and state.step_count < options.max_steps:
        state = flow_step(state, options)
    if not state.terminated:
        raw = first_variation_gradient(state.curve)
        state = replace(
            state,
            grad_norm=_l2_norm(raw.samples),
            terminated=True,
            termination_reason="max_steps",
        )
    return state


def stationarity_report(curve: ClosedCurve, modes: int = 8) -> dict:
    """Per-mode Euler-Lagrange residual sweep for the final report."""
    curve = reparametrize_arclength(curve)
    if curve.dim == 2:
        basis = [normal_mode_field(curve, k) for k in range(1, modes + 1)]
    else:
        basis = trig_basis_fields(curve, max(3, modes // curve.dim + 1))[:modes]
    report = el_residual(curve, basis[0], basis=basis)
    return {
        "per_mode_residuals": report.per_mode_residuals.tolist(),
        "max_residual": float(np.max(np.abs(report.per_mode_residuals))),
    }
