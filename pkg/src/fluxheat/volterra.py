"""The Volterra layer governing the boundary flux.

The flux V(t) = u_x(0,t) of the linear-law problem satisfies the second-kind
Volterra equation

    V(t) = V0(t) - nu * int_0^t R(t - tau) V(tau) dtau,

with the memory kernel R and forcing V0 determined by the source shape and
the initial profile.  This module provides the analytic kernels, a
product-trapezoidal solver, the resolvent form, and residual evaluation of
the equation itself (the primary guard against sign errors in the closed
forms).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import green
from .problem import (
    InitialProfile,
    ProfileKind,
    ShapeKind,
    SourceShape,
    monomial_forcing_constant,
)
from .specfun import exp_moment
from .trajectory import ClosedFormTrajectory, SampledTrajectory

__all__ = [
    "KernelKind",
    "Kernel",
    "Forcing",
    "kernel_for",
    "forcing_for",
    "kernel_eval",
    "forcing_eval",
    "solve_volterra",
    "solve_resolvent",
    "volterra_residual",
    "kernel_bound_check",
    "kernel_lower_bound",
]


class KernelKind(Enum):
    CONSTANT_LAMBDA = "constant_lambda"
    GROWING_EXP = "growing_exp"
    DECAYING_EXP = "decaying_exp"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class Kernel:
    """Memory kernel R(t); analytic kinds are kappa * exp(rho * t)."""

    kind: KernelKind
    lam: float = 1.0
    mu: float = 1.0
    shape: SourceShape | None = None

    @property
    def exp_parts(self) -> tuple[float, float]:
        """(kappa, rho) with R(t) = kappa * exp(rho * t), analytic kinds only."""
        if self.kind is KernelKind.CONSTANT_LAMBDA:
            return self.lam, 0.0
        if self.kind is KernelKind.GROWING_EXP:
            return -self.lam * self.mu, self.lam ** 2
        if self.kind is KernelKind.DECAYING_EXP:
            return -self.lam * self.mu, -(self.lam ** 2)
        raise ValueError("quadrature kernels have no exponential form")


def kernel_for(shape: SourceShape, quadrature: bool = False) -> Kernel:
    """The kernel matching a built-in source shape."""
    if quadrature:
        return Kernel(KernelKind.QUADRATURE, lam=shape.lam, mu=shape.mu, shape=shape)
    if shape.kind is ShapeKind.LINEAR_X:
        return Kernel(KernelKind.CONSTANT_LAMBDA, lam=shape.lam)
    if shape.kind is ShapeKind.NEG_SINH:
        return Kernel(KernelKind.GROWING_EXP, lam=shape.lam, mu=shape.mu)
    if shape.kind is ShapeKind.NEG_SIN:
        return Kernel(KernelKind.DECAYING_EXP, lam=shape.lam, mu=shape.mu)
    raise ValueError(f"no analytic kernel for shape {shape.kind}")


def kernel_eval(k: Kernel, t: float) -> float:
    """R(t) for t > 0; the quadrature kind integrates the defining formula."""
    if t <= 0.0:
        raise ValueError("kernel_eval requires t > 0")
    if k.kind is KernelKind.QUADRATURE:
        shape = k.shape
        pref = 1.0 / (2.0 * math.sqrt(math.pi) * t ** 1.5)
        return pref * green.quad_semiinfinite(
            lambda xi: xi * math.exp(-xi * xi / (4.0 * t)) * shape(xi),
            center=0.0,
            tvar=t,
            growth=shape.growth_rate,
            tol=1e-12,
        )
    kappa, rho = k.exp_parts
    return kappa * math.exp(rho * t)


class ForcingKind(Enum):
    POWER_LAW = "power_law"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class Forcing:
    """Forcing V0(t) of the flux equation.

    The power-law kind is c * t^exponent with exponent (m-1)/2; the
    quadrature kind evaluates the defining Gaussian integral of h'.
    """

    kind: ForcingKind
    c: float = 0.0
    exponent: float = 0.0
    profile: InitialProfile | None = None

    @property
    def initial_value(self) -> float:
        """Limit of V0 (and of V) as t -> 0+."""
        if self.kind is ForcingKind.POWER_LAW:
            return self.c if self.exponent == 0.0 else 0.0
        return self.profile.derivative(1e-300)

    def derivative(self, t: float) -> float:
        if self.kind is not ForcingKind.POWER_LAW:
            raise ValueError("V0' is only available for the power-law kind")
        p = self.exponent
        if p == 0.0:
            return 0.0
        if p == 1.0:
            return self.c
        return self.c * p * t ** (p - 1.0)


def forcing_for(h: InitialProfile, quadrature: bool = False) -> Forcing:
    if quadrature or h.kind is not ProfileKind.MONOMIAL:
        return Forcing(ForcingKind.QUADRATURE, profile=h)
    return Forcing(
        ForcingKind.POWER_LAW,
        c=monomial_forcing_constant(h.eta, h.m),
        exponent=(h.m - 1.0) / 2.0,
    )


def forcing_eval(f: Forcing, t: float) -> float:
    """V0(t) for t > 0."""
    if t <= 0.0:
        raise ValueError("forcing_eval requires t > 0")
    if f.kind is ForcingKind.POWER_LAW:
        if f.exponent == 0.0:
            return f.c
        return f.c * t ** f.exponent
    h = f.profile
    pref = 1.0 / math.sqrt(math.pi * t)
    return pref * green.quad_semiinfinite(
        lambda xi: math.exp(-xi * xi / (4.0 * t)) * h.derivative(xi),
        center=0.0,
        tvar=t,
        growth=h.growth_rate,
        tol=1e-12,
    )


def _kernel_moments(k: Kernel, dt: float, offsets: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Product-integration weights of one step against a hat basis.

    For each offset s_i = t_i - t_{j+1} >= 0 returns (w0_i, w1_i) with

        int_{t_j}^{t_{j+1}} R(t_i - tau) * {1 - theta, theta} dtau,

    theta the local coordinate on the step.  Exact for the exponential-family
    kernels; node-based trapezoid weights otherwise.
    """
    if k.kind is KernelKind.QUADRATURE:
        r_right = np.array([kernel_eval(k, s) if s > 0 else _kernel_limit(k) for s in offsets])
        r_left = np.array([kernel_eval(k, s + dt) for s in offsets])
        return 0.5 * dt * r_left, 0.5 * dt * r_right
    kappa, rho = k.exp_parts
    if rho == 0.0:
        w = 0.5 * dt * kappa
        ones = np.ones_like(offsets)
        return w * ones, w * ones
    # int_0^dt kappa e^{rho (s + dt - u)} * {1 - u/dt, u/dt} du, u = tau - t_j
    m0 = exp_moment(0, -rho, dt)          # int e^{-rho u} du
    m1 = exp_moment(1, -rho, dt) / dt     # int (u/dt) e^{-rho u} du
    base = kappa * np.exp(rho * (offsets + dt))
    return base * (m0 - m1), base * m1


def _kernel_limit(k: Kernel) -> float:
    if k.kind is KernelKind.QUADRATURE:
        return kernel_eval(k, 1e-12)
    kappa, _ = k.exp_parts
    return kappa


def solve_volterra(
    k: Kernel, f: Forcing, nu: float, t_end: float, n_steps: int
) -> SampledTrajectory:
    """Product-trapezoidal solution of the flux equation on a uniform grid.

    Second-order accurate in the step size for smooth forcing (odd-m
    profiles).  The first node takes the known t -> 0+ limit of the flux
    rather than evaluating V0 at 0.
    """
    if nu <= 0.0:
        raise ValueError("solve_volterra requires nu > 0")
    if t_end <= 0.0:
        raise ValueError("solve_volterra requires t_end > 0")
    if n_steps < 2:
        raise ValueError("solve_volterra requires n_steps >= 2")
    dt = t_end / n_steps
    t = np.linspace(0.0, t_end, n_steps + 1)
    v = np.zeros(n_steps + 1)
    v[0] = f.initial_value
    for i in range(1, n_steps + 1):
        offsets = t[i] - t[1 : i + 1]          # t_i - t_{j+1} for j = 0..i-1
        w_left, w_right = _kernel_moments(k, dt, offsets)
        conv_known = float(np.dot(w_left, v[:i]))
        if i > 1:
            conv_known += float(np.dot(w_right[:-1], v[1:i]))
        rhs = forcing_eval(f, t[i]) - nu * conv_known
        v[i] = rhs / (1.0 + nu * float(w_right[-1]))
    return SampledTrajectory(t=t, values=v)


def solve_resolvent(
    k: Kernel, f: Forcing, nu: float, t_end: float, n_steps: int
) -> SampledTrajectory:
    """Resolvent-form solution: solve the kernel-only equation for r, then

        V(t) = V0(0) r(t) + int_0^t V0'(t - tau) r(tau) dtau.

    Requires a power-law forcing with integer exponent (smooth V0').
    """
    if f.kind is not ForcingKind.POWER_LAW:
        raise ValueError("solve_resolvent requires a power-law forcing")
    p = f.exponent
    if p != int(p) or p < 0:
        raise ValueError(
            "solve_resolvent requires integer (m-1)/2; use solve_volterra instead"
        )
    ones = Forcing(ForcingKind.POWER_LAW, c=1.0, exponent=0.0)
    r = solve_volterra(k, ones, nu, t_end, n_steps)
    t = r.t
    v = f.initial_value * r.values.copy()
    if p >= 1:
        dt = r.step
        if p == 1:
            deriv = lambda s: np.full_like(s, f.c)  # noqa: E731
        else:
            deriv = lambda s: f.c * p * s ** (p - 1.0)  # noqa: E731
        for i in range(1, len(t)):
            kern = deriv(t[i] - t[: i + 1]) * r.values[: i + 1]
            v[i] += float(np.trapezoid(kern, dx=dt))
    return SampledTrajectory(t=t, values=v)


def _convolution(k: Kernel, traj, t: float) -> float:
    """int_0^t R(t - tau) V(tau) dtau; exact for closed-form trajectories."""
    if isinstance(traj, ClosedFormTrajectory):
        kappa, rho = k.exp_parts
        return kappa * math.exp(rho * t) * traj.weighted_integral(-rho, t)
    ts = np.asarray(traj.t)
    mask = ts <= t + 1e-15
    ts = ts[mask]
    vs = np.asarray(traj.values)[mask]
    if len(ts) < 2:
        return 0.0
    kern = np.array([kernel_eval(k, t - s) if t - s > 0 else _kernel_limit(k) for s in ts])
    return float(np.trapezoid(kern * vs, ts))


def volterra_residual(traj, k: Kernel, f: Forcing, nu: float, t_samples) -> float:
    """Max over the samples of |V(t) - V0(t) + nu int_0^t R(t-tau)V(tau)dtau|."""
    worst = 0.0
    for t in t_samples:
        res = float(traj(t)) - forcing_eval(f, t) + nu * _convolution(k, traj, t)
        worst = max(worst, abs(res))
    return worst


def kernel_lower_bound(k: Kernel, dt: float) -> float:
    """The comparison function f(dt) of the solvability hypothesis."""
    lam, mu = k.lam, k.mu
    if k.kind is KernelKind.CONSTANT_LAMBDA:
        return -lam * dt
    if k.kind is KernelKind.GROWING_EXP:
        return -mu / lam * (math.exp(lam ** 2 * dt) - 1.0)
    if k.kind is KernelKind.DECAYING_EXP:
        return -mu / lam * (1.0 - math.exp(-(lam ** 2) * dt))
    raise ValueError("no analytic bound for quadrature kernels")


def kernel_bound_check(k: Kernel, t1: float, t2: float) -> bool:
    """Whether int_{t1}^{t2} R(t2 - tau) dtau >= f(t2 - t1).

    Both sides are evaluated analytically; the inequality holds for every
    built-in kernel (with equality for the sinh/sin ones), so this exists to
    document and regression-test the hypothesis.
    """
    if not (0.0 < t1 < t2):
        raise ValueError("kernel_bound_check requires 0 < t1 < t2")
    dt = t2 - t1
    kappa, rho = k.exp_parts
    lhs = kappa * dt if rho == 0.0 else kappa * (math.exp(rho * dt) - 1.0) / rho
    rhs = kernel_lower_bound(k, dt)
    return lhs >= rhs - 1e-12 * (1.0 + abs(rhs))
