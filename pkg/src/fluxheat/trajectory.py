"""Boundary-flux trajectories V(t) = u_x(0,t).

Closed-form trajectories carry exactly the polynomial-plus-exponential
structure of the explicit flux formulas, so time integrals weighted by
exponentials evaluate exactly through :func:`fluxheat.specfun.exp_moment`.
Sampled trajectories come out of the numeric solvers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .specfun import exp_moment, exp_moment_parts

__all__ = ["ClosedFormTrajectory", "SampledTrajectory"]


@dataclass(frozen=True)
class ClosedFormTrajectory:
    """V(t) = poly(t) + sum_i amp_i * exp(rate_i * t).

    ``poly`` holds ascending coefficients.  ``initial_value`` is the t -> 0+
    limit, which is eta for m = 1 profiles and 0 for m > 1.
    """

    poly: tuple[float, ...] = (0.0,)
    exps: tuple[tuple[float, float], ...] = ()   # (amplitude, rate) pairs

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for j in range(len(self.poly) - 1, -1, -1):
            out = out * t + self.poly[j]
        with np.errstate(over="ignore"):
            for amp, rate in self.exps:
                out = out + amp * np.exp(rate * t)
        if out.ndim == 0:
            return float(out)
        return out

    @property
    def initial_value(self) -> float:
        return self.poly[0] + sum(amp for amp, _ in self.exps)

    def weighted_integral(self, rate: float, t: float) -> float:
        """Exact int_0^t V(tau) exp(rate*tau) dtau."""
        if t == 0.0:
            return 0.0
        total = 0.0
        for j, coef in enumerate(self.poly):
            if coef != 0.0:
                total += coef * exp_moment(j, rate, t)
        for amp, r in self.exps:
            total += amp * exp_moment(0, rate + r, t)
        return total

    def integral(self, t: float) -> float:
        """Exact int_0^t V(tau) dtau."""
        return self.weighted_integral(0.0, t)

    def decay_weighted_integral(self, b: float, t: float) -> float:
        """Exact exp(-b*t) * int_0^t V(tau) exp(b*tau) dtau, b > 0.

        Evaluated in pre-scaled form so it stays finite for arbitrarily large
        b*t, where the plain weighted integral would overflow.  Used with
        b*t large; near t = 0 prefer ``weighted_integral``.
        """
        if t == 0.0:
            return 0.0
        total = 0.0
        for j, coef in enumerate(self.poly):
            if coef != 0.0:
                q, const = exp_moment_parts(j, b)
                val = 0.0
                for k in range(len(q) - 1, -1, -1):
                    val = val * t + q[k]
                total += coef * (val + const * math.exp(-b * t))
        for amp, r in self.exps:
            s = b + r
            if s == 0.0:
                total += amp * t * math.exp(-b * t)
            else:
                total += amp * (math.exp(r * t) - math.exp(-b * t)) / s
        return total

    def scaled(self, factor: float) -> "ClosedFormTrajectory":
        return ClosedFormTrajectory(
            poly=tuple(factor * c for c in self.poly),
            exps=tuple((factor * a, r) for a, r in self.exps),
        )


@dataclass(frozen=True)
class SampledTrajectory:
    """Flux samples V_i at uniform times t_i, interpolated linearly."""

    t: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if len(self.t) != len(self.values):
            raise ValueError("sample times and values must have equal length")
        if len(self.t) < 2:
            raise ValueError("a sampled trajectory needs at least two samples")

    def __call__(self, t):
        scalar = np.isscalar(t)
        out = np.interp(np.asarray(t, dtype=float), self.t, self.values)
        return float(out) if scalar else out

    @property
    def initial_value(self) -> float:
        return float(self.values[0])

    @property
    def step(self) -> float:
        return float(self.t[1] - self.t[0])

    def weighted_integral(self, rate: float, t: float) -> float:
        """Trapezoidal int_0^t V(tau) exp(rate*tau) dtau on the sample grid."""
        mask = self.t <= t + 1e-15
        ts = self.t[mask]
        vs = self.values[mask]
        if ts[-1] < t - 1e-12:
            ts = np.append(ts, t)
            vs = np.append(vs, self(t))
        return float(np.trapezoid(vs * np.exp(rate * ts), ts))

    def integral(self, t: float) -> float:
        return self.weighted_integral(0.0, t)
