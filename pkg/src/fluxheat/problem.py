"""Problem descriptions: source shape, flux law, initial profile.

A :class:`ProblemSpec` bundles the data of one half-line heat problem whose
source couples to the boundary heat flux,

    u_t - u_xx = -Phi(x) * F(u_x(0,t), t),   u(x,0) = h(x),   u(0,t) = 0,

or of the companion problem satisfied by v = u_x (``Variant.P_TILDE``), whose
data are the derivatives of the stored shapes and whose boundary condition is
Neumann, v_x(0,t) = g(t).

Validation returns a list of violated-hypothesis descriptors instead of
raising, so callers can report everything at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .specfun import SQRT_PI, gamma_half

__all__ = [
    "ShapeKind",
    "FluxKind",
    "ProfileKind",
    "Variant",
    "SourceShape",
    "FluxLaw",
    "InitialProfile",
    "ProblemSpec",
    "TimeFunction",
    "DerivedParams",
    "TildeData",
    "validate",
    "derive_parameters",
    "transform_to_tilde",
    "separated_x",
    "separated_x_tilde",
    "spec_from_dict",
    "spec_to_dict",
]


class ShapeKind(Enum):
    LINEAR_X = "linear_x"
    NEG_SINH = "neg_sinh"
    NEG_SIN = "neg_sin"
    SCALED_SEPARABLE = "scaled_separable"
    CONSTANT_ONE = "constant_one"


class FluxKind(Enum):
    ZERO = "zero"
    CONSTANT = "constant"
    LINEAR = "linear"
    AFFINE = "affine"
    POWER_LAW = "power_law"


class ProfileKind(Enum):
    MONOMIAL = "monomial"
    QUADRATIC = "quadratic"
    SCALED_SEPARABLE = "scaled_separable"


class Variant(Enum):
    P = "P"
    P_TILDE = "PTilde"


@dataclass(frozen=True)
class TimeFunction:
    """A time-dependent coefficient with an exact antiderivative.

    Presets cover polynomials and exponentials; arbitrary callables may be
    supplied as long as a matching antiderivative is given.
    """

    fn: Callable[[float], float]
    antiderivative: Callable[[float], float]
    description: str = "custom"
    locally_integrable: bool = True

    def __call__(self, t: float) -> float:
        return self.fn(t)

    @staticmethod
    def constant(value: float) -> "TimeFunction":
        return TimeFunction(lambda t: value, lambda t: value * t, f"const({value})")

    @staticmethod
    def polynomial(coeffs: list[float]) -> "TimeFunction":
        cs = [float(c) for c in coeffs]

        def fn(t: float) -> float:
            return sum(c * t ** j for j, c in enumerate(cs))

        def anti(t: float) -> float:
            return sum(c * t ** (j + 1) / (j + 1) for j, c in enumerate(cs))

        return TimeFunction(fn, anti, f"poly({cs})")

    @staticmethod
    def exponential(amplitude: float, rate: float) -> "TimeFunction":
        if rate == 0.0:
            return TimeFunction.constant(amplitude)
        return TimeFunction(
            lambda t: amplitude * math.exp(rate * t),
            lambda t: amplitude * (math.exp(rate * t) - 1.0) / rate,
            f"exp({amplitude},{rate})",
        )


def separated_x(sigma: float, delta: float, x: float) -> float:
    """X(x) solving X'' = sigma*X, X(0) = 0, X'(0) = delta."""
    if sigma > 0.0:
        r = math.sqrt(sigma)
        return delta / r * math.sinh(r * x)
    if sigma < 0.0:
        r = math.sqrt(-sigma)
        return delta / r * math.sin(r * x)
    return delta * x


def separated_x_tilde(sigma: float, delta: float, x: float) -> float:
    """X'(x) for the separated profile: delta*cosh, delta*cos or constant delta."""
    if sigma > 0.0:
        return delta * math.cosh(math.sqrt(sigma) * x)
    if sigma < 0.0:
        return delta * math.cos(math.sqrt(-sigma) * x)
    return delta


@dataclass(frozen=True)
class SourceShape:
    """Spatial factor Phi of the source term."""

    kind: ShapeKind
    lam: float = 1.0          # rate of the linear/sinh/sin shapes
    mu: float = 1.0           # amplitude, neg_sinh / neg_sin only
    sigma: float = 0.0        # separated branch selector
    delta: float = 1.0        # separated slope at 0
    scale: float = 1.0        # multiplier of X for the separated shape

    def __call__(self, x: float) -> float:
        k = self.kind
        if k is ShapeKind.LINEAR_X:
            return self.lam * x
        if k is ShapeKind.NEG_SINH:
            return -self.mu * math.sinh(self.lam * x)
        if k is ShapeKind.NEG_SIN:
            return -self.mu * math.sin(self.lam * x)
        if k is ShapeKind.SCALED_SEPARABLE:
            return self.scale * separated_x(self.sigma, self.delta, x)
        return 1.0

    def derivative(self, x: float) -> float:
        k = self.kind
        if k is ShapeKind.LINEAR_X:
            return self.lam
        if k is ShapeKind.NEG_SINH:
            return -self.mu * self.lam * math.cosh(self.lam * x)
        if k is ShapeKind.NEG_SIN:
            return -self.mu * self.lam * math.cos(self.lam * x)
        if k is ShapeKind.SCALED_SEPARABLE:
            return self.scale * separated_x_tilde(self.sigma, self.delta, x)
        return 0.0

    @property
    def growth_rate(self) -> float:
        """Exponential growth rate of |Phi|, used to truncate quadratures."""
        if self.kind is ShapeKind.NEG_SINH:
            return self.lam
        if self.kind is ShapeKind.SCALED_SEPARABLE and self.sigma > 0.0:
            return math.sqrt(self.sigma)
        return 0.0


@dataclass(frozen=True)
class FluxLaw:
    """Coupling law F(V, t) of the source term to the boundary flux V."""

    kind: FluxKind
    nu: float = 1.0
    n: float = 0.0
    f1: TimeFunction | None = None
    f2: TimeFunction | None = None
    f: TimeFunction | None = None

    def __call__(self, V: float, t: float) -> float:
        k = self.kind
        if k is FluxKind.ZERO:
            return 0.0
        if k is FluxKind.CONSTANT:
            return self.nu
        if k is FluxKind.LINEAR:
            return self.nu * V
        if k is FluxKind.AFFINE:
            return self.f1(t) + self.f2(t) * V
        # power law V^n f(t); n = 0 means F independent of V
        if self.n == 0.0:
            return self.f(t)
        return V ** self.n * self.f(t)


@dataclass(frozen=True)
class InitialProfile:
    """Initial temperature h(x)."""

    kind: ProfileKind
    eta: float = 1.0          # monomial / separated amplitude
    m: float = 1.0            # monomial exponent
    a: float = 0.0            # linear coefficient of the quadratic profile
    nu: float = 1.0           # quadratic leading coefficient is nu/2
    sigma: float = 0.0        # separated branch (must match the source shape)
    delta: float = 1.0

    def __call__(self, x: float) -> float:
        k = self.kind
        if k is ProfileKind.MONOMIAL:
            return self.eta * x ** self.m
        if k is ProfileKind.QUADRATIC:
            return 0.5 * self.nu * x * x + self.a * x
        return self.eta * separated_x(self.sigma, self.delta, x)

    def derivative(self, x: float) -> float:
        k = self.kind
        if k is ProfileKind.MONOMIAL:
            if self.m == 1.0:
                return self.eta
            return self.eta * self.m * x ** (self.m - 1.0)
        if k is ProfileKind.QUADRATIC:
            return self.nu * x + self.a
        return self.eta * separated_x_tilde(self.sigma, self.delta, x)

    @property
    def growth_rate(self) -> float:
        if self.kind is ProfileKind.SCALED_SEPARABLE and self.sigma > 0.0:
            return math.sqrt(self.sigma)
        return 0.0

    @property
    def is_odd_monomial(self) -> bool:
        return (
            self.kind is ProfileKind.MONOMIAL
            and self.m == int(self.m)
            and int(self.m) % 2 == 1
            and self.m >= 1.0
        )


@dataclass(frozen=True)
class ProblemSpec:
    """One benchmark case: (Phi, F, h) plus the problem variant.

    For ``Variant.P_TILDE`` the stored fields describe the underlying problem
    whose x-derivative is taken: the effective data are Phi' and h', the flux
    law is unchanged, and the Neumann datum is g(t) = Phi(0) F(u_x(0,t), t).
    """

    phi: SourceShape
    flux: FluxLaw
    h: InitialProfile
    variant: Variant = Variant.P

    def phi_eval(self, x: float) -> float:
        if self.variant is Variant.P_TILDE:
            return self.phi.derivative(x)
        return self.phi(x)

    def h_eval(self, x: float) -> float:
        if self.variant is Variant.P_TILDE:
            return self.h.derivative(x)
        return self.h(x)

    def flux_eval(self, V: float, t: float) -> float:
        return self.flux(V, t)

    def as_p(self) -> "ProblemSpec":
        return ProblemSpec(self.phi, self.flux, self.h, Variant.P)


@dataclass(frozen=True)
class DerivedParams:
    """Scalars the closed forms are built from; absent fields are None."""

    sigma: float | None = None     # lambda + nu*mu  (neg_sinh)
    delta: float | None = None     # lambda - nu*mu  (neg_sin)
    gamma: float | None = None     # scale * nu * delta (separated, linear F)
    c: float | None = None         # monomial forcing constant
    p: int | None = None           # (m-1)/2 for odd m


_INTEGRAL_REP_SHAPES = (ShapeKind.LINEAR_X, ShapeKind.NEG_SINH, ShapeKind.NEG_SIN)


def monomial_forcing_constant(eta: float, m: float) -> float:
    """c = 2^{m-1} m eta Gamma(m/2) / sqrt(pi); equals eta at m = 1."""
    if float(m) == int(m):
        gam = gamma_half(int(m) / 2) if (int(m) % 2 == 1) else gamma_half(int(m) // 2)
    else:
        gam = math.gamma(m / 2.0)
    return 2.0 ** (m - 1.0) * m * eta * gam / SQRT_PI


def derive_parameters(spec: ProblemSpec) -> DerivedParams:
    """Every derived scalar the closed forms need, from a validated spec."""
    sigma = delta = gamma = c = None
    p = None
    phi, flux, h = spec.phi, spec.flux, spec.h
    if phi.kind is ShapeKind.NEG_SINH and flux.kind is FluxKind.LINEAR:
        sigma = phi.lam + flux.nu * phi.mu
    if phi.kind is ShapeKind.NEG_SIN and flux.kind is FluxKind.LINEAR:
        delta = phi.lam - flux.nu * phi.mu
    if phi.kind is ShapeKind.SCALED_SEPARABLE:
        sigma = phi.sigma
        delta = phi.delta
        if flux.kind is FluxKind.LINEAR:
            gamma = phi.scale * flux.nu * phi.delta
    if h.kind is ProfileKind.MONOMIAL:
        c = monomial_forcing_constant(h.eta, h.m)
        if h.is_odd_monomial:
            p = (int(h.m) - 1) // 2
    return DerivedParams(sigma=sigma, delta=delta, gamma=gamma, c=c, p=p)


def validate(spec: ProblemSpec, closed_form: bool = False) -> list[str]:
    """Check the hypotheses the explicit-solution results rely on.

    Returns a list of violation descriptors; an empty list means the spec is
    admissible.  With ``closed_form=True`` the extra requirements of the
    polynomial flux formulas (odd integer m, linear F with nu > 0) are
    enforced as well.
    """
    v: list[str] = []
    phi, flux, h = spec.phi, spec.flux, spec.h

    if phi.kind in (ShapeKind.LINEAR_X, ShapeKind.NEG_SINH, ShapeKind.NEG_SIN):
        if phi.lam <= 0.0:
            v.append("lambda must be positive for the built-in source shapes")
    if phi.kind in (ShapeKind.NEG_SINH, ShapeKind.NEG_SIN) and phi.mu <= 0.0:
        v.append("mu must be positive for the sinh/sin source shapes")
    if phi.kind is ShapeKind.SCALED_SEPARABLE:
        if phi.scale == 0.0:
            v.append("separated source scale must be nonzero")
        if phi.delta == 0.0:
            v.append("separated slope delta must be nonzero")

    # Compatibility condition: h must vanish at the face (problem P only;
    # the companion problem has no Dirichlet condition).
    if spec.variant is Variant.P:
        h0 = h(1e-300)
        if not math.isclose(h0, 0.0, abs_tol=1e-200):
            v.append("compatibility violated: h(0+) must be 0")
        if h.kind is ProfileKind.MONOMIAL and h.m < 1.0:
            v.append("monomial exponent m must be >= 1")
    else:
        if h.kind is ProfileKind.MONOMIAL and h.m < 1.0 and h.m != 0.0:
            v.append("companion-problem profile exponent must be 0 or >= 1")

    if h.kind is ProfileKind.MONOMIAL and h.eta == 0.0:
        v.append("monomial amplitude eta must be nonzero")
    if h.kind is ProfileKind.SCALED_SEPARABLE:
        if h.eta == 0.0:
            v.append("separated amplitude eta must be nonzero")
        if phi.kind is ShapeKind.SCALED_SEPARABLE and (
            h.sigma != phi.sigma or h.delta != phi.delta
        ):
            v.append("separated h and Phi must share (sigma, delta)")

    if flux.kind is FluxKind.ZERO:
        if not (h.kind is ProfileKind.MONOMIAL and h.m == 1.0):
            v.append("zero flux law requires the linear profile h = eta*x")
        elif h.eta <= 0.0 and spec.variant is Variant.P:
            v.append("stationary family with F = 0 requires eta > 0")
    if flux.kind is FluxKind.CONSTANT:
        if flux.nu == 0.0:
            v.append("constant flux law requires nu != 0")
        if h.kind is ProfileKind.QUADRATIC and h.nu != flux.nu:
            v.append("quadratic profile must pair h'' = nu with the constant law")
        if h.kind is ProfileKind.QUADRATIC and phi.kind is not ShapeKind.CONSTANT_ONE:
            v.append("quadratic stationary profile requires Phi == 1")
    if flux.kind is FluxKind.LINEAR and flux.nu == 0.0:
        v.append("linear flux law requires nu != 0")
    if flux.kind is FluxKind.AFFINE:
        for name, fpart in (("f1", flux.f1), ("f2", flux.f2)):
            if fpart is None:
                v.append(f"affine flux law requires {name}")
            elif not fpart.locally_integrable:
                v.append(f"affine flux law requires locally integrable {name}")
    if flux.kind is FluxKind.POWER_LAW:
        if flux.n >= 1.0:
            v.append("power-law exponent must satisfy n < 1")
        if flux.f is None:
            v.append("power-law flux law requires the time factor f")
        elif not flux.f.locally_integrable:
            v.append("power-law flux law requires locally integrable f")
        if phi.kind is ShapeKind.SCALED_SEPARABLE:
            if phi.scale <= 0.0 or phi.delta <= 0.0 or h.eta <= 0.0:
                v.append("power-law separated family requires scale, delta, eta > 0")

    if closed_form:
        if phi.kind not in _INTEGRAL_REP_SHAPES:
            v.append("closed-form flux requires Phi in {lambda*x, -mu*sinh, -mu*sin}")
        if flux.kind is not FluxKind.LINEAR:
            v.append("closed-form flux requires the linear law F = nu*V")
        elif flux.nu <= 0.0:
            v.append("closed-form flux requires nu > 0")
        if h.kind is not ProfileKind.MONOMIAL:
            v.append("closed-form flux requires a monomial profile")
        elif not h.is_odd_monomial:
            v.append("m must be odd for polynomial flux")

    return v


@dataclass(frozen=True)
class TildeData:
    """Exact transform of a problem-P spec into companion-problem data."""

    spec: ProblemSpec
    phi_tilde: Callable[[float], float]
    h_tilde: Callable[[float], float]
    x_tilde_branch: str = ""


def transform_to_tilde(spec: ProblemSpec) -> TildeData:
    """Map a problem-P spec to the companion problem solved by v = u_x.

    The transformed data are Phi' and h' with the flux law unchanged; the
    separated X branches become delta*cosh, delta*cos or the constant delta.
    """
    if spec.variant is not Variant.P:
        raise ValueError("transform_to_tilde expects a problem-P spec")
    tilde_spec = ProblemSpec(spec.phi, spec.flux, spec.h, Variant.P_TILDE)
    branch = ""
    if spec.phi.kind is ShapeKind.SCALED_SEPARABLE:
        if spec.phi.sigma > 0:
            branch = "delta*cosh(sqrt(sigma) x)"
        elif spec.phi.sigma < 0:
            branch = "delta*cos(sqrt(|sigma|) x)"
        else:
            branch = "delta (constant)"
    return TildeData(
        spec=tilde_spec,
        phi_tilde=spec.phi.derivative,
        h_tilde=spec.h.derivative,
        x_tilde_branch=branch,
    )


# ---------------------------------------------------------------------------
# JSON case schema (consumed by the benchmark CLI).

_PHI_FIELDS = {"kind", "lambda", "mu", "sigma", "delta", "scale"}
_FLUX_FIELDS = {"kind", "nu", "n"}
_H_FIELDS = {"kind", "eta", "m", "a"}


class SchemaError(ValueError):
    """Raised when a JSON case does not conform to the schema."""


def _check_fields(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise SchemaError(f"unknown fields in {where}: {sorted(unknown)}")
    if "kind" not in obj:
        raise SchemaError(f"missing 'kind' in {where}")


def spec_from_dict(data: dict) -> ProblemSpec:
    """Build a ProblemSpec from the JSON case schema; unknown fields rejected."""
    if not isinstance(data, dict):
        raise SchemaError("case must be a JSON object")
    unknown = set(data) - {"phi", "flux", "h", "variant"}
    if unknown:
        raise SchemaError(f"unknown fields in case: {sorted(unknown)}")
    for key in ("phi", "flux", "h"):
        if key not in data:
            raise SchemaError(f"missing '{key}' in case")

    pd, fd, hd = data["phi"], data["flux"], data["h"]
    _check_fields(pd, _PHI_FIELDS, "phi")
    _check_fields(fd, _FLUX_FIELDS, "flux")
    _check_fields(hd, _H_FIELDS, "h")

    try:
        phi_kind = ShapeKind(pd["kind"])
        flux_kind = FluxKind(fd["kind"])
        h_kind = ProfileKind(hd["kind"])
    except ValueError as exc:
        raise SchemaError(str(exc)) from None

    if flux_kind is FluxKind.AFFINE:
        raise SchemaError("affine flux laws are library-level only (no JSON form)")

    phi = SourceShape(
        kind=phi_kind,
        lam=float(pd.get("lambda", 1.0)),
        mu=float(pd.get("mu", 1.0)),
        sigma=float(pd.get("sigma", 0.0)),
        delta=float(pd.get("delta", 1.0)),
        scale=float(pd.get("scale", 1.0)),
    )
    nu = float(fd.get("nu", 1.0))
    flux_kwargs = {"nu": nu, "n": float(fd.get("n", 0.0))}
    if flux_kind is FluxKind.POWER_LAW:
        # JSON power law carries a constant time factor f == nu.
        flux_kwargs["f"] = TimeFunction.constant(nu)
    flux = FluxLaw(kind=flux_kind, **flux_kwargs)
    h = InitialProfile(
        kind=h_kind,
        eta=float(hd.get("eta", 1.0)),
        m=float(hd.get("m", 1.0)),
        a=float(hd.get("a", 0.0)),
        nu=nu if h_kind is ProfileKind.QUADRATIC else 1.0,
        sigma=phi.sigma if h_kind is ProfileKind.SCALED_SEPARABLE else 0.0,
        delta=phi.delta if h_kind is ProfileKind.SCALED_SEPARABLE else 1.0,
    )
    variant = Variant(data.get("variant", "P"))
    return ProblemSpec(phi=phi, flux=flux, h=h, variant=variant)


def spec_to_dict(spec: ProblemSpec) -> dict:
    """Inverse of :func:`spec_from_dict` for the JSON-expressible subset."""
    pd: dict = {"kind": spec.phi.kind.value}
    if spec.phi.kind in _INTEGRAL_REP_SHAPES:
        pd["lambda"] = spec.phi.lam
        if spec.phi.kind is not ShapeKind.LINEAR_X:
            pd["mu"] = spec.phi.mu
    if spec.phi.kind is ShapeKind.SCALED_SEPARABLE:
        pd.update(sigma=spec.phi.sigma, delta=spec.phi.delta, scale=spec.phi.scale)
    fd: dict = {"kind": spec.flux.kind.value}
    if spec.flux.kind in (FluxKind.CONSTANT, FluxKind.LINEAR, FluxKind.POWER_LAW):
        fd["nu"] = spec.flux.nu
    if spec.flux.kind is FluxKind.POWER_LAW:
        fd["n"] = spec.flux.n
    hd: dict = {"kind": spec.h.kind.value}
    if spec.h.kind is ProfileKind.MONOMIAL:
        hd.update(eta=spec.h.eta, m=spec.h.m)
    elif spec.h.kind is ProfileKind.QUADRATIC:
        hd["a"] = spec.h.a
    else:
        hd["eta"] = spec.h.eta
    return {"phi": pd, "flux": fd, "h": hd, "variant": spec.variant.value}
