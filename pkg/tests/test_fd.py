import math

import numpy as np
import pytest

from conftest import (
    linear_law,
    linear_shape,
    monomial,
    monomial_spec,
    separated_spec,
    sin_shape,
    sinh_shape,
)
from fluxheat.closed_form import integral_rep_solution, tilde_solution
from fluxheat.fd import FDSolver, Grid1D, convergence_order, pde_residual, solution_grows, solve
from fluxheat.problem import FluxKind, FluxLaw, ProblemSpec, Variant


class TestGrid:
    def test_spacing(self):
        g = Grid1D(L=8.0, nx=64, t_end=2.0, nt=100)
        assert g.dx == 0.125
        assert g.dt == 0.02

    def test_invariants(self):
        with pytest.raises(ValueError):
            Grid1D(L=0.0, nx=64, t_end=1.0, nt=10)
        with pytest.raises(ValueError):
            Grid1D(L=1.0, nx=4, t_end=1.0, nt=10)
        with pytest.raises(ValueError):
            Grid1D(L=1.0, nx=64, t_end=1.0, nt=10, theta=1.5)

    def test_stability_limit(self):
        g = Grid1D(L=1.0, nx=100, t_end=1.0, nt=10, theta=0.0)
        assert g.stability_limit() == pytest.approx(g.dx ** 2 / 2)
        assert Grid1D(L=1.0, nx=100, t_end=1.0, nt=10, theta=0.5).stability_limit() == math.inf


class TestSolverBasics:
    def zero_spec(self):
        return ProblemSpec(linear_shape(), FluxLaw(FluxKind.ZERO), monomial(1.0, 1))

    def test_explicit_scheme_stability_refused(self):
        g = Grid1D(L=1.0, nx=64, t_end=1.0, nt=10, theta=0.0)
        with pytest.raises(ValueError, match="stability"):
            FDSolver(self.zero_spec(), g, far_field="homogeneous")

    def test_growth_refusal_with_reason(self):
        g = Grid1D(L=4.0, nx=32, t_end=0.5, nt=16)
        spec = monomial_spec(linear_shape(1.0), 1.0, 3)
        with pytest.raises(ValueError, match="manufactured"):
            FDSolver(spec, g, far_field="homogeneous")

    def test_growth_classifier(self):
        assert solution_grows(monomial_spec(sinh_shape(0.5, 1.0), 1.0, 1))
        assert solution_grows(monomial_spec(linear_shape(1.0), 1.0, 5))
        assert not solution_grows(monomial_spec(linear_shape(1.0), 1.0, 1))
        assert solution_grows(separated_spec(1.0, 1.0, 1.0, 1.0, linear_law(-1.0)))
        assert not solution_grows(separated_spec(-1.0, 1.0, 1.0, 1.0, linear_law(1.0)))

    def test_zero_is_fixed_point(self):
        spec = ProblemSpec(linear_shape(), linear_law(1.0), monomial(0.0, 1))
        g = Grid1D(L=4.0, nx=32, t_end=0.2, nt=8)
        solver, final = solve(spec, g, far_field="homogeneous")
        assert np.all(final.values == 0.0)

    def test_dirichlet_row_exact(self):
        spec = monomial_spec(linear_shape(1.0), 1.0, 1)
        ref = integral_rep_solution(spec)
        g = Grid1D(L=6.0, nx=48, t_end=0.5, nt=32)
        solver, _ = solve(spec, g, reference=ref)
        assert all(h[0] == 0.0 for h in solver.history)

    def test_pure_diffusion_max_norm_decay(self):
        # sine initial data under pure diffusion decays monotonically
        spec = separated_spec(-1.0, 1.0, 1.0, 1.0, linear_law(1e-14))
        g = Grid1D(L=float(np.pi), nx=32, t_end=0.5, nt=32)
        solver, _ = solve(spec, g, far_field="homogeneous")
        norms = [np.max(np.abs(h)) for h in solver.history]
        assert all(a >= b - 1e-14 for a, b in zip(norms, norms[1:]))


class TestAccuracy:
    def test_phi1_m1_tracks_flux(self):
        spec = monomial_spec(linear_shape(1.0), 1.0, 1)
        ref = integral_rep_solution(spec)
        g = Grid1D(L=8.0, nx=256, t_end=1.0, nt=256)
        solver, _ = solve(spec, g, reference=ref)
        V = solver.boundary_trajectory()
        for t in (0.25, 0.5, 1.0):
            assert abs(V(t) - math.exp(-t)) <= 2e-3

    def test_dt_halving_improves_flux(self):
        spec = monomial_spec(linear_shape(1.0), 1.0, 1)
        ref = integral_rep_solution(spec)

        def err(nt):
            g = Grid1D(L=8.0, nx=128, t_end=1.0, nt=nt)
            solver, _ = solve(spec, g, reference=ref)
            return abs(solver.boundary_trajectory()(1.0) - math.exp(-1.0))

        assert err(16) / err(32) >= 1.8

    def test_zero_source_reduction_to_baseline(self):
        # source-free diffusion of the quadratic profile vs the erf baseline
        from fluxheat.green import u0_quadratic_closed
        from fluxheat.problem import InitialProfile, ProfileKind, ShapeKind, SourceShape

        spec = ProblemSpec(
            SourceShape(ShapeKind.CONSTANT_ONE),
            FluxLaw(FluxKind.CONSTANT, nu=0.0),
            InitialProfile(ProfileKind.QUADRATIC, a=0.0, nu=1.0),
        )

        class Ref:
            def u(self, x, t):
                return u0_quadratic_closed(1.0, 0.0, x, t)

        g = Grid1D(L=8.0, nx=512, t_end=1.0, nt=512)
        solver, final = solve(spec, g, reference=Ref())
        exact = np.array([Ref().u(x, 1.0) for x in g.x])
        assert np.max(np.abs(final.values - exact)) <= 1e-4

    def test_manufactured_convergence_order(self):
        spec = monomial_spec(sin_shape(2.0, 1.0), 1.0, 1)
        ref = integral_rep_solution(spec)
        grids = [Grid1D(L=8.0, nx=n, t_end=1.0, nt=n) for n in (64, 128, 256)]
        res = convergence_order(spec, grids, ref)
        assert res.order_max >= 1.0
        assert not res.degraded

    def test_self_convergence_power_law(self):
        from fluxheat.problem import FluxKind, FluxLaw, TimeFunction

        law = FluxLaw(FluxKind.POWER_LAW, n=0.5, f=TimeFunction.constant(1.0))
        spec = separated_spec(-1.0, 1.0, 1.0, 1.0, law)
        grids = [Grid1D(L=6.0, nx=n, t_end=0.5, nt=n) for n in (32, 64, 128, 256)]
        res = convergence_order(spec, grids, "self")
        assert res.order_max >= 1.0

    def test_needs_three_grids(self):
        spec = monomial_spec(linear_shape(1.0), 1.0, 1)
        ref = integral_rep_solution(spec)
        with pytest.raises(ValueError):
            convergence_order(spec, [Grid1D(L=8.0, nx=64, t_end=1.0, nt=64)], ref)

    def test_first_order_flux_extraction_flag(self):
        # On problem-P solutions with Phi(0) = 0 the boundary curvature
        # vanishes, masking the extraction order; the Phi == 1 stationary
        # case has u_xx(0) = nu and separates the two stencils.
        from fluxheat.closed_form import stationary_solution
        from fluxheat.problem import InitialProfile, ProfileKind, ShapeKind, SourceShape

        spec = ProblemSpec(
            SourceShape(ShapeKind.CONSTANT_ONE),
            FluxLaw(FluxKind.CONSTANT, nu=1.0),
            InitialProfile(ProfileKind.QUADRATIC, a=1.0, nu=1.0),
        )
        ref = stationary_solution(spec)
        g = Grid1D(L=8.0, nx=128, t_end=0.25, nt=64)
        s2, _ = solve(spec, g, reference=ref, flux_order=2)
        s1, _ = solve(spec, g, reference=ref, flux_order=1)
        e2 = abs(s2.boundary_trajectory()(0.25) - 1.0)
        e1 = abs(s1.boundary_trajectory()(0.25) - 1.0)
        assert e1 == pytest.approx(g.dx / 2, rel=1e-6)  # nu * dx / 2
        assert e1 > 100 * e2


class TestTildeSolver:
    def test_constant_preserved_to_roundoff(self):
        spec = ProblemSpec(
            linear_shape(), FluxLaw(FluxKind.ZERO), monomial(2.0, 1), Variant.P_TILDE
        )
        field = tilde_solution(spec)
        g = Grid1D(L=4.0, nx=32, t_end=0.5, nt=25)
        solver, final = solve(spec, g, reference=field)
        assert np.max(np.abs(final.values - 2.0)) <= 1e-12

    def test_separated_tilde_tracked(self):
        spec = separated_spec(-1.0, 1.0, 1.0, 1.0, linear_law(1.0), variant=Variant.P_TILDE)
        field = tilde_solution(spec)
        g = Grid1D(L=6.0, nx=256, t_end=0.5, nt=256)
        solver, final = solve(spec, g, reference=field)
        exact = np.array([field.u(x, 0.5) for x in g.x])
        assert np.max(np.abs(final.values - exact)) <= 5e-3


class TestPdeResidual:
    def test_closed_form_residuals_small(self):
        for spec in (
            monomial_spec(linear_shape(1.0), 1.0, 3),
            monomial_spec(sinh_shape(0.5, 1.0), 1.0, 1),
            separated_spec(-1.0, 1.0, 1.0, 1.0, linear_law(1.0)),
        ):
            from fluxheat.closed_form import solution_for

            field = solution_for(spec)
            for x, t in ((0.5, 0.4), (1.5, 1.0)):
                assert abs(pde_residual(field, spec, x, t, delta=1e-3)) <= 1e-6

    def test_residual_shrinks_under_refinement(self):
        # truncation-dominated range; below delta ~ 1e-2 the 1/delta^2
        # round-off floor takes over while staying far under tolerance
        spec = monomial_spec(linear_shape(1.0), 1.0, 3)
        field = integral_rep_solution(spec)
        r = [abs(pde_residual(field, spec, 1.0, 0.7, delta=d)) for d in (0.3, 0.1, 0.03)]
        assert r[0] > r[1] > r[2]
        assert abs(pde_residual(field, spec, 1.0, 0.7, delta=1e-3)) <= 1e-6

    def test_detects_wrong_solution(self):
        spec = monomial_spec(linear_shape(1.0), 1.0, 3)
        field = integral_rep_solution(spec)

        class Wrong:
            u = staticmethod(lambda x, t: field.u(x, t) + 0.05 * x * x * t)
            V = field.V

        assert abs(pde_residual(Wrong(), spec, 1.0, 0.7, delta=1e-3)) > 1e-3
