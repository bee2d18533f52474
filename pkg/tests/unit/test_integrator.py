"""Tests for trajectories, integration events and fate classification."""

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.integrate import simpson
from scipy.optimize import brentq

from src.core.integrator import classify_attractor, integrate_model, integrate_nf
from src.models.enums import AttractorKind, CoordinateSystem, TerminationEvent, TimeUnit
from src.models.normal_form import NFState
from src.models.params import State
from src.models.trajectory import IntegratorConfig, Trajectory
from tests.fixtures.data import BISTABLE_ALPHA


def _uvw(tau, u, w):
    return Trajectory(t=tau, states=np.column_stack([u, np.zeros_like(u), w]),
                      coordinates=CoordinateSystem.UVW, time_unit=TimeUnit.TAU)


@pytest.mark.unit
class TestTrajectoryModel:
    """Trajectory container."""

    def test_squared_channel(self):
        tau = np.linspace(0.0, 1.0, 5)
        traj = _uvw(tau, 2.0 * tau, np.ones_like(tau))
        np.testing.assert_allclose(traj.channel("u2"), 4.0 * tau ** 2)

    def test_evaluate_interpolates_without_dense_output(self):
        tau = np.linspace(0.0, 1.0, 11)
        traj = _uvw(tau, tau, np.ones_like(tau))
        assert traj.evaluate(np.array([0.25]), "u")[0] == pytest.approx(0.25)

    def test_unknown_channel(self):
        tau = np.linspace(0.0, 1.0, 3)
        with pytest.raises(KeyError):
            _uvw(tau, tau, tau).channel("x")

    def test_time_must_increase(self):
        with pytest.raises(ValidationError):
            _uvw(np.array([0.0, 1.0, 1.0]), np.zeros(3), np.zeros(3))

    def test_arrays_are_read_only(self):
        tau = np.linspace(0.0, 1.0, 3)
        traj = _uvw(tau, tau, tau)
        with pytest.raises(ValueError):
            traj.states[0, 0] = 1.0

    def test_frame_columns(self):
        tau = np.linspace(0.0, 1.0, 3)
        assert list(_uvw(tau, tau, tau).to_frame().columns) == ["tau", "u", "v", "w"]

    def test_unsupported_method(self):
        with pytest.raises(ValidationError):
            IntegratorConfig(method="LSODA")


@pytest.mark.unit
@pytest.mark.algorithm
class TestIntegration:
    """solve_ivp wrappers."""

    def test_equilibrium_is_stationary(self, model_params, e_xz):
        traj = integrate_model(e_xz.state, model_params, IntegratorConfig(t_final=5.0))
        np.testing.assert_allclose(traj.final_state(), e_xz.state.as_array(), atol=1e-8)
        assert traj.status == 0
        assert traj.coordinates == CoordinateSystem.XYZ
        assert traj.time_unit == TimeUnit.SLOW

    def test_extinction_event_terminates(self, model_params, e_xz):
        s = e_xz.state
        traj = integrate_model(State(x=s.x, y=2e-6, z=s.z), model_params, IntegratorConfig(t_final=200.0))
        assert traj.terminated_by == TerminationEvent.EXTINCTION
        assert traj.final_state()[1] == pytest.approx(1e-6, rel=1e-3)
        assert traj.t[-1] < 200.0

    def test_uniform_sampling(self, model_params, e_xz):
        config = IntegratorConfig(t_final=2.0, sample_step=0.5)
        traj = integrate_model(e_xz.state, model_params, config)
        np.testing.assert_allclose(traj.t, [0.0, 0.5, 1.0, 1.5, 2.0])

    def test_events_can_be_disabled(self, model_params, e_xz):
        s = e_xz.state
        config = IntegratorConfig(t_final=50.0, events=[])
        traj = integrate_model(State(x=s.x, y=2e-6, z=s.z), model_params, config)
        assert traj.terminated_by is None
        assert traj.t[-1] == pytest.approx(50.0)

    def test_normal_form_origin_is_fixed(self, published_coeffs):
        traj = integrate_nf(NFState(u=0.0, v=0.0, w=0.0), published_coeffs, BISTABLE_ALPHA,
                            IntegratorConfig(t_final=10.0))
        np.testing.assert_allclose(traj.final_state(), 0.0, atol=1e-12)
        assert traj.time_unit == TimeUnit.TAU

    def test_halving_tolerances_changes_little(self, published_coeffs):
        initial = NFState(u=0.452, v=0.432, w=0.329)
        coarse = integrate_nf(initial, published_coeffs, BISTABLE_ALPHA,
                              IntegratorConfig(t_final=60.0, method="DOP853", rtol=1e-8, atol=1e-10))
        fine = integrate_nf(initial, published_coeffs, BISTABLE_ALPHA,
                            IntegratorConfig(t_final=60.0, method="DOP853", rtol=5e-9, atol=5e-11))
        tau = np.linspace(0.0, 60.0, 601)
        np.testing.assert_allclose(coarse.evaluate(tau), fine.evaluate(tau), rtol=1e-6, atol=1e-6)

    def test_first_predator_free_plane_is_invariant(self, model_params):
        config = IntegratorConfig(t_final=50.0, events=[])
        traj = integrate_model(State(x=0.3, y=0.0, z=0.5), model_params, config)
        assert np.max(np.abs(traj.channel("y"))) <= config.atol

    def test_zero_crossing_time_is_a_root_of_w(self, nf_collapse_trajectory):
        t_event = nf_collapse_trajectory.event_times[TerminationEvent.W_ZERO_CROSSING.value][0]
        root = brentq(lambda tau: float(nf_collapse_trajectory.evaluate(np.array([tau]), "w")[0]),
                      t_event - 0.5, t_event + 0.5, xtol=1e-12)
        assert t_event == pytest.approx(root, abs=1e-8)

    def test_conservation_without_slow_terms(self, published_coeffs):
        frozen = published_coeffs.model_copy(update={"delta": 0.0})
        u0, v0 = 0.452, 0.432
        config = IntegratorConfig(t_final=20.0, rtol=1e-10, atol=1e-12, events=[])
        traj = integrate_nf(NFState(u=u0, v=v0, w=0.3), frozen, BISTABLE_ALPHA, config)
        tau = np.linspace(0.0, 20.0, 20001)
        u, v, w = traj.evaluate(tau).T
        energy = u[-1] ** 2 + v[-1] ** 2 - simpson(u ** 3, x=tau)
        assert energy == pytest.approx(u0 * u0 + v0 * v0, abs=1e-7)
        invariant = (u * u + 2.0 * v - 2.0) * np.exp(v)
        np.testing.assert_allclose(invariant, (u0 * u0 + 2.0 * v0 - 2.0) * np.exp(v0), atol=1e-8)
        np.testing.assert_allclose(w, 0.3, atol=1e-12)


@pytest.mark.unit
class TestClassifyAttractor:
    """Fate classification on synthetic series."""

    def test_steady_oscillation_is_limit_cycle(self):
        tau = np.arange(0.0, 200.0, 0.05)
        verdict = classify_attractor(_uvw(tau, np.sin(tau), 1.0 + 0.1 * np.cos(tau)))
        assert verdict.kind == AttractorKind.LIMIT_CYCLE
        assert verdict.evidence["relative_spread"] <= 0.05

    def test_decaying_oscillation_is_undecided(self):
        tau = np.arange(0.0, 200.0, 0.05)
        verdict = classify_attractor(_uvw(tau, np.exp(-0.05 * tau) * np.sin(tau), np.ones_like(tau)))
        assert verdict.kind == AttractorKind.UNDECIDED

    def test_w_below_floor_is_divergence(self):
        tau = np.linspace(0.0, 10.0, 101)
        verdict = classify_attractor(_uvw(tau, np.zeros_like(tau), -tau))
        assert verdict.kind == AttractorKind.W_DIVERGENCE
        assert verdict.decision_time == pytest.approx(5.0)

    def test_convergence_to_boundary(self, e_xz):
        t = np.linspace(0.0, 10.0, 50)
        target = e_xz.state.as_array()
        states = np.tile(target, (t.size, 1))
        states[:, 1] = 0.1 * np.exp(-1.4 * t)
        traj = Trajectory(t=t, states=states, coordinates=CoordinateSystem.XYZ, time_unit=TimeUnit.SLOW)
        verdict = classify_attractor(traj, e_xz=e_xz)
        assert verdict.kind == AttractorKind.BOUNDARY_XZ
        assert verdict.evidence["distance_to_exz"] == pytest.approx(0.0, abs=1e-12)


@pytest.mark.integration
@pytest.mark.slow
class TestBistability:
    """The two basins either side of the stable-manifold separatrix."""

    def test_normal_form_cycle_side_stays_positive(self, nf_cycle_trajectory):
        assert float(np.min(nf_cycle_trajectory.channel("w"))) > 0.0
        assert TerminationEvent.FUNNEL_ENTRY.value in nf_cycle_trajectory.event_times
        assert classify_attractor(nf_cycle_trajectory).kind != AttractorKind.W_DIVERGENCE

    def test_normal_form_collapse_side_crosses_zero(self, nf_collapse_trajectory):
        assert float(np.min(nf_collapse_trajectory.channel("w"))) < 0.0
        assert TerminationEvent.W_ZERO_CROSSING.value in nf_collapse_trajectory.event_times
        assert classify_attractor(nf_collapse_trajectory).kind in (AttractorKind.W_DIVERGENCE,
                                                                    AttractorKind.UNDECIDED)

    def test_population_cycle_side_keeps_all_species(self, xyz_cycle_trajectory, e_xz):
        verdict = classify_attractor(xyz_cycle_trajectory, e_xz=e_xz)
        assert verdict.kind != AttractorKind.BOUNDARY_XZ
        assert xyz_cycle_trajectory.terminated_by is None

    def test_population_collapse_side_loses_first_predator(self, xyz_collapse_trajectory, e_xz):
        verdict = classify_attractor(xyz_collapse_trajectory, e_xz=e_xz)
        assert verdict.kind in (AttractorKind.BOUNDARY_XZ, AttractorKind.UNDECIDED)
        assert xyz_collapse_trajectory.final_state()[1] < 0.1181
