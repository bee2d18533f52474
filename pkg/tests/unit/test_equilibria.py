"""Tests for equilibria, stability tags, the FSN II point and structural conditions."""

import numpy as np
import pytest

from src.core.equilibria import (
    check_conditions,
    classify_stability,
    eigenvalues_of,
    find_equilibrium,
    find_fsn2,
    newton_equilibrium,
)
from src.core.errors import ConvergenceError, NotFoundError
from src.core.model import ModelFactory
from src.models.enums import ConditionStatus, EquilibriumKind, StabilityTag
from tests.fixtures.data import PUBLISHED


@pytest.mark.unit
class TestStabilityTags:
    """Stability classification as a pure function of eigenvalues."""

    def test_all_negative_is_stable(self):
        assert classify_stability([-1.0, -2.0 + 1j, -2.0 - 1j]) == StabilityTag.STABLE

    def test_all_positive_is_unstable(self):
        assert classify_stability([0.5, 1.0, 2.0]) == StabilityTag.UNSTABLE

    def test_mixed_real_is_saddle(self):
        assert classify_stability([-1.0, 0.5, 2.0]) == StabilityTag.SADDLE

    def test_mixed_with_pair_is_saddle_focus(self):
        assert classify_stability([-1.0, 0.5 + 3j, 0.5 - 3j]) == StabilityTag.SADDLE_FOCUS

    def test_zero_real_part_is_non_hyperbolic(self):
        assert classify_stability([-1.0, 1e-14 + 2j, 1e-14 - 2j]) == StabilityTag.NON_HYPERBOLIC

    def test_eigenvalues_sorted_and_cleaned(self):
        values = eigenvalues_of(np.diag([3.0, -1.0, 0.5]))
        assert values == [complex(-1.0, 0.0), complex(0.5, 0.0), complex(3.0, 0.0)]
        assert all(v.imag == 0.0 for v in values)


@pytest.mark.unit
@pytest.mark.algorithm
class TestEquilibria:
    """Newton solves for each equilibrium kind."""

    def test_axial(self, model_params):
        eq = find_equilibrium(model_params, EquilibriumKind.AXIAL)
        np.testing.assert_allclose(eq.state.as_array(), [1.0, 0.0, 0.0], atol=1e-12)

    def test_boundary_xz_location(self, e_xz):
        np.testing.assert_allclose(e_xz.state.as_array(), PUBLISHED["e_xz"], atol=1e-2)
        assert e_xz.state.y == 0.0
        assert e_xz.residual <= 1e-10

    def test_boundary_xz_is_stable_in_bistable_window(self, e_xz):
        assert e_xz.stability == StabilityTag.STABLE

    def test_boundary_xy_is_saddle(self, model_params):
        eq = find_equilibrium(model_params, EquilibriumKind.BOUNDARY_XY)
        assert eq.state.z == 0.0
        assert eq.stability in (StabilityTag.SADDLE, StabilityTag.SADDLE_FOCUS)

    def test_coexistence_converges(self, model_params):
        eq = find_equilibrium(model_params, EquilibriumKind.COEXISTENCE)
        s = eq.state
        assert min(s.x, s.y, s.z) > 0.0
        assert eq.residual <= 1e-10

    def test_residual_definition(self, model_params):
        eq = find_equilibrium(model_params, EquilibriumKind.COEXISTENCE)
        model = ModelFactory.create_model(params=model_params)
        assert model.equilibrium_residual(eq.state.as_array()) == pytest.approx(eq.residual, abs=1e-15)

    def test_coexistence_beyond_transcritical_is_rejected(self, model_params):
        with pytest.raises(ConvergenceError):
            find_equilibrium(model_params.with_h(0.42), EquilibriumKind.COEXISTENCE)

    def test_newton_reports_iterations(self, model_params):
        model = ModelFactory.create_model(params=model_params)
        guess = model.initial_guess(EquilibriumKind.BOUNDARY_XZ) * 1.01
        state, iterations, residual = newton_equilibrium(model, EquilibriumKind.BOUNDARY_XZ, guess)
        assert iterations >= 1
        assert residual <= 1e-10
        assert state[1] == 0.0


@pytest.mark.unit
@pytest.mark.algorithm
class TestFSN:
    """Location of the FSN II point."""

    def test_location(self, fsn_result):
        h_bar, eq = fsn_result
        assert h_bar == pytest.approx(PUBLISHED["h_fsn"], abs=5e-4)
        np.testing.assert_allclose(eq.state.as_array(), PUBLISHED["fsn_state"], atol=1e-3)

    def test_equilibrium_sits_on_fold(self, fsn_result, model_params):
        h_bar, eq = fsn_result
        model = ModelFactory.create_model(params=model_params.with_h(h_bar))
        table = model.partials(eq.state.as_array(), order=2)
        assert abs(table["phi_x"]) < 1e-8
        assert table["phi_xx"] != 0.0

    def test_bracket_without_fold_raises(self, model_params):
        with pytest.raises(NotFoundError):
            find_fsn2(model_params, h_bracket=(0.3, 0.34))


@pytest.mark.unit
class TestConditions:
    """Structural sign conditions at the FSN II point."""

    @pytest.fixture(scope="class")
    def report(self, model_params, fsn_result):
        h_bar, eq = fsn_result
        e_xz = find_equilibrium(model_params.with_h(h_bar), EquilibriumKind.BOUNDARY_XZ)
        return check_conditions(model_params, eq, e_xz)

    @pytest.mark.parametrize("name", ["H1", "H2", "H3", "P1", "P2", "P3", "P4", "Q1"])
    def test_condition_passes(self, report, name):
        assert report.get(name).passed is True

    def test_transversality_reported_not_failed(self, report):
        check = report.get("P5")
        assert check.status == ConditionStatus.CHECKED_ELSEWHERE
        assert check.evidence["bracket"] != 0.0

    def test_global_conditions_are_empirical(self, report):
        for name in ("Q2", "Q3", "Q4", "Q5"):
            assert report.get(name).status == ConditionStatus.EMPIRICAL
            assert report.get(name).passed is None
