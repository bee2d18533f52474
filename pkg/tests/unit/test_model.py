"""Tests for the predator-prey vector field and its derivatives."""

import numpy as np
import pytest
from pydantic import ValidationError

from src.core.errors import DomainError
from src.core.model import ModelFactory, PredatorPreyModel, eval_rhs, fold_curve, jacobian, partials
from src.models.enums import ModelType, TimeScale
from src.models.params import ModelParams, State


@pytest.mark.unit
class TestModelParams:
    """Parameter validation."""

    def test_defaults_match_reference_set(self):
        params = ModelParams()
        assert params.beta1 == pytest.approx(0.1923)
        assert params.h == pytest.approx(0.2649)
        assert params.zeta == pytest.approx(0.01)

    @pytest.mark.parametrize("field,value", [("beta1", 1.5), ("c", 0.0), ("a21", -0.1), ("zeta", 0.0)])
    def test_out_of_range_rejected(self, field, value):
        with pytest.raises(ValidationError):
            ModelParams(**{field: value})

    def test_with_h_keeps_other_fields(self):
        params = ModelParams().with_h(0.3)
        assert params.h == 0.3
        assert params.beta2 == ModelParams().beta2


@pytest.mark.unit
class TestVectorField:
    """Rates, time scales and derivative tables."""

    @pytest.fixture
    def model(self):
        return ModelFactory.create_model(ModelType.PREDATOR_PREY, ModelParams())

    def test_factory_returns_predator_prey(self, model):
        assert isinstance(model, PredatorPreyModel)
        assert ModelType.PREDATOR_PREY in ModelFactory.get_available_models()

    def test_axial_equilibrium_is_zero_of_field(self, model):
        np.testing.assert_allclose(model.rhs([1.0, 0.0, 0.0]), 0.0, atol=1e-14)

    def test_fast_time_is_zeta_times_slow(self, model):
        state = [0.3, 0.12, 0.41]
        slow = model.rhs(state, TimeScale.SLOW)
        fast = model.rhs(state, TimeScale.FAST)
        np.testing.assert_allclose(fast, model.zeta * slow, rtol=1e-12)

    def test_eval_rhs_accepts_state(self):
        params = ModelParams()
        state = State(x=0.3, y=0.1, z=0.4)
        np.testing.assert_allclose(eval_rhs(state, params), eval_rhs([0.3, 0.1, 0.4], params))

    def test_jacobian_matches_finite_differences(self, model):
        state = np.array([0.29, 0.12, 0.42])
        J = model.jacobian(state)
        eps = 1e-6
        numeric = np.empty((3, 3))
        for j in range(3):
            step = np.zeros(3)
            step[j] = eps
            numeric[:, j] = (model.rhs(state + step) - model.rhs(state - step)) / (2 * eps)
        np.testing.assert_allclose(J, numeric, rtol=1e-5, atol=1e-6)

    def test_rate_partials_match_finite_differences(self, model):
        state = np.array([0.3, 0.1, 0.4])
        table = model.partials(state, order=3)
        eps = 1e-5

        def phi_x(x):
            return model.partials([x, state[1], state[2]], order=1)["phi_x"]

        assert table["phi_xx"] == pytest.approx((phi_x(state[0] + eps) - phi_x(state[0] - eps)) / (2 * eps), rel=1e-6)
        assert table["f1_x"] == pytest.approx(table["phi"] + state[0] * table["phi_x"])

    def test_parameter_partial_is_minus_z(self, model):
        table = model.partials([0.3, 0.1, 0.4], order=1)
        assert table["f3_p"] == pytest.approx(-0.4 * 0.4)
        assert table["f1_p"] == 0.0

    def test_non_finite_state_rejected(self, model):
        with pytest.raises(DomainError):
            model.rhs([np.nan, 0.1, 0.1])

    def test_holling_pole_rejected(self, model):
        with pytest.raises(DomainError):
            model.rates(-0.5, 0.1, 0.1)

    def test_partials_order_checked(self):
        with pytest.raises(ValueError):
            partials([0.3, 0.1, 0.4], ModelParams(), order=4)

    def test_module_level_jacobian(self):
        params = ModelParams()
        np.testing.assert_allclose(jacobian([0.3, 0.1, 0.4], params),
                                   ModelFactory.create_model(params=params).jacobian([0.3, 0.1, 0.4]))


@pytest.mark.unit
class TestFoldCurve:
    """Fold of the critical manifold."""

    def test_fold_points_satisfy_both_conditions(self):
        params = ModelParams()
        model = ModelFactory.create_model(params=params)
        curve = fold_curve(params)
        assert curve.shape[1] == 3
        assert len(curve) > 0
        for x, y, z in curve[::10]:
            table = model.partials([x, y, z], order=1)
            assert abs(table["phi"]) < 1e-10
            assert abs(table["phi_x"]) < 1e-10

    def test_fold_curve_stays_in_octant(self):
        curve = fold_curve(ModelParams(), xs=np.linspace(0.05, 0.95, 19))
        assert np.all(curve[:, 1:] >= 0.0)

    def test_transcritical_curve_intercepts(self):
        model = ModelFactory.create_model(params=ModelParams())
        z = model.transcritical_curve(np.array([0.0, ModelParams().beta1]))
        np.testing.assert_allclose(z, [ModelParams().beta2, 0.0], atol=1e-14)
