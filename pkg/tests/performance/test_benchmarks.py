"""Performance benchmarks for the simulation and early-warning pipeline."""

import time

import pytest

from src.core.bifurcation import sweep
from src.core.equilibria import find_fsn2
from src.core.ews import nested_interval_scan
from src.core.integrator import integrate_model, integrate_nf
from src.models.enums import EquilibriumKind
from src.models.normal_form import NFState
from src.models.params import ModelParams, State
from src.models.trajectory import IntegratorConfig
from tests.fixtures.data import BISTABLE_ALPHA, NF_COLLAPSE_IC, XYZ_COLLAPSE_IC


@pytest.mark.performance
@pytest.mark.slow
class TestPerformanceBenchmarks:
    """Wall-clock ceilings for the expensive operations."""

    def test_normal_form_integration_performance(self, published_coeffs):
        u, v, w = NF_COLLAPSE_IC
        start_time = time.perf_counter()
        integrate_nf(NFState(u=u, v=v, w=w), published_coeffs, BISTABLE_ALPHA,
                     IntegratorConfig(t_final=1000.0, max_step=0.05))
        processing_time = time.perf_counter() - start_time

        assert processing_time < 10.0, f"Integration took {processing_time:.2f} seconds, expected < 10 seconds"

    def test_population_integration_performance(self, model_params):
        x, y, z = XYZ_COLLAPSE_IC
        start_time = time.perf_counter()
        integrate_model(State(x=x, y=y, z=z), model_params, IntegratorConfig(t_final=400.0, max_step=0.05))
        processing_time = time.perf_counter() - start_time

        assert processing_time < 20.0, f"Integration took {processing_time:.2f} seconds, expected < 20 seconds"

    def test_scan_performance(self, collapsing_signal, published_coeffs):
        start_time = time.perf_counter()
        nested_interval_scan(collapsing_signal, published_coeffs)
        processing_time = time.perf_counter() - start_time

        assert processing_time < 5.0, f"Scan took {processing_time:.2f} seconds, expected < 5 seconds"

    def test_sweep_performance(self):
        start_time = time.perf_counter()
        result = sweep(ModelParams(), 0.2, 0.3, 0.01,
                       kinds=(EquilibriumKind.BOUNDARY_XZ, EquilibriumKind.BOUNDARY_XY))
        processing_time = time.perf_counter() - start_time

        assert processing_time < 30.0, f"Sweep took {processing_time:.2f} seconds, expected < 30 seconds"
        assert len(result.branches) == 2


@pytest.mark.performance
class TestBenchmarkFixture:
    """pytest-benchmark timings of the inner kernels."""

    def test_fsn_search(self, benchmark):
        h_bar, _ = benchmark(find_fsn2, ModelParams())
        assert h_bar == pytest.approx(0.2656, abs=5e-4)

    def test_coexisting_scan(self, benchmark, coexisting_signal, published_coeffs):
        report = benchmark(nested_interval_scan, coexisting_signal, published_coeffs)
        assert report.n_intervals > 0
