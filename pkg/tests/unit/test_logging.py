"""Tests for the structured pipeline logger."""

import logging
from unittest.mock import Mock, patch

import pytest

from src.core.logging import RunLogger, get_logger, setup_logging
from src.core.normal_form import coefficients, lyapunov_l1


@pytest.mark.unit
class TestRunLogger:
    """Test RunLogger event payloads."""

    def setup_method(self):
        """Setup test fixtures."""
        self.run_logger = RunLogger("test")

    def test_get_logger(self):
        assert isinstance(get_logger("src.core.ews"), RunLogger)

    def test_log_newton_converged(self):
        with patch.object(self.run_logger, "logger") as mock_logger:
            self.run_logger.log_newton("coexistence", 0.2649, 4, 1e-12, True)

            mock_logger.debug.assert_called_once()
            kwargs = mock_logger.debug.call_args[1]
            assert kwargs["event_type"] == "newton_solve"
            assert kwargs["kind"] == "coexistence"
            assert kwargs["iterations"] == 4

    def test_log_newton_failed(self):
        with patch.object(self.run_logger, "logger") as mock_logger:
            self.run_logger.log_newton("coexistence", 0.42, 100, 0.3, False)

            mock_logger.warning.assert_called_once()
            mock_logger.debug.assert_not_called()

    def test_log_integration(self):
        with patch.object(self.run_logger, "logger") as mock_logger:
            self.run_logger.log_integration("xyz", 400.0, 12000, 1, "extinction", 0.5)

            args, kwargs = mock_logger.info.call_args
            assert args[0] == "integration finished"
            assert kwargs["terminated_by"] == "extinction"
            assert kwargs["nfev"] == 12000

    def test_log_fit(self):
        with patch.object(self.run_logger, "logger") as mock_logger:
            self.run_logger.log_fit(1.0, 40.0, 0.3, -0.012, 1e-4, True, interval_index=2)

            kwargs = mock_logger.debug.call_args[1]
            assert kwargs["interval"] == [1.0, 40.0]
            assert kwargs["interval_index"] == 2
            assert kwargs["refined"] is True

    def test_log_verdict_passes_evidence(self):
        with patch.object(self.run_logger, "logger") as mock_logger:
            self.run_logger.log_verdict("ews", "extinction_warning", i0=3, warning_time_s=7.2)

            kwargs = mock_logger.info.call_args[1]
            assert kwargs["verdict"] == "extinction_warning"
            assert kwargs["i0"] == 3
            assert kwargs["source"] == "ews"

    def test_log_discrepancy_is_warning(self):
        with patch.object(self.run_logger, "logger") as mock_logger:
            self.run_logger.log_discrepancy("fit_monotonicity", "k1 decreasing", {"k1": [0.3, 0.31]})

            mock_logger.warning.assert_called_once()
            assert mock_logger.warning.call_args[1]["topic"] == "fit_monotonicity"

    def test_log_discrepancy_level(self):
        with patch.object(self.run_logger, "logger") as mock_logger:
            self.run_logger.log_discrepancy("lyapunov_l1", 0.0934, {"l1": 0.0058}, level="debug")

            mock_logger.debug.assert_called_once()
            mock_logger.warning.assert_not_called()

    def test_lyapunov_comparison_logged_at_debug(self, published_coeffs):
        with patch.object(coefficients.logger, "logger") as mock_logger:
            lyapunov_l1(published_coeffs)
            lyapunov_l1(published_coeffs)

            mock_logger.warning.assert_not_called()
            mock_logger.info.assert_not_called()
            assert mock_logger.debug.call_count == 2
            assert mock_logger.debug.call_args[1]["topic"] == "lyapunov_l1"

    def test_log_bifurcation(self):
        with patch.object(self.run_logger, "logger") as mock_logger:
            self.run_logger.log_bifurcation("hopf", "coexistence", 0.2646, {"re_pair": 0.0})

            kwargs = mock_logger.info.call_args[1]
            assert kwargs["kind"] == "hopf"
            assert kwargs["re_pair"] == 0.0

    def test_log_branch_termination(self):
        with patch.object(self.run_logger, "logger") as mock_logger:
            self.run_logger.log_branch_termination("coexistence", 0.3577, "KindMismatchError")

            assert mock_logger.info.call_args[1]["reason"] == "KindMismatchError"


@pytest.mark.unit
class TestSetupLogging:
    """Test setup_logging configuration."""

    @patch("src.core.logging.get_settings")
    def test_level_override(self, mock_get_settings):
        mock_settings = Mock()
        mock_settings.log_level = "INFO"
        mock_settings.log_json = True
        mock_settings.log_file = None
        mock_get_settings.return_value = mock_settings

        setup_logging("debug")

        assert logging.getLogger().level == logging.DEBUG

    @patch("src.core.logging.logging.FileHandler")
    @patch("src.core.logging.get_settings")
    def test_file_handler(self, mock_get_settings, mock_file_handler):
        mock_settings = Mock()
        mock_settings.log_level = "WARNING"
        mock_settings.log_json = False
        mock_settings.log_file = "logs/run.log"
        mock_get_settings.return_value = mock_settings
        mock_file_handler.return_value = logging.NullHandler()

        setup_logging()

        mock_file_handler.assert_called_once_with("logs/run.log")
        assert logging.getLogger().level == logging.WARNING
