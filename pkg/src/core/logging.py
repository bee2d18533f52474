"""Structured logging for the slow-fast early-warning toolkit."""

import logging
import sys
from typing import Any, Dict, Optional

import structlog

from ..config import get_settings


class RunLogger:
    """Structured events emitted by the numerical pipeline."""

    def __init__(self, name: str = "slowfast"):
        self.logger = structlog.get_logger(name)

    def log_newton(self, kind: str, h: float, iterations: int, residual: float, converged: bool):
        """Log an equilibrium solve."""
        event = {
            "event_type": "newton_solve",
            "kind": kind,
            "h": h,
            "iterations": iterations,
            "residual": residual,
        }
        if converged:
            self.logger.debug("equilibrium converged", **event)
        else:
            self.logger.warning("equilibrium did not converge", **event)

    def log_integration(self, coordinates: str, t_final: float, nfev: int, status: int,
                        terminated_by: Optional[str], processing_time: float):
        """Log an integrator run."""
        self.logger.info(
            "integration finished",
            event_type="integration",
            coordinates=coordinates,
            t_final=t_final,
            nfev=nfev,
            status=status,
            terminated_by=terminated_by,
            processing_time=processing_time,
        )

    def log_fit(self, t0: float, t1: float, k1: float, k2: float, residual: float,
                refined: bool, interval_index: Optional[int] = None):
        """Log an exponential envelope fit."""
        self.logger.debug(
            "envelope fitted",
            event_type="exp_fit",
            interval=[t0, t1],
            interval_index=interval_index,
            k1=k1,
            k2=k2,
            residual=residual,
            refined=refined,
        )

    def log_scan_step(self, index: int, crossed: bool, tau_cross: Optional[float],
                      k1: float, k2: float):
        """Log one nested interval of the early-warning scan."""
        self.logger.debug(
            "scan interval",
            event_type="ews_interval",
            index=index,
            crossed=crossed,
            tau_cross=tau_cross,
            k1=k1,
            k2=k2,
        )

    def log_verdict(self, source: str, verdict: str, **evidence: Any):
        self.logger.info("verdict", event_type="verdict", source=source, verdict=verdict, **evidence)

    def log_discrepancy(self, topic: str, expected: Any, observed: Any, note: str = "",
                        level: str = "warning"):
        """Log a known disagreement between a closed form and a direct computation."""
        getattr(self.logger, level)(
            "known discrepancy",
            event_type="discrepancy",
            topic=topic,
            expected=expected,
            observed=observed,
            note=note,
        )

    def log_bifurcation(self, kind: str, branch: str, h: float, evidence: Dict[str, float]):
        self.logger.info("bifurcation located", event_type="bifurcation",
                         kind=kind, branch=branch, h=h, **evidence)

    def log_branch_termination(self, branch: str, h: float, reason: str):
        self.logger.info("branch terminated", event_type="branch_termination",
                         branch=branch, h=h, reason=reason)


def get_logger(name: str) -> RunLogger:
    """Pipeline logger bound to ``name``."""
    return RunLogger(name)


def setup_logging(level: Optional[str] = None, json_logs: Optional[bool] = None):
    """Configure structlog and the stdlib root logger (stderr, optional file)."""
    settings = get_settings()
    level_name = (level or settings.log_level).upper()
    json_logs = settings.log_json if json_logs is None else json_logs

    renderer = (structlog.processors.JSONRenderer(sort_keys=True) if json_logs
                else structlog.dev.ConsoleRenderer(colors=False))
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )

    handlers = [logging.StreamHandler(sys.stderr)]
    if settings.log_file:
        handlers.append(logging.FileHandler(settings.log_file))
    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format="%(message)s",
        handlers=handlers,
        force=True,
    )
