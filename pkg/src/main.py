"""Command-line entry point of the slow-fast early-warning toolkit."""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from .config import RunConfig, get_settings, load_run_config
from .core.bifurcation import sweep
from .core.equilibria import check_conditions, find_equilibrium, find_fsn2
from .core.errors import ConfigurationError, ToolkitError
from .core.ews import CRITICAL_CURVE_COLUMNS, critical_curve_rows, nested_interval_scan, theorem_from_trajectory
from .core.integrator import classify_attractor, integrate_model, integrate_nf
from .core.logging import get_logger, setup_logging
from .core.normal_form import coefficients_json, compute_coeffs, hopf_location, lyapunov_l1, to_normal_form_trajectory
from .models.bifurcation import BranchPoint
from .models.enums import Command, EquilibriumKind, OutputFormat
from .models.equilibrium import Equilibrium
from .models.ews import EWSConfig
from .models.normal_form import NFState, NormalFormCoeffs
from .models.params import State
from .models.trajectory import IntegratorConfig
from .utils.file_utils import dumps_json, ensure_directory, write_frame_csv, write_json, write_rows_csv

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_CONFIG = 2

BRANCH_COLUMNS = ["h", "x", "y", "z", "re_lambda1", "im_lambda1", "re_lambda2", "im_lambda2",
                  "re_lambda3", "im_lambda3", "stability"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slowfast-ews",
        description="Normal forms, bistability classification and early warnings for a slow-fast predator-prey model",
    )
    parser.add_argument("command", choices=[c.value for c in Command], help="Analysis to run")
    parser.add_argument("--config", type=Path, default=None, help="Run-config file with key = value lines")
    parser.add_argument("--h", type=float, default=None, help="Intraspecific competition h")
    parser.add_argument("--ic", type=str, default=None, help="Initial condition X,Y,Z (U,V,W for classify)")
    parser.add_argument("--tfinal", type=float, default=None, help="Integration horizon")
    parser.add_argument("--k", type=int, default=None, help="Minimum oscillations per nested interval")
    parser.add_argument("--N", type=str, default=None, help="Peaks used by the scan ('all' for every peak)")
    parser.add_argument("--out", type=str, default=None, help="Output directory")
    parser.add_argument("--format", type=str, default=None, choices=[f.value for f in OutputFormat],
                        help="Format of tabular artifacts")
    parser.add_argument("--log-level", type=str, default=None, help="Logging level")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "command": args.command,
        "h": args.h,
        "ic": args.ic,
        "t_final": args.tfinal,
        "k": args.k,
        "N": args.N,
        "out_dir": args.out,
        "format": args.format,
    }


def _integrator_config(config: RunConfig, **extra) -> IntegratorConfig:
    return IntegratorConfig(rtol=config.rtol, atol=config.atol, max_step=config.max_step,
                            t_final=config.t_final, method=config.method, **extra)


def _require_ic(config: RunConfig) -> Tuple[float, float, float]:
    if config.ic is None:
        raise ConfigurationError(f"Command '{config.command.value}' needs an initial condition",
                                 suggestion="Pass --ic X,Y,Z or set ic in the config file")
    return config.ic


def _write_table(frame_or_rows, path_stem: Path, config: RunConfig, columns: Optional[List[str]] = None) -> Path:
    if config.format == OutputFormat.JSON:
        rows = frame_or_rows.to_dict(orient="records") if columns is None else list(frame_or_rows)
        return write_json(rows, path_stem.with_suffix(".json"))
    if columns is None:
        return write_frame_csv(frame_or_rows, path_stem.with_suffix(".csv"))
    return write_rows_csv(frame_or_rows, path_stem.with_suffix(".csv"), columns)


def _normal_form(config: RunConfig) -> Tuple[float, Equilibrium, NormalFormCoeffs]:
    h_bar, fsn_point = find_fsn2(config.params, h_bracket=(config.fsn_h_min, config.fsn_h_max))
    return h_bar, fsn_point, compute_coeffs(fsn_point, config.params)


def cmd_simulate(config: RunConfig) -> Dict[str, Any]:
    """Integrate the population model and classify where the trajectory ends up."""
    x, y, z = _require_ic(config)
    traj = integrate_model(State(x=x, y=y, z=z), config.params, _integrator_config(config))
    e_xz = find_equilibrium(config.params, EquilibriumKind.BOUNDARY_XZ)
    verdict = classify_attractor(traj, e_xz=e_xz)

    out = ensure_directory(config.output_path)
    trajectory_path = _write_table(traj.to_frame(), out / "trajectory", config)
    payload = {
        "verdict": verdict.kind.value,
        "decision_time": verdict.decision_time,
        "evidence": verdict.evidence,
        "h": config.params.h,
        "ic": list(config.ic),
        "terminated_by": traj.terminated_by.value if traj.terminated_by else None,
        "event_times": traj.event_times,
        "e_xz": e_xz.state.model_dump(),
    }
    write_json(payload, out / "verdict.json")
    return {"command": "simulate", "verdict": verdict.kind.value, "trajectory": str(trajectory_path)}


def cmd_normalform(config: RunConfig) -> Dict[str, Any]:
    """Locate the FSN II point and export the normal-form coefficients."""
    h_bar, fsn_point, coeffs = _normal_form(config)
    payload = coefficients_json(coeffs, hopf_location(coeffs), lyapunov_l1(coeffs))
    payload["fsn_state"] = fsn_point.state.model_dump()
    e_xz = find_equilibrium(config.params.with_h(h_bar), EquilibriumKind.BOUNDARY_XZ)
    report = check_conditions(config.params.with_h(h_bar), fsn_point, e_xz)
    payload["conditions"] = {c.name: c.status.value for c in report.checks}

    out = ensure_directory(config.output_path)
    path = write_json(payload, out / "normal_form.json")
    return {"command": "normalform", "h_fsn": h_bar, "output": str(path)}


def cmd_ews(config: RunConfig) -> Dict[str, Any]:
    """Simulate, move to normal-form coordinates and run the nested-interval scan."""
    x, y, z = _require_ic(config)
    _, fsn_point, coeffs = _normal_form(config)
    traj = integrate_model(State(x=x, y=y, z=z), config.params, _integrator_config(config))
    nf_traj = to_normal_form_trajectory(traj, fsn_point, coeffs, config.params, leading_order=config.leading_order)
    report = nested_interval_scan(nf_traj, coeffs, EWSConfig(k=config.k, N=config.N))

    out = ensure_directory(config.output_path)
    path = write_json(report.to_export_dict(), out / "ews_report.json")
    result = {"command": "ews", "verdict": report.verdict.value, "warning_time_s": report.warning_time_s,
              "output": str(path)}
    if report.i0 is not None:
        curve = _write_table(critical_curve_rows(report), out / "critical_curve", config, CRITICAL_CURVE_COLUMNS)
        result["critical_curve"] = str(curve)
    return result


def cmd_classify(config: RunConfig) -> Dict[str, Any]:
    """Integrate the normal form and compare the simulated fate with the averaged-system prediction."""
    u, v, w = _require_ic(config)
    _, _, coeffs = _normal_form(config)
    alpha = coeffs.alpha(config.params.h) if config.alpha is None else config.alpha
    traj = integrate_nf(NFState(u=u, v=v, w=w), coeffs, alpha, _integrator_config(config))
    verdict = classify_attractor(traj)
    theorem, bcoef, fit, peaks = theorem_from_trajectory(traj, coeffs, alpha, n_peaks=config.n_peaks)

    payload = {
        "alpha": alpha,
        "ic": list(config.ic),
        "simulated": {"verdict": verdict.kind.value, "decision_time": verdict.decision_time,
                      "evidence": verdict.evidence},
        "theorem": theorem.to_export_dict(),
        "fit": fit.to_export_dict(),
        "b_coefficients": bcoef.model_dump(),
        "n_peaks": peaks.n,
    }
    out = ensure_directory(config.output_path)
    path = write_json(payload, out / "classification.json")
    return {"command": "classify", "simulated": verdict.kind.value, "theorem": theorem.verdict.value,
            "output": str(path)}


def _branch_rows(points: Sequence[BranchPoint]) -> List[Dict[str, Any]]:
    return [p.to_row() for p in points]


def cmd_sweep(config: RunConfig) -> Dict[str, Any]:
    """Continue the equilibrium branches over h and export branches and events."""
    result = sweep(config.params, config.h_min, config.h_max, config.h_step)
    out = ensure_directory(config.output_path)
    for branch in result.branches:
        _write_table(_branch_rows(branch.points), out / f"branch_{branch.branch_id}", config, BRANCH_COLUMNS)
    payload = result.to_export_dict()
    path = write_json(payload["events"], out / "events.json")
    write_json(payload["branches"], out / "branches.json")
    return {"command": "sweep", "n_branches": len(result.branches), "n_events": len(result.events),
            "output": str(path)}


COMMANDS = {
    Command.SIMULATE: cmd_simulate,
    Command.NORMALFORM: cmd_normalform,
    Command.EWS: cmd_ews,
    Command.CLASSIFY: cmd_classify,
    Command.SWEEP: cmd_sweep,
}


def run(config: RunConfig) -> Dict[str, Any]:
    return COMMANDS[config.command](config)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one command and map failures to exit codes."""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    settings = get_settings()
    try:
        config = load_run_config(args.config, _overrides(args))
        logger.logger.info("run start", app=settings.app_name, version=settings.version,
                           command=config.command.value, out_dir=config.out_dir)
        summary = run(config)
    except (ConfigurationError, ValidationError, FileNotFoundError) as e:
        detail = e.to_dict() if isinstance(e, ToolkitError) else {"error_code": "configuration_error",
                                                                   "message": str(e)}
        logger.logger.error("configuration error", **detail)
        sys.stderr.write(dumps_json(detail))
        return EXIT_CONFIG
    except ToolkitError as e:
        logger.logger.error("numerical failure", **e.to_dict())
        sys.stderr.write(dumps_json(e.to_dict()))
        return EXIT_NUMERICAL
    sys.stdout.write(dumps_json(summary))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
