"""Bistability classifier and the nested-interval early-warning scan."""

import math
from typing import List, Optional, Tuple, Union

import numpy as np

from ..models.enums import EWSVerdict, TheoremVerdict
from ..models.ews import (
    CriticalCurve,
    CriticalCurveFamily,
    EWSConfig,
    EWSReport,
    TheoremBounds,
    TheoremResult,
)
from ..models.normal_form import NFState, NormalFormCoeffs
from ..models.signal import BCoefficients, ExpFit, PeakSequence
from ..models.trajectory import Trajectory
from .errors import (
    ConditionViolatedError,
    HypothesisViolatedError,
    InsufficientDataError,
    SignRegimeError,
)
from .logging import get_logger
from .signal import average_function, b_coefficients, fit_exponential, moving_average, trajectory_peaks, wbar_base

logger = get_logger(__name__)

Envelope = Union[ExpFit, BCoefficients]


def _require_sign_regime(coeffs: NormalFormCoeffs) -> None:
    if not coeffs.sign_regime_ok:
        raise SignRegimeError(
            "Coefficients are outside the bistable regime F13 > 0, F111 < 0, H3 > 0, H11 < 0",
            F13=coeffs.F13, F111=coeffs.F111, H3=coeffs.H3, H11=coeffs.H11,
        )


def _amplitude_rate(source: Envelope, tau1: float) -> Tuple[float, float]:
    if isinstance(source, ExpFit):
        return float(source.evaluate(tau1)), source.k2
    return source.b1, source.b2


def theorem_bounds(wbar_tau1: float, source: Envelope, coeffs: NormalFormCoeffs, tau1: float,
                   gap: Optional[float] = None) -> TheoremBounds:
    """
    Limit-cycle window and extinction threshold for wbar(tau1).

    The extinction threshold is the critical level at tau1. The lower edge of the
    limit-cycle window sits ``gap`` above it; without a measured gap between w and
    its average the asymptotic cushion delta^2 is used.
    """
    b1, b2 = _amplitude_rate(source, tau1)
    d, H3, H11 = coeffs.delta, coeffs.H3, coeffs.H11
    forced = d * H11 * b1 / (2.0 * (b2 - d * H3))
    return TheoremBounds(
        lower=forced + (d * d if gap is None else gap),
        upper=-H11 * b1 / (2.0 * H3),
        extinction_threshold=forced,
        wbar_tau1=wbar_tau1,
        gap=gap,
    )


def rel2_check(bcoef: BCoefficients, coeffs: NormalFormCoeffs) -> Optional[bool]:
    """Auxiliary inequality between the averaged-system constants; None where it is undefined."""
    c2, theta = bcoef.c2, bcoef.theta
    dh = coeffs.delta * coeffs.H3
    lhs = 1.0 + 1.0 / (c2 * c2 + theta * theta)
    ratio = 4.0 * math.pi * c2 / theta
    # (1 - exp(-r)) / (2r) tends to 1/2 as r -> 0
    factor = 0.5 if ratio == 0.0 else -math.expm1(-ratio) / (2.0 * ratio)
    gap = 2.0 * c2 / dh - 1.0
    if gap == 0.0:
        return None
    return lhs > -factor / gap


def predict_min_time(wbar_tau1: float, source: Envelope, coeffs: NormalFormCoeffs, tau1: float) -> float:
    """
    Time of the interior minimum of wbar_base.

    Raises:
        ConditionViolatedError: If the closed form has a nonpositive log argument
    """
    b1, b2 = _amplitude_rate(source, tau1)
    d, H3, H11 = coeffs.delta, coeffs.H3, coeffs.H11
    gap = d * H3 - b2
    denominator = H3 * (2.0 * wbar_tau1 * gap + d * H11 * b1)
    if denominator == 0.0 or gap == 0.0:
        raise ConditionViolatedError("Minimum-time formula is singular", wbar_tau1=wbar_tau1)
    argument = H11 * b1 * b2 / denominator
    if argument <= 0.0:
        raise ConditionViolatedError(
            "wbar_base has no interior minimum for this wbar(tau1)",
            suggestion="Check that wbar(tau1) lies inside the limit-cycle window",
            wbar_tau1=wbar_tau1, log_argument=argument,
        )
    return tau1 + math.log(argument) / gap


def predict_crossing_time(wbar_tau1: float, source: Envelope, coeffs: NormalFormCoeffs, tau1: float) -> float:
    """
    Time at which wbar_base changes sign.

    Raises:
        HypothesisViolatedError: If wbar(tau1) is not below the critical level
    """
    k1, k2 = _amplitude_rate(source, tau1)
    d, H3, H11 = coeffs.delta, coeffs.H3, coeffs.H11
    gap = d * H3 - k2
    numerator = d * H11 * k1
    denominator = numerator + 2.0 * wbar_tau1 * gap
    if denominator == 0.0 or gap == 0.0:
        raise HypothesisViolatedError("wbar(tau1) sits on the critical level; no finite crossing",
                                      wbar_tau1=wbar_tau1)
    argument = numerator / denominator
    if argument <= 0.0:
        raise HypothesisViolatedError(
            "wbar(tau1) is above the critical level; wbar_base does not change sign",
            wbar_tau1=wbar_tau1, log_argument=argument,
        )
    return tau1 + math.log(argument) / gap


def classify_theorem(wbar_tau1: float, bcoef: BCoefficients, coeffs: NormalFormCoeffs,
                     tau1: float, gap: Optional[float] = None) -> TheoremResult:
    """
    Limit cycle, extinction or inconclusive from wbar(tau1) and the averaged-system constants.

    Raises:
        SignRegimeError: Outside the bistable sign regime
    """
    _require_sign_regime(coeffs)
    bounds = theorem_bounds(wbar_tau1, bcoef, coeffs, tau1, gap=gap)
    tau_min = tau_cross = None
    if bounds.lower < wbar_tau1 < bounds.upper:
        verdict = TheoremVerdict.LIMIT_CYCLE
        try:
            tau_min = predict_min_time(wbar_tau1, bcoef, coeffs, tau1)
        except ConditionViolatedError:
            tau_min = None
    elif wbar_tau1 < bounds.extinction_threshold:
        verdict = TheoremVerdict.EXTINCTION
        try:
            tau_cross = predict_crossing_time(wbar_tau1, bcoef, coeffs, tau1)
        except ConditionViolatedError:
            tau_cross = None
    else:
        verdict = TheoremVerdict.INCONCLUSIVE
    result = TheoremResult(verdict=verdict, bounds=bounds, rel2_satisfied=rel2_check(bcoef, coeffs),
                           tau_min_pred=tau_min, tau_cross_pred=tau_cross)
    logger.log_verdict("theorem", verdict.value, wbar_tau1=wbar_tau1, lower=bounds.lower,
                       upper=bounds.upper, threshold=bounds.extinction_threshold)
    return result


def _window_average_at_start(traj: Trajectory, channel: str, tau1: float, window: float,
                             samples_per_window: Optional[int]) -> float:
    stop = min(float(traj.t[-1]), tau1 + 2.0 * window)
    ma = average_function(lambda ts: traj.evaluate(ts, channel), tau1, stop, window, channel, samples_per_window)
    return float(ma.values[0])


def theorem_from_trajectory(traj: Trajectory, coeffs: NormalFormCoeffs, alpha: float,
                            n_peaks: int = 18, samples_per_window: Optional[int] = None, k: int = 5,
                            ) -> Tuple[TheoremResult, BCoefficients, ExpFit, PeakSequence]:
    """
    Fit the averaged-system constants on the first ``n_peaks`` oscillations and classify.

    wbar(tau1) is averaged over the mean period of the first ``k`` oscillations, and
    the distance between w(tau1) and that average is used as the gap above the
    critical level.
    """
    peaks = trajectory_peaks(traj, "u")
    if peaks.n < 2:
        raise InsufficientDataError("Need at least two peaks", n_peaks=peaks.n)
    first = peaks.head(k + 1)
    peaks = peaks.head(n_peaks)
    tau1, tau_n = peaks.times[0], peaks.times[-1]
    window = peaks.period
    u2 = moving_average(traj, "u2", window, samples_per_window)
    fit = fit_exponential(u2, (tau1, min(tau_n, float(u2.tau[-1]))), t_ref=tau1)
    wbar_tau1 = _window_average_at_start(traj, "w", tau1, first.period, samples_per_window)
    gap = abs(float(traj.evaluate(np.array([tau1]), "w")[0]) - wbar_tau1)
    initial = NFState(u=float(traj.states[0, 0]), v=float(traj.states[0, 1]), w=float(traj.states[0, 2]),
                      tau=float(traj.t[0]))
    bcoef = b_coefficients(initial, coeffs, alpha, peaks, fit=fit)
    result = classify_theorem(wbar_tau1, bcoef, coeffs, tau1, gap=gap)
    return result, bcoef, fit, peaks


def _final_run_start(tau: np.ndarray, below: np.ndarray, interval_end: float) -> Optional[float]:
    """Start of the run of ``below`` samples that reaches the end of the interval, if any."""
    inside = np.nonzero(tau <= interval_end + 1e-12)[0]
    if inside.size == 0 or not below[inside[-1]]:
        return None
    last_index = int(inside[-1])
    above = np.nonzero(~below[:last_index + 1])[0]
    return float(tau[0 if above.size == 0 else int(above[-1]) + 1])


def _stays_below(tau: np.ndarray, below: np.ndarray, start: float, stop: float) -> bool:
    span = (tau >= start - 1e-12) & (tau <= stop + 1e-12)
    return bool(np.all(below[span]))


def _persistent_crossing(intervals: List[dict], index: int, hold: float) -> Optional[float]:
    """
    Crossing time for interval ``index`` if wbar stays below every later critical curve.

    wbar must remain below curve i from the crossing through max(end_i, crossing + hold),
    and below curve j on [crossing, end_j] for every later j.
    """
    current = intervals[index]
    tau, below, end = current["tau"], current["below"], current["end"]
    tau_c = _final_run_start(tau, below, end)
    if tau_c is None:
        return None
    stop = max(end, tau_c + hold)
    if tau[-1] < stop - 1e-9 or not _stays_below(tau, below, tau_c, stop):
        return None
    for later in intervals[index + 1:]:
        if not _stays_below(later["tau"], later["below"], tau_c, later["end"]):
            return None
    return tau_c


def nested_interval_scan(traj: Trajectory, coeffs: NormalFormCoeffs,
                         config: Optional[EWSConfig] = None) -> EWSReport:
    """
    Early-warning scan over nested intervals [tau_1, tau_{k+i}].

    Raises:
        InsufficientDataError: If fewer than k + 1 peaks are available
        FitError: If an envelope fit fails, with the interval index attached
    """
    config = config or EWSConfig()
    _require_sign_regime(coeffs)
    k = config.k
    peaks = trajectory_peaks(traj, config.u_channel)
    N = peaks.n if config.N is None else min(config.N, peaks.n)
    if N < k + 1:
        raise InsufficientDataError(f"Need at least k + 1 = {k + 1} decreasing peaks, found {N}",
                                    k=k, n_peaks=peaks.n)
    times = peaks.times
    tau1 = times[0]
    t_end = float(traj.t[-1])
    delta = coeffs.delta

    def evaluate(name):
        return lambda ts: traj.evaluate(ts, name)

    def averages(window: float, until: float):
        stop = min(t_end, until + 2.0 * window)
        u2 = average_function(evaluate("u2"), tau1, stop, window, "u2", config.samples_per_window)
        wbar = average_function(evaluate(config.w_channel), tau1, stop, window, "w", config.samples_per_window)
        return u2, wbar

    l1 = (times[k] - tau1) / k
    wbar_tau1 = _window_average_at_start(traj, config.w_channel, tau1, l1, config.samples_per_window)

    fits: List[ExpFit] = []
    curves: List[CriticalCurve] = []
    intervals: List[dict] = []
    ordered = True
    for i in range(1, N - k + 1):
        end = times[k + i - 1]
        window = (end - tau1) / (k + i - 1)
        u2, wbar = averages(window, end)
        fit = fit_exponential(u2, (tau1, min(end, float(u2.tau[-1]))), refine=config.refine_fits,
                              t_ref=tau1, interval_index=i)
        fits.append(fit)
        curve = CriticalCurve(index=i, k1=fit.k1, k2=fit.k2, tau1=tau1, delta=delta, H3=coeffs.H3, H11=coeffs.H11)
        curves.append(curve)
        if i > 1:
            shared = u2.tau[u2.tau <= times[k + i - 2]]
            ordered = ordered and CriticalCurveFamily(curves=curves).ordered_on(i - 1, shared)
        crit = curve(wbar.tau)
        intervals.append({"end": end, "window": window, "tau": wbar.tau, "wbar": wbar.values, "crit": crit,
                          "below": wbar.values < crit - config.crossing_tol})

    i0 = tau_c = None
    for index, interval in enumerate(intervals):
        candidate = _persistent_crossing(intervals, index, interval["window"])
        fit = fits[index]
        logger.log_scan_step(index + 1, candidate is not None, candidate, fit.k1, fit.k2)
        if candidate is not None:
            i0, tau_c = index + 1, candidate
            break
    decisive = intervals[(i0 or len(intervals)) - 1]
    samples = {"tau": decisive["tau"].tolist(), "wbar": decisive["wbar"].tolist(),
               "wcrit_i0": decisive["crit"].tolist()}

    family = CriticalCurveFamily(curves=curves)
    first_bounds = theorem_bounds(wbar_tau1, fits[0], coeffs, tau1)
    common = dict(
        k=k, N=N, tau1=tau1, fits=fits, family=family, theorem_bounds=first_bounds,
        monotonic_k1=family.monotonic_k1, monotonic_k2=family.monotonic_k2, curves_ordered=ordered,
        n_intervals=len(curves), n_delta_over_k=N * delta / k, curve_samples=samples,
    )
    if not (family.monotonic_k1 and family.monotonic_k2):
        logger.log_discrepancy("fit_monotonicity", "k1 decreasing, k2 increasing",
                               {"k1": family.k1_sequence, "k2": family.k2_sequence})

    if i0 is not None:
        try:
            tau_cross = predict_crossing_time(wbar_tau1, fits[i0 - 1], coeffs, tau1)
        except HypothesisViolatedError:
            tau_cross = None
        report = EWSReport(verdict=EWSVerdict.EXTINCTION_WARNING, i0=i0, warning_time_tau=tau_c,
                           warning_time_s=tau_c * delta, tau_cross_pred=tau_cross, **common)
    else:
        try:
            tau_min = predict_min_time(wbar_tau1, fits[-1], coeffs, tau1)
            report = EWSReport(verdict=EWSVerdict.COEXISTENCE_MINIMUM, tau_min_pred=tau_min, **common)
        except ConditionViolatedError as e:
            report = EWSReport(verdict=EWSVerdict.INCONCLUSIVE, message=e.message, **common)
    logger.log_verdict("ews", report.verdict.value, i0=report.i0, warning_time_s=report.warning_time_s)
    return report


CRITICAL_CURVE_COLUMNS = ["tau", "wbar", "wcrit_i0"]


def critical_curve_rows(report: EWSReport) -> List[dict]:
    """(tau, wbar, wcrit_i0) samples of the interval that decided the scan."""
    samples = report.curve_samples
    if not samples:
        return []
    return [dict(zip(CRITICAL_CURVE_COLUMNS, values))
            for values in zip(*(samples[c] for c in CRITICAL_CURVE_COLUMNS))]
