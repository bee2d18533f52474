"""Peaks, moving averages and exponential envelopes of oscillatory time series."""

import math
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.optimize import least_squares
from scipy.signal import find_peaks

from ..config import get_settings
from ..models.normal_form import NFState, NormalFormCoeffs
from ..models.signal import (
    BaseCurve,
    BCoefficients,
    ExpFit,
    MovingAverage,
    PeakSequence,
    slow_to_time,
    time_to_slow,
)
from ..models.trajectory import Trajectory
from .errors import ConditionViolatedError, DegenerateError, FitError, InsufficientDataError
from .logging import get_logger

logger = get_logger(__name__)

PREFIX_TOL = 1e-9
REFINE_MAX_ITER = 20


def _vertex(t: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
    """Vertex of the parabola through three samples."""
    center = t[1]
    a, b, c = np.polyfit(t - center, y, 2)
    if a >= 0.0:
        return float(t[1]), float(y[1])
    s = -b / (2.0 * a)
    if not t[0] - center <= s <= t[2] - center:
        return float(t[1]), float(y[1])
    return float(center + s), float(c - b * b / (4.0 * a))


def detect_peaks(t: np.ndarray, values: np.ndarray, refine: bool = True,
                 tol: float = PREFIX_TOL) -> PeakSequence:
    """
    Local maxima of a sampled signal, truncated at the longest non-increasing prefix.

    Args:
        t: Strictly increasing sample times
        values: Signal samples
        refine: Move each maximum to the vertex of the parabola through its three samples
        tol: Slack allowed when comparing successive peak values

    Raises:
        InsufficientDataError: If fewer than two peaks survive
    """
    t = np.asarray(t, dtype=float)
    values = np.asarray(values, dtype=float)
    idx, _ = find_peaks(values)
    times, heights = [], []
    for i in idx:
        if refine:
            tp, vp = _vertex(t[i - 1:i + 2], values[i - 1:i + 2])
        else:
            tp, vp = float(t[i]), float(values[i])
        times.append(tp)
        heights.append(vp)

    keep = min(len(heights), 1)
    while keep < len(heights) and heights[keep] <= heights[keep - 1] + tol:
        keep += 1
    if keep < 2:
        raise InsufficientDataError(
            f"Need at least two decreasing peaks, found {keep} of {len(heights)}",
            suggestion="Integrate longer or start closer to the equilibrium",
            n_detected=len(heights),
        )
    return PeakSequence(times=tuple(times[:keep]), values=tuple(heights[:keep]), n_detected=len(heights))


def trajectory_peaks(traj: Trajectory, channel: str = "u", refine: bool = True) -> PeakSequence:
    return detect_peaks(traj.t, traj.channel(channel), refine=refine)


def average_function(func: Callable[[np.ndarray], np.ndarray], t0: float, t_end: float, window: float,
                     channel: str = "g", samples_per_window: Optional[int] = None) -> MovingAverage:
    """
    Moving average of a callable signal over [tau, tau + window].

    The signal is resampled on a uniform grid of spacing window/M and integrated
    with the cumulative trapezoid rule.

    Raises:
        InsufficientDataError: If the window exceeds the span
    """
    if window <= 0.0:
        raise ValueError("window must be positive")
    span = t_end - t0
    if window > span + 1e-12:
        raise InsufficientDataError(f"Window {window:.4g} exceeds span {span:.4g}", window=window, span=span)
    M = samples_per_window or get_settings().ews_samples_per_window
    dt = window / M
    n = int(math.floor(span / dt + 1e-9)) + 1
    grid = t0 + dt * np.arange(n)
    g = np.asarray(func(grid), dtype=float)
    cumulative = cumulative_trapezoid(g, dx=dt, initial=0.0)
    count = n - M
    values = (cumulative[M:M + count] - cumulative[:count]) / window
    return MovingAverage(window=window, channel=channel, tau=grid[:count], values=values)


def moving_average(traj: Trajectory, channel: str, window: float,
                   samples_per_window: Optional[int] = None) -> MovingAverage:
    """Moving average of a trajectory channel ('u2' averages u squared)."""
    return average_function(lambda ts: traj.evaluate(ts, channel), float(traj.t[0]), float(traj.t[-1]),
                            window, channel=channel, samples_per_window=samples_per_window)


def _log_linear(tau: np.ndarray, values: np.ndarray, t_ref: float, extra: Optional[np.ndarray] = None):
    columns = [np.ones_like(tau), tau - t_ref]
    if extra is not None:
        columns.extend(extra)
    design = np.column_stack(columns)
    coef, _, rank, _ = np.linalg.lstsq(design, np.log(values), rcond=None)
    if rank < design.shape[1]:
        raise FitError("Rank-deficient design for the exponential fit")
    log_res = np.log(values) - design @ coef
    return coef, float(np.sqrt(np.mean(log_res ** 2)))


def _interval_samples(ma: MovingAverage, interval: Tuple[float, float],
                      interval_index: Optional[int]) -> Tuple[np.ndarray, np.ndarray]:
    t0, t1 = interval
    tau, values = ma.restrict(t0, t1)
    if tau.size < 3 or np.ptp(tau) <= 0.0:
        raise FitError(f"Too few samples on [{t0:.4g}, {t1:.4g}]", interval_index=interval_index)
    if np.any(values <= 0.0):
        raise FitError("Nonpositive averaged value in fit interval", interval_index=interval_index)
    return tau, values


def fit_exponential(ma: MovingAverage, interval: Tuple[float, float], refine: bool = True,
                    t_ref: Optional[float] = None, interval_index: Optional[int] = None) -> ExpFit:
    """
    Fit k1*exp(k2*(tau - t_ref)) to the averaged samples on ``interval``.

    Log-linear least squares first; a damped Gauss-Newton (Levenberg-Marquardt)
    pass on the original scale, capped at 20 iterations, is kept only if it
    lowers the untransformed RMS.

    Raises:
        FitError: On nonpositive samples or a rank-deficient design
    """
    t0, t1 = interval
    t_ref = t0 if t_ref is None else t_ref
    tau, values = _interval_samples(ma, interval, interval_index)
    (c0, k2), log_rms = _log_linear(tau, values, t_ref)
    k1 = math.exp(c0)
    refined = False

    if refine:
        def residuals(p):
            return p[0] * np.exp(p[1] * (tau - t_ref)) - values

        def jacobian(p):
            growth = np.exp(p[1] * (tau - t_ref))
            return np.column_stack([growth, p[0] * (tau - t_ref) * growth])

        base_rms = float(np.sqrt(np.mean(residuals((k1, k2)) ** 2)))
        if base_rms > 0.0:
            result = least_squares(residuals, x0=[k1, k2], jac=jacobian, method="lm",
                                   max_nfev=REFINE_MAX_ITER)
            rms = float(np.sqrt(np.mean(result.fun ** 2)))
            if result.x[0] > 0.0 and rms < base_rms:
                k1, k2 = float(result.x[0]), float(result.x[1])
                log_rms = float(np.sqrt(np.mean((np.log(values) - np.log(k1) - k2 * (tau - t_ref)) ** 2)))
                refined = True

    logger.log_fit(t0, t1, k1, k2, log_rms, refined, interval_index)
    return ExpFit(k1=k1, k2=k2, t0=t0, t1=t1, t_ref=t_ref, residual=log_rms, refined=refined)


def envelope_decomposition(ma: MovingAverage, interval: Tuple[float, float], theta: float,
                           t_ref: Optional[float] = None) -> ExpFit:
    """Envelope fit with the oscillatory correction (1 + g1 cos 2 theta tau + g2 sin 2 theta tau); diagnostic only."""
    t0, _ = interval
    t_ref = t0 if t_ref is None else t_ref
    tau, values = _interval_samples(ma, interval, None)
    phase = 2.0 * theta * (tau - t_ref)
    coef, log_rms = _log_linear(tau, values, t_ref, extra=np.vstack([np.cos(phase), np.sin(phase)]))
    return ExpFit(k1=math.exp(coef[0]), k2=float(coef[1]), t0=t0, t1=interval[1], t_ref=t_ref,
                  residual=log_rms, gamma1=float(coef[2]), gamma2=float(coef[3]))


def b_coefficients(initial: NFState, coeffs: NormalFormCoeffs, alpha: float, peaks: PeakSequence,
                   fit: Optional[ExpFit] = None) -> BCoefficients:
    """
    Averaged-system constants from the initial point and the mean oscillation period.

    b2 is alpha*delta and b1 the period-averaged A^2 unless a fit is supplied, in
    which case both come from the fitted envelope of the averaged u^2.

    Raises:
        ConditionViolatedError: If b2 >= 0
    """
    b2 = fit.k2 if fit is not None else alpha * coeffs.delta
    if b2 >= 0.0:
        raise ConditionViolatedError(f"b2 = {b2:.4g} is not a decay rate", b2=b2)
    theta_sq = 1.0 - b2 * b2 / 4.0
    if theta_sq <= 0.0:
        raise ConditionViolatedError("decay rate too large for an oscillating envelope", b2=b2)
    theta = math.sqrt(theta_sq)
    u0, v0 = initial.u, initial.v
    A = math.sqrt(max(u0 * u0 + u0 * v0 * b2 + v0 * v0, 0.0)) / theta
    period = peaks.period
    if fit is not None:
        b1 = fit.k1
    else:
        b1 = A * A * (-math.expm1(-period * b2)) / (2.0 * period * b2)
    c2 = b2 / 2.0
    return BCoefficients(A=A, theta=theta, b1=b1, b2=b2, B=A / (c2 * c2 + theta * theta), c2=c2, period=period)


def wbar_base(wbar_tau1: float, source: Union[ExpFit, BCoefficients], coeffs: NormalFormCoeffs,
              tau1: float) -> BaseCurve:
    """
    Two-exponential solution of the averaged w equation forced by the base envelope of u squared.

    Raises:
        DegenerateError: If the envelope rate equals delta*H3
    """
    if isinstance(source, ExpFit):
        amplitude = float(source.evaluate(tau1))
        rate = source.k2
    else:
        amplitude, rate = source.b1, source.b2
    if abs(rate - coeffs.delta * coeffs.H3) <= 1e-15:
        raise DegenerateError("Envelope rate is resonant with delta*H3", rate=rate)
    return BaseCurve(wbar_tau1=wbar_tau1, tau1=tau1, amplitude=amplitude, rate=rate,
                     delta=coeffs.delta, H3=coeffs.H3, H11=coeffs.H11)


__all__ = [
    "average_function",
    "b_coefficients",
    "detect_peaks",
    "envelope_decomposition",
    "fit_exponential",
    "moving_average",
    "slow_to_time",
    "time_to_slow",
    "trajectory_peaks",
    "wbar_base",
]
