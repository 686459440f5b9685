"""Single-photon pulse envelopes and two-level excitation dynamics.

Times are expressed in units of the atomic lifetime ``tau = 1/Gamma``
throughout; :class:`TwoLevelAtom` converts to seconds where needed.

The excited-state amplitude obeys

    db/dt = -(Gamma/2 + i Delta) b + sqrt(eta Gamma) xi(t),   b(t_start) = 0

where ``xi`` is the photon envelope with ``integral |xi|^2 dt = 1`` and
``eta`` the spatial coupling efficiency. With ``Gamma = 1`` in lifetime
units the only free rate is the detuning ``Delta``.
"""

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as sp_integrate
from scipy import optimize
from scipy.special import erf

from . import tables
from .errors import ConvergenceError, TruncationError

_MIN_NORM = 1.0 - 1e-8


@dataclass(frozen=True)
class TwoLevelAtom:
    """Transition wavelength (m) and spontaneous decay rate ``Gamma`` (1/s)."""

    wavelength: float
    linewidth: float

    def __post_init__(self):
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")
        if not self.linewidth > 0:
            raise ValueError(f"linewidth must be > 0, got {self.linewidth}")

    @property
    def lifetime(self):
        return 1.0 / self.linewidth

    def angular_frequency(self, speed_of_light=299_792_458.0):
        return 2.0 * np.pi * speed_of_light / self.wavelength

    def to_seconds(self, t_over_tau):
        return np.asarray(t_over_tau) * self.lifetime


class PulseShape(enum.Enum):
    RISING_EXPONENTIAL = "rising"
    FALLING_EXPONENTIAL = "falling"
    GAUSSIAN = "gaussian"
    CUSTOM = "custom"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


def _default_window(shape, T):
    if shape is PulseShape.RISING_EXPONENTIAL:
        return (-40.0 * T, 0.0)
    if shape is PulseShape.FALLING_EXPONENTIAL:
        return (0.0, 40.0 * T)
    return (-12.0 * T, 12.0 * T)


def _analytic_norm(shape, T, t0, t1):
    """Fraction of the untruncated norm lying in ``[t0, t1]``."""
    if shape is PulseShape.RISING_EXPONENTIAL:
        lo, hi = min(t0, 0.0), min(t1, 0.0)
        return np.exp(hi / T) - np.exp(lo / T)
    if shape is PulseShape.FALLING_EXPONENTIAL:
        lo, hi = max(t0, 0.0), max(t1, 0.0)
        return np.exp(-lo / T) - np.exp(-hi / T)
    # |xi|^2 is a normal density with standard deviation T
    s = np.sqrt(2.0) * T
    return 0.5 * (erf(t1 / s) - erf(t0 / s))


def _analytic_envelope(shape, T, t):
    t = np.asarray(t, dtype=float)
    if shape is PulseShape.RISING_EXPONENTIAL:
        return np.where(t <= 0, np.exp(np.minimum(t, 0.0) / (2 * T)), 0.0) / np.sqrt(T)
    if shape is PulseShape.FALLING_EXPONENTIAL:
        return np.where(t >= 0, np.exp(-np.maximum(t, 0.0) / (2 * T)), 0.0) / np.sqrt(T)
    return (2 * np.pi * T**2) ** -0.25 * np.exp(-(t**2) / (4 * T**2))


@dataclass(frozen=True)
class PulseEnvelope:
    """Normalized single-photon amplitude envelope on ``[t_start, t_end]``.

    ``time_constant`` is the intensity time constant ``T``: for the
    exponentials ``|xi|^2 ~ exp(+-t/T)``, for the Gaussian ``T`` is the
    standard deviation of ``|xi|^2``. Custom envelopes carry their own
    samples and are interpolated linearly.
    """

    shape: PulseShape
    time_constant: float
    t_start: float
    t_end: float
    scale: float = 1.0
    samples: tuple = field(default=None, repr=False)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t >= self.t_start) & (t <= self.t_end)
        if self.shape is PulseShape.CUSTOM:
            ts, xs = self.samples
            values = np.interp(t, ts, xs)
        else:
            values = _analytic_envelope(self.shape, self.time_constant, t)
        return np.where(inside, self.scale * values, 0.0)

    def norm(self, n=200_001):
        """Numerical ``integral |xi|^2 dt`` over the window."""
        t = np.linspace(self.t_start, self.t_end, n)
        return float(sp_integrate.simpson(np.abs(self(t)) ** 2, x=t))

    def breakpoints(self):
        if self.shape is PulseShape.CUSTOM:
            return ()
        return tuple(p for p in (0.0,) if self.t_start < p < self.t_end)


def make_envelope(shape, time_constant=1.0, window=None, samples=None):
    """Build a unit-norm photon envelope.

    Parameters
    ----------
    shape : PulseShape or str
        ``rising``, ``falling``, ``gaussian`` or ``custom``.
    time_constant : float
        Intensity time constant in lifetimes. The rising exponential with
        ``time_constant = 1`` is the time-reversed spontaneous emission pulse.
    window : (float, float), optional
        Support of the envelope; defaults to 40 time constants for the
        exponentials and +-12 for the Gaussian.
    samples : (array, array), optional
        Times and amplitudes for ``custom`` shapes.

    Raises
    ------
    TruncationError
        If the window holds less than ``1 - 1e-8`` of the envelope's norm.
    """
    shape = PulseShape.parse(shape)
    if not time_constant > 0:
        raise ValueError(f"time_constant must be > 0, got {time_constant}")

    if shape is PulseShape.CUSTOM:
        if samples is None:
            raise ValueError("custom envelopes need samples=(times, amplitudes)")
        ts, xs = (np.asarray(a, dtype=float) for a in samples)
        if ts.ndim != 1 or ts.shape != xs.shape or ts.size < 2 or np.any(np.diff(ts) <= 0):
            raise ValueError("custom samples need strictly increasing times of matching length")
        # exact norm of the piecewise-linear interpolant
        a, b = xs[:-1], xs[1:]
        norm = float(np.sum(np.diff(ts) * (a * a + a * b + b * b)) / 3.0)
        if not norm > 0:
            raise ValueError("custom envelope has zero norm")
        ts.setflags(write=False)
        xs = xs / np.sqrt(norm)
        xs.setflags(write=False)
        t0, t1 = window or (float(ts[0]), float(ts[-1]))
        return PulseEnvelope(shape, float(time_constant), t0, t1, 1.0, (ts, xs))

    t0, t1 = window or _default_window(shape, time_constant)
    if not t1 > t0:
        raise ValueError(f"empty window [{t0}, {t1}]")
    kept = _analytic_norm(shape, time_constant, t0, t1)
    if kept < _MIN_NORM:
        raise TruncationError(
            f"window [{t0}, {t1}] keeps only {kept:.10f} of the pulse norm", 1.0 - kept
        )
    return PulseEnvelope(shape, float(time_constant), float(t0), float(t1), float(1.0 / np.sqrt(kept)))


@dataclass(frozen=True)
class Excitation:
    """Result of :func:`excite`: sampled ``P_e(t)`` and its maximum."""

    t: np.ndarray
    probability: np.ndarray
    max_probability: float
    t_max: float

    def write_csv(self, path):
        return tables.write_csv(path, ["t_over_tau", "P_e"], zip(self.t, self.probability))


def excite(atom, pulse, spatial_efficiency, detuning=0.0, n_points=2001,
           rtol=1e-10, atol=1e-12, max_step=np.inf):
    """Integrate the excited-state amplitude driven by ``pulse``.

    Parameters
    ----------
    atom : TwoLevelAtom
        Only its lifetime sets the time unit; all other quantities are
        already in lifetime units.
    pulse : PulseEnvelope
    spatial_efficiency : float
        Fraction of the photon in the dipole-matched spatial mode.
    detuning : float
        Carrier detuning from resonance in units of ``Gamma``.

    Returns
    -------
    Excitation

    Raises
    ------
    ConvergenceError
        If the adaptive integrator fails.

    Notes
    -----
    Analytic envelopes are integrated with an adaptive 8th-order
    Runge-Kutta scheme (relative tolerance ``rtol``). Custom envelopes are
    propagated exactly between samples.
    """
    if not 0.0 <= spatial_efficiency <= 1.0:
        raise ValueError(f"spatial_efficiency must lie in [0, 1], got {spatial_efficiency}")
    t_eval = np.linspace(pulse.t_start, pulse.t_end, n_points)
    if spatial_efficiency == 0.0:
        zeros = np.zeros_like(t_eval)
        return Excitation(t_eval, zeros, 0.0, float(t_eval[0]))

    decay = 0.5 + 1j * detuning
    # linear in the drive: solve at unit drive so atol does not depend on eta
    if pulse.shape is PulseShape.CUSTOM:
        amplitude = _piecewise_linear_solution(pulse, 1.0, decay)
    else:
        amplitude = _adaptive_solution(pulse, 1.0, decay, rtol, atol, max_step)

    def population(t):
        return spatial_efficiency * np.abs(amplitude(t)) ** 2

    prob = population(t_eval)
    k = int(np.argmax(prob))
    t_best, p_best = float(t_eval[k]), float(prob[k])
    if 0 < k < n_points - 1:
        res = optimize.minimize_scalar(lambda s: -population(s)[0],
                                       bounds=(t_eval[k - 1], t_eval[k + 1]),
                                       method="bounded", options={"xatol": 1e-10})
        if -res.fun > p_best:
            t_best, p_best = float(res.x), float(-res.fun)
    return Excitation(t_eval, prob, p_best, t_best)


def _adaptive_solution(pulse, drive, decay, rtol, atol, max_step):
    def rhs(t, y):
        b = y[0] + 1j * y[1]
        db = -decay * b + drive * pulse(t)
        return [db.real, db.imag]

    # split at kinks of the envelope so no step straddles one
    edges = sorted({pulse.t_start, pulse.t_end, *pulse.breakpoints()})
    segments = []
    y0 = [0.0, 0.0]
    for lo, hi in zip(edges[:-1], edges[1:]):
        sol = sp_integrate.solve_ivp(rhs, (lo, hi), y0, method="DOP853", rtol=rtol,
                                     atol=atol, dense_output=True, max_step=max_step)
        if not sol.success:
            raise ConvergenceError(f"excitation integrator failed: {sol.message}")
        segments.append((lo, hi, sol.sol))
        y0 = sol.y[:, -1]

    def amplitude(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty((2, t.size))
        for lo, hi, dense in segments:
            sel = (t >= lo) & (t <= hi)
            if np.any(sel):
                out[:, sel] = dense(t[sel])
        return out[0] + 1j * out[1]

    return amplitude


def _linear_drive_step(b, x0, x1, h, drive, decay):
    """Exact propagation over ``h`` with the drive varying linearly from x0 to x1."""
    em1 = -np.expm1(-decay * h)  # 1 - exp(-c h)
    flat = em1 / decay
    ramp = np.where(h > 0, (h / decay - em1 / decay**2) / np.where(h > 0, h, 1.0), 0.0)
    return (1.0 - em1) * b + drive * (x0 * flat + (x1 - x0) * ramp)


def _piecewise_linear_solution(pulse, drive, decay):
    """Closed-form solution for a linearly interpolated envelope.

    Adaptive steppers lose accuracy at the many kinks of the interpolant;
    the exponential propagator is exact on every linear piece instead.
    """
    ts, xs = pulse.samples
    b = np.zeros(ts.size, dtype=complex)
    steps = np.diff(ts)
    for k, h in enumerate(steps):
        b[k + 1] = _linear_drive_step(b[k], xs[k], xs[k + 1], h, drive, decay)

    def amplitude(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        t = np.clip(t, ts[0], ts[-1])
        k = np.clip(np.searchsorted(ts, t, side="right") - 1, 0, ts.size - 2)
        return _linear_drive_step(b[k], xs[k], pulse(t), t - ts[k], drive, decay)

    return amplitude


def sweep_bandwidth(atom, shape, time_constants, spatial_efficiency=1.0, detuning=0.0):
    """Maximum excitation for a range of pulse time constants.

    Returns an ``(n, 2)`` array of ``(time_constant, max P_e)`` rows.
    """
    rows = []
    for T in np.asarray(time_constants, dtype=float):
        pulse = make_envelope(shape, T)
        result = excite(atom, pulse, spatial_efficiency, detuning=detuning)
        rows.append((T, result.max_probability))
    return np.array(rows)
