"""Collimated input beam for the parabolic mode converter.

Energy conservation along the ray map ``rho = 2 f tan(theta/2)`` gives the
ideal pupil intensity

    I(rho) * rho * drho/dtheta = D(theta) * sin(theta)

which simplifies to ``I = D(theta) / (f**2 (1 + t**2)**2)`` with
``t = rho / (2 f)``. With this (unnormalized) convention the power through
the aperture equals the weighted solid angle of the covered cap.
"""

import enum
from dataclasses import dataclass

import numpy as np
from scipy import integrate as sp_integrate
from scipy import optimize
from scipy.interpolate import CubicSpline, RegularGridInterpolator

from . import quadrature, tables
from .dipole import DipoleKind, weighted_solid_angle
from .errors import DataError
from .mirror import coverage_domain, radius_to_angle

# composite Gauss-Legendre layout used for all aperture integrals
_APERTURE_PANELS = 64
_APERTURE_ORDER = 16


def ideal_intensity(pattern, mirror, radius):
    """Ideal pupil intensity at ``radius``; zero outside the aperture."""
    pattern = DipoleKind.parse(pattern)
    rho = np.asarray(radius, dtype=float)
    f = mirror.focal_length
    t = rho / (2.0 * f)
    theta = radius_to_angle(mirror, np.abs(rho))
    out = pattern.weight(theta) / (f**2 * (1.0 + t**2) ** 2)
    return np.where(rho <= mirror.rim_radius * (1 + 1e-12), out, 0.0)


def ideal_amplitude(pattern, mirror, radius):
    """Real, non-negative ``sqrt`` of :func:`ideal_intensity`."""
    return np.sqrt(ideal_intensity(pattern, mirror, radius))


def aperture_rule(mirror, n_panels=_APERTURE_PANELS, order=_APERTURE_ORDER):
    """Radial nodes and weights on ``[0, rho_rim]`` (no ``2 pi rho`` factor)."""
    return quadrature.panel_rule(0.0, mirror.rim_radius, n_panels, order)


def _check_aperture(mirror):
    if mirror.rim_radius <= 0:
        raise ValueError("mirror has zero aperture (depth = 0)")


@dataclass(frozen=True)
class RadialProfile:
    """Azimuthally symmetric pupil intensity sampled on ``[0, aperture]``.

    ``radius`` must be strictly increasing and ``intensity`` non-negative.
    The last sample radius is taken as the aperture edge.
    """

    radius: np.ndarray
    intensity: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.radius, dtype=float)
        i = np.asarray(self.intensity, dtype=float)
        if r.ndim != 1 or r.shape != i.shape or r.size < 2:
            raise DataError("radius and intensity must be 1-D arrays of equal length >= 2")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(i))):
            raise DataError("profile samples must be finite")
        if np.any(np.diff(r) <= 0) or r[0] < 0:
            raise DataError("radii must be non-negative and strictly increasing")
        if np.any(i < 0):
            raise DataError("intensities must be non-negative")
        r.setflags(write=False)
        i.setflags(write=False)
        object.__setattr__(self, "radius", r)
        object.__setattr__(self, "intensity", i)

    @property
    def aperture(self):
        return float(self.radius[-1])

    def power(self):
        """``integral I(rho) 2 pi rho drho`` over the sampled aperture (Simpson)."""
        return float(sp_integrate.simpson(2.0 * np.pi * self.radius * self.intensity, x=self.radius))

    def normalized(self):
        """Copy scaled to unit power. A zero profile is returned unchanged."""
        p = self.power()
        if p == 0.0:
            return self
        return RadialProfile(self.radius, self.intensity / p)

    def __call__(self, rho):
        """Interpolated intensity (cubic spline, clipped at zero, zero outside)."""
        rho = np.asarray(rho, dtype=float)
        spline = CubicSpline(self.radius, self.intensity)
        inside = (rho >= self.radius[0]) & (rho <= self.aperture * (1 + 1e-12))
        values = spline(np.clip(rho, self.radius[0], self.aperture))
        return np.where(inside, np.clip(values, 0.0, None), 0.0)

    def write_csv(self, path, focal_length):
        """CSV with header ``radius,intensity``; radii in units of ``focal_length``."""
        rows = zip(self.radius / focal_length, self.intensity * focal_length**2)
        return tables.write_csv(path, ["radius", "intensity"], rows, {"units": "focal_length"})

    @classmethod
    def read_csv(cls, path, focal_length=1.0):
        meta, header, rows = tables.read_csv(path)
        if header != ["radius", "intensity"]:
            raise DataError(f"expected header radius,intensity, got {','.join(header)}")
        data = np.array(rows, dtype=float)
        scale = focal_length if meta.get("units") == "focal_length" else 1.0
        return cls(data[:, 0] * scale, data[:, 1] / scale**2)


def ideal_profile(pattern, mirror, n_samples=4001):
    """Sample the ideal pupil intensity uniformly on ``[0, rho_rim]``.

    Parameters
    ----------
    pattern : DipoleKind or str
        Target dipole pattern in the focus.
    mirror : ParabolicMirror
    n_samples : int
        Number of radii, including both end points.

    Returns
    -------
    RadialProfile
        Unnormalized: its power equals the weighted solid angle of the
        mirror's coverage cap. Use :meth:`RadialProfile.normalized` for
        unit power.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    _check_aperture(mirror)
    radius = np.linspace(0.0, mirror.rim_radius, int(n_samples))
    return RadialProfile(radius, ideal_intensity(pattern, mirror, radius))


def profile_power_check(profile, pattern, mirror):
    """Ratio of profile power to the weighted solid angle of the covered cap.

    Equals one for profiles from :func:`ideal_profile` on the same mirror.
    """
    if not np.isclose(profile.aperture, mirror.rim_radius, rtol=1e-9, atol=0.0):
        raise ValueError(
            f"profile aperture {profile.aperture} does not match mirror rim {mirror.rim_radius}"
        )
    return profile.power() / weighted_solid_angle(pattern, coverage_domain(mirror))


# --------------------------------------------------------------------------
# Pupil phase and polarization


class Polarization(enum.Enum):
    RADIAL = "radial"
    CIRCULAR = "circular"

    def components(self, phi):
        """Unit Jones vector ``(e_rho, e_phi)`` in the local cylindrical basis.

        Uniform circular polarization ``(x + i y)/sqrt(2)`` reads
        ``exp(i phi) (e_rho + i e_phi)/sqrt(2)`` in that basis.
        """
        phi = np.asarray(phi, dtype=float)
        if self is Polarization.RADIAL:
            return np.ones_like(phi, dtype=complex), np.zeros_like(phi, dtype=complex)
        ph = np.exp(1j * phi) / np.sqrt(2.0)
        return ph, 1j * ph


@dataclass(frozen=True)
class PupilMap:
    """Phase map ``phase[i, j]`` on the grid ``rho[i] x phi[j]`` plus polarization.

    Values between grid points are found by bilinear interpolation,
    periodic in ``phi``.
    """

    rho: np.ndarray
    phi: np.ndarray
    phase: np.ndarray
    polarization: Polarization = Polarization.RADIAL

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=float)
        phi = np.asarray(self.phi, dtype=float)
        phase = np.asarray(self.phase, dtype=float)
        if phase.shape != (rho.size, phi.size):
            raise DataError(f"phase grid shape {phase.shape} != ({rho.size}, {phi.size})")
        if not np.all(np.isfinite(phase)):
            raise DataError("phase map contains non-finite samples")
        if rho.size < 2 or np.any(np.diff(rho) <= 0):
            raise DataError("rho grid must be strictly increasing with >= 2 points")
        if phi.size < 1 or np.any(np.diff(phi) <= 0) or phi[-1] - phi[0] >= 2 * np.pi:
            raise DataError("phi grid must be strictly increasing within one period")
        for arr in (rho, phi, phase):
            arr.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "phase", phase)
        object.__setattr__(self, "polarization", Polarization(self.polarization))

    @classmethod
    def flat(cls, mirror, polarization=Polarization.RADIAL):
        return cls(np.array([0.0, mirror.rim_radius]), np.array([0.0]), np.zeros((2, 1)), polarization)

    @classmethod
    def from_function(cls, mirror, func, n_rho=65, n_phi=64, polarization=Polarization.RADIAL):
        """Sample ``func(rho, phi)`` on a regular grid covering the aperture."""
        rho = np.linspace(0.0, mirror.rim_radius, n_rho)
        phi = np.arange(n_phi) * (2 * np.pi / n_phi)
        r, p = np.meshgrid(rho, phi, indexing="ij")
        return cls(rho, phi, np.broadcast_to(func(r, p), r.shape).copy(), polarization)

    def covers(self, mirror):
        return self.rho[0] <= 0.0 and self.rho[-1] >= mirror.rim_radius * (1 - 1e-12)

    def phase_at(self, rho, phi):
        """Bilinear, azimuthally periodic interpolation of the phase."""
        rho = np.asarray(rho, dtype=float)
        phi = np.mod(np.asarray(phi, dtype=float) - self.phi[0], 2 * np.pi) + self.phi[0]
        if self.phi.size == 1:
            grid_phi = np.array([self.phi[0], self.phi[0] + 2 * np.pi])
            values = np.repeat(self.phase, 2, axis=1)
        else:
            grid_phi = np.append(self.phi, self.phi[0] + 2 * np.pi)
            values = np.concatenate([self.phase, self.phase[:, :1]], axis=1)
        interp = RegularGridInterpolator((self.rho, grid_phi), values, method="linear",
                                         bounds_error=False, fill_value=None)
        r, p = np.broadcast_arrays(np.clip(rho, self.rho[0], self.rho[-1]), phi)
        pts = np.stack([r.ravel(), p.ravel()], axis=-1)
        return interp(pts).reshape(r.shape)

    def compose(self, other):
        """Pointwise sum of two phase maps sampled on the same grid."""
        if not (np.array_equal(self.rho, other.rho) and np.array_equal(self.phi, other.phi)):
            raise DataError("phase maps are sampled on different grids")
        return PupilMap(self.rho, self.phi, self.phase + other.phase, self.polarization)

    def write_csv(self, path):
        r, p = np.meshgrid(self.rho, self.phi, indexing="ij")
        rows = zip(r.ravel(), p.ravel(), self.phase.ravel())
        return tables.write_csv(path, ["rho", "phi", "phase_rad"], rows)

    @classmethod
    def read_csv(cls, path, polarization=Polarization.RADIAL):
        """Load a ``rho,phi,phase_rad`` table forming a complete regular grid."""
        _, header, rows = tables.read_csv(path)
        if header != ["rho", "phi", "phase_rad"]:
            raise DataError(f"expected header rho,phi,phase_rad, got {','.join(header)}")
        data = np.array(rows, dtype=float)
        rho = np.unique(data[:, 0])
        phi = np.unique(data[:, 1])
        if data.shape[0] != rho.size * phi.size:
            raise DataError("phase samples do not form a complete rho x phi grid")
        phase = np.full((rho.size, phi.size), np.nan)
        phase[np.searchsorted(rho, data[:, 0]), np.searchsorted(phi, data[:, 1])] = data[:, 2]
        return cls(rho, phi, phase, polarization)


def compensation_phase(aberration):
    """Phase plate cancelling ``aberration`` pointwise."""
    if not np.all(np.isfinite(aberration.phase)):
        raise DataError("aberration map contains non-finite samples")
    return PupilMap(aberration.rho, aberration.phi, -aberration.phase, aberration.polarization)


def _pupil_quadrature(mirror, n_phi):
    rho, w_rho = aperture_rule(mirror)
    phi = np.arange(n_phi) * (2 * np.pi / n_phi)
    return rho, w_rho, phi


def phase_overlap_penalty(aberration, pattern, mirror, n_phi=128):
    """Coupling reduction caused by a pupil phase error.

    ``|integral I exp(i Phi) dA|^2 / (integral I dA)^2`` with ``I`` the ideal
    intensity, i.e. the squared overlap of the aberrated ideal field with
    the unaberrated one. One for any constant phase.
    """
    _check_aperture(mirror)
    if not aberration.covers(mirror):
        raise ValueError("aberration map does not cover the mirror aperture")
    rho, w_rho, phi = _pupil_quadrature(mirror, n_phi)
    weight = ideal_intensity(pattern, mirror, rho) * rho * w_rho
    field = np.exp(1j * aberration.phase_at(rho[:, None], phi[None, :]))
    num = np.abs(np.sum(weight[:, None] * field)) ** 2
    den = (np.sum(weight) * n_phi) ** 2
    return float(num / den)


def weighted_phase_rms(aberration, pattern, mirror, n_phi=128):
    """Intensity-weighted RMS of the phase about its weighted mean (radians)."""
    rho, w_rho, phi = _pupil_quadrature(mirror, n_phi)
    weight = (ideal_intensity(pattern, mirror, rho) * rho * w_rho)[:, None] * np.ones(n_phi)
    phase = aberration.phase_at(rho[:, None], phi[None, :])
    mean = np.sum(weight * phase) / np.sum(weight)
    return float(np.sqrt(np.sum(weight * (phase - mean) ** 2) / np.sum(weight)))


# --------------------------------------------------------------------------
# Laguerre-Gaussian LG(p=0, l=1) fit


def lg01_amplitude(radius, waist):
    """Radial amplitude ``(rho/w) exp(-rho^2/w^2)`` of the LG p=0, l=1 mode."""
    x = np.asarray(radius, dtype=float) / waist
    return x * np.exp(-(x**2))


def _lg01_overlaps(mirror, waists, pattern):
    rho, w_rho = aperture_rule(mirror)
    dA = 2.0 * np.pi * rho * w_rho
    target = ideal_amplitude(pattern, mirror, rho)
    waists = np.atleast_1d(np.asarray(waists, dtype=float))
    mode = lg01_amplitude(rho[None, :], waists[:, None])
    cross = mode @ (target * dA)
    norm_mode = (mode**2) @ dA
    norm_target = np.dot(target**2, dA)
    with np.errstate(invalid="ignore", divide="ignore"):
        eta = cross**2 / (norm_mode * norm_target)
    return np.where(norm_mode > 0, eta, 0.0)


def lg01_overlap(mirror, waist, pattern=DipoleKind.LINEAR_PI):
    """Power overlap of the ideal pupil amplitude with an LG01 mode.

    Both fields are truncated to the aperture and normalized there.
    """
    if not waist > 0:
        raise ValueError(f"waist must be > 0, got {waist}")
    _check_aperture(mirror)
    return float(_lg01_overlaps(mirror, waist, pattern)[0])


def optimize_lg_waist(mirror, pattern=DipoleKind.LINEAR_PI, n_scan=64):
    """Waist maximizing :func:`lg01_overlap`.

    A logarithmic scan over ``[0.01 f, 10 f]`` brackets the optimum, which
    golden-section search then refines.

    Returns
    -------
    waist, overlap : float
    """
    _check_aperture(mirror)
    f = mirror.focal_length
    grid = np.geomspace(0.01 * f, 10.0 * f, n_scan)
    values = _lg01_overlaps(mirror, grid, pattern)
    k = int(np.argmax(values))
    if k in (0, n_scan - 1):
        return float(grid[k]), float(values[k])

    def loss(log_w):
        return -_lg01_overlaps(mirror, np.exp(log_w), pattern)[0]

    bracket = (np.log(grid[k - 1]), np.log(grid[k]), np.log(grid[k + 1]))
    res = optimize.minimize_scalar(loss, bracket=bracket, method="golden",
                                   options={"xtol": 1e-12})
    waist = float(np.exp(res.x))
    return waist, float(-res.fun)
