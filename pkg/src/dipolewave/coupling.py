"""Spatial coupling between an incoming wave and the atomic dipole wave.

Fields live on the far-field sphere around the focus. Each direction
``(theta, phi)`` carries a complex transverse vector with components along
the spherical unit vectors ``e_theta`` and ``e_phi``. The coupling
efficiency is the squared overlap with the normalized dipole field.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from . import quadrature, tables
from .beam import Polarization
from .dipole import FULL_WEIGHTED_SOLID_ANGLE, DipoleKind, weighted_solid_angle
from .mirror import angle_to_radius, coverage_domain, radius_jacobian

_NORM_TOL = 1e-6


@dataclass(frozen=True)
class AngularGrid:
    """Product quadrature on the sphere.

    ``theta`` nodes are Gauss-Legendre in ``cos(theta)`` (``weights`` are
    the ``d cos(theta)`` weights); ``phi`` is uniform with ``n_phi`` points.
    """

    theta: np.ndarray
    weights: np.ndarray
    n_phi: int

    @classmethod
    def gauss_legendre(cls, n_panels=16, order=16, n_phi=128, breakpoints=()):
        """Build a grid whose ``theta`` panels break at the given angles.

        Any angle where a field is discontinuous (a mirror rim) should be
        passed as a breakpoint.
        """
        cuts = tuple(np.cos(b) for b in breakpoints)
        u, w = quadrature.panel_rule(-1.0, 1.0, n_panels, order, cuts)
        theta = np.arccos(u[::-1])
        return cls(theta, w[::-1].copy(), int(n_phi))

    @property
    def phi(self):
        return np.arange(self.n_phi) * (2.0 * np.pi / self.n_phi)

    @property
    def solid_angle_weights(self):
        """``dOmega`` weight of every ``(theta, phi)`` node, shape (n_theta, n_phi)."""
        return np.outer(self.weights, np.full(self.n_phi, 2.0 * np.pi / self.n_phi))

    def integrate(self, values):
        return np.sum(self.solid_angle_weights * values)


def default_grid(*breakpoints):
    return AngularGrid.gauss_legendre(breakpoints=breakpoints)


@dataclass(frozen=True)
class AngularAmplitude:
    """Far-field amplitude ``field[i, j, k]`` at ``(theta_i, phi_j)``.

    ``k = 0`` is the ``e_theta`` component, ``k = 1`` the ``e_phi`` one.
    """

    grid: AngularGrid
    field: np.ndarray = field(repr=False)

    def __post_init__(self):
        shape = (self.grid.theta.size, self.grid.n_phi, 2)
        values = np.asarray(self.field, dtype=complex)
        if values.shape != shape:
            raise ValueError(f"field shape {values.shape} does not match grid {shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("angular amplitude contains non-finite values")
        object.__setattr__(self, "field", values)

    def power(self):
        """``integral |A|^2 dOmega``."""
        return float(self.grid.integrate(np.sum(np.abs(self.field) ** 2, axis=-1)).real)

    def normalize(self):
        p = self.power()
        if p == 0.0:
            raise ValueError("cannot normalize a zero amplitude")
        return replace(self, field=self.field / np.sqrt(p))

    def is_normalized(self, tol=_NORM_TOL):
        return abs(self.power() - 1.0) <= tol

    def truncated(self, domain):
        """Zero the field outside the polar cap of ``domain`` (not renormalized)."""
        mask = domain.contains(self.grid.theta)
        return replace(self, field=self.field * mask[:, None, None])

    def with_phase(self, alpha):
        return replace(self, field=self.field * np.exp(1j * alpha))


def dipole_angular_amplitude(pattern, grid=None):
    """Unit-normalized far field of the dipole, evaluated on ``grid``.

    ``LINEAR_PI``: ``sqrt(3/8pi) sin(theta) e_theta``.
    ``CIRCULAR_SIGMA``: ``sqrt(3/8pi) exp(i phi)(cos(theta) e_theta + i e_phi)/sqrt(2)``,
    the transverse projection of ``(x + i y)/sqrt(2)``.
    """
    pattern = DipoleKind.parse(pattern)
    grid = grid or default_grid()
    c = np.sqrt(3.0 / (8.0 * np.pi))
    th = grid.theta[:, None]
    ph = grid.phi[None, :]
    out = np.zeros((th.size, grid.n_phi, 2), dtype=complex)
    if pattern is DipoleKind.LINEAR_PI:
        out[..., 0] = c * np.sin(th) * np.ones_like(ph)
    else:
        rot = np.exp(1j * ph) / np.sqrt(2.0)
        out[..., 0] = c * np.cos(th) * rot
        out[..., 1] = c * 1j * rot * np.ones_like(th)
    return AngularAmplitude(grid, out)


def _overlap(a, b):
    return np.sum(a.grid.solid_angle_weights * np.sum(np.conj(a.field) * b.field, axis=-1))


def spatial_overlap(incident, pattern):
    """Spatial coupling efficiency ``|<A_in, A_dipole>|^2``.

    Raises
    ------
    ValueError
        If ``incident`` is not unit-normalized.
    """
    if not incident.is_normalized():
        raise ValueError(f"incident amplitude not normalized (power {incident.power():.9g})")
    dip = dipole_angular_amplitude(pattern, incident.grid)
    return float(min(abs(_overlap(incident, dip)) ** 2, 1.0))


def pupil_to_angular(profile, pupil, mirror, grid=None):
    """Map a collimated pupil field through the mirror onto the far-field sphere.

    A pupil point at radius ``rho`` maps to ``theta = 2 atan(rho / 2f)`` with
    the same azimuth. Power conservation,
    ``|A|^2 sin(theta) dtheta = I(rho) rho drho``, fixes the magnitude; the
    pupil phase carries over unchanged. The radial pupil component becomes
    the ``e_theta`` component and the azimuthal one stays ``e_phi``.

    The profile is normalized to unit power first, so the result is
    normalized unless the profile is identically zero.
    """
    if not np.isclose(profile.aperture, mirror.rim_radius, rtol=1e-9, atol=0.0):
        raise ValueError("profile aperture does not match the mirror rim")
    if not pupil.covers(mirror):
        raise ValueError("pupil map does not cover the mirror aperture")
    grid = grid or default_grid(mirror.rim_angle)
    profile = profile.normalized()
    inside = grid.theta <= mirror.rim_angle
    theta = grid.theta[inside]
    rho = angle_to_radius(mirror, theta)
    intensity = profile(rho)
    with np.errstate(invalid="ignore", divide="ignore"):
        mag = np.sqrt(intensity * rho * radius_jacobian(mirror, theta) / np.sin(theta))
    mag = np.where(np.isfinite(mag), mag, 0.0)

    phi = grid.phi
    phase = np.exp(1j * pupil.phase_at(rho[:, None], phi[None, :]))
    e_rho, e_phi = Polarization(pupil.polarization).components(phi)
    out = np.zeros((grid.theta.size, grid.n_phi, 2), dtype=complex)
    out[inside, :, 0] = mag[:, None] * phase * e_rho[None, :]
    out[inside, :, 1] = mag[:, None] * phase * e_phi[None, :]
    amp = AngularAmplitude(grid, out)
    return amp.normalize() if amp.power() > 0 else amp


@dataclass(frozen=True)
class CouplingReport:
    """Coverage, spatial efficiency and absorption probability of one setup."""

    weighted_coverage: float
    spatial_efficiency: float
    absorption_probability: float

    def __post_init__(self):
        for name in ("spatial_efficiency", "absorption_probability"):
            value = getattr(self, name)
            if not -1e-12 <= value <= 1.0 + 1e-12:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")

    def to_dict(self):
        return {
            "weighted_coverage_sr": self.weighted_coverage,
            "spatial_efficiency": self.spatial_efficiency,
            "absorption_probability": self.absorption_probability,
        }

    def to_json(self):
        return tables.dumps_json(self.to_dict())


def coupling_report(pattern, mirror, spatial_efficiency=None):
    """Report for an ideally shaped, temporally matched single photon.

    Without an explicit ``spatial_efficiency`` the incident field is taken to
    be the dipole wave truncated by the mirror, so the efficiency is the
    weighted coverage fraction.
    """
    coverage = weighted_solid_angle(pattern, coverage_domain(mirror))
    eta = coverage / FULL_WEIGHTED_SOLID_ANGLE if spatial_efficiency is None else spatial_efficiency
    return CouplingReport(coverage, float(eta), float(min(eta, 1.0)))


def axial_hole_extension(report, pattern, domain, efficiency):
    """Add light sent straight to the focus through the uncovered cap.

    ``domain`` is the cap the mirror misses, ``(theta_rim, pi]``; a fraction
    ``efficiency`` of its weighted solid angle is added to the coverage.
    Constructive interference with the mirror light is assumed.
    """
    if not 0.0 <= efficiency <= 1.0:
        raise ValueError(f"efficiency must lie in [0, 1], got {efficiency}")
    if not np.isclose(domain.theta_max, np.pi):
        raise ValueError("domain must be the uncovered cap ending at theta = pi")
    if efficiency == 0.0:
        return report
    coverage = report.weighted_coverage + efficiency * weighted_solid_angle(pattern, domain)
    fraction = min(coverage / FULL_WEIGHTED_SOLID_ANGLE, 1.0)
    return CouplingReport(coverage, fraction, fraction)
