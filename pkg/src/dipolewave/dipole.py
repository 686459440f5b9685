"""Dipole radiation patterns and weighted solid angles."""

import enum

import numpy as np

from . import quadrature
from .mirror import FULL_SPHERE

#: Weighted solid angle of the full sphere, identical for both dipole kinds.
FULL_WEIGHTED_SOLID_ANGLE = 8.0 * np.pi / 3.0


class DipoleKind(enum.Enum):
    """Orientation of the atomic dipole relative to the mirror axis.

    ``LINEAR_PI`` oscillates along the axis (pattern ``sin^2 theta``);
    ``CIRCULAR_SIGMA`` rotates in the transverse plane (pattern
    ``(1 + cos^2 theta) / 2``).
    """

    LINEAR_PI = "pi"
    CIRCULAR_SIGMA = "sigma"

    def weight(self, theta):
        """Angular intensity weight ``D(theta)``, integrating to 8*pi/3."""
        theta = np.asarray(theta, dtype=float)
        if self is DipoleKind.LINEAR_PI:
            return np.sin(theta) ** 2
        return 0.5 * (1.0 + np.cos(theta) ** 2)

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown dipole kind {value!r}; use 'pi' or 'sigma'") from None


# The pattern is fully determined by the dipole kind.
AngularPattern = DipoleKind


def weighted_solid_angle(pattern, domain=FULL_SPHERE, tol=1e-10):
    """``2 pi * integral D(theta) sin(theta) dtheta`` over the domain's cap."""
    pattern = DipoleKind.parse(pattern)
    if domain.theta_max == domain.theta_min:
        return 0.0
    integral = quadrature.integrate(
        lambda t: pattern.weight(t) * np.sin(t),
        domain.theta_min,
        domain.theta_max,
        tol=tol / (2.0 * np.pi),
    )
    return 2.0 * np.pi * integral


def coverage_fraction(pattern, domain):
    """Share of the dipole's radiated power falling into ``domain``."""
    return weighted_solid_angle(pattern, domain) / FULL_WEIGHTED_SOLID_ANGLE
