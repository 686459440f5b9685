"""Parabolic mirror geometry.

The mirror surface is ``z = rho**2 / (4 f)`` with the vertex at the origin
and the focus on the axis at ``z = f``. Polar angles ``theta`` are measured
at the focus from the axis pointing towards the vertex, so ``theta = 0`` is
the ray hitting the vertex and ``theta -> pi`` is a ray escaping through
the aperture.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class AngularDomain:
    """Polar cap ``[theta_min, theta_max]`` over the full azimuth (radians)."""

    theta_min: float
    theta_max: float

    def __post_init__(self):
        if not 0.0 <= self.theta_min <= self.theta_max <= np.pi:
            raise DomainError(
                f"need 0 <= theta_min <= theta_max <= pi, got "
                f"[{self.theta_min}, {self.theta_max}]"
            )

    @property
    def width(self):
        return self.theta_max - self.theta_min

    def complement(self):
        """The cap not covered by this domain, assuming it starts at 0."""
        if self.theta_min != 0.0:
            raise DomainError("complement only defined for caps starting at 0")
        return AngularDomain(self.theta_max, np.pi)

    def contains(self, theta):
        theta = np.asarray(theta)
        return (theta >= self.theta_min) & (theta <= self.theta_max)


FULL_SPHERE = AngularDomain(0.0, np.pi)


@dataclass(frozen=True)
class ParabolicMirror:
    """Ideal paraboloid of revolution.

    Parameters
    ----------
    focal_length : float
        Distance vertex to focus, ``f > 0``.
    depth : float
        Distance from the vertex to the rim plane along the axis, ``d >= 0``.
    """

    focal_length: float
    depth: float

    def __post_init__(self):
        if not np.isfinite(self.focal_length) or self.focal_length <= 0:
            raise ValueError(f"focal_length must be > 0, got {self.focal_length}")
        if not self.depth >= 0:
            raise ValueError(f"depth must be >= 0, got {self.depth}")

    @property
    def rim_radius(self):
        return float(np.sqrt(4.0 * self.focal_length * self.depth))

    @property
    def rim_angle(self):
        return float(2.0 * np.arctan(np.sqrt(self.depth / self.focal_length)))

    def surface_height(self, radius):
        return np.asarray(radius) ** 2 / (4.0 * self.focal_length)


def angle_to_radius(mirror, theta):
    """Radius at which a ray leaving the focus at ``theta`` exits collimated.

    ``rho = 2 f tan(theta / 2)``. Accepts scalars or arrays.

    Raises
    ------
    DomainError
        For ``theta`` outside ``[0, pi)``.
    """
    theta = np.asarray(theta, dtype=float)
    if np.any(theta < 0) or np.any(theta >= np.pi) or not np.all(np.isfinite(theta)):
        raise DomainError("theta must lie in [0, pi)")
    rho = 2.0 * mirror.focal_length * np.tan(0.5 * theta)
    return float(rho) if rho.ndim == 0 else rho


def radius_to_angle(mirror, radius):
    """Inverse of :func:`angle_to_radius`."""
    radius = np.asarray(radius, dtype=float)
    if np.any(radius < 0) or not np.all(np.isfinite(radius)):
        raise DomainError("radius must be finite and >= 0")
    theta = 2.0 * np.arctan(radius / (2.0 * mirror.focal_length))
    return float(theta) if theta.ndim == 0 else theta


def radius_jacobian(mirror, theta):
    """``d rho / d theta = f / cos^2(theta / 2)``."""
    return mirror.focal_length / np.cos(0.5 * np.asarray(theta, dtype=float)) ** 2


def coverage_domain(mirror):
    """Angular cap ``[0, theta_rim]`` illuminated through the mirror."""
    return AngularDomain(0.0, mirror.rim_angle)


def optical_path(mirror, theta):
    """Focus-to-surface distance plus surface-to-rim-plane distance.

    Constant (``f + d``) for an ideal paraboloid, which is why a flat
    incident wavefront arrives at the focus in phase from every direction.
    """
    rho = angle_to_radius(mirror, theta)
    dz = mirror.surface_height(rho) - mirror.focal_length
    to_focus = np.hypot(rho, dz)
    # to_focus - dz without cancellation for steep rays, where dz ~ rho^2
    excess = np.where(dz > 0, rho**2 / (to_focus + np.abs(dz)), to_focus - dz)
    return excess + mirror.depth - mirror.focal_length
