"""Cavity-QED figures of merit compared with free-space geometric coupling."""

import warnings
from dataclasses import asdict, dataclass

import numpy as np
from scipy import constants as _sc

from . import tables
from .errors import DomainError
from .temporal import TwoLevelAtom

PARAXIAL_LIMIT = 0.1


@dataclass(frozen=True)
class PhysicalConstants:
    speed_of_light: float = _sc.c
    hbar: float = _sc.hbar
    epsilon_0: float = _sc.epsilon_0


CODATA = PhysicalConstants()


@dataclass(frozen=True)
class Cavity:
    """Symmetric Fabry-Perot resonator with the atom at the Gaussian waist.

    Parameters
    ----------
    reflectivity : float
        Power reflectivity ``R`` of each mirror, ``0 <= R < 1``.
    length : float
        Mirror separation ``L`` in meters.
    waist : float
        Mode waist ``w0`` in meters.
    """

    reflectivity: float
    length: float
    waist: float

    def __post_init__(self):
        if self.reflectivity == 1.0:
            raise DomainError("R = 1 gives infinitely many passes; kappa is undefined")
        if not 0.0 <= self.reflectivity < 1.0:
            raise ValueError(f"reflectivity must lie in [0, 1), got {self.reflectivity}")
        if not self.length > 0:
            raise ValueError(f"length must be > 0, got {self.length}")
        if not self.waist > 0:
            raise ValueError(f"waist must be > 0, got {self.waist}")

    @property
    def passes(self):
        """Mean number of passes ``N = 1/(1 - R)``."""
        return 1.0 / (1.0 - self.reflectivity)

    def divergence(self, wavelength):
        """Far-field half angle ``lambda / (pi w0)``."""
        return wavelength / (np.pi * self.waist)

    def is_paraxial(self, wavelength):
        return self.divergence(wavelength) <= PARAXIAL_LIMIT


def _warn_if_not_paraxial(wavelength, cavity):
    theta = cavity.divergence(wavelength)
    if theta > PARAXIAL_LIMIT:
        warnings.warn(
            f"beam divergence {theta:.3g} rad exceeds {PARAXIAL_LIMIT}; "
            "small-angle figures are unreliable",
            stacklevel=3,
        )


def single_pass_probability(wavelength, cavity):
    """``3 lambda^2 / (8 pi^2 w0^2)``: the cone ``pi theta^2`` weighted at the dipole maximum."""
    if not wavelength > 0:
        raise ValueError(f"wavelength must be > 0, got {wavelength}")
    _warn_if_not_paraxial(wavelength, cavity)
    return 3.0 * wavelength**2 / (8.0 * np.pi**2 * cavity.waist**2)


def f_omega(wavelength, cavity):
    """Geometric figure of merit: passes times single-pass probability."""
    return cavity.passes * single_pass_probability(wavelength, cavity)


def p_abs_cav(figure_of_merit):
    """Probability of at least one absorption inside the cavity."""
    if figure_of_merit < 0:
        raise ValueError(f"figure of merit must be >= 0, got {figure_of_merit}")
    return min(float(figure_of_merit), 1.0)


@dataclass(frozen=True)
class CavityFigures:
    passes: float
    g: float
    kappa: float
    gamma: float
    F_g: float
    F_Omega: float

    @property
    def ratio(self):
        return self.F_g / self.F_Omega


def f_g(atom, cavity, constants=CODATA):
    """Conventional cavity-QED figure ``g^2 / (kappa gamma)`` and its ingredients.

    The dipole moment follows from the free-space decay rate,
    ``mu^2 = 3 pi eps0 hbar c^3 gamma / omega^3``; the mode volume is
    ``pi w0^2 L`` and ``kappa = (1 - R) c / L``. All rates are angular
    (1/s). Substituting shows ``F_g`` equals :func:`f_omega`.
    """
    c, hbar, eps0 = constants.speed_of_light, constants.hbar, constants.epsilon_0
    omega = 2.0 * np.pi * c / atom.wavelength
    gamma = atom.linewidth
    mu_sq = 3.0 * np.pi * eps0 * hbar * c**3 * gamma / omega**3
    volume = np.pi * cavity.waist**2 * cavity.length
    g_sq = mu_sq * omega / (2.0 * hbar * eps0 * volume)
    kappa = (1.0 - cavity.reflectivity) * c / cavity.length
    return CavityFigures(
        passes=cavity.passes,
        g=float(np.sqrt(g_sq)),
        kappa=float(kappa),
        gamma=float(gamma),
        F_g=float(g_sq / (kappa * gamma)),
        F_Omega=float(f_omega(atom.wavelength, cavity)),
    )


def cavity_report(wavelength, cavity, linewidth=None, constants=CODATA):
    """JSON-ready dictionary: inputs, figures of merit and the ``F_g / F_Omega`` check.

    ``linewidth`` only matters for ``g``, ``kappa`` and ``gamma``; the
    figures of merit do not depend on it. When omitted, ``2 pi * 1 MHz``
    is used as a placeholder.
    """
    gamma = 2 * np.pi * 1e6 if linewidth is None else linewidth
    figs = f_g(TwoLevelAtom(wavelength, gamma), cavity, constants)
    return {
        "inputs": {"wavelength_m": wavelength, "linewidth_per_s": gamma, **asdict(cavity)},
        "figures": {**asdict(figs), "N": figs.passes},
        "single_pass_probability": single_pass_probability(wavelength, cavity),
        "p_abs_cav": p_abs_cav(figs.F_Omega),
        "identity_ratio": figs.ratio,
        "paraxial": bool(cavity.is_paraxial(wavelength)),
    }


def dumps_report(report):
    return tables.dumps_json(report)
