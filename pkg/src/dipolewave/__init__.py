"""Free-space photon-atom coupling through a deep parabolic mirror.

The modules follow the light path: :mod:`~dipolewave.mirror` maps emission
angles to pupil radii, :mod:`~dipolewave.dipole` weights them with the
atomic radiation pattern, :mod:`~dipolewave.beam` builds the collimated input
field, :mod:`~dipolewave.coupling` scores its overlap with the dipole wave,
:mod:`~dipolewave.temporal` drives the atom with a single-photon pulse and
:mod:`~dipolewave.cavity` compares the result with cavity QED.
"""

from .beam import (
    Polarization,
    PupilMap,
    RadialProfile,
    compensation_phase,
    ideal_profile,
    lg01_overlap,
    optimize_lg_waist,
    phase_overlap_penalty,
    profile_power_check,
)
from .cavity import Cavity, CavityFigures, f_g, f_omega, p_abs_cav, single_pass_probability
from .coupling import (
    AngularAmplitude,
    AngularGrid,
    CouplingReport,
    axial_hole_extension,
    coupling_report,
    dipole_angular_amplitude,
    pupil_to_angular,
    spatial_overlap,
)
from .dipole import FULL_WEIGHTED_SOLID_ANGLE, AngularPattern, DipoleKind, coverage_fraction, weighted_solid_angle
from .errors import ConvergenceError, DataError, DipoleWaveError, DomainError, TruncationError
from .mirror import AngularDomain, ParabolicMirror, angle_to_radius, coverage_domain, radius_to_angle
from .temporal import PulseEnvelope, PulseShape, TwoLevelAtom, excite, make_envelope, sweep_bandwidth
from .transitions import TransitionCandidate, check_two_level, load_registry

__version__ = "0.1.0"
