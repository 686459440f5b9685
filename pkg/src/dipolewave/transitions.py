"""Checker for true two-level transitions and the bundled candidate registry."""

import csv
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

NO_HYPERFINE = "no_hyperfine_structure"
J_ZERO_GROUND = "j0_ground_j1_excited"
SINGLE_CHANNEL = "single_decay_channel"

CRITERIA = (NO_HYPERFINE, J_ZERO_GROUND, SINGLE_CHANNEL)


def _half_integer(value, name):
    j = Fraction(str(value))
    if j < 0 or (2 * j).denominator != 1:
        raise ValueError(f"{name} must be a non-negative multiple of 1/2, got {value}")
    return j


@dataclass(frozen=True)
class TransitionCandidate:
    species: str
    proton_count: int
    neutron_count: int
    nuclear_spin: Fraction
    j_ground: Fraction
    j_excited: Fraction
    wavelength: float
    decay_channels: int
    transition: str = ""
    lifetime: float = None

    def __post_init__(self):
        for name in ("proton_count", "neutron_count", "decay_channels"):
            if int(getattr(self, name)) < 0:
                raise ValueError(f"{name} must be >= 0")
        for name in ("nuclear_spin", "j_ground", "j_excited"):
            object.__setattr__(self, name, _half_integer(getattr(self, name), name))
        if not self.wavelength > 0:
            raise ValueError("wavelength must be > 0")

    @property
    def even_even(self):
        """Even proton and neutron numbers (implies zero nuclear spin)."""
        return self.proton_count % 2 == 0 and self.neutron_count % 2 == 0


@dataclass(frozen=True)
class Verdict:
    violations: tuple

    @property
    def passed(self):
        return not self.violations

    def __bool__(self):
        return self.passed


def check_two_level(candidate):
    """Return the criteria a candidate violates, in a fixed order.

    * no hyperfine structure: nuclear spin ``I = 0``;
    * ``J = 0`` ground level coupled to a ``J = 1`` excited level;
    * the excited level decays through exactly one dipole channel.
    """
    failed = []
    if candidate.nuclear_spin != 0:
        failed.append(NO_HYPERFINE)
    if not (candidate.j_ground == 0 and candidate.j_excited == 1):
        failed.append(J_ZERO_GROUND)
    if candidate.decay_channels != 1:
        failed.append(SINGLE_CHANNEL)
    return Verdict(tuple(failed))


def _parse_rows(lines):
    rows = csv.DictReader((ln for ln in lines if not ln.startswith("#")), delimiter="\t")
    for row in rows:
        lifetime = row["lifetime_s"].strip()
        yield TransitionCandidate(
            species=row["species"],
            transition=row["transition"],
            proton_count=int(row["protons"]),
            neutron_count=int(row["neutrons"]),
            nuclear_spin=row["nuclear_spin"],
            j_ground=row["j_ground"],
            j_excited=row["j_excited"],
            wavelength=float(row["wavelength_nm"]) * 1e-9,
            decay_channels=int(row["decay_channels"]),
            lifetime=float(lifetime) if lifetime else None,
        )


def load_registry(path=None):
    """Candidates from ``path`` or, by default, the bundled table."""
    if path is None:
        text = resources.files("dipolewave").joinpath("data/transitions.tsv").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return list(_parse_rows(text.splitlines()))


def find(species, registry=None):
    for cand in registry or load_registry():
        if cand.species == species:
            return cand
    raise KeyError(f"no candidate named {species!r}")
