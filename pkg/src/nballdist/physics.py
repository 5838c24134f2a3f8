"""Self-energy applications: pairwise potentials integrated against distance laws.

The total pairwise energy of N identical particles reduces to
N(N-1)/2 times the expectation of the 2-body potential over the pair
distance distribution.  Covered here: the Coulomb self-energy of a uniform
charged ball and the neutrino-pair-exchange (1/s^5) self-energy with a
hard-core cutoff, for uniform and Gaussian matter distributions.
"""

import json
import math
import warnings
from dataclasses import dataclass, field, asdict

from scipy import integrate

from . import specfun
from .distributions import (
    BallGeometry,
    DensityModel,
    DistanceDistribution,
    GaussianDensity,
    UniformDensity,
    make_distribution,
    uniform_moment,
)
from .errors import DivergentIntegralError


@dataclass(frozen=True)
class CoulombSystem:
    """Z equal charges spread uniformly over a ball (Gaussian units)."""

    charge_count: int
    elementary_charge: float
    geometry: BallGeometry

    def __post_init__(self):
        if self.charge_count < 2:
            raise ValueError("need at least two charges")


@dataclass(frozen=True)
class NeutrinoSystem:
    """N neutrons interacting through neutrino-pair exchange.

    The standard-model vector couplings are recorded for reporting; the
    energy formulas carry the overall G_F^2/4 pi^3 strength with unit
    coupling product.  ``density`` selects the matter distribution (uniform
    ball of ``radius`` or Gaussian of width ``sigma``).
    """

    neutron_count: int
    fermi_constant: float
    hard_core: float
    density: DensityModel
    radius: float = 0.0
    sigma: float = 0.0
    coupling_electron: float = 0.964
    coupling_proton: float = 0.036
    coupling_neutron: float = -0.5

    def __post_init__(self):
        if self.neutron_count < 2:
            raise ValueError("need at least two neutrons")
        if not self.hard_core > 0.0:
            raise ValueError("hard-core radius must be positive")


def pairwise_expectation(dist: DistanceDistribution, potential, lower_cut: float = 0.0,
                         potential_power=None) -> float:
    """Expectation of a potential V(s) over a distance distribution.

    Integrates P(s) V(s) from max(lower_cut, 0) to the support edge by
    adaptive quadrature.  A potential singular at s = 0 needs a positive
    ``lower_cut`` unless its power-law order satisfies the moment rule
    m >= -(n-1); pass ``potential_power`` to have that checked up front.

    Parameters
    ----------
    dist : DistanceDistribution
    potential : callable
        V(s); scalar in, scalar out.
    lower_cut : float
        Lower integration limit (hard-core radius in the nuclear case).
    potential_power : int, optional
        Leading power m of V near s = 0, used for the divergence check.
    """
    if lower_cut < 0.0:
        raise ValueError("lower_cut must be nonnegative")
    n = dist.dim
    if lower_cut == 0.0 and potential_power is not None and potential_power < -(n - 1):
        raise DivergentIntegralError(
            f"integral of s^{potential_power} against the distance law diverges "
            f"at s=0: the moment rule needs m >= -(n-1) = {-(n - 1)}"
        )
    upper = dist.support_max
    if math.isinf(upper):
        sigma = getattr(dist.density, "sigma", 1.0)
        upper = 40.0 * sigma
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(
                lambda s: dist.pdf(s) * potential(s), lower_cut, upper,
                epsabs=0.0, epsrel=1e-11, limit=300,
            )
        except integrate.IntegrationWarning as exc:
            raise DivergentIntegralError(
                f"quadrature of the pairwise expectation did not converge: {exc}"
            ) from None
    return val


def coulomb_self_energy(system: CoulombSystem) -> float:
    """Total Coulomb energy of Z uniform charges: Z(Z-1)/2 <e^2/s>.

    The mean inverse distance is the m = -1 uniform moment, equal to
    (6/5)/R in three dimensions.  The exact pair count Z(Z-1)/2 is kept
    rather than the large-Z approximation Z^2/2.
    """
    geom = system.geometry
    pairs = system.charge_count * (system.charge_count - 1) / 2.0
    return pairs * system.elementary_charge**2 * uniform_moment(geom, -1)


def _uniform_bracket(big_r: float, r_c: float) -> float:
    return (
        3.0 / (2.0 * r_c**2 * big_r**3)
        - 9.0 / (4.0 * r_c * big_r**4)
        + 9.0 / (8.0 * big_r**5)
        - 3.0 * r_c / (16.0 * big_r**6)
    )


def neutrino_self_energy_uniform(system: NeutrinoSystem) -> float:
    """Hard-core 1/s^5 self-energy for a uniform ball of N neutrons.

    Equals N(N-1)/2 times the integral of the untruncated 3-ball distance
    PDF times G_F^2/(4 pi^3 s^5) from r_c to 2R; the integral evaluates to
    the four-term bracket in 1/r_c^2 R^3 ... r_c/R^6.
    """
    big_r, r_c = system.radius, system.hard_core
    if not big_r > 0.0:
        raise ValueError("uniform system needs a positive radius")
    if r_c >= 2.0 * big_r:
        raise ValueError("hard core must be smaller than the diameter")
    pairs = system.neutron_count * (system.neutron_count - 1) / 2.0
    return pairs * _uniform_bracket(big_r, r_c) * system.fermi_constant**2 / (
        4.0 * math.pi**3
    )


def neutrino_self_energy_gaussian(system: NeutrinoSystem) -> float:
    """Hard-core 1/s^5 self-energy for a Gaussian matter distribution.

    The bracket combines the boundary term exp(-r_c^2/4 sigma^2)/r_c^2 with
    the exponential-integral tail Gamma(0, r_c^2/4 sigma^2)/4 sigma^2.
    """
    sigma, r_c = system.sigma, system.hard_core
    if not sigma > 0.0:
        raise ValueError("Gaussian system needs a positive sigma")
    t = r_c**2 / (4.0 * sigma**2)
    bracket = math.exp(-t) / r_c**2 - specfun.upper_incomplete_gamma(0.0, t) / (
        4.0 * sigma**2
    )
    n = system.neutron_count
    return (
        bracket * n * (n - 1) * system.fermi_constant**2
        / (32.0 * sigma**3 * math.pi**3.5)
    )


@dataclass(frozen=True)
class SelfEnergyResult:
    """A pairwise self-energy with the inputs that produced it."""

    value: float
    interaction: str
    density: str
    particle_count: int
    cutoff: float
    inputs: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def coulomb(cls, system: CoulombSystem) -> "SelfEnergyResult":
        return cls(
            value=coulomb_self_energy(system),
            interaction="coulomb e^2/s",
            density="uniform",
            particle_count=system.charge_count,
            cutoff=0.0,
            inputs={
                "Z": system.charge_count,
                "e": system.elementary_charge,
                "dim": system.geometry.dim,
                "radius": system.geometry.radius,
            },
        )

    @classmethod
    def neutrino(cls, system: NeutrinoSystem) -> "SelfEnergyResult":
        if isinstance(system.density, UniformDensity):
            value = neutrino_self_energy_uniform(system)
            density = "uniform"
            extra = {"radius": system.radius}
        elif isinstance(system.density, GaussianDensity):
            value = neutrino_self_energy_gaussian(system)
            density = "gaussian"
            extra = {"sigma": system.sigma}
        else:
            raise ValueError("neutrino self-energy needs a uniform or Gaussian density")
        return cls(
            value=value,
            interaction="neutrino-pair G_F^2/(4 pi^3 s^5)",
            density=density,
            particle_count=system.neutron_count,
            cutoff=system.hard_core,
            inputs={
                "N": system.neutron_count,
                "G_F": system.fermi_constant,
                "r_c": system.hard_core,
                "couplings": {
                    "a_e": system.coupling_electron,
                    "a_p": system.coupling_proton,
                    "a_n": system.coupling_neutron,
                },
                **extra,
            },
        )


def neutrino_energy_by_quadrature(system: NeutrinoSystem) -> float:
    """Oracle route: integrate the untruncated distance PDF against 1/s^5.

    Uses the closed-form 3-d uniform or Gaussian-space distance law from
    the hard core outward; the closed-form energies must agree with this.
    """
    pairs = system.neutron_count * (system.neutron_count - 1) / 2.0
    strength = system.fermi_constant**2 / (4.0 * math.pi**3)
    if isinstance(system.density, UniformDensity):
        geom = BallGeometry(3, system.radius)
        dist = make_distribution(geom, UniformDensity())
    elif isinstance(system.density, GaussianDensity):
        dist = make_distribution(None, system.density, dim=3)
    else:
        raise ValueError("quadrature oracle needs a uniform or Gaussian density")
    val = pairwise_expectation(
        dist, lambda s: strength / s**5, lower_cut=system.hard_core,
        potential_power=-5,
    )
    return pairs * val
