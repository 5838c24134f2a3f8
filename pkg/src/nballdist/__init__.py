"""Random distance distributions in n-dimensional balls, with applications.

Closed-form and numeric pair-distance PDFs/CDFs/moments for uniform,
Gaussian, hard-core, shell, and arbitrary densities over the n-ball;
bit-exact reference RNGs; the RIPS randomness test built on the exact
inner-product constants; and pairwise self-energy integrals.
"""

from .distributions import (
    BallGeometry,
    DensityModel,
    DistanceDistribution,
    GaussianDensity,
    GeneralDensity,
    RadialProfileDensity,
    RadialShellsDensity,
    UniformDensity,
    gaussian_mode,
    gaussian_moment,
    gaussian_pdf,
    hardcore_moment,
    hardcore_pdf,
    make_distribution,
    two_shell_cdf,
    two_shell_pdf,
    uniform_cdf,
    uniform_moment,
    uniform_pdf,
    uniform_pdf_hypergeometric_rep,
    uniform_pdf_integral_rep,
)
from .master import (
    NumericPdfEstimate,
    RotationAngles,
    general_pdf_mc,
    random_rotation_angles,
    rotation_matrix,
    symmetric_pdf,
    unit_vector,
)
from .physics import (
    CoulombSystem,
    NeutrinoSystem,
    SelfEnergyResult,
    coulomb_self_energy,
    neutrino_self_energy_gaussian,
    neutrino_self_energy_uniform,
    pairwise_expectation,
)
from .rips import (
    RipsReport,
    RipsTable,
    rips_exact_gaussian,
    rips_exact_uniform,
    rips_run,
    table1_harness,
)
from .rng import (
    ExternalStreamEngine,
    NwsEngine,
    R31Engine,
    Ran0Engine,
    make_engine,
    split,
)
from .sampling import (
    BallSampler,
    HistogramEstimate,
    KsResult,
    ks_test,
    ks_two_sample,
    pair_distance_histogram,
    sample_ball_uniform,
    sample_density,
)

__version__ = "0.1.0"

__all__ = [
    "BallGeometry",
    "BallSampler",
    "CoulombSystem",
    "DensityModel",
    "DistanceDistribution",
    "ExternalStreamEngine",
    "GaussianDensity",
    "GeneralDensity",
    "HistogramEstimate",
    "KsResult",
    "NeutrinoSystem",
    "NumericPdfEstimate",
    "NwsEngine",
    "R31Engine",
    "RadialProfileDensity",
    "RadialShellsDensity",
    "Ran0Engine",
    "RipsReport",
    "RipsTable",
    "RotationAngles",
    "SelfEnergyResult",
    "UniformDensity",
    "coulomb_self_energy",
    "gaussian_mode",
    "gaussian_moment",
    "gaussian_pdf",
    "general_pdf_mc",
    "hardcore_moment",
    "hardcore_pdf",
    "ks_test",
    "ks_two_sample",
    "make_distribution",
    "make_engine",
    "neutrino_self_energy_gaussian",
    "neutrino_self_energy_uniform",
    "pair_distance_histogram",
    "pairwise_expectation",
    "random_rotation_angles",
    "rips_exact_gaussian",
    "rips_exact_uniform",
    "rips_run",
    "rotation_matrix",
    "sample_ball_uniform",
    "sample_density",
    "split",
    "symmetric_pdf",
    "table1_harness",
    "two_shell_cdf",
    "two_shell_pdf",
    "uniform_cdf",
    "uniform_moment",
    "uniform_pdf",
    "uniform_pdf_hypergeometric_rep",
    "uniform_pdf_integral_rep",
    "unit_vector",
]
