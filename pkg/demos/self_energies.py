"""Pairwise self-energies from distance distributions.

The total pair energy of N identical particles is N(N-1)/2 times the
expectation of the 2-body potential over the pair-distance law, which turns
2n-dimensional configuration integrals into one-dimensional ones.  Shown
here: the Coulomb energy of a uniform charged ball and the 1/s^5
neutrino-pair-exchange energy with a hard-core cutoff.
"""

import math

import numpy as np

from nballdist import (
    BallGeometry,
    CoulombSystem,
    GaussianDensity,
    NeutrinoSystem,
    Ran0Engine,
    SelfEnergyResult,
    UniformDensity,
    coulomb_self_energy,
    neutrino_self_energy_gaussian,
    neutrino_self_energy_uniform,
    sample_ball_uniform,
)

print("Coulomb self-energy of a uniform charged ball")
print("=" * 60)
geom = BallGeometry(3, 1.0)
for charge_count in (2, 10, 100):
    system = CoulombSystem(charge_count, 1.0, geom)
    w = coulomb_self_energy(system)
    print(f"Z = {charge_count:>3d}: W = {w:.6g}  "
          f"(= Z(Z-1)/2 x 6/5 e^2/R, exact pair count)")

# Monte Carlo cross-check of the 6/5 constant
pts = sample_ball_uniform(geom, Ran0Engine(8), "rejection", 400_000)
pairs = pts.reshape(-1, 2, 3)
inv = 1.0 / np.linalg.norm(pairs[:, 1] - pairs[:, 0], axis=1)
print(f"sampled <1/s>: {inv.mean():.5f} (exact 1.2)")

print("\nNeutrino-pair-exchange self-energy with hard core")
print("=" * 60)
r_c = 0.5e-13 / 1.0e-13  # hard core in units of 1e-13 cm
for big_r in (5.0, 10.0, 50.0):  # nuclear radii in the same units
    system = NeutrinoSystem(neutron_count=100, fermi_constant=1.0,
                            hard_core=r_c, density=UniformDensity(),
                            radius=big_r)
    w = neutrino_self_energy_uniform(system)
    print(f"uniform R = {big_r:>5.1f}: W = {w:.6g}  (G_F^2/4pi^3 units)")

system = NeutrinoSystem(neutron_count=100, fermi_constant=1.0, hard_core=r_c,
                        density=GaussianDensity(5.0), sigma=5.0)
w = neutrino_self_energy_gaussian(system)
print(f"gaussian sigma = 5.0: W = {w:.6g}")

print("\nscaling check: W(lambda R, lambda r_c) = lambda^-5 W(R, r_c)")
s1 = NeutrinoSystem(2, 1.0, 0.5, UniformDensity(), radius=1.0)
s2 = NeutrinoSystem(2, 1.0, 1.0, UniformDensity(), radius=2.0)
w1 = neutrino_self_energy_uniform(s1)
w2 = neutrino_self_energy_uniform(s2)
print(f"W(1, 0.5) = {w1:.8g}, 2^5 W(2, 1.0) = {2**5 * w2:.8g}, "
      f"bracket value {w1 * 4 * math.pi**3:.6f}")

print("\nJSON report:")
print(SelfEnergyResult.neutrino(s1).to_json())
