"""Forward-only transition: release a Gaussian at t=0, test for it at t=40.

Prints the overlap amplitude, the transition probability and a coarse view of
the density at each snapshot.
"""
#%% setup
import numpy as np

from rsidirac import CiExperiment, run_ci

exp = CiExperiment()          # N=2048, L=256, m=1, tf=40, spinor (1, 1)
run = run_ci(exp)

#%% amplitude
a = run.result.amplitude
print(f"A = {a.real:+.6f} {a.imag:+.6f}i   P = {run.result.probability:.6f}")

#%% density snapshots: the packet spreads and sheds ripples at the light cone
x = exp.grid.x
for snap in run.snapshots:
    rho = snap.density
    core = np.sum(rho[np.abs(x) < 5]) * exp.grid.dx
    width = np.sqrt(np.sum(x**2 * rho) * exp.grid.dx)
    print(f"t={snap.t:6.2f}  norm={np.sum(rho) * exp.grid.dx:.15f}  "
          f"weight in |x|<5: {core:.4f}  rms width: {width:.3f}")
