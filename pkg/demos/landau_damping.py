"""Linear Landau damping benchmark.

A Maxwellian with a one-percent-of-a-percent cosine perturbation damps at
the kinetic rate given by the dominant root of the dispersion relation.
This script runs the forward scheme at the standard resolution, overlays
the closed-form dominant-mode envelope, and prints the fitted damping
rate and oscillation frequency next to the dispersion-root values.

Run:  python demos/landau_damping.py [outdir]
"""

import sys

import numpy as np

from fslvlasov import cases, solver
from fslvlasov.diagnostics import fit_damping
from fslvlasov.landau import solve_dominant_root

outdir = sys.argv[1] if len(sys.argv) > 1 else None

cfg = cases.case_defaults("landau")
print(f"running {cfg.case}: {cfg.nx}x{cfg.nv}, dt={cfg.dt}, pusher={cfg.pusher}")
res = solver.run(cfg, outdir=outdir)

t = res.times
ee = res.channel("electric_energy")
root = solve_dominant_root(cfg.k)
gamma, omega = fit_damping(t, ee, t_min=2.0, t_max=40.0)

print(f"dispersion root : omega = {root.omega_r:.4f}, gamma = {root.omega_i:.4f}")
print(f"fitted from run : omega = {omega:.4f}, gamma = {gamma:.4f}")

# dominant-mode envelope of 0.5 ||E||^2: (4 a r)^2 L/4 e^{2 gamma t}
L = cfg.domain_length()
env = (4 * cfg.alpha * root.r) ** 2 * (L / 4.0) * np.exp(2 * root.omega_i * t)
mask = (t > 2.0) & (t < 30.0)
ratio = ee[mask] / env[mask]
print(f"envelope ratio over t in [2, 30]: max {ratio.max():.3f} (peaks should sit near 1)")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.semilogy(t, ee, label="simulation")
    plt.semilogy(t, env, "--", label="dominant-mode envelope")
    plt.xlabel(r"$t\,\omega_p^{-1}$")
    plt.ylabel(r"$\frac{1}{2}\|E\|_{L^2}^2$")
    plt.legend()
    plt.title(f"Landau damping, k={cfg.k}")
    plt.tight_layout()
    plt.savefig("landau_damping.png", dpi=150)
    print("wrote landau_damping.png")
except ImportError:
    print("matplotlib not installed; skipping the plot")
