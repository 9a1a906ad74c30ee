"""Bump-on-tail instability: a beam on the Maxwellian tail flattens into
a plateau while the electric energy saturates and partially decays.

Run:  python demos/bump_on_tail.py [outdir]
"""

import sys

import numpy as np

from fslvlasov import cases, solver
from fslvlasov.diagnostics import integrated_fv

outdir = sys.argv[1] if len(sys.argv) > 1 else None

cfg = cases.case_defaults("bump_on_tail")
print(f"running {cfg.case}: {cfg.nx}x{cfg.nv}, dt={cfg.dt}, pusher={cfg.pusher}, "
      f"t_end={cfg.t_end}")
res = solver.run(cfg, outdir=outdir)

t = res.times
ee = res.channel("electric_energy")
i_peak = np.argmax(ee)
late = ee[t >= cfg.t_end - 20.0].mean()
print(f"electric energy peaks at t = {t[i_peak]:.1f} with value {ee[i_peak]:.2f}")
print(f"late-time level: {late:.2f}  ({100 * late / ee[i_peak]:.0f}% of the peak)")

grids = (res.state.g1, res.state.g2)
v = res.state.g2.nodes()
for t_snap, f in res.snapshots:
    if abs(t_snap - 40.0) < cfg.dt or t_snap == res.snapshots[-1][0]:
        prof = integrated_fv(f, grids)
        window = (v > 2.0) & (v < 5.0)
        spread = prof[window].max() - prof[window].min()
        print(f"t = {t_snap:5.1f}: F(v) spread over v in [2, 5] = {spread:.3f} "
              f"(plateau when small)")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4))
    ax1.plot(t, ee)
    ax1.set_xlabel(r"$t\,\omega_p^{-1}$")
    ax1.set_ylabel("electric energy")
    for t_snap, f in res.snapshots:
        ax2.plot(v, integrated_fv(f, grids), label=f"t={t_snap:g}")
    ax2.set_xlabel("v")
    ax2.set_ylabel("F(v)")
    ax2.set_xlim(0, 9)
    ax2.legend(fontsize=7)
    plt.tight_layout()
    plt.savefig("bump_on_tail.png", dpi=150)
    print("wrote bump_on_tail.png")
except ImportError:
    print("matplotlib not installed; skipping the plot")
