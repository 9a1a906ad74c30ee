"""Time-integrator order check with an external periodic focusing force.

With force -a(t) x there is no field solve, and the matched Gaussian
initial state makes x_rms(t) = sqrt(2 pi) w(t) exactly, with w the
periodic envelope.  Summing |x_rms(2 k pi) - x_rms(0)| over ten periods
isolates the time-integration error; halving dt shows the scheme order
until the spatial remap floor takes over.

Run:  python demos/hill_order_check.py [grid_n]
"""

import sys

import numpy as np

from fslvlasov import cases, solver

n = int(sys.argv[1]) if len(sys.argv) > 1 else 128


def err_for(pusher, m):
    cfg = cases.apply_overrides(
        cases.case_defaults("hill"),
        {"nx": n, "nv": n, "pusher": pusher, "dt": 2 * np.pi / m,
         "t_end": 20 * np.pi, "diag_every": m},
    )
    xr = solver.run(cfg).channel("xrms")
    return sum(abs(xr[k] - xr[0]) for k in range(1, 11))


print(f"grid {n}^2, ten periods of a(t) = 0.81 + 0.15 cos t")
results = {}
for pusher in ("rk2", "rk4"):
    print(pusher)
    errs = []
    for m in (8, 11, 16, 23, 32):
        errs.append(err_for(pusher, m))
        line = f"  dt = 2pi/{m:<3d} err = {errs[-1]:.3e}"
        if len(errs) > 1:
            line += f"   local slope = {np.log(errs[-2] / errs[-1]) / np.log(m / m_prev):.2f}"
        print(line)
        m_prev = m
    results[pusher] = errs

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ms = np.array([8, 11, 16, 23, 32])
    dts = 2 * np.pi / ms
    for pusher, marker in (("rk2", "o"), ("rk4", "s")):
        plt.loglog(dts, results[pusher], marker + "-", label=pusher)
    plt.loglog(dts, 0.2 * dts**2, ":", label=r"$\Delta t^2$")
    plt.loglog(dts, 0.05 * dts**4, ":", label=r"$\Delta t^4$")
    plt.xlabel(r"$\Delta t$")
    plt.ylabel("err")
    plt.legend()
    plt.tight_layout()
    plt.savefig("hill_order.png", dpi=150)
    print("wrote hill_order.png")
except ImportError:
    print("matplotlib not installed; skipping the plot")
