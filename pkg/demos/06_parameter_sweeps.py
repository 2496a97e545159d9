"""Parameter sweeps: mapping out where the protocols still work.
================================================================

The sweep driver reruns a protocol across a grid of one physical parameter
and tabulates probability, fidelity and concurrence per branch. The same
tables are available from the command line (`spinphoton sweep ...`) as CSV
for external plotting; here we just print them.
"""
import math

from spinphoton import (
    CavityParams,
    ProtocolConfig,
    RealisticGate,
    SweepSpec,
    run_sweep,
)

base = ProtocolConfig(gate=RealisticGate(CavityParams(g=10.0, kappa=1.0, gamma=0.1), 0.5))


def show(rows, keep=None):
    print(f"{'value':>8} {'branch':>10} {'prob':>10} {'fidelity':>12} {'concurrence':>12}")
    for r in rows:
        if keep and r["branch_label"] not in keep:
            continue
        conc = "" if r["concurrence"] is None else f"{r['concurrence']:12.6f}"
        fid = "" if math.isnan(r["fidelity"]) else f"{r['fidelity']:12.6f}"
        print(f"{r['swept_value']:8.3f} {r['branch_label']:>10} "
              f"{r['probability']:10.6f} {fid:>12} {conc:>12}")
    print()


# --- coupling strength: the make-or-break parameter -----------------------------
print("pair fidelity vs coupling (pair generation off one spin):")
spec = SweepSpec("g_rel", (0.5, 1.0, 2.0, 5.0, 10.0, 50.0), base, "scheme-b")
show(run_sweep(spec), keep={"+45/up"})

# --- side leakage: photons lost out of the pillar ---------------------------------
print("effect of side leakage on the same branch:")
spec = SweepSpec("kappa_s_rel", (0.0, 0.1, 0.3, 1.0), base, "scheme-b")
show(run_sweep(spec), keep={"+45/up"})

# --- probe detuning: how sharp is the pi/2 point? ----------------------------------
print("write-in (photon to spin) fidelity vs probe detuning:")
spec = SweepSpec("detuning_rel", (0.2, 0.35, 0.5, 0.65, 0.8), base, "transfer-ps")
show(run_sweep(spec), keep={"H"})

# --- spin dephasing during the emission interval ------------------------------------
print("remote-spin pair fidelity vs waiting time (ideal gate):")
spec = SweepSpec("t_over_t2", (0.0, 1e-3, 1e-2, 1e-1, 1.0), ProtocolConfig(), "scheme-a")
show(run_sweep(spec), keep={"V"})
