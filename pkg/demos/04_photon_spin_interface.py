"""A two-qubit quantum interface: photon state to spin and back.
================================================================

Unlike teleportation, which consumes a pre-shared entangled pair and a third
qubit, one conditional reflection plus one measurement moves an unknown qubit
between light and matter. Writing in: the photon reflects, gets detected
behind a PBS, and a feed-forward phase pulse leaves the spin in the photon's
former state. Reading out: a fresh photon reflects, the spin is read
non-destructively through an ancilla, and wave plates rotate the heralded
photon into the spin's former state.
"""
import math

import numpy as np

from spinphoton import (
    CavityParams,
    ProtocolConfig,
    RealisticGate,
    transfer_photon_to_spin,
    transfer_spin_to_photon,
)

SQH = 1.0 / math.sqrt(2.0)

# An arbitrary qubit to shuttle around (elliptical polarization).
alpha, beta = 0.6, 0.8j
print(f"input qubit: alpha = {alpha}, beta = {beta}")
print()

# --- photon -> spin -------------------------------------------------------------
res = transfer_photon_to_spin(ProtocolConfig(alpha1=alpha, beta1=beta))
print("write into the spin (branches = PBS outcome):")
for br in res.branches:
    print(f"  {br.label}: p = {br.probability:.6f}  "
          f"spin state = {np.round(br.state.amplitudes, 6)}  "
          f"fidelity = {br.fidelity_vs_target:.9f}")
print("both PBS outcomes succeed after their feed-forward correction")
print()

# --- spin -> photon -------------------------------------------------------------
res = transfer_spin_to_photon(ProtocolConfig(alpha1=alpha, beta1=beta))
print("read out onto a photon (branches = spin readout/actual):")
for br in res.branches:
    if br.probability == 0:
        continue
    print(f"  {br.label}: p = {br.probability:.6f}  "
          f"photon (R,L) = {np.round(br.state.amplitudes, 6)}  "
          f"fidelity = {br.fidelity_vs_target:.9f}")
print("the H/V components of the photon now carry (alpha, beta)")
print()

# --- how good is this with a real cavity? ----------------------------------------
print("write-in fidelity vs coupling strength (gamma = 0.1 kappa):")
for g in (2.0, 5.0, 10.0, 50.0):
    params = CavityParams(g=g, kappa=1.0, gamma=0.1)
    cfg = ProtocolConfig(gate=RealisticGate(params, 0.5),
                         alpha1=SQH, beta1=1j * SQH)
    r = transfer_photon_to_spin(cfg)
    fids = {b.label: b.fidelity_vs_target for b in r.branches}
    print(f"  g = {g:5.1f} kappa: F(H) = {fids['H']:.9f}  F(V) = {fids['V']:.9f}  "
          f"survival = {r.survival_probability():.6f}")
