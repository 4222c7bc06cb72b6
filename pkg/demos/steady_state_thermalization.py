"""
Steady states and Gibbs fidelity
================================

With two ancilla streams at one temperature the system settles into a steady
state.  Each qubit's marginal is compared with the Gibbs state of its own
bare Hamiltonian.  When every frequency matches, the product of Gibbs states
commutes with the XY couplings and is left alone by the partial swap, so it
is an exact fixed point.  Detuning one qubit and its stream moves the steady
state away from Gibbs at low temperature.
"""

import math

from twoqubit_cm.engine import find_steady_state
from twoqubit_cm.model import SchemeConfig, named_state
from twoqubit_cm.presets import gibbs_fidelities

base = SchemeConfig(scheme="B", g_s1aL=0.5, g_s2aR=0.5, g_s1s2=0.95, dt=0.1, theta=0.95 * math.pi / 2)

for label, cfg in (("resonant", base), ("detuned ", base.replace(omega_s1=0.5, omega_aL=0.5))):
    for temperature in (0.5, 10.0):
        beta = 1 / temperature
        c = cfg.replace(beta_aL=beta, beta_aR=beta)
        res = find_steady_state(named_state("basis_00"), c, tol=1e-8)
        f1, f2 = gibbs_fidelities(res.state, c)
        print(f"{label} T = {temperature:4.1f}: F(s1) = {f1:.6f}  F(s2) = {f2:.6f}  ({res.steps} collisions)")
