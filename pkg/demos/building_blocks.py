"""
Tensor layouts, partial traces and the partial swap
====================================================

Every operator in the package is placed through a ``SubsystemLayout``, so no
call site works out Kronecker positions by hand.  This walk-through builds a
Bell pair next to a thermal ancilla, traces things out and applies the
ancilla-ancilla partial swap.
"""

import math

import numpy as np

from twoqubit_cm.linalg import SubsystemLayout, embed, partial_trace, unitary_from_hamiltonian
from twoqubit_cm.model import SWAP, SX, SY, named_state, partial_swap_unitary, thermal_ancilla

np.set_printoptions(precision=4, suppress=True)

# A layout is an ordered list of labelled qubits.
layout = SubsystemLayout(["s1", "s2", "aR_n"])
ancilla = thermal_ancilla(omega=1.0, beta=1.0)
joint = np.kron(named_state("bell_phi_plus"), ancilla)
print("joint dimension:", layout.dim)

# Each qubit of a Bell pair on its own is maximally mixed.
print("s1 marginal:\n", partial_trace(joint, layout, ["s1"]))
# The ancilla is in its Gibbs state; |1> is the ground state since sigma_z = diag(1, -1).
print("ancilla marginal:\n", partial_trace(joint, layout, ["aR_n"]).real)

# The XY coupling between s2 and the ancilla, embedded in the three-qubit space.
g, dt = 0.85, 0.08
h = embed(g * (np.kron(SX, SX) + np.kron(SY, SY)), layout, ["s2", "aR_n"])
u = unitary_from_hamiltonian(h, dt)
after = u @ joint @ u.conj().T
print("s1 marginal after one coupling step (unchanged):\n", partial_trace(after, layout, ["s1"]).real)

# The partial swap interpolates between doing nothing and swapping two qubits.
pair = SubsystemLayout(["old", "new"])
hot, cold = thermal_ancilla(1.0, 0.1), thermal_ancilla(1.0, 4.0)
for theta in (0.0, 0.5 * math.pi / 2, math.pi / 2):
    v = partial_swap_unitary(theta)
    out = v @ np.kron(hot, cold) @ v.conj().T
    p = partial_trace(out, pair, ["old"])[0, 0].real
    print(f"theta = {theta:.3f}: excited population left on 'old' = {p:.4f}")
print("full swap equals -i SWAP:", np.allclose(partial_swap_unitary(math.pi / 2), -1j * SWAP))
