"""Tour of the optimal entanglement cloner.

Builds the symmetric cloner, checks its clones against the Werner form,
and compares it with cloning each qubit separately.

    python demos/optimal_cloner_tour.py
"""
import numpy as np

from entclone import channels, cloner, states

co = cloner.optimal_symmetric_coeffs()
print(f"optimal coefficients  A = B = {co.a:.6f}, C = {co.c:.6f}")
print(f"normalization         {co.normalization():.12f}")

# clone a random maximally entangled state
n = states.random_me_state(2024)
pair = cloner.clone_pair(n, co)
print(f"clone fidelities      F_a = {pair.f_a:.9f}, F_b = {pair.f_b:.9f}")

# each clone is the input mixed with white noise on the orthogonal complement
phi = states.from_magic(n)
f = pair.f_a
werner = f * states.projector(phi) + (1 - f) / 3 * (np.eye(4) - states.projector(phi))
print(f"distance to Werner    {np.max(np.abs(pair.rho_a - werner)):.1e}")

c = states.concurrence_mixed(pair.rho_a)
print(f"clone concurrence     {c:.6f}  (2F - 1 = {2 * f - 1:.6f})")
print(f"clone entanglement    {states.eof_from_concurrence(c):.4f} ebit")

# baseline: the best universal qubit cloner on each half separately
local = cloner.local_clone_pair(n)
c_loc = states.concurrence_mixed(local.rho_a)
print(f"local cloning         F = {local.f_a:.6f}, C = {c_loc:.6f}, "
      f"E = {states.eof_from_concurrence(c_loc):.4f} ebit")

# the machine never turns product states into entangled ones
worst = channels.separability_scan(co, trials=200, seed=1)
print(f"max clone concurrence over 200 product inputs: {worst:.1e}")

# measuring in the Bell basis and preparing two copies does create
# entanglement from |00>, one reason perfect entanglement cloning is ruled out
n00 = states.to_magic(np.array([1, 0, 0, 0]))
print(f"measure-and-reprepare on |00>: branch concurrence {cloner.reprepare_branch_concurrence(n00):.3f}")
