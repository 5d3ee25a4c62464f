"""Searching all cloning isometries, without assuming covariance.

The fidelity search lands on the covariant optimum from random starts. The
concurrence search shows why concurrence alone is a poor objective: a PPT
(separability preserving) but non-covariant machine can keep more
worst-case clone entanglement at the price of very low fidelity.

    python demos/isometry_search.py [restarts]
"""
import sys

from entclone import optimize
from entclone.cloner import F_OPTIMAL

restarts = int(sys.argv[1]) if len(sys.argv) > 1 else 4

res = optimize.optimize_isometry("fidelity", p=0.5, restarts=restarts, seed=42)
print(f"fidelity search      best {res.objective_value:.9f}  (covariant optimum {F_OPTIMAL:.9f})")
print(f"                     per restart {[round(v, 6) for v in res.extras['per_restart']]}")

res = optimize.optimize_isometry("concurrence", restarts=restarts, seed=42)
ex = res.extras
print(f"concurrence search   best {res.objective_value:.6f}  (covariant cloner {optimize.C_OPTIMAL:.6f})")
print(f"                     held-out inputs {ex['heldout_min']:.6f}, noise mixed in {ex['noise_mix']:.1e}")
print(f"                     average fidelity of that machine {ex['avg_fidelity']:.4f}")
