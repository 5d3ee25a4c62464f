"""Fidelity tradeoff between the two clones and entanglement in versus out.

Writes fig1.csv and fig2.csv to the current directory and prints the
landmarks of both curves.

    python demos/tradeoff_curves.py
"""
import csv

from entclone import optimize
from entclone.cloner import F_OPTIMAL

pts = optimize.sweep_fig1(200)
with open("fig1.csv", "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["F_b", "F_a", "E_a", "E_b", "E_sum"])
    for pt in pts:
        w.writerow([f"{x:.9f}" for x in (pt.f_b, pt.f_a, pt.e_a, pt.e_b, pt.e_sum)])

sym = min(pts, key=lambda pt: abs(pt.f_b - F_OPTIMAL))
print(f"curves cross at F_a = F_b = {sym.f_a:.6f}, E_a = E_b = {sym.e_a:.4f}")
print(f"largest E_a + E_b on the frontier: {max(pt.e_sum for pt in pts):.6f}")
print(f"clone a stops being entangled at F_b = {optimize.find_fb_where_ea_vanishes():.4f}")

rows = optimize.sweep_fig2(200)
with open("fig2.csv", "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["E_in", "E_out"])
    w.writerows([f"{a:.9f}", f"{b:.9f}"] for a, b in rows)

print(f"E_out at E_in = 1: {rows[-1][1]:.4f}")
print(f"no entanglement reaches the clones below E_in = {optimize.find_critical_input_entanglement():.4f}")
