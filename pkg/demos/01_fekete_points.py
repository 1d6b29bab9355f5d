"""Fekete configurations on the interval: solvers, oracles, and determinants.

Walks through the solver ladder on [-1, 1]: exhaustive search (the oracle),
greedy maximal-volume selection, exchange refinement, and Leja sequences.
Prints the selected points next to the classical degree-3 answer
{-1, -1/sqrt(5), 1/sqrt(5), 1}.
"""

import math

import numpy as np

from feketelab import fekete, geometry

iv = geometry.Interval(-1.0, 1.0)

print("=== brute force vs the classical degree-3 points ===")
mesh = geometry.mesh_from_points(np.linspace(-1, 1, 201), 0.01, 6)
cfg = fekete.brute_force_fekete(mesh, 3, budget=70_000_000)
print("mesh optimum :", np.sort(cfg.points.real.ravel()))
print("closed form  :", [-1.0, -1.0 / math.sqrt(5), 1.0 / math.sqrt(5), 1.0])
print("objective    :", cfg.objective)

print()
print("=== solver ladder at degree 8 ===")
mesh = geometry.generate_mesh(iv, 8)
print(f"candidate mesh: {len(mesh)} points, spacing {mesh.spacing:g}")
for method in ("greedy", "greedy+refine", "leja"):
    cfg = fekete.solve_configuration(mesh, 8, method=method)
    print(f"{method:14s} objective {cfg.objective:+.12f}  ({cfg.provenance})")

print()
print("=== weighted configurations: exp(-s x^2) pulls points inward ===")
w = lambda pts: pts[:, 0].real ** 2
for s in (0.0, 4.0, 16.0):
    cfg = fekete.solve_configuration(mesh, 4, weight=None if s == 0 else w, scale=s)
    xs = np.sort(cfg.points.real.ravel())
    print(f"scale {s:5.1f}: extremes +-{xs.max():.4f}")
