"""Bracketing the logarithmic extremal function from a Fekete configuration.

On [-1, 1] the extremal function is log|z + sqrt(z^2 - 1)| (the Green
function of the complement with pole at infinity); on the closed unit disk it
is log^+ |z|.  The Lagrange-polynomial bracket pins both down at degree 8,
within the reported slack (1/d) log N_d.
"""

import math

import numpy as np

from feketelab import extremal, fekete, geometry


def green_interval(z):
    w = complex(z)
    s = np.sqrt(w * w - 1.0)
    return math.log(max(abs(w + s), abs(w - s)))


print("=== interval [-1, 1], degree 8 ===")
iv = geometry.Interval(-1.0, 1.0)
mesh = geometry.generate_mesh(iv, 8)
cfg = fekete.solve_configuration(mesh, 8)
est = extremal.extremal_estimate(cfg, mesh)
print(f"slack (1/d) log N_d = {est.slack:.4f}, mesh spacing = {mesh.spacing:g}")
print(f"{'z':>8s} {'lower':>8s} {'upper':>8s} {'closed form':>12s}")
for z in (1.1, 1.5, 2.0, 3.0, 2.0j, 1.0 + 1.0j):
    pt = np.array([[complex(z)]])
    lo, up = float(est.lower(pt)[0]), float(est.upper(pt)[0])
    print(f"{str(z):>8s} {lo:8.4f} {up:8.4f} {green_interval(z):12.4f}")

print()
print("=== unit disk, degree 8 ===")
disk = geometry.Disk(0.0, 1.0)
dmesh = geometry.generate_mesh(disk, 8)
dest = extremal.extremal_estimate(fekete.solve_configuration(dmesh, 8), dmesh)
for r in (1.5, 2.0, 4.0):
    pt = np.array([[complex(r)]])
    lo, up = float(dest.lower(pt)[0]), float(dest.upper(pt)[0])
    print(f"|z| = {r}: bracket [{lo:.4f}, {up:.4f}], log|z| = {math.log(r):.4f}")

print()
print("=== modulus of continuity at the endpoint x = 1 ===")
deltas = np.geomspace(0.02, 0.3, 8)
samples = [
    extremal.modulus_of_continuity(iv, np.array([1.0 + 0j]), r, deltas, 16)
    for r in (1.0, 0.5)
]
fit = extremal.hcp_fit(samples)
print(f"fitted exponent mu = {fit.mu_est:.3f} (square-root cusp: 1/2)")
