"""Polynomial cusp descriptors: validation, pyramids, and coefficient bounds.

A UPC descriptor certifies that every point of a set launches a polynomial
curve whose sup-metric clearance from the complement grows like M t^m.  The
demo validates the built-in families on a sampled grid, shrinks the pyramid
around an anchor, and round-trips the curve coefficients through the
Vandermonde system at the nodes t = 1/j.
"""

import numpy as np

from feketelab import geometry

for model in (
    geometry.Interval(0.0, 1.0),
    geometry.Box((0.0, 0.0), (1.0, 1.0)),
    geometry.Disk(0.0, 1.0),
    geometry.PowerCusp(1.0, 2, 1.0),
):
    desc = geometry.builtin_descriptor(model)
    report = geometry.validate_upc(desc)
    print(
        f"{model.kind:12s} M={desc.M:.4g} m={desc.m} deg={desc.degree} "
        f"valid={report.ok} (grid {report.t_resolution} x {report.u_resolution})"
    )

print()
print("=== pyramid shrink factor on [0, 1] ===")
desc = geometry.builtin_descriptor(geometry.Interval(0.0, 1.0))
image = geometry.pyramid_image(desc, np.array([1.0]), r=1.0)
print(f"r = 1 shrinks to r' = {image.r_prime} (hand value 1/3)")
inclusion = geometry.check_cusp_inclusion(desc, image)
print(f"pyramid image inside the cusp set and the r-cube: {inclusion.ok}")

print()
print("=== coefficient recovery at nodes t = 1/j ===")
cusp = geometry.builtin_descriptor(geometry.PowerCusp(1.0, 2, 1.0))
anchors = geometry.generate_mesh(geometry.PowerCusp(1.0, 2, 1.0), 3).points
bounds = geometry.coefficient_bound(cusp, anchors)
print("per-degree coefficient sups:", np.round(bounds.bounds, 4))
print("worst recovery error       :", bounds.recovery_error)
