"""Compact set models, candidate meshes, and cusp descriptors.

Sets live in R^n (embedded as R^n + i*0) or C^n with n in {1, 2}.  Points are
complex arrays of shape (k, n).  All membership predicates are closed
(boundary points count as inside) and vectorized.
"""

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import (
    DegenerateSetError,
    DescriptorInvalidError,
    InputError,
    ShapeError,
)

#: boundary-inclusion tolerance for membership predicates
MEMBERSHIP_TOL = 1e-12


def _as_points(points, n):
    pts = np.asarray(points, dtype=complex)
    if pts.ndim == 0:
        pts = pts.reshape(1, 1)
    elif pts.ndim == 1:
        pts = pts[:, None] if n == 1 else pts[None, :]
    if pts.ndim != 2 or pts.shape[1] != n:
        raise ShapeError(f"expected points of shape (k, {n}), got {np.shape(points)}")
    return pts


class CompactSetModel:
    """Common interface: kind, dimension, ambient, contains, chart box."""

    kind = "abstract"
    ambient = "real"
    dimension = 1

    def contains(self, points):
        raise NotImplementedError

    def _chart_box(self):
        """Real meshing chart: (lows, highs) arrays."""
        raise NotImplementedError

    def _chart_to_points(self, chart):
        """Map real chart coordinates (k, chart_dim) to points (k, n)."""
        if self.ambient == "real":
            return chart.astype(complex)
        raise NotImplementedError


def _real_part_ok(pts):
    return np.abs(pts.imag).max(axis=1) <= MEMBERSHIP_TOL if pts.size else np.zeros(0, bool)


@dataclass(frozen=True)
class Interval(CompactSetModel):
    a: float
    b: float
    kind = "interval"
    dimension = 1
    ambient = "real"

    def __post_init__(self):
        if not self.a < self.b:
            raise InputError(f"interval needs a < b, got [{self.a}, {self.b}]")

    def contains(self, points):
        pts = _as_points(points, 1)
        x = pts[:, 0].real
        return (
            _real_part_ok(pts)
            & (x >= self.a - MEMBERSHIP_TOL)
            & (x <= self.b + MEMBERSHIP_TOL)
        )

    def _chart_box(self):
        return np.array([self.a]), np.array([self.b])


@dataclass(frozen=True)
class Box(CompactSetModel):
    lows: tuple
    highs: tuple
    kind = "box"
    ambient = "real"

    def __post_init__(self):
        if len(self.lows) != len(self.highs):
            raise ShapeError("box lows/highs length mismatch")
        if any(lo >= hi for lo, hi in zip(self.lows, self.highs)):
            raise InputError("box needs lows < highs componentwise")
        object.__setattr__(self, "dimension", len(self.lows))

    def contains(self, points):
        pts = _as_points(points, self.dimension)
        ok = _real_part_ok(pts)
        for i, (lo, hi) in enumerate(zip(self.lows, self.highs)):
            x = pts[:, i].real
            ok = ok & (x >= lo - MEMBERSHIP_TOL) & (x <= hi + MEMBERSHIP_TOL)
        return ok

    def _chart_box(self):
        return np.asarray(self.lows, float), np.asarray(self.highs, float)


@dataclass(frozen=True)
class Disk(CompactSetModel):
    center: complex = 0.0
    radius: float = 1.0
    kind = "closed-disk"
    dimension = 1
    ambient = "complex"

    def __post_init__(self):
        if self.radius <= 0:
            raise InputError("disk radius must be positive")

    def contains(self, points):
        pts = _as_points(points, 1)
        return np.abs(pts[:, 0] - self.center) <= self.radius + MEMBERSHIP_TOL

    def _chart_box(self):
        c, r = complex(self.center), self.radius
        return np.array([c.real - r, c.imag - r]), np.array([c.real + r, c.imag + r])

    def _chart_to_points(self, chart):
        return (chart[:, 0] + 1j * chart[:, 1])[:, None]


@dataclass(frozen=True)
class Circle(CompactSetModel):
    """Boundary circle; not fat, meshed by equispaced angles."""

    center: complex = 0.0
    radius: float = 1.0
    kind = "circle"
    dimension = 1
    ambient = "complex"

    def __post_init__(self):
        if self.radius <= 0:
            raise InputError("circle radius must be positive")

    def contains(self, points):
        pts = _as_points(points, 1)
        return np.abs(np.abs(pts[:, 0] - self.center) - self.radius) <= 1e-9

    def _chart_box(self):
        c, r = complex(self.center), self.radius
        return np.array([c.real - r, c.imag - r]), np.array([c.real + r, c.imag + r])

    def _chart_to_points(self, chart):
        return (chart[:, 0] + 1j * chart[:, 1])[:, None]


@dataclass(frozen=True)
class ConvexPolygon(CompactSetModel):
    """Filled convex polygon in R^2; vertices in counterclockwise order."""

    vertices: tuple
    kind = "convex-polygon"
    dimension = 2
    ambient = "real"

    def __post_init__(self):
        verts = np.asarray(self.vertices, float)
        if verts.ndim != 2 or verts.shape[1] != 2 or len(verts) < 3:
            raise InputError("polygon needs >= 3 planar vertices")
        # enforce counterclockwise orientation via the signed area
        area2 = float(
            np.sum(
                verts[:, 0] * np.roll(verts[:, 1], -1)
                - np.roll(verts[:, 0], -1) * verts[:, 1]
            )
        )
        if area2 == 0.0:
            raise InputError("degenerate polygon (zero area)")
        if area2 < 0:
            object.__setattr__(self, "vertices", tuple(map(tuple, verts[::-1])))

    def contains(self, points):
        pts = _as_points(points, 2)
        ok = _real_part_ok(pts)
        verts = np.asarray(self.vertices, float)
        x, y = pts[:, 0].real, pts[:, 1].real
        for i in range(len(verts)):
            ax, ay = verts[i]
            bx, by = verts[(i + 1) % len(verts)]
            cross = (bx - ax) * (y - ay) - (by - ay) * (x - ax)
            ok = ok & (cross >= -MEMBERSHIP_TOL * max(1.0, abs(bx - ax) + abs(by - ay)))
        return ok

    def _chart_box(self):
        verts = np.asarray(self.vertices, float)
        return verts.min(axis=0), verts.max(axis=0)


@dataclass(frozen=True)
class PowerCusp(CompactSetModel):
    """{(x, y): 0 <= x <= extent, |y| <= M x^m}; cusp tip at the origin."""

    M: float = 1.0
    m: int = 2
    extent: float = 1.0
    kind = "power-cusp"
    dimension = 2
    ambient = "real"

    def __post_init__(self):
        if self.M <= 0 or self.m < 1 or self.extent <= 0:
            raise InputError("power cusp needs M > 0, m >= 1, extent > 0")

    def contains(self, points):
        pts = _as_points(points, 2)
        x, y = pts[:, 0].real, pts[:, 1].real
        return (
            _real_part_ok(pts)
            & (x >= -MEMBERSHIP_TOL)
            & (x <= self.extent + MEMBERSHIP_TOL)
            & (np.abs(y) <= self.M * np.clip(x, 0.0, None) ** self.m + MEMBERSHIP_TOL)
        )

    def _chart_box(self):
        ymax = self.M * self.extent**self.m
        return np.array([0.0, -ymax]), np.array([self.extent, ymax])


@dataclass(frozen=True)
class Comb(CompactSetModel):
    """[0,1] x [-1,1] minus finitely many open teeth around levels a_k.

    Requires a_k - a_{k+1} > eps_k + eps_{k+1}; the infinite union of teeth is
    truncated at len(a_seq), so the set stays closed and fat.
    """

    a_seq: tuple
    eps_seq: tuple
    kind = "comb"
    dimension = 2
    ambient = "real"

    def __post_init__(self):
        a, e = list(self.a_seq), list(self.eps_seq)
        if len(a) != len(e) or not a:
            raise InputError("comb needs matching nonempty a/eps sequences")
        if any(x <= 0 for x in a + e):
            raise InputError("comb sequences must be positive")
        for k in range(len(a) - 1):
            if not (a[k] > a[k + 1] and a[k] - a[k + 1] > e[k] + e[k + 1]):
                raise InputError("comb teeth overlap: need a_k - a_(k+1) > eps_k + eps_(k+1)")

    def contains(self, points):
        pts = _as_points(points, 2)
        x, y = pts[:, 0].real, pts[:, 1].real
        ok = (
            _real_part_ok(pts)
            & (x >= -MEMBERSHIP_TOL)
            & (x <= 1 + MEMBERSHIP_TOL)
            & (np.abs(y) <= 1 + MEMBERSHIP_TOL)
        )
        for ak, ek in zip(self.a_seq, self.eps_seq):
            in_tooth = (x >= 0) & (x < y) & (np.abs(y - ak) < ek)
            ok = ok & ~in_tooth
        return ok

    def _chart_box(self):
        return np.array([0.0, -1.0]), np.array([1.0, 1.0])


def default_comb(k_max=8):
    """Built-in comb with a_k = 1/k and rapidly shrinking teeth, k = 2..k_max."""
    ks = range(2, k_max + 1)
    return Comb(
        a_seq=tuple(1.0 / k for k in ks),
        eps_seq=tuple(0.5 * math.exp(-(k**2)) for k in ks),
    )


@dataclass(frozen=True)
class UnionModel(CompactSetModel):
    members: tuple
    kind = "union"

    def __post_init__(self):
        if not self.members:
            raise InputError("union needs at least one member")
        dims = {m.dimension for m in self.members}
        ambients = {m.ambient for m in self.members}
        if len(dims) != 1 or len(ambients) != 1:
            raise ShapeError("union members must share dimension and ambient")
        object.__setattr__(self, "dimension", self.members[0].dimension)
        object.__setattr__(self, "ambient", self.members[0].ambient)

    def contains(self, points):
        pts = _as_points(points, self.dimension)
        ok = np.zeros(pts.shape[0], dtype=bool)
        for m in self.members:
            ok = ok | m.contains(pts)
        return ok

    def _chart_box(self):
        boxes = [m._chart_box() for m in self.members]
        lows = np.min([b[0] for b in boxes], axis=0)
        highs = np.max([b[1] for b in boxes], axis=0)
        return lows, highs

    def _chart_to_points(self, chart):
        return self.members[0]._chart_to_points(chart)


def contains(model, z):
    """Membership of a single point (or array of points) in the closed set."""
    result = model.contains(z)
    return bool(result[0]) if np.ndim(z) <= 1 and result.size == 1 else result


def probe_fat(model, resolution=64):
    """Grid probe for fatness: some grid point has all axis neighbors inside."""
    lows, highs = model._chart_box()
    h = (highs - lows).max() / resolution
    axes = [np.arange(lo, hi + h / 2, h) for lo, hi in zip(lows, highs)]
    grid = np.array(list(product(*axes)))
    inside = model.contains(model._chart_to_points(grid))
    centers = grid[inside]
    if centers.size == 0:
        return False
    dim = grid.shape[1]
    ok = np.ones(len(centers), dtype=bool)
    for i in range(dim):
        for sign in (-1.0, 1.0):
            shifted = centers.copy()
            shifted[:, i] += sign * h
            ok &= model.contains(model._chart_to_points(shifted))
    return bool(ok.any())


# ---------------------------------------------------------------------------
# candidate meshes


@dataclass(frozen=True)
class CandidateMesh:
    points: np.ndarray
    spacing: float
    max_valid_degree: int

    def __post_init__(self):
        object.__setattr__(self, "points", np.asarray(self.points, dtype=complex))

    def __len__(self):
        return self.points.shape[0]

    @property
    def dimension(self):
        return self.points.shape[1]


def mesh_from_points(points, spacing, max_valid_degree):
    pts = np.asarray(points, dtype=complex)
    if pts.ndim == 1:
        pts = pts[:, None]
    return CandidateMesh(points=pts, spacing=float(spacing), max_valid_degree=int(max_valid_degree))


def roots_of_unity_mesh(count, max_valid_degree, center=0.0, radius=1.0):
    """Equispaced circle mesh; first point at angle 0, counterclockwise."""
    theta = 2.0 * np.pi * np.arange(count) / count
    pts = center + radius * np.exp(1j * theta)
    return mesh_from_points(pts, 2 * np.pi * radius / count, max_valid_degree)


def generate_mesh(model, degree, density=1.0):
    """Membership-filtered grid with spacing <= c/(density d^2), c = half side.

    O(d^-2) axis spacing keeps interval-type meshes norming for degree-d
    polynomials.  Disks additionally carry a boundary ring; circles are meshed
    purely by equispaced angles.
    """
    if degree < 1:
        raise InputError("degree must be >= 1")
    if density < 1.0:
        raise InputError("density factor must be >= 1")
    if isinstance(model, Circle):
        count = max(256, 8 * (degree + 1))
        return roots_of_unity_mesh(count, degree, model.center, model.radius)

    lows, highs = model._chart_box()
    side = float((highs - lows).max())
    spacing = (side / 2.0) / (density * degree**2)
    axes = []
    for lo, hi in zip(lows, highs):
        npts = max(2, int(math.ceil((hi - lo) / spacing)) + 1)
        axes.append(np.linspace(lo, hi, npts))
    grid = np.array(list(product(*axes)))
    pts = model._chart_to_points(grid)
    pts = pts[model.contains(pts)]
    if isinstance(model, Disk):
        ring = max(64, 8 * (degree + 1))
        theta = 2.0 * np.pi * np.arange(ring) / ring
        boundary = (model.center + model.radius * np.exp(1j * theta))[:, None]
        pts = np.concatenate([pts, boundary], axis=0)
        _, keep = np.unique(pts.round(12), axis=0, return_index=True)
        pts = pts[np.sort(keep)]
    if pts.shape[0] == 0:
        raise DegenerateSetError(
            f"set {model.kind} admits no mesh points at spacing {spacing:g}"
        )
    return CandidateMesh(points=pts, spacing=spacing, max_valid_degree=degree)


# ---------------------------------------------------------------------------
# UPC descriptors and the cusp / pyramid machinery


@dataclass(frozen=True)
class UpcDescriptor:
    """Constants (M, m, degree) and the polynomial family h_x realizing them.

    ``coefficients(anchor)`` returns the (degree+1, n) array a_0..a_degree of
    h_x(t) = sum_k a_k(x) t^k; h_x(0) = x, h_x([0,1]) stays in the set, and
    the sup-metric distance to the complement is >= M t^m.
    """

    M: float
    m: int
    degree: int
    coefficients: object  # callable anchor -> (degree+1, n) array
    model: CompactSetModel | None = None

    def __post_init__(self):
        if self.M <= 0 or self.m < 1 or self.degree < 1:
            raise InputError("UPC descriptor needs M > 0, m >= 1, degree >= 1")

    @property
    def dimension(self):
        return self.model.dimension if self.model is not None else None

    def coeffs(self, anchor):
        c = np.asarray(self.coefficients(np.asarray(anchor, dtype=complex)), dtype=complex)
        if c.ndim == 1:
            c = c[:, None]
        if c.shape[0] != self.degree + 1:
            raise ShapeError(
                f"family returned {c.shape[0]} coefficients, expected {self.degree + 1}"
            )
        return c

    def h(self, anchor, t):
        """Curve points h_anchor(t), shape (len(t), n)."""
        c = self.coeffs(anchor)
        t = np.atleast_1d(np.asarray(t, dtype=float))
        powers = np.vander(t, N=self.degree + 1, increasing=True)  # (k, deg+1)
        return powers.astype(complex) @ c


def cube_grid(n, per_axis):
    """Deterministic fill of the unit sup-norm cube [-1,1]^n, shape (k, n)."""
    axis = np.linspace(-1.0, 1.0, per_axis)
    return np.array(list(product(axis, repeat=n)))


def _sup_dist(points, ref):
    """Componentwise sup-metric distance(s) between point arrays."""
    return np.abs(points - ref).max(axis=-1)


def cusp_set_samples(descriptor, anchor, t_grid, u_grid, check_membership=True):
    """Point cloud h_a(t) + M t^m w over the grids; duplicates removed.

    Every sample must land inside the attached set model; a violation raises
    with the offending (t, w, point) witness.
    """
    anchor = np.asarray(anchor, dtype=complex).reshape(-1)
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    w = np.asarray(u_grid, dtype=float)
    if w.ndim == 1:
        w = w[:, None]
    if t.size == 0 or w.size == 0:
        raise InputError("t and u grids must be nonempty")
    if np.abs(w).max() > 1 + 1e-12:
        raise InputError("u grid must lie in the unit sup-norm cube")
    curve = descriptor.h(anchor, t)  # (T, n)
    radii = descriptor.M * t ** descriptor.m  # (T,)
    cloud = (curve[:, None, :] + radii[:, None, None] * w[None, :, :]).reshape(-1, curve.shape[1])
    if check_membership and descriptor.model is not None:
        inside = descriptor.model.contains(cloud)
        if not inside.all():
            bad = int(np.argmin(inside))
            ti, wi = divmod(bad, w.shape[0])
            raise DescriptorInvalidError(
                f"UPC condition violated at t={t[ti]:g}, w={w[wi]}",
                witness={"t": float(t[ti]), "w": w[wi].copy(), "point": cloud[bad].copy()},
            )
    _, order = np.unique(cloud.round(15), axis=0, return_index=True)
    return cloud[np.sort(order)]


@dataclass(frozen=True)
class PyramidImage:
    anchor: np.ndarray
    r: float
    r_prime: float
    points: np.ndarray        # sampled p(t, t u)
    t_values: np.ndarray
    u_vectors: np.ndarray
    coeff_sups: np.ndarray    # per-degree sup of |coefficient| over anchors


def coefficient_sups(descriptor, anchor_samples):
    """Per-degree sup of coefficient magnitudes over the sampled anchors."""
    anchors = np.asarray(anchor_samples, dtype=complex)
    if anchors.ndim == 1:
        anchors = anchors[:, None]
    sups = np.zeros(descriptor.degree + 1)
    for a in anchors:
        sups = np.maximum(sups, np.abs(descriptor.coeffs(a)).max(axis=1))
    return sups


def _default_anchor_samples(descriptor, anchor):
    if descriptor.model is not None:
        return generate_mesh(descriptor.model, degree=4).points
    return np.asarray(anchor, dtype=complex).reshape(1, -1)


def pyramid_image(descriptor, anchor, r, t_count=64, u_count=16, anchor_samples=None):
    """Sampled image of the shrunken pyramid under p(t, z) = h(t) + M z^m.

    The shrink factor is r' = r / (1 + d! * sum_l sup|a_l| + M), with the
    coefficient sups taken over the sampled anchors.  Only the t >= 0 branch
    is sampled: the cusp set is swept by t in [0, 1].
    """
    if not 0 < r <= 1:
        raise InputError(f"r must lie in (0, 1], got {r}")
    anchor = np.asarray(anchor, dtype=complex).reshape(-1)
    if anchor_samples is None:
        anchor_samples = _default_anchor_samples(descriptor, anchor)
    sups = coefficient_sups(descriptor, anchor_samples)
    r_prime = r / (1.0 + math.factorial(descriptor.degree) * sups.sum() + descriptor.M)
    t = np.linspace(0.0, r_prime, t_count)
    u = cube_grid(anchor.size, u_count)
    curve = descriptor.h(anchor, t)  # (T, n)
    bump = descriptor.M * (t[:, None, None] * u[None, :, :]) ** descriptor.m
    pts = (curve[:, None, :] + bump).reshape(-1, anchor.size)
    return PyramidImage(
        anchor=anchor,
        r=float(r),
        r_prime=float(r_prime),
        points=pts,
        t_values=t,
        u_vectors=u,
        coeff_sups=sups,
    )


@dataclass(frozen=True)
class InclusionReport:
    ok: bool
    witnesses: tuple
    t_resolution: int
    u_resolution: int


def check_cusp_inclusion(descriptor, image, tol=1e-9):
    """Point-by-point check that the pyramid image sits in E_a and D(a, r).

    E_a membership is certified by exhibiting a sweep parameter t' with
    ||z - h(t')||_sup <= M t'^m; the search grid includes the construction
    parameters, so valid descriptors pass exactly.  When a set model is
    attached, plain membership in E is checked as well.
    """
    a = image.anchor
    t_search = np.unique(np.concatenate([image.t_values, np.linspace(0.0, 1.0, 257)]))
    curve = descriptor.h(a, t_search)  # (S, n)
    radii = descriptor.M * t_search ** descriptor.m
    witnesses = []
    n_u = image.u_vectors.shape[0]
    in_model = (
        descriptor.model.contains(image.points)
        if descriptor.model is not None
        else np.ones(image.points.shape[0], dtype=bool)
    )
    for idx, z in enumerate(image.points):
        ti, ui = divmod(idx, n_u)
        reasons = []
        if _sup_dist(z, a) > image.r + tol:
            reasons.append("outside-cube")
        gaps = _sup_dist(curve, z) - radii
        if gaps.min() > tol:
            reasons.append("outside-cusp-set")
        if not in_model[idx]:
            reasons.append("outside-set")
        if reasons:
            witnesses.append(
                {
                    "t": float(image.t_values[ti]),
                    "u": image.u_vectors[ui].copy(),
                    "point": z.copy(),
                    "reasons": tuple(reasons),
                }
            )
    return InclusionReport(
        ok=not witnesses,
        witnesses=tuple(witnesses),
        t_resolution=image.t_values.size,
        u_resolution=n_u,
    )


@dataclass(frozen=True)
class CoefficientBounds:
    bounds: np.ndarray          # per-degree max |a_k| over anchors and coords
    recovery_error: float       # worst |recovered - stored| coefficient


def coefficient_bound(descriptor, anchors):
    """Recover coefficients from curve values at nodes t_j = 1/j and bound them.

    Solving the (d+1) x (d+1) system against h_x(1/j) doubles as a self-test:
    the recovered coefficients must match the stored family.
    """
    anchors = np.asarray(anchors, dtype=complex)
    if anchors.ndim == 1:
        anchors = anchors[:, None]
    d = descriptor.degree
    if anchors.shape[0] < d + 1:
        raise InputError(f"need at least {d + 1} anchors, got {anchors.shape[0]}")
    nodes = 1.0 / np.arange(1, d + 2)
    system = np.vander(nodes, N=d + 1, increasing=True)
    assert abs(np.linalg.det(system)) > 0, "distinct nodes 1/j give a nonsingular system"
    bounds = np.zeros(d + 1)
    worst = 0.0
    for a in anchors:
        values = descriptor.h(a, nodes)  # (d+1, n)
        recovered = np.linalg.solve(system, values)
        stored = descriptor.coeffs(a)
        worst = max(worst, float(np.abs(recovered - stored).max()))
        bounds = np.maximum(bounds, np.abs(stored).max(axis=1))
    return CoefficientBounds(bounds=bounds, recovery_error=worst)


@dataclass(frozen=True)
class UpcValidationReport:
    ok: bool
    witnesses: tuple
    t_resolution: int
    u_resolution: int


def validate_upc(descriptor, anchors=None, t_count=64, u_count=16, tol=1e-9):
    """Sampled check of the UPC conditions against the attached set model.

    Universally quantified conditions are checked on a t x u grid; the report
    carries the resolution so verdicts are auditable.
    """
    if descriptor.model is None:
        raise InputError("validation needs a set model attached to the descriptor")
    model = descriptor.model
    if anchors is None:
        anchors = generate_mesh(model, degree=3).points
    anchors = np.asarray(anchors, dtype=complex)
    if anchors.ndim == 1:
        anchors = anchors[:, None]
    t = np.linspace(0.0, 1.0, t_count)
    u = cube_grid(model.dimension, u_count)
    witnesses = []
    for a in anchors:
        curve = descriptor.h(a, t)
        if _sup_dist(curve[0], a) > tol:
            witnesses.append({"anchor": a.copy(), "reason": "h(0) != anchor"})
            continue
        on_curve = model.contains(curve)
        if not on_curve.all():
            bad = int(np.argmin(on_curve))
            witnesses.append(
                {"anchor": a.copy(), "t": float(t[bad]), "reason": "curve leaves set"}
            )
            continue
        radii = descriptor.M * t ** descriptor.m
        cloud = (curve[:, None, :] + radii[:, None, None] * u[None, :, :]).reshape(
            -1, model.dimension
        )
        inside = model.contains(cloud)
        if not inside.all():
            bad = int(np.argmin(inside))
            ti, ui = divmod(bad, u.shape[0])
            witnesses.append(
                {
                    "anchor": a.copy(),
                    "t": float(t[ti]),
                    "u": u[ui].copy(),
                    "reason": "cube escapes set",
                }
            )
    return UpcValidationReport(
        ok=not witnesses,
        witnesses=tuple(witnesses),
        t_resolution=t_count,
        u_resolution=u.shape[0],
    )


# ---------------------------------------------------------------------------
# built-in descriptor families


def interval_descriptor(model):
    """h_x(t) = (1-t) x + t mid: linear pull toward the midpoint."""
    mid = (model.a + model.b) / 2.0

    def coeff(anchor):
        x = anchor.reshape(-1)[0]
        return np.array([[x], [mid - x]])

    return UpcDescriptor(
        M=(model.b - model.a) / 2.0, m=1, degree=1, coefficients=coeff, model=model
    )


def box_descriptor(model):
    """Linear pull toward the box center; M is half the smallest side."""
    lows = np.asarray(model.lows, float)
    highs = np.asarray(model.highs, float)
    center = (lows + highs) / 2.0

    def coeff(anchor):
        x = anchor.reshape(-1)
        return np.vstack([x, center - x])

    return UpcDescriptor(
        M=float((highs - lows).min()) / 2.0,
        m=1,
        degree=1,
        coefficients=coeff,
        model=model,
    )


def disk_descriptor(model):
    """Linear pull toward the disk center."""
    center = complex(model.center)

    def coeff(anchor):
        x = anchor.reshape(-1)[0]
        return np.array([[x], [center - x]])

    return UpcDescriptor(M=model.radius, m=1, degree=1, coefficients=coeff, model=model)


def power_cusp_descriptor(model):
    """Family for the power cusp |y| <= M_s x^m_s, 0 <= x <= extent.

    The x-coordinate moves linearly toward 3/4 of the extent; the
    y-coordinate rides the scaled profile s * M_s * x(t)^m_s * (1 - t) with
    s = y0 / (M_s x0^m_s), so the curve never leaves the cusp and gains
    sup-metric clearance of order t^(m_s + 1).
    """
    ms, Ms, ext = model.m, model.M, model.extent
    target = 0.75 * ext

    def coeff(anchor):
        x0, y0 = anchor.reshape(-1)[0], anchor.reshape(-1)[1]
        s = 0.0 if abs(x0) == 0 else y0 / (Ms * x0**ms)
        # x(t) = x0 + t (target - x0); y(t) = s Ms x(t)^ms (1 - t)
        xpoly = np.zeros(ms + 2, dtype=complex)
        xpoly[0], xpoly[1] = x0, target - x0
        base = np.zeros(ms + 2, dtype=complex)
        base[0] = 1.0
        for _ in range(ms):
            base = _poly_mul_trunc(base, xpoly, ms + 2)
        one_minus_t = np.zeros(ms + 2, dtype=complex)
        one_minus_t[0], one_minus_t[1] = 1.0, -1.0
        ypoly = s * Ms * _poly_mul_trunc(base, one_minus_t, ms + 2)
        return np.stack([xpoly, ypoly], axis=1)

    # Clearance analysis: x(t) >= (3/4) ext t and the free |y| gap is at least
    # Ms x(t)^ms t, giving distance >= M_upc t^(ms+1) with the constant below.
    m_upc = ms + 1
    M_upc = min(ext / 4.0, Ms * (0.75 * ext) ** ms / 4.0)
    return UpcDescriptor(M=M_upc, m=m_upc, degree=ms + 1, coefficients=coeff, model=model)


def _poly_mul_trunc(p, q, length):
    out = np.zeros(length, dtype=complex)
    for i, pi in enumerate(p):
        if pi == 0:
            continue
        top = min(length - i, len(q))
        out[i : i + top] += pi * q[:top]
    return out


def builtin_descriptor(model):
    """The shipped UPC family for a built-in set model, when one exists."""
    if isinstance(model, Interval):
        return interval_descriptor(model)
    if isinstance(model, Box):
        return box_descriptor(model)
    if isinstance(model, Disk):
        return disk_descriptor(model)
    if isinstance(model, PowerCusp):
        return power_cusp_descriptor(model)
    raise InputError(f"no built-in UPC family for set kind {model.kind!r}")


# ---------------------------------------------------------------------------
# serialization


def model_to_config(model):
    """Declarative key-value form of a set model."""
    if isinstance(model, Interval):
        return {"kind": "interval", "a": model.a, "b": model.b}
    if isinstance(model, Box):
        return {"kind": "box", "lows": list(model.lows), "highs": list(model.highs)}
    if isinstance(model, Disk):
        c = complex(model.center)
        return {
            "kind": "closed-disk",
            "center_re": c.real,
            "center_im": c.imag,
            "radius": model.radius,
        }
    if isinstance(model, Circle):
        c = complex(model.center)
        return {
            "kind": "circle",
            "center_re": c.real,
            "center_im": c.imag,
            "radius": model.radius,
        }
    if isinstance(model, ConvexPolygon):
        return {"kind": "convex-polygon", "vertices": [list(v) for v in model.vertices]}
    if isinstance(model, PowerCusp):
        return {"kind": "power-cusp", "M": model.M, "m": model.m, "extent": model.extent}
    if isinstance(model, Comb):
        return {"kind": "comb", "a_seq": list(model.a_seq), "eps_seq": list(model.eps_seq)}
    if isinstance(model, UnionModel):
        return {"kind": "union", "members": [model_to_config(m) for m in model.members]}
    raise InputError(f"unknown model type {type(model).__name__}")


def model_from_config(cfg):
    kind = cfg.get("kind")
    if kind == "interval":
        return Interval(a=float(cfg["a"]), b=float(cfg["b"]))
    if kind == "box":
        return Box(lows=tuple(cfg["lows"]), highs=tuple(cfg["highs"]))
    if kind == "closed-disk":
        return Disk(
            center=complex(cfg.get("center_re", 0.0), cfg.get("center_im", 0.0)),
            radius=float(cfg.get("radius", 1.0)),
        )
    if kind == "circle":
        return Circle(
            center=complex(cfg.get("center_re", 0.0), cfg.get("center_im", 0.0)),
            radius=float(cfg.get("radius", 1.0)),
        )
    if kind == "convex-polygon":
        return ConvexPolygon(vertices=tuple(map(tuple, cfg["vertices"])))
    if kind == "power-cusp":
        return PowerCusp(
            M=float(cfg.get("M", 1.0)),
            m=int(cfg.get("m", 2)),
            extent=float(cfg.get("extent", 1.0)),
        )
    if kind == "comb":
        if "a_seq" in cfg:
            return Comb(a_seq=tuple(cfg["a_seq"]), eps_seq=tuple(cfg["eps_seq"]))
        return default_comb(int(cfg.get("k_max", 8)))
    if kind == "union":
        return UnionModel(members=tuple(model_from_config(m) for m in cfg["members"]))
    raise InputError(f"unknown set kind {kind!r}")


def points_to_csv(points, stream):
    """One point per row, real and imaginary parts in fixed column order."""
    pts = np.asarray(points, dtype=complex)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = pts.shape[1]
    header = ",".join(f"x{i+1}_re,x{i+1}_im" for i in range(n))
    stream.write(header + "\n")
    for row in pts:
        cells = []
        for z in row:
            cells.append(f"{z.real:.17g}")
            cells.append(f"{z.imag:.17g}")
        stream.write(",".join(cells) + "\n")
