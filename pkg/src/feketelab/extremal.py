"""Growth-envelope estimates via Lagrange brackets at Fekete configurations.

The degree-d configuration defines Lagrange fundamental polynomials l_j; the
pair

    lower(z) = (1/d) log max_j |l_j(z)| / ||l_j||_mesh
    upper(z) = (1/d) log ( sum_j |l_j(z)| * max(1, max_j ||l_j||_mesh) )

brackets the logarithmic extremal function of the set relative to the mesh
sup-norm.  All sup-norms are mesh sup-norms; reports carry the mesh spacing
so the norming defect is auditable.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import fekete as fk
from . import geometry, polyspace
from .errors import DegenerateConfigurationError, DegenerateSetError, InputError

#: Lelong-class normalization constant rho(z) = 0.5 log(1 + |z|^2); documented
#: here for reference, no estimator needs it.
def lelong_normalization(z):
    z = np.asarray(z, dtype=complex)
    return 0.5 * np.log1p(np.abs(z) ** 2)


@dataclass(frozen=True)
class ExtremalEstimate:
    """Evaluators for the lower/upper bracket of the extremal function."""

    degree: int
    config: fk.Configuration
    mesh: geometry.CandidateMesh
    lagrange_coeffs: np.ndarray  # columns: l_j in the working basis
    basis: polyspace.MultiIndexBasis
    mesh_sup_norms: np.ndarray

    def _lagrange_values(self, points):
        vals = polyspace.evaluate_basis(self.basis, points)  # (N_d, k)
        return np.abs(self.lagrange_coeffs.T @ vals)  # (N_d, k): |l_j(z)|

    def lower(self, points):
        lv = self._lagrange_values(points)
        ratio = lv / self.mesh_sup_norms[:, None]
        with np.errstate(divide="ignore"):
            return np.log(ratio.max(axis=0)) / self.degree

    def upper(self, points):
        lv = self._lagrange_values(points)
        factor = max(1.0, float(self.mesh_sup_norms.max()))
        return np.log(lv.sum(axis=0) * factor) / self.degree

    @property
    def slack(self):
        """Additive slack (1/d) log N_d of the upper evaluator."""
        return math.log(self.basis.size) / self.degree


def _working_basis(config, mesh):
    """Chebyshev basis on real boxes for conditioning, monomials otherwise."""
    pts = np.concatenate([config.points, mesh.points], axis=0)
    n = pts.shape[1]
    if np.abs(pts.imag).max() <= 1e-12:
        re = pts.real
        lows, highs = re.min(axis=0), re.max(axis=0)
        span = np.maximum(highs - lows, 1e-6)
        return polyspace.multi_indices(
            n, config.degree, flavor="chebyshev", box=(lows, lows + span)
        )
    return polyspace.multi_indices(n, config.degree)


def extremal_estimate(config, mesh):
    """Build the bracket evaluators for a configuration and its mesh."""
    basis = _working_basis(config, mesh)
    a = polyspace.evaluate_basis(basis, config.points)  # (N_d, N_d), e_i(x_k)
    try:
        coeffs = np.linalg.solve(a.T, np.eye(basis.size, dtype=complex))
    except np.linalg.LinAlgError as exc:
        raise DegenerateConfigurationError(f"singular interpolation: {exc}") from exc
    cond = np.linalg.cond(a.T)
    if not np.isfinite(cond) or cond > 1e14:
        raise DegenerateConfigurationError(
            f"configuration is numerically degenerate (cond {cond:.2g})"
        )
    mesh_vals = np.abs(coeffs.T @ polyspace.evaluate_basis(basis, mesh.points))
    sup_norms = mesh_vals.max(axis=1)
    return ExtremalEstimate(
        degree=config.degree,
        config=config,
        mesh=mesh,
        lagrange_coeffs=coeffs,
        basis=basis,
        mesh_sup_norms=sup_norms,
    )


def extremal_bracket(config, mesh, z):
    """(lower, upper) bracket values at a single query point."""
    est = extremal_estimate(config, mesh)
    pts = np.asarray(z, dtype=complex).reshape(1, -1)
    low = float(est.lower(pts)[0])
    up = float(est.upper(pts)[0])
    assert low <= up + 1e-9, "bracket order violated"
    return low, up


# ---------------------------------------------------------------------------
# modulus of continuity and HCP fits


@dataclass(frozen=True)
class ModulusSamples:
    anchor: np.ndarray
    radius: float
    deltas: np.ndarray
    values: np.ndarray  # estimated sup of the upper evaluator over |z-a|<=delta
    degree: int
    mesh_spacing: float

    def __post_init__(self):
        assert np.all(np.diff(self.values) >= -1e-12), "modulus must be non-decreasing"


def _ball_directions(n, count):
    """Deterministic complex unit directions for sup sampling."""
    if n == 1:
        theta = 2.0 * np.pi * np.arange(count) / count
        return np.exp(1j * theta)[:, None]
    dirs = []
    for i in range(count):
        psi = np.pi * i / count
        for j in range(max(4, count // 4)):
            phase = np.exp(2j * np.pi * j / max(4, count // 4))
            dirs.append([np.cos(psi) * phase, np.sin(psi) * phase])
    return np.asarray(dirs, dtype=complex)


def _restrict_mesh(model, anchor, r, degree, density=1.0):
    mesh = geometry.generate_mesh(model, degree, density)
    keep = np.linalg.norm(mesh.points - anchor, axis=1) <= r + 1e-12
    pts = mesh.points[keep]
    n_d = polyspace.space_dimension(mesh.points.shape[1], degree)
    if pts.shape[0] < n_d:
        raise DegenerateSetError(
            f"K intersect B(a, {r:g}) has only {pts.shape[0]} mesh points, "
            f"degree {degree} needs {n_d}"
        )
    return geometry.CandidateMesh(points=pts, spacing=mesh.spacing, max_valid_degree=degree)


def modulus_of_continuity(
    model,
    anchor,
    r,
    deltas,
    degree,
    solver="greedy+refine",
    density=1.0,
    direction_count=32,
    radial_fractions=(1.0, 0.5, 0.25),
):
    """Sampled modulus of the upper evaluator on K intersected with B(a, r).

    The sup over |z - a| <= delta is sampled on spheres of radii
    delta * radial_fractions; values are accumulated so the output is
    non-decreasing in delta by construction.
    """
    anchor = np.asarray(anchor, dtype=complex).reshape(-1)
    deltas = np.sort(np.asarray(deltas, dtype=float))
    if deltas.size == 0 or deltas[0] <= 0 or deltas[-1] > 1:
        raise InputError("delta grid must lie in (0, 1]")
    if not 0 < r <= 1:
        raise InputError("radius r must lie in (0, 1]")
    mesh = _restrict_mesh(model, anchor, r, degree, density)
    cfg = fk.solve_configuration(mesh, degree, method=solver)
    est = extremal_estimate(cfg, mesh)
    dirs = _ball_directions(anchor.size, direction_count)
    values = []
    running = -np.inf
    for delta in deltas:
        for frac in radial_fractions:
            pts = anchor[None, :] + delta * frac * dirs
            running = max(running, float(est.upper(pts).max()))
        values.append(running)
    return ModulusSamples(
        anchor=anchor,
        radius=float(r),
        deltas=deltas,
        values=np.asarray(values),
        degree=degree,
        mesh_spacing=mesh.spacing,
    )


@dataclass(frozen=True)
class HcpFit:
    mu_est: float
    q_est: float
    c_est: float
    max_residual: float
    excluded: int


def hcp_fit(samples):
    """Least squares for log w = log C + mu log delta - q log r across radii."""
    if len(samples) < 2:
        raise InputError("need samples at two or more radii")
    rows, rhs = [], []
    excluded = 0
    for s in samples:
        if s.deltas.size < 4:
            raise InputError("need at least 4 delta points per radius")
        for delta, val in zip(s.deltas, s.values):
            if val <= 0:
                excluded += 1
                continue
            rows.append([1.0, math.log(delta), -math.log(s.radius)])
            rhs.append(math.log(val))
    if not rows:
        from .errors import FitError

        raise FitError("all modulus samples were non-positive")
    a = np.asarray(rows)
    b = np.asarray(rhs)
    coef, *_ = np.linalg.lstsq(a, b, rcond=None)
    resid = np.abs(a @ coef - b)
    return HcpFit(
        mu_est=float(coef[1]),
        q_est=float(coef[2]),
        c_est=float(math.exp(coef[0])),
        max_residual=float(resid.max()),
        excluded=excluded,
    )


# ---------------------------------------------------------------------------
# inequality checks


@dataclass(frozen=True)
class InequalityReport:
    ok: bool
    worst_margin: float
    margins: np.ndarray


def check_polynomial_image_inequality(model_e, h, h_degree, w_samples, degree=8, density=1.0):
    """Sampled check of the composition inequality for polynomial images.

    Compares the lower bracket on h(E) at h(w) with h_degree times the upper
    bracket on E at w, allowing the combined bracket slack of both sides.
    """
    w_pts = np.asarray(w_samples, dtype=complex)
    if w_pts.ndim == 1:
        w_pts = w_pts[:, None]
    mesh_e = geometry.generate_mesh(model_e, degree, density)
    cfg_e = fk.solve_configuration(mesh_e, degree, method="greedy+refine")
    est_e = extremal_estimate(cfg_e, mesh_e)
    image_points = h(mesh_e.points)
    if np.allclose(image_points, image_points[0], atol=1e-12):
        raise DegenerateSetError("h collapses E to a point (pluripolar image)")
    image_mesh = geometry.CandidateMesh(
        points=image_points, spacing=mesh_e.spacing, max_valid_degree=degree
    )
    cfg_h = fk.solve_configuration(image_mesh, degree, method="greedy+refine")
    est_h = extremal_estimate(cfg_h, image_mesh)
    slack = est_e.slack * h_degree + est_h.slack
    lower_h = est_h.lower(h(w_pts))
    upper_e = est_e.upper(w_pts)
    margins = h_degree * upper_e + slack - lower_h
    return InequalityReport(
        ok=bool(np.all(margins >= 0)), worst_margin=float(margins.min()), margins=margins
    )


def global_modulus(model, anchors, r, deltas, degree, **kwargs):
    """Max of modulus samples over an anchor net; conservative envelope."""
    samples = [
        modulus_of_continuity(model, a, r, deltas, degree, **kwargs) for a in anchors
    ]
    values = np.max([s.values for s in samples], axis=0)
    deltas = np.sort(np.asarray(deltas, dtype=float))
    return deltas, values


def check_blocki_inequality(model, pairs, anchors, degree=8, deltas=None, density=1.0):
    """Sampled continuity transfer: bracket-midpoint differences against the
    global modulus at the pair separation (plus combined bracket slack)."""
    if deltas is None:
        deltas = np.geomspace(1e-3, 1.0, 16)
    mesh = geometry.generate_mesh(model, degree, density)
    cfg = fk.solve_configuration(mesh, degree, method="greedy+refine")
    est = extremal_estimate(cfg, mesh)
    grid_d, grid_w = global_modulus(model, anchors, 1.0, deltas, degree, density=density)
    margins = []
    for z, w in pairs:
        zp = np.asarray(z, dtype=complex).reshape(1, -1)
        wp = np.asarray(w, dtype=complex).reshape(1, -1)
        sep = float(np.linalg.norm(zp - wp))
        if sep > 1.0:
            raise InputError(f"pair separation {sep:g} exceeds 1")
        mid_z = (est.lower(zp)[0] + est.upper(zp)[0]) / 2.0
        mid_w = (est.lower(wp)[0] + est.upper(wp)[0]) / 2.0
        idx = int(np.searchsorted(grid_d, sep, side="left"))
        idx = min(idx, grid_d.size - 1)
        bound = grid_w[idx] + 2.0 * est.slack + (est.upper(zp)[0] - est.lower(zp)[0])
        margins.append(bound - abs(mid_z - mid_w))
    margins = np.asarray(margins)
    return InequalityReport(
        ok=bool(np.all(margins >= 0)), worst_margin=float(margins.min()), margins=margins
    )
