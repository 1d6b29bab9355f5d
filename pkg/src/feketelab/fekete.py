"""Fekete configurations: brute force, greedy pivoting, Leja sequences, swaps.

All solvers optimize the weighted log-Vandermonde objective over a candidate
mesh.  Ties are always broken toward the lowest mesh index, so every run is
reproducible bit for bit.
"""

import math
from dataclasses import dataclass, replace
from itertools import combinations, islice

import numpy as np
from numba import njit

from . import polyspace
from .errors import CapacityError, DegenerateMeshError, InputError, ShapeError

DEFAULT_BUDGET = 2_000_000


@dataclass(frozen=True)
class Configuration:
    """Ordered N_d-point configuration with its log|VDM| objective.

    The objective is monomial-normalized: basis-flavor contributions are
    removed via the analytic change-of-basis shift, and the weight term
    -scale * sum phi(x_j) is included.
    """

    points: np.ndarray
    degree: int
    scale: float
    objective: float
    provenance: str

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        if pts.ndim == 1:
            pts = pts[:, None]
        object.__setattr__(self, "points", pts)

    @property
    def dimension(self):
        return self.points.shape[1]

    def canonical_points(self):
        """Points sorted lexicographically; configurations compare up to order."""
        keys = np.lexsort(
            tuple(self.points[:, i].imag for i in reversed(range(self.dimension)))
            + tuple(self.points[:, i].real for i in reversed(range(self.dimension)))
        )
        return self.points[keys]


def _weight_logs(points, weight, scale):
    if weight is None or scale == 0.0:
        return np.zeros(points.shape[0])
    return -scale * np.asarray(weight(points), dtype=float)


def objective_value(points, degree, weight=None, scale=0.0):
    """Monomial-normalized weighted log|VDM| at the given points.

    Real point sets are evaluated in a Chebyshev basis on their bounding box
    for conditioning; the analytic change-of-basis shift restores the
    monomial normalization exactly.
    """
    pts = np.asarray(points, dtype=complex)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = pts.shape[1]
    mono = polyspace.multi_indices(n, degree)
    if pts.shape[0] != mono.size:
        raise ShapeError(f"need {mono.size} points for degree {degree}, got {pts.shape[0]}")
    basis, shift = mono, 0.0
    if np.abs(pts.imag).max(initial=0.0) <= 1e-12:
        basis = polyspace.multi_indices(
            n, degree, flavor="chebyshev", box=_bounding_box_of(pts)
        )
        shift = polyspace.change_basis_logdet_shift(mono, basis)
    v = polyspace.vandermonde(basis, pts, require_square=True)
    return polyspace.log_abs_det(v) - shift + _weight_logs(pts, weight, scale).sum()


@njit(cache=True)
def _brute_pairwise(D, wlog, k):  # pragma: no cover - jit-compiled
    """Best k-subset by pairwise log-distance objective, lex-first on ties."""
    npts = D.shape[0]
    c = np.arange(k)
    best = -1e300
    best_c = c.copy()
    while True:
        obj = 0.0
        for i in range(k):
            obj += wlog[c[i]]
            for j in range(i + 1, k):
                obj += D[c[i], c[j]]
        if obj > best:
            best = obj
            best_c = c.copy()
        # next combination in lexicographic order
        pos = k - 1
        while pos >= 0 and c[pos] == npts - k + pos:
            pos -= 1
        if pos < 0:
            break
        c[pos] += 1
        for j in range(pos + 1, k):
            c[j] = c[j - 1] + 1
    return best_c, best


def brute_force_fekete(mesh, degree, weight=None, scale=None, budget=DEFAULT_BUDGET):
    """Exhaustive maximizer over all N_d-subsets of the mesh (the oracle).

    In one variable the objective collapses to pairwise log distances plus
    weight terms, which is searched in compiled code; otherwise subsets are
    scanned in chunks with batched determinants.
    """
    if scale is None:
        scale = float(degree)
    pts = mesh.points
    n = pts.shape[1]
    n_d = polyspace.space_dimension(n, degree)
    total = math.comb(len(mesh), n_d)
    if total > budget:
        raise CapacityError(
            f"{total} subsets exceed the budget {budget}; pass budget={total} to force"
        )
    if n == 1:
        z = pts[:, 0]
        with np.errstate(divide="ignore"):
            D = np.log(np.abs(z[:, None] - z[None, :]))
        np.fill_diagonal(D, -1e300)
        wlog = _weight_logs(pts, weight, scale)
        idx, _ = _brute_pairwise(D, wlog, n_d)
        chosen = pts[np.asarray(idx)]
    else:
        basis = polyspace.multi_indices(n, degree)
        b = polyspace.vandermonde(basis, pts, weight=weight, scale=scale).matrix
        cols = b.T  # (mesh, N_d): row per point
        best_val = -math.inf
        best_idx = None
        combo_iter = combinations(range(len(mesh)), n_d)
        chunk_size = 50_000
        while True:
            chunk = list(islice(combo_iter, chunk_size))
            if not chunk:
                break
            idx = np.array(chunk)
            mats = cols[idx]  # (chunk, N_d, N_d)
            _, logdet = np.linalg.slogdet(mats)
            pick = int(np.argmax(logdet))
            if logdet[pick] > best_val:
                best_val = float(logdet[pick])
                best_idx = idx[pick]
        if best_idx is None or not np.isfinite(best_val):
            raise DegenerateMeshError("no nonsingular subset found on this mesh")
        chosen = pts[best_idx]
    return Configuration(
        points=chosen,
        degree=degree,
        scale=scale,
        objective=objective_value(chosen, degree, weight, scale),
        provenance="brute",
    )


def _orthonormalized_rows(mesh, degree, weight, scale, flavor, box):
    """Mesh-orthonormalized basis values: row per mesh point, column per element.

    QR against the mesh inner product makes greedy scores identical across
    basis flavors spanning the same graded flag, so the selected point sets
    are flavor-invariant.
    """
    n = mesh.points.shape[1]
    if flavor == "chebyshev" and box is None:
        box = _bounding_box_of(mesh.points)
    basis = polyspace.multi_indices(n, degree, flavor=flavor, box=box)
    if len(mesh) < basis.size:
        raise DegenerateMeshError(
            f"mesh has {len(mesh)} points but degree {degree} needs {basis.size}"
        )
    b = polyspace.vandermonde(basis, mesh.points, weight=weight, scale=scale).matrix
    q, r = np.linalg.qr(b.T)  # b.T is (mesh, N_d)
    if np.abs(np.diagonal(r)).min() < 1e-13 * max(np.abs(np.diagonal(r)).max(), 1.0):
        raise DegenerateMeshError("mesh is not unisolvent at this degree")
    return q, basis.size


def _bounding_box_of(points):
    re = points.real
    lows, highs = re.min(axis=0), re.max(axis=0)
    pad = np.where(highs - lows < 1e-12, 0.5, 0.0)
    return (lows - pad, highs + pad)


def greedy_afp(mesh, degree, weight=None, scale=None, flavor="monomial", box=None):
    """Approximate Fekete points by greedy maximal-volume row selection.

    Each step picks the mesh point whose (orthonormalized) evaluation vector
    has the largest distance from the span of the already-selected vectors;
    the selected set is re-orthogonalized from scratch every step.
    """
    if scale is None:
        scale = float(degree)
    if mesh.max_valid_degree < degree:
        raise InputError(
            f"mesh supports degree <= {mesh.max_valid_degree}, requested {degree}"
        )
    q, n_d = _orthonormalized_rows(mesh, degree, weight, scale, flavor, box)
    selected = _greedy_rows(q, n_d)
    chosen = mesh.points[selected]
    return Configuration(
        points=chosen,
        degree=degree,
        scale=scale,
        objective=objective_value(chosen, degree, weight, scale),
        provenance="greedy",
    )


def _greedy_rows(q, count, preselected=()):
    rows = q  # (mesh, N_d)
    selected = list(preselected)
    for _ in range(len(selected), count):
        if selected:
            u, _ = np.linalg.qr(rows[selected].T)  # (N_d, k)
            proj = rows.conj() @ u  # (mesh, k)
            res = np.einsum("ij,ij->i", rows, rows.conj()).real - np.einsum(
                "ij,ij->i", proj, proj.conj()
            ).real
        else:
            res = np.einsum("ij,ij->i", rows, rows.conj()).real
        res[selected] = -np.inf
        best = float(res.max())
        if not np.isfinite(best) or best <= 1e-26:
            raise DegenerateMeshError("rank deficiency before the configuration is full")
        # lowest index among near-ties, so symmetric meshes resolve the same
        # way regardless of basis-flavor rounding noise
        pick = int(np.flatnonzero(res >= best - 1e-9 * max(best, 1.0))[0])
        selected.append(pick)
    return selected


def leja_sequence(mesh, count, weight=None, scale=0.0, start=None):
    """Nested greedy points: each new point maximizes the determinant growth
    of the basis truncated to its own length.

    Returns the ordered points; prefixes of length N_d are admissible
    configurations.  ``start`` forces the first point (must lie on the mesh).
    """
    if count > len(mesh):
        raise InputError(f"count {count} exceeds mesh size {len(mesh)}")
    n = mesh.points.shape[1]
    d = 0
    while polyspace.space_dimension(n, d) < count:
        d += 1
    basis = polyspace.multi_indices(n, d)
    b = polyspace.vandermonde(basis, mesh.points, weight=weight, scale=scale).matrix
    cols = b.T  # (mesh, N)
    selected = []
    if start is not None:
        hits = np.where(np.abs(mesh.points - np.asarray(start, complex)).max(axis=1) < 1e-12)[0]
        if hits.size == 0:
            raise InputError("start point does not lie on the mesh")
        selected.append(int(hits[0]))
    while len(selected) < count:
        k = len(selected)
        sub = cols[:, : k + 1]  # truncated basis of length k+1
        if k == 0:
            score = np.abs(sub[:, 0])
        else:
            u, _ = np.linalg.qr(sub[selected].T)
            proj = sub.conj() @ u
            score = np.sqrt(
                np.maximum(
                    np.einsum("ij,ij->i", sub, sub.conj()).real
                    - np.einsum("ij,ij->i", proj, proj.conj()).real,
                    0.0,
                )
            )
        score[selected] = -np.inf
        pick = int(np.argmax(score))
        if not np.isfinite(score[pick]) or score[pick] <= 1e-13:
            raise DegenerateMeshError("Leja step found no independent point")
        selected.append(pick)
    return mesh.points[selected]


def _best_pair_swap(ratios, gains, wlog_mesh, wlog_cfg, top_k=16):
    """Best simultaneous two-slot swap by the exact rank-2 det-ratio formula.

    Replacing columns (j1, j2) by candidates (c1, c2) multiplies the
    determinant by R[j1,c1] R[j2,c2] - R[j1,c2] R[j2,c1] with R the
    single-swap ratio table; candidates are limited to each slot's top
    single-swap scores.  Returns (gain, j1, c1, j2, c2) or None.
    """
    n_d = ratios.shape[0]
    tops = []
    for j in range(n_d):
        order = np.argsort(-gains[j], kind="stable")[:top_k]
        tops.append(order[np.isfinite(gains[j][order])])
    best = (-np.inf, None)
    for j1 in range(n_d):
        for j2 in range(j1 + 1, n_d):
            for c1 in tops[j1]:
                for c2 in tops[j2]:
                    if c1 == c2:
                        continue
                    det2 = ratios[j1, c1] * ratios[j2, c2] - ratios[j1, c2] * ratios[j2, c1]
                    if det2 == 0:
                        continue
                    gain = (
                        math.log(abs(det2))
                        + wlog_mesh[c1]
                        + wlog_mesh[c2]
                        - wlog_cfg[j1]
                        - wlog_cfg[j2]
                    )
                    if gain > best[0]:
                        best = (gain, (j1, int(c1), j2, int(c2)))
    return best


def exchange_refine(config, mesh, weight=None, scale=None, max_rounds=50, tol=1e-12):
    """Swap local search; objective is non-decreasing.

    Each round evaluates all (slot, candidate) single-swap gains with one
    linear solve and applies the best strictly improving swap.  When no
    single swap improves, a coordinated two-slot swap over each slot's top
    candidates is tried before giving up.
    """
    if scale is None:
        scale = config.scale
    pts = config.points.copy()
    n = pts.shape[1]
    # swap gains are determinant ratios, so any basis spanning the space
    # works; Chebyshev on the mesh box keeps the linear solves conditioned
    if np.abs(mesh.points.imag).max(initial=0.0) <= 1e-12:
        basis = polyspace.multi_indices(
            n, config.degree, flavor="chebyshev", box=_bounding_box_of(mesh.points)
        )
    else:
        basis = polyspace.multi_indices(n, config.degree)
    mesh_mat = polyspace.vandermonde(basis, mesh.points).matrix
    wlog_mesh = _weight_logs(mesh.points, weight, scale)
    objective = objective_value(pts, config.degree, weight, scale)
    provenance = config.provenance
    for _ in range(max_rounds):
        a = polyspace.vandermonde(basis, pts, require_square=True).matrix
        wlog_cfg = _weight_logs(pts, weight, scale)
        ratios = np.linalg.solve(a, mesh_mat)  # (N_d slots, mesh candidates)
        with np.errstate(divide="ignore"):
            gains = np.log(np.abs(ratios))
        # duplicating an existing configuration point is never an improvement
        for j, p in enumerate(pts):
            dup = np.abs(mesh.points - p).max(axis=1) < 1e-15
            gains[:, dup] = -np.inf
            gains[j, :] += wlog_mesh - wlog_cfg[j]
        slot, cand = np.unravel_index(int(np.argmax(gains)), gains.shape)
        if not np.isfinite(gains[slot, cand]) or gains[slot, cand] <= tol:
            pair_gain, pair = _best_pair_swap(ratios, gains, wlog_mesh, wlog_cfg)
            if pair is None or pair_gain <= tol:
                break
            j1, c1, j2, c2 = pair
            pts[j1] = mesh.points[c1]
            pts[j2] = mesh.points[c2]
            new_objective = objective_value(pts, config.degree, weight, scale)
            assert new_objective >= objective - 1e-9, "pair swap decreased the objective"
            objective = new_objective
            provenance = "refined"
            continue
        pts[slot] = mesh.points[cand]
        new_objective = objective_value(pts, config.degree, weight, scale)
        assert new_objective >= objective - 1e-9, "swap decreased the objective"
        objective = new_objective
        provenance = "refined"
    return replace(config, points=pts, objective=objective, provenance=provenance)


def solve_configuration(mesh, degree, method="greedy+refine", weight=None, scale=None,
                        flavor=None, box=None, budget=DEFAULT_BUDGET):
    """Dispatch helper used by experiment plans.

    ``flavor=None`` picks Chebyshev on real meshes and monomials otherwise;
    the greedy selection itself is flavor-invariant either way.
    """
    if flavor is None:
        real = np.abs(mesh.points.imag).max(initial=0.0) <= 1e-12
        flavor = "chebyshev" if real else "monomial"
    if method == "brute":
        return brute_force_fekete(mesh, degree, weight, scale, budget=budget)
    if method in ("greedy", "greedy+refine"):
        cfg = greedy_afp(mesh, degree, weight, scale, flavor=flavor, box=box)
        if method == "greedy+refine":
            cfg = exchange_refine(cfg, mesh, weight, scale)
        return cfg
    if method == "leja":
        n_d = polyspace.space_dimension(mesh.points.shape[1], degree)
        pts = leja_sequence(mesh, n_d, weight, scale if scale is not None else float(degree))
        s = float(degree) if scale is None else scale
        return Configuration(
            points=pts,
            degree=degree,
            scale=s,
            objective=objective_value(pts, degree, weight, s),
            provenance="leja-prefix",
        )
    raise InputError(f"unknown solver method {method!r}")
