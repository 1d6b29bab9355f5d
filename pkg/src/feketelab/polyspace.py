"""Polynomial bases, weighted Vandermonde matrices, and stable log-determinants.

Points are always stored as complex arrays of shape (npoints, n); real sets
simply carry zero imaginary parts.
"""

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import CapacityError, InputError, ShapeError

# Hard cap on the basis size N_d = C(n+d, n); desk-scale guard.
MAX_BASIS_SIZE = 200_000

# A diagonal QR entry below this magnitude marks a singular configuration.
UNDERFLOW_TOL = 1e-300


def space_dimension(n, d):
    """Dimension of the polynomials of degree <= d in n variables."""
    return math.comb(n + d, n)


@dataclass(frozen=True)
class MultiIndexBasis:
    """Graded-lexicographic basis of n-variate polynomials of degree <= d.

    flavor "monomial" works everywhere; "chebyshev" is a tensor Chebyshev
    basis and requires a real box = (lows, highs) for the affine chart.
    """

    n: int
    d: int
    flavor: str = "monomial"
    box: tuple | None = None
    indices: tuple = field(init=False)

    def __post_init__(self):
        if self.n < 1 or self.d < 0:
            raise InputError(f"need n >= 1 and d >= 0, got n={self.n}, d={self.d}")
        if self.flavor not in ("monomial", "chebyshev"):
            raise InputError(f"unknown basis flavor {self.flavor!r}")
        if self.flavor == "chebyshev" and self.box is None:
            raise InputError("chebyshev flavor requires a real box (lows, highs)")
        if space_dimension(self.n, self.d) > MAX_BASIS_SIZE:
            raise CapacityError(
                f"basis size C({self.n}+{self.d},{self.n}) exceeds {MAX_BASIS_SIZE}"
            )
        idx = [a for a in product(range(self.d + 1), repeat=self.n) if sum(a) <= self.d]
        idx.sort(key=lambda a: (sum(a), a))
        object.__setattr__(self, "indices", tuple(idx))

    @property
    def size(self):
        return len(self.indices)


def multi_indices(n, d, flavor="monomial", box=None):
    """Ordered multi-index basis; length is C(n+d, n)."""
    return MultiIndexBasis(n=n, d=d, flavor=flavor, box=box)


def _as_points(points, n):
    pts = np.asarray(points, dtype=complex)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[1] != n:
        raise ShapeError(f"expected points of shape (k, {n}), got {pts.shape}")
    return pts


def _chebyshev_table(x, dmax):
    """T_0..T_dmax at x (any complex array), by the three-term recurrence."""
    table = np.empty((dmax + 1,) + x.shape, dtype=complex)
    table[0] = 1.0
    if dmax >= 1:
        table[1] = x
    for k in range(2, dmax + 1):
        table[k] = 2.0 * x * table[k - 1] - table[k - 2]
    return table


def evaluate_basis(basis, points):
    """Matrix of basis values, shape (basis.size, npoints)."""
    pts = _as_points(points, basis.n)
    if basis.flavor == "monomial":
        # per-axis power tables, then products over the multi-index
        powers = [
            np.vander(pts[:, i], N=basis.d + 1, increasing=True).T
            for i in range(basis.n)
        ]
    else:
        lows, highs = (np.asarray(v, dtype=float) for v in basis.box)
        powers = []
        for i in range(basis.n):
            xi = (2.0 * pts[:, i] - lows[i] - highs[i]) / (highs[i] - lows[i])
            powers.append(_chebyshev_table(xi, basis.d))
    out = np.empty((basis.size, pts.shape[0]), dtype=complex)
    for row, alpha in enumerate(basis.indices):
        acc = powers[0][alpha[0]].copy()
        for i in range(1, basis.n):
            acc *= powers[i][alpha[i]]
        out[row] = acc
    return out


@dataclass(frozen=True)
class WeightedVandermonde:
    """Basis-evaluation matrix with columns scaled by exp(-scale * phi(x_j))."""

    matrix: np.ndarray
    degree: int
    scale: float
    points: np.ndarray

    @property
    def is_square(self):
        return self.matrix.shape[0] == self.matrix.shape[1]


def vandermonde(basis, points, weight=None, scale=0.0, require_square=False):
    """Weighted Vandermonde matrix: entry (i, j) = e_i(x_j) exp(-scale phi(x_j))."""
    pts = _as_points(points, basis.n)
    if require_square and pts.shape[0] != basis.size:
        raise ShapeError(
            f"square matrix needs {basis.size} points, got {pts.shape[0]}"
        )
    mat = evaluate_basis(basis, pts)
    if weight is not None and scale != 0.0:
        phi = np.asarray(weight(pts), dtype=float)
        if phi.shape != (pts.shape[0],):
            raise ShapeError("weight must return one real value per point")
        mat = mat * np.exp(-scale * phi)[None, :]
    return WeightedVandermonde(matrix=mat, degree=basis.d, scale=float(scale), points=pts)


def log_abs_det(v):
    """log |det| via QR; -inf when a diagonal entry underflows (singular)."""
    mat = v.matrix if isinstance(v, WeightedVandermonde) else np.asarray(v, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ShapeError(f"log_abs_det needs a square matrix, got {mat.shape}")
    if mat.shape[0] == 0:
        return 0.0
    r = np.linalg.qr(mat, mode="r")
    diag = np.abs(np.diagonal(r))
    if np.any(diag < UNDERFLOW_TOL):
        return -math.inf
    return float(np.sum(np.log(diag)))


def _log_leading_scale(basis):
    """Sum over basis elements of log |leading monomial coefficient|.

    Monomials contribute 0.  A tensor Chebyshev element for alpha contributes,
    per axis with alpha_i >= 1, (alpha_i - 1) log 2 from T_k's leading
    coefficient and -alpha_i log w_i from the affine chart of half-width w_i.
    """
    if basis.flavor == "monomial":
        return 0.0
    lows, highs = (np.asarray(v, dtype=float) for v in basis.box)
    halfw = (highs - lows) / 2.0
    total = 0.0
    for alpha in basis.indices:
        for i, a in enumerate(alpha):
            if a >= 1:
                total += (a - 1) * math.log(2.0) - a * math.log(halfw[i])
    return total


def change_basis_logdet_shift(basis_a, basis_b):
    """log |det T| for the triangular change of basis from basis_a to basis_b.

    For any point set, log|VDM_b| = log|VDM_a| + shift; both bases must span
    the same polynomial space (same n and d).
    """
    if (basis_a.n, basis_a.d) != (basis_b.n, basis_b.d):
        raise ShapeError(
            f"bases span different spaces: ({basis_a.n},{basis_a.d}) vs "
            f"({basis_b.n},{basis_b.d})"
        )
    return _log_leading_scale(basis_b) - _log_leading_scale(basis_a)
