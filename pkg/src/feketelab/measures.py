"""Atomic and closed-form measures with exact 1-D transport distances.

Line measures are compared through their CDFs; W1 is the integral of the CDF
difference, computed in closed form piece by piece.  Circle measures are
compared after optimal rotation alignment of the angle CDFs.  The dual
Hölder distance dist_gamma is always reported as a (lower, upper) bracket.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment, linprog

from .errors import InputError, NoClosedFormError, ShapeError
from . import geometry

QUAD_NODES = 4096  # deterministic quadrature size for closed-form integrals


@dataclass(frozen=True)
class DiscreteMeasure:
    """Probability measure with finitely many distinct atoms."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=complex)
        if atoms.ndim == 1:
            atoms = atoms[:, None]
        weights = np.asarray(self.weights, dtype=float)
        if atoms.shape[0] != weights.shape[0]:
            raise ShapeError("atom/weight count mismatch")
        if np.any(weights < 0):
            raise InputError("weights must be nonnegative")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise InputError(f"weights sum to {weights.sum()!r}, expected 1")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    @property
    def dimension(self):
        return self.atoms.shape[1]


def fekete_measure(config):
    """Uniform atomic measure 1/N_d on the configuration points."""
    k = config.points.shape[0]
    return DiscreteMeasure(atoms=config.points, weights=np.full(k, 1.0 / k))


@dataclass(frozen=True)
class MeasureDescriptor:
    """Tagged measure: closed-form (arcsine / uniform-circle), discrete, or
    an empirical high-degree surrogate for sets without a closed form."""

    kind: str  # arcsine | uniform-circle | discrete | empirical-reference
    ambient: str  # line | circle | plane
    support: tuple = ()  # (a, b) for line kinds; (center, radius) for circle
    discrete: DiscreteMeasure | None = None
    quality: float | None = None
    meta: dict = field(default_factory=dict)

    def cdf(self, x):
        """Line CDF, or angle CDF on [0, 2*pi) for circle kinds."""
        x = np.asarray(x, dtype=float)
        if self.kind == "arcsine":
            a, b = self.support
            u = np.clip((2.0 * x - a - b) / (b - a), -1.0, 1.0)
            out = 0.5 + np.arcsin(u) / np.pi
            return np.where(x < a, 0.0, np.where(x > b, 1.0, out))
        if self.kind == "uniform-circle":
            return np.clip(x, 0.0, 2.0 * np.pi) / (2.0 * np.pi)
        if self.discrete is not None:
            pos = _line_positions(self) if self.ambient == "line" else _angles(self)
            order = np.argsort(pos, kind="stable")
            return _step_cdf(pos[order], self.discrete.weights[order], x)
        raise NoClosedFormError(f"no CDF for kind {self.kind!r}")


def _step_cdf(sorted_pos, weights, x):
    idx = np.searchsorted(sorted_pos, np.asarray(x, float), side="right")
    cum = np.concatenate([[0.0], np.cumsum(weights)])
    return cum[idx]


def arcsine_measure(a, b):
    if not a < b:
        raise InputError("arcsine support needs a < b")
    return MeasureDescriptor(kind="arcsine", ambient="line", support=(float(a), float(b)))


def uniform_circle_measure(center=0.0, radius=1.0):
    return MeasureDescriptor(
        kind="uniform-circle", ambient="circle", support=(complex(center), float(radius))
    )


def discrete_measure_descriptor(dm, ambient=None, kind="discrete", quality=None, meta=None):
    if ambient is None:
        ambient = _infer_ambient(dm)
    return MeasureDescriptor(
        kind=kind, ambient=ambient, discrete=dm, quality=quality, meta=meta or {}
    )


def _infer_ambient(dm):
    if dm.dimension == 2:
        return "plane"
    z = dm.atoms[:, 0]
    if np.abs(z.imag).max(initial=0.0) <= 1e-9:
        return "line"
    if np.abs(np.abs(z) - 1.0).max() <= 1e-9:
        return "circle"
    return "plane"


def equilibrium_closed_form(model):
    """Classical equilibrium measures: arcsine on intervals, uniform on the
    boundary circle for disks and circles."""
    if isinstance(model, geometry.Interval):
        return arcsine_measure(model.a, model.b)
    if isinstance(model, (geometry.Disk, geometry.Circle)):
        return uniform_circle_measure(model.center, model.radius)
    raise NoClosedFormError(
        f"no closed-form equilibrium measure for set kind {model.kind!r}; "
        "use an empirical reference"
    )


# ---------------------------------------------------------------------------
# Wasserstein-1


def _line_positions(desc):
    return desc.discrete.atoms[:, 0].real


def _angles(desc):
    center = desc.meta.get("center", 0.0)
    z = desc.discrete.atoms[:, 0] - center
    return np.mod(np.angle(z), 2.0 * np.pi)


def _arcsine_cdf_antiderivative(desc, x):
    """G(x) = integral of the arcsine CDF from a to x (x inside [a, b])."""
    a, b = desc.support
    u = np.clip((2.0 * x - a - b) / (b - a), -1.0, 1.0)
    inner = u * np.arcsin(u) + np.sqrt(np.maximum(1.0 - u * u, 0.0))
    return (x - a) / 2.0 + (b - a) / (2.0 * np.pi) * (inner - np.pi / 2.0)


def _arcsine_quantile(desc, p):
    a, b = desc.support
    return (a + b) / 2.0 + (b - a) / 2.0 * math.sin(math.pi * (p - 0.5))


def _w1_discrete_discrete_line(mu, nu):
    pos = np.concatenate([_line_positions(mu), _line_positions(nu)])
    breaks = np.unique(pos)
    total = 0.0
    pmu = np.sort(_line_positions(mu))
    wmu = mu.discrete.weights[np.argsort(_line_positions(mu), kind="stable")]
    pnu = np.sort(_line_positions(nu))
    wnu = nu.discrete.weights[np.argsort(_line_positions(nu), kind="stable")]
    for left, right in zip(breaks[:-1], breaks[1:]):
        fmu = _step_cdf(pmu, wmu, left)
        fnu = _step_cdf(pnu, wnu, left)
        total += abs(fmu - fnu) * (right - left)
    return float(total)


def _w1_discrete_arcsine(mu, nu):
    """Exact piecewise integral of |step CDF - arcsine CDF|."""
    a, b = nu.support
    pos = _line_positions(mu)
    order = np.argsort(pos, kind="stable")
    pos, w = pos[order], mu.discrete.weights[order]
    breaks = np.unique(np.concatenate([pos, [a, b]]))
    lo = min(breaks[0], a)
    hi = max(breaks[-1], b)
    breaks = np.unique(np.concatenate([breaks, [lo, hi]]))
    total = 0.0
    for left, right in zip(breaks[:-1], breaks[1:]):
        c = _step_cdf(pos, w, (left + right) / 2.0)
        if right <= a:
            total += c * (right - left)
            continue
        if left >= b:
            total += abs(c - 1.0) * (right - left)
            continue
        seg_l, seg_r = max(left, a), min(right, b)
        total += c * max(0.0, min(right, a) - left)
        total += abs(c - 1.0) * max(0.0, right - max(left, b))
        f_l = float(nu.cdf(seg_l))
        f_r = float(nu.cdf(seg_r))
        if f_l < c < f_r:
            xc = _arcsine_quantile(nu, c)
            # int |F - c| = sum over monotone pieces of |int F - c dx|
            total += abs(
                _arcsine_cdf_antiderivative(nu, xc)
                - _arcsine_cdf_antiderivative(nu, seg_l)
                - c * (xc - seg_l)
            )
            total += abs(
                _arcsine_cdf_antiderivative(nu, seg_r)
                - _arcsine_cdf_antiderivative(nu, xc)
                - c * (seg_r - xc)
            )
        else:
            total += abs(
                _arcsine_cdf_antiderivative(nu, seg_r)
                - _arcsine_cdf_antiderivative(nu, seg_l)
                - c * (seg_r - seg_l)
            )
    return float(total)


def _w1_line(mu, nu):
    kinds = (mu.kind, nu.kind)
    if "arcsine" in kinds and any(k in ("discrete", "empirical-reference") for k in kinds):
        if mu.kind == "arcsine":
            mu, nu = nu, mu
        return _w1_discrete_arcsine(mu, nu)
    if all(k in ("discrete", "empirical-reference") for k in kinds):
        return _w1_discrete_discrete_line(mu, nu)
    if kinds == ("arcsine", "arcsine"):
        if mu.support == nu.support:
            return 0.0
        grid = np.linspace(
            min(mu.support[0], nu.support[0]), max(mu.support[1], nu.support[1]), 200_001
        )
        diff = np.abs(mu.cdf(grid) - nu.cdf(grid))
        return float(np.trapezoid(diff, grid))
    raise InputError(f"unsupported line measure pair {kinds}")


def _circle_cdf_profile(desc, grid, radius):
    """Arc-length CDF of the angle distribution on the sample grid."""
    if desc.kind == "uniform-circle":
        return grid / (2.0 * np.pi)
    ang = _angles(desc)
    order = np.argsort(ang, kind="stable")
    return _step_cdf(ang[order], desc.discrete.weights[order], grid)


def _w1_circle(mu, nu):
    """Rotation-aligned CDF distance: min_c of the offset CDF integral.

    W1 on the circle equals min over the alignment constant c of
    integral |F_mu - F_nu - c| d(arc length); candidate offsets come from the
    CDF difference at the atoms, polished by golden-section search.
    """
    radius = 1.0
    for d in (mu, nu):
        if d.kind == "uniform-circle":
            radius = d.support[1]
    grid_breaks = [np.array([0.0, 2.0 * np.pi])]
    for d in (mu, nu):
        if d.discrete is not None:
            grid_breaks.append(_angles(d))
    breaks = np.unique(np.concatenate(grid_breaks))
    # refine so piecewise-linear segments (uniform part) integrate accurately
    fine = np.unique(
        np.concatenate([breaks, np.linspace(0.0, 2.0 * np.pi, 4097)])
    )
    mids = (fine[:-1] + fine[1:]) / 2.0
    seg = np.diff(fine)
    diff_mid = _circle_cdf_profile(mu, mids, radius) - _circle_cdf_profile(nu, mids, radius)

    def aligned(c):
        return float(np.sum(np.abs(diff_mid - c) * seg)) * radius

    candidates = np.unique(diff_mid)
    vals = [aligned(c) for c in candidates]
    best = int(np.argmin(vals))
    lo = candidates[max(0, best - 1)]
    hi = candidates[min(len(candidates) - 1, best + 1)]
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a_, b_ = lo, hi
    for _ in range(80):
        m1 = b_ - phi * (b_ - a_)
        m2 = a_ + phi * (b_ - a_)
        if aligned(m1) <= aligned(m2):
            b_ = m2
        else:
            a_ = m1
    return min(min(vals), aligned((a_ + b_) / 2.0))


def w1_discrete_nd(mu, nu):
    """Exact W1 between discrete measures in any dimension (transport LP)."""
    a, b = mu.discrete, nu.discrete
    cost = np.linalg.norm(a.atoms[:, None, :] - b.atoms[None, :, :], axis=2)
    if a.atoms.shape[0] == b.atoms.shape[0] and np.allclose(
        a.weights, a.weights[0]
    ) and np.allclose(b.weights, b.weights[0]):
        rows, cols = linear_sum_assignment(cost)
        return float(cost[rows, cols].mean())
    k, l = cost.shape
    a_eq = []
    for i in range(k):
        row = np.zeros((k, l))
        row[i, :] = 1.0
        a_eq.append(row.ravel())
    for j in range(l):
        col = np.zeros((k, l))
        col[:, j] = 1.0
        a_eq.append(col.ravel())
    res = linprog(
        cost.ravel(),
        A_eq=np.array(a_eq[:-1]),  # drop one redundant constraint
        b_eq=np.concatenate([a.weights, b.weights])[:-1],
        bounds=(0, None),
        method="highs",
    )
    if not res.success:
        raise InputError(f"transport LP failed: {res.message}")
    return float(res.fun)


def wasserstein1_1d(mu, nu):
    """W1 between measures sharing a line or circle parameterization."""
    if mu.ambient != nu.ambient:
        raise InputError(f"ambient mismatch: {mu.ambient} vs {nu.ambient}")
    if mu.ambient == "line":
        return _w1_line(mu, nu)
    if mu.ambient == "circle":
        return _w1_circle(mu, nu)
    raise InputError("wasserstein1_1d needs line or circle measures")


def w1_distance(mu, nu):
    """W1 for any supported pair: exact 1-D paths, transport LP in the plane."""
    if mu.ambient != nu.ambient:
        raise InputError(f"ambient mismatch: {mu.ambient} vs {nu.ambient}")
    if mu.ambient in ("line", "circle"):
        return wasserstein1_1d(mu, nu)
    if mu.discrete is None or nu.discrete is None:
        raise NoClosedFormError("planar W1 needs two discrete measures")
    return w1_discrete_nd(mu, nu)


# ---------------------------------------------------------------------------
# the dual Hölder distance bracket


def _holder_norm_cos(freq_scaled, gamma):
    """Certified C^gamma norm bound of cos(k pi xi(x)) with |xi'| = freq chart.

    freq_scaled is k*pi / chart-length.  For gamma <= 1 the bound is
    sup + seminorm = 1 + 2^(1-gamma) freq^gamma; for gamma in (1, 2] it is
    sup + sup|f'| + Holder_{gamma-1}(f') = 1 + freq + 2^(2-gamma) freq^gamma.
    """
    f = freq_scaled
    if gamma <= 1.0:
        return 1.0 + 2.0 ** (1.0 - gamma) * f**gamma
    return 1.0 + f + 2.0 ** (2.0 - gamma) * f**gamma


def _integrate_against(desc, func):
    """Deterministic integral of func against the measure."""
    if desc.discrete is not None:
        vals = func(desc.discrete.atoms)
        return float(np.sum(vals * desc.discrete.weights))
    if desc.kind == "arcsine":
        a, b = desc.support
        # Gauss-Chebyshev: arcsine is the Chebyshev weight pushed to [a, b]
        theta = (np.arange(QUAD_NODES) + 0.5) * np.pi / QUAD_NODES
        x = (a + b) / 2.0 + (b - a) / 2.0 * np.cos(theta)
        return float(np.mean(func(x[:, None].astype(complex))))
    if desc.kind == "uniform-circle":
        center, radius = desc.support
        theta = (np.arange(QUAD_NODES) + 0.5) * 2.0 * np.pi / QUAD_NODES
        z = center + radius * np.exp(1j * theta)
        return float(np.mean(func(z[:, None])))
    raise NoClosedFormError(f"cannot integrate against kind {desc.kind!r}")


def _support_box(descs):
    lows, highs = None, None
    for d in descs:
        if d.discrete is not None:
            re = d.discrete.atoms.real
            lo, hi = re.min(axis=0), re.max(axis=0)
        elif d.kind == "arcsine":
            lo = np.array([d.support[0]])
            hi = np.array([d.support[1]])
        elif d.kind == "uniform-circle":
            center, radius = d.support
            lo = np.array([center.real - radius])
            hi = np.array([center.real + radius])
        else:
            raise NoClosedFormError(f"no support box for {d.kind!r}")
        lows = lo if lows is None else np.minimum(lows, lo)
        highs = hi if highs is None else np.maximum(highs, hi)
    span = np.maximum(highs - lows, 1e-9)
    return lows, lows + span


def _dictionary_lower(mu, nu, gamma, dict_size):
    """Best pairing against a deterministic dictionary of certified-norm tests.

    Cosines of increasing frequency per chart axis, plus centered affine
    ramps (the optimal test shape for separated point masses).
    """
    if mu.ambient == "circle" or nu.ambient == "circle":
        return _dictionary_lower_circle(mu, nu, gamma, dict_size)
    lows, highs = _support_box([mu, nu])
    dim = lows.size
    best = 0.0
    for axis in range(dim):
        length = highs[axis] - lows[axis]

        def ramp(pts, axis=axis, length=length):
            x = pts[:, axis].real
            mid = (lows[axis] + highs[axis]) / 2.0
            if gamma <= 1.0:
                norm = length / 2.0 + length ** (1.0 - gamma)
            else:
                norm = length / 2.0 + 1.0
            return (x - mid) / norm

        gap = abs(_integrate_against(mu, ramp) - _integrate_against(nu, ramp))
        best = max(best, gap)
        for k in range(1, dict_size + 1):
            freq = k * np.pi / length
            norm = _holder_norm_cos(freq, gamma)

            def test(pts, axis=axis, k=k, length=length, norm=norm):
                xi = (pts[:, axis].real - lows[axis]) / length
                return np.cos(k * np.pi * xi) / norm

            gap = abs(_integrate_against(mu, test) - _integrate_against(nu, test))
            best = max(best, gap)
    return best


def _dictionary_lower_circle(mu, nu, gamma, dict_size):
    """Angle harmonics; arc metric dominates the chord metric by pi/2."""
    center = 0.0
    radius = 1.0
    for d in (mu, nu):
        if d.kind == "uniform-circle":
            center, radius = d.support
    chord_factor = (np.pi / 2.0) ** gamma
    best = 0.0
    for k in range(1, dict_size + 1):
        freq = k / radius
        norm = _holder_norm_cos(freq, gamma) * chord_factor
        for trig in (np.cos, np.sin):

            def test(pts, k=k, norm=norm, trig=trig):
                ang = np.angle(np.asarray(pts)[:, 0] - center)
                return trig(k * ang) / norm

            gap = abs(_integrate_against(mu, test) - _integrate_against(nu, test))
            best = max(best, gap)
    return best


def dist_gamma(mu, nu, gamma, dict_size=64):
    """Bracket (lower, upper) for the dual C^gamma distance.

    Lower: best certified dictionary test.  Upper: W1 for gamma >= 1 (the
    C^gamma unit ball sits inside the 1-Lipschitz ball); for gamma < 1 the
    Lipschitz smoothing bound 2^(1-gamma) W1^gamma + 2 W1.
    """
    if not 0.0 < gamma <= 2.0:
        raise InputError(f"gamma must lie in (0, 2], got {gamma}")
    if mu.ambient != nu.ambient:
        raise InputError(f"ambient mismatch: {mu.ambient} vs {nu.ambient}")
    w1 = w1_distance(mu, nu)
    if gamma >= 1.0:
        upper = w1
    else:
        upper = 2.0 ** (1.0 - gamma) * w1**gamma + 2.0 * w1
    if w1 == 0.0:
        return (0.0, 0.0)
    lower = _dictionary_lower(mu, nu, gamma, dict_size)
    lower = min(lower, upper)  # certified tests can never beat the true value
    return (float(lower), float(upper))


def empirical_reference(model, reference_degree, density=1.0, method="greedy+refine"):
    """High-degree Fekete measure used as an equilibrium surrogate.

    The quality indicator is the distance between the degree-D and degree-D/2
    measures; smaller means the surrogate has stabilized.
    """
    from . import fekete as fk

    half = max(1, reference_degree // 2)
    measures = {}
    for deg in (reference_degree, half):
        mesh = geometry.generate_mesh(model, deg, density)
        cfg = fk.solve_configuration(mesh, deg, method=method)
        measures[deg] = discrete_measure_descriptor(fekete_measure(cfg))
    quality = w1_distance(measures[reference_degree], measures[half])
    full = measures[reference_degree]
    return MeasureDescriptor(
        kind="empirical-reference",
        ambient=full.ambient,
        discrete=full.discrete,
        quality=float(quality),
        meta={"reference_degree": reference_degree, "half_degree": half},
    )
