import math

import numpy as np
import pytest

from feketelab import fekete as F
from feketelab import geometry as G
from feketelab import polyspace as P
from feketelab.errors import CapacityError, InputError, ShapeError


def line_mesh(count=41, lo=-1.0, hi=1.0, max_degree=10):
    pts = np.linspace(lo, hi, count)
    return G.mesh_from_points(pts, (hi - lo) / (count - 1), max_degree)


class TestObjective:
    def test_two_points_is_log_distance(self):
        val = F.objective_value(np.array([-1.0, 1.0]), 1)
        assert val == pytest.approx(math.log(2.0))

    def test_three_point_hand_value(self):
        # |VDM(-1, 0, 1)| = prod of pairwise distances = 1 * 2 * 1 = 2
        val = F.objective_value(np.array([-1.0, 0.0, 1.0]), 2)
        assert val == pytest.approx(math.log(2.0))

    def test_matches_direct_slogdet(self):
        pts = np.array([-0.9, -0.2, 0.3, 0.7, 1.0])
        basis = P.multi_indices(1, 4)
        _, ref = np.linalg.slogdet(P.vandermonde(basis, pts, require_square=True).matrix)
        assert F.objective_value(pts, 4) == pytest.approx(ref, abs=1e-10)

    def test_weight_term(self):
        pts = np.array([-1.0, 1.0])
        w = lambda p: np.abs(p[:, 0].real)
        plain = F.objective_value(pts, 1)
        weighted = F.objective_value(pts, 1, weight=w, scale=2.0)
        assert weighted == pytest.approx(plain - 2.0 * 2.0)

    def test_point_count_guard(self):
        with pytest.raises(ShapeError):
            F.objective_value(np.array([0.0, 1.0]), 2)


class TestBruteForce:
    def test_degree_one_picks_endpoints(self):
        cfg = F.brute_force_fekete(line_mesh(), 1)
        assert np.allclose(np.sort(cfg.points.real.ravel()), [-1.0, 1.0])

    def test_degree_two_picks_midpoint(self):
        cfg = F.brute_force_fekete(line_mesh(), 2)
        assert np.allclose(np.sort(cfg.points.real.ravel()), [-1.0, 0.0, 1.0])

    def test_degree_three_near_one_over_sqrt5(self):
        mesh = line_mesh(201)
        cfg = F.brute_force_fekete(mesh, 3, budget=70_000_000)
        xs = np.sort(cfg.points.real.ravel())
        target = 1.0 / math.sqrt(5.0)
        grid = mesh.points[:, 0].real
        nearest = grid[np.argmin(np.abs(grid - target))]
        assert np.allclose(xs, [-1.0, -nearest, nearest, 1.0])

    def test_budget_guard_names_requirement(self):
        with pytest.raises(CapacityError, match="budget"):
            F.brute_force_fekete(line_mesh(201), 3, budget=1000)

    def test_planar_square_degree_one(self):
        # N_1 = 3 points of a 3x3 grid on [0,1]^2: max area triangle has area 1/2
        mesh = G.generate_mesh(G.Box((0.0, 0.0), (1.0, 1.0)), 1)
        cfg = F.brute_force_fekete(mesh, 1)
        assert cfg.objective == pytest.approx(math.log(1.0))  # det = 2 * area


class TestGreedyAndRefine:
    @pytest.mark.parametrize("degree", [1, 2, 3, 4, 5])
    def test_greedy_refine_matches_brute(self, degree):
        mesh = line_mesh(31)
        brute = F.brute_force_fekete(mesh, degree, budget=10_000_000)
        greedy = F.solve_configuration(mesh, degree, method="greedy+refine")
        assert greedy.objective == pytest.approx(brute.objective, abs=1e-9)

    def test_refine_never_decreases(self):
        mesh = line_mesh(81)
        cfg = F.greedy_afp(mesh, 6)
        refined = F.exchange_refine(cfg, mesh)
        assert refined.objective >= cfg.objective - 1e-12

    def test_greedy_flavor_invariance(self):
        mesh = G.generate_mesh(G.Box((0.0, 0.0), (1.0, 1.0)), 3)
        a = F.greedy_afp(mesh, 3, flavor="monomial")
        box = (mesh.points.real.min(axis=0), mesh.points.real.max(axis=0))
        b = F.greedy_afp(mesh, 3, flavor="chebyshev", box=box)
        assert np.array_equal(a.canonical_points(), b.canonical_points())

    def test_runs_are_deterministic(self):
        mesh = line_mesh(81)
        a = F.solve_configuration(mesh, 6)
        b = F.solve_configuration(mesh, 6)
        assert np.array_equal(a.points, b.points)

    def test_mesh_degree_guard(self):
        with pytest.raises(InputError):
            F.greedy_afp(line_mesh(max_degree=2), 5)


class TestLeja:
    def test_prefix_nesting(self):
        mesh = line_mesh(81)
        long = F.leja_sequence(mesh, 7)
        short = F.leja_sequence(mesh, 4)
        assert np.array_equal(long[:4], short)

    def test_first_point_maximizes_modulus(self):
        mesh = line_mesh(81)
        seq = F.leja_sequence(mesh, 3)
        assert abs(seq[0, 0]) == pytest.approx(1.0)

    def test_start_point(self):
        mesh = line_mesh(81)
        seq = F.leja_sequence(mesh, 3, start=np.array([0.0]))
        assert seq[0, 0] == 0.0


class TestWeighted:
    def test_weight_pulls_points_inward(self):
        # strong weight exp(-s|x|) at the endpoints shrinks the configuration
        mesh = line_mesh(201)
        w = lambda p: np.abs(p[:, 0].real)
        plain = F.solve_configuration(mesh, 4, method="greedy+refine", weight=None)
        weighted = F.solve_configuration(
            mesh, 4, method="greedy+refine", weight=w, scale=8.0
        )
        assert np.abs(weighted.points.real).max() < np.abs(plain.points.real).max()

    def test_weighted_brute_agrees_with_exhaustive_objective(self):
        mesh = line_mesh(21)
        w = lambda p: p[:, 0].real ** 2
        cfg = F.brute_force_fekete(mesh, 2, weight=w, scale=3.0)
        greedy = F.solve_configuration(mesh, 2, method="greedy+refine", weight=w, scale=3.0)
        assert greedy.objective == pytest.approx(cfg.objective, abs=1e-9)


def test_solver_dispatch_unknown():
    with pytest.raises(InputError):
        F.solve_configuration(line_mesh(), 2, method="anneal")


def test_configuration_canonical_points_sorted():
    cfg = F.Configuration(
        points=np.array([[1.0], [-1.0], [0.0]]),
        degree=2,
        scale=2.0,
        objective=0.0,
        provenance="test",
    )
    assert np.array_equal(cfg.canonical_points().real.ravel(), [-1.0, 0.0, 1.0])
