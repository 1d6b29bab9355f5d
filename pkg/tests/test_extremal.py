import math

import numpy as np
import pytest

from feketelab import extremal as X
from feketelab import fekete as F
from feketelab import geometry as G
from feketelab.errors import DegenerateConfigurationError, InputError


def interval_estimate(degree=8):
    iv = G.Interval(-1.0, 1.0)
    mesh = G.generate_mesh(iv, degree)
    cfg = F.solve_configuration(mesh, degree, method="greedy+refine")
    return X.extremal_estimate(cfg, mesh), mesh


def green_interval(z):
    """log |z + sqrt(z^2 - 1)|, branch with the larger modulus."""
    w = complex(z)
    s = np.sqrt(w * w - 1.0)
    return math.log(max(abs(w + s), abs(w - s)))


class TestBracket:
    def test_slack_value(self):
        est, _ = interval_estimate(8)
        assert est.slack == pytest.approx(math.log(9) / 8)

    def test_lower_below_upper(self):
        est, _ = interval_estimate(8)
        z = np.array([[1.2 + 0.3j], [2.0 + 0j], [-4.0 + 0j]])
        assert np.all(est.lower(z) <= est.upper(z) + 1e-9)

    @pytest.mark.parametrize("z", [1.5, 2.0, 3.0, 2.0j])
    def test_interval_oracle_in_bracket(self, z):
        est, mesh = interval_estimate(8)
        pt = np.array([[complex(z)]])
        lo = float(est.lower(pt)[0])
        up = float(est.upper(pt)[0])
        oracle = green_interval(z)
        assert lo - mesh.spacing <= oracle
        assert oracle <= up + est.slack + mesh.spacing

    def test_disk_oracle_in_bracket(self):
        disk = G.Disk(0.0, 1.0)
        mesh = G.generate_mesh(disk, 8)
        cfg = F.solve_configuration(mesh, 8, method="greedy+refine")
        est = X.extremal_estimate(cfg, mesh)
        pt = np.array([[2.0 + 0j]])
        lo, up = float(est.lower(pt)[0]), float(est.upper(pt)[0])
        assert lo - mesh.spacing <= math.log(2.0) <= up + est.slack + mesh.spacing

    def test_near_zero_inside_the_set(self):
        est, _ = interval_estimate(8)
        inside = np.array([[0.37 + 0j]])
        assert float(est.upper(inside)[0]) <= est.slack + 0.05

    def test_bracket_helper_asserts_order(self):
        iv = G.Interval(-1.0, 1.0)
        mesh = G.generate_mesh(iv, 4)
        cfg = F.solve_configuration(mesh, 4)
        lo, up = X.extremal_bracket(cfg, mesh, np.array([2.0]))
        assert lo <= up

    def test_degenerate_configuration_raises(self):
        iv = G.Interval(-1.0, 1.0)
        mesh = G.generate_mesh(iv, 2)
        bad = F.Configuration(
            points=np.array([[0.0], [1e-9], [2e-9]]),
            degree=2,
            scale=2.0,
            objective=0.0,
            provenance="test",
        )
        with pytest.raises(DegenerateConfigurationError):
            X.extremal_estimate(bad, mesh)


class TestModulus:
    def test_values_non_decreasing(self):
        iv = G.Interval(-1.0, 1.0)
        s = X.modulus_of_continuity(
            iv, np.array([1.0 + 0j]), 1.0, np.geomspace(0.05, 0.3, 6), 8
        )
        assert np.all(np.diff(s.values) >= -1e-12)

    def test_delta_grid_guard(self):
        iv = G.Interval(-1.0, 1.0)
        with pytest.raises(InputError):
            X.modulus_of_continuity(iv, np.array([1.0 + 0j]), 1.0, [0.0, 0.1], 4)
        with pytest.raises(InputError):
            X.modulus_of_continuity(iv, np.array([1.0 + 0j]), 1.5, [0.1], 4)

    def test_endpoint_grows_like_sqrt_delta(self):
        # near the endpoint the envelope scales like delta^(1/2): doubling
        # delta should multiply the modulus by roughly sqrt(2)
        iv = G.Interval(-1.0, 1.0)
        s = X.modulus_of_continuity(
            iv, np.array([1.0 + 0j]), 1.0, np.array([0.08, 0.16]), 16
        )
        ratio = s.values[1] / s.values[0]
        assert 1.2 < ratio < 1.7


class TestHcpFit:
    def make_samples(self, C, mu, q, radii=(1.0, 0.5, 0.25)):
        out = []
        for r in radii:
            deltas = np.geomspace(0.01, 0.2, 8)
            out.append(
                X.ModulusSamples(
                    anchor=np.array([1.0 + 0j]),
                    radius=r,
                    deltas=deltas,
                    values=C * deltas**mu / r**q,
                    degree=8,
                    mesh_spacing=0.01,
                )
            )
        return out

    def test_exact_model_recovery(self):
        fit = X.hcp_fit(self.make_samples(1.7, 0.5, 2.0))
        assert abs(fit.c_est - 1.7) <= 1e-6
        assert abs(fit.mu_est - 0.5) <= 1e-6
        assert abs(fit.q_est - 2.0) <= 1e-6
        assert fit.max_residual <= 1e-9

    def test_needs_two_radii(self):
        with pytest.raises(InputError):
            X.hcp_fit(self.make_samples(1.0, 0.5, 2.0, radii=(1.0,)))

    def test_interval_endpoint_exponent(self):
        iv = G.Interval(-1.0, 1.0)
        deltas = np.geomspace(0.02, 0.3, 8)
        samples = [
            X.modulus_of_continuity(iv, np.array([1.0 + 0j]), r, deltas, 16)
            for r in (1.0, 0.5)
        ]
        fit = X.hcp_fit(samples)
        assert 0.4 <= fit.mu_est <= 0.6


class TestInequalities:
    def test_polynomial_image_square_map(self):
        iv = G.Interval(-1.0, 1.0)
        rep = X.check_polynomial_image_inequality(
            iv, lambda pts: pts**2, 2, [0.3, 0.9, 1.2 + 0.5j, -1.5, 2.0j], degree=8
        )
        assert rep.ok
        assert rep.worst_margin >= 0.0

    def test_continuity_transfer(self):
        iv = G.Interval(-1.0, 1.0)
        pairs = [
            (np.array([0.1]), np.array([0.3])),
            (np.array([0.9]), np.array([1.0])),
            (np.array([1.2]), np.array([1.0])),
        ]
        anchors = [np.array([x], dtype=complex) for x in (-1.0, 0.0, 1.0)]
        rep = X.check_blocki_inequality(iv, pairs, anchors, degree=8)
        assert rep.ok

    def test_pair_separation_guard(self):
        iv = G.Interval(-1.0, 1.0)
        anchors = [np.array([0.0], dtype=complex)]
        with pytest.raises(InputError):
            X.check_blocki_inequality(
                iv, [(np.array([-1.0]), np.array([1.0]))], anchors, degree=4
            )
