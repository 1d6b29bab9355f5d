"""Acceptance suite: ten end-to-end criteria, one printed verdict line each.

Run with `pytest -v -s tests/test_acceptance.py` to see the verdict lines.
Every expected value is either a hand-derived constant or an independently
computed oracle; tolerances are pinned in the asserts.
"""

import io
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from feketelab import cli, rates
from feketelab import extremal as X
from feketelab import fekete as F
from feketelab import geometry as G
from feketelab import measures as M
from feketelab import polyspace as P


def verdict(num, ok, text):
    line = f"ACCEPTANCE {num:2d}: {'PASS' if ok else 'FAIL'} - {text}"
    print(line)
    assert ok, line


def test_01_rate_constant_chain():
    start = time.monotonic()
    c = rates.rate_constants(1.0, 1.0, 1, 1)
    # independent rational oracle
    mu = Fraction(1, 2)
    q = 2
    tau = min(Fraction(1), mu / (1 + q))
    ap = tau * tau / (tau + 2 + q)
    app = ap / (24 + 12 * ap)
    ok = (
        abs(c.mu - 0.5) <= 1e-12
        and c.q == 2
        and abs(c.tau - float(tau)) <= 1e-12
        and abs(c.alpha_prime - float(ap)) <= 1e-12
        and abs(c.alpha_double_prime - float(app)) <= 1e-12
        and app == Fraction(1, 3612)
        and time.monotonic() - start < 1.0
    )
    verdict(1, ok, "rate-constant chain matches exact fractions within 1e-12")


def test_02_fekete_oracle_agreement():
    start = time.monotonic()
    xs = np.linspace(-1.0, 1.0, 200)
    mesh = G.mesh_from_points(xs, 2.0 / 199.0, 10)
    ok = True
    b1 = np.sort(F.brute_force_fekete(mesh, 1).points.real.ravel())
    ok &= np.allclose(b1, [-1.0, 1.0])
    b2 = np.sort(F.brute_force_fekete(mesh, 2).points.real.ravel())
    near0 = xs[np.argmin(np.abs(xs))]
    ok &= np.allclose(b2, [-1.0, near0, 1.0])
    b3 = np.sort(
        F.brute_force_fekete(mesh, 3, budget=70_000_000).points.real.ravel()
    )
    t = 1.0 / math.sqrt(5.0)
    ok &= np.allclose(
        b3, [-1.0, xs[np.argmin(np.abs(xs + t))], xs[np.argmin(np.abs(xs - t))], 1.0]
    )
    # greedy+exchange vs brute on the small corpus: N_d <= 6, |mesh| <= 60
    ax = np.linspace(0.0, 1.0, 5)
    square_grid = np.array([[x, y] for x in ax for y in ax], dtype=complex)
    disk_pts = np.concatenate(
        [np.exp(2j * np.pi * np.arange(12) / 12.0), [0.0, 0.5, -0.5, 0.5j, -0.5j]]
    )
    corpus = (
        [(G.mesh_from_points(np.linspace(-1, 1, 41), 0.05, 6), d) for d in (1, 2, 3, 4, 5)]
        + [(G.mesh_from_points(square_grid, 0.25, 6), d) for d in (1, 2)]
        + [(G.mesh_from_points(disk_pts, 0.5, 6), d) for d in (1, 2)]
    )
    for m, d in corpus:
        brute = F.brute_force_fekete(m, d, budget=10_000_000)
        greedy = F.solve_configuration(m, d, method="greedy+refine")
        ok &= greedy.objective <= brute.objective + 1e-12
        ok &= abs(greedy.objective - brute.objective) <= 1e-9
    ok &= time.monotonic() - start < 60.0
    verdict(2, ok, "brute-force oracles and greedy+exchange agreement within 1e-9")


def test_03_basis_invariance():
    ok = True
    for model in (G.Interval(-1.0, 1.0), G.Box((0.0, 0.0), (1.0, 1.0))):
        n = model.dimension
        for d in range(1, 7):
            mesh = G.generate_mesh(model, d)
            box = (mesh.points.real.min(axis=0), mesh.points.real.max(axis=0))
            a = F.greedy_afp(mesh, d, flavor="monomial")
            b = F.greedy_afp(mesh, d, flavor="chebyshev", box=box)
            ok &= np.array_equal(a.canonical_points(), b.canonical_points())
            mono = P.multi_indices(n, d)
            cheb = P.multi_indices(n, d, flavor="chebyshev", box=box)
            va = P.log_abs_det(P.vandermonde(mono, a.points, require_square=True))
            vb = P.log_abs_det(P.vandermonde(cheb, b.points, require_square=True))
            ok &= abs(vb - va - P.change_basis_logdet_shift(mono, cheb)) <= 1e-9
    verdict(3, ok, "greedy point sets and log|VDM| shifts are basis-flavor invariant")


def test_04_extremal_oracle():
    start = time.monotonic()
    iv = G.Interval(-1.0, 1.0)
    mesh = G.generate_mesh(iv, 8)
    cfg = F.solve_configuration(mesh, 8, method="greedy+refine")
    est = X.extremal_estimate(cfg, mesh)
    ok = True
    for z in (1.5, 2.0, 3.0, 2.0j):
        w = complex(z)
        s = np.sqrt(w * w - 1.0)
        oracle = math.log(max(abs(w + s), abs(w - s)))
        pt = np.array([[w]])
        lo, up = float(est.lower(pt)[0]), float(est.upper(pt)[0])
        ok &= lo - mesh.spacing <= oracle <= up + est.slack + mesh.spacing
    disk = G.Disk(0.0, 1.0)
    dmesh = G.generate_mesh(disk, 8)
    dest = X.extremal_estimate(F.solve_configuration(dmesh, 8), dmesh)
    pt = np.array([[2.0 + 0j]])
    lo, up = float(dest.lower(pt)[0]), float(dest.upper(pt)[0])
    ok &= lo - dmesh.spacing <= math.log(2.0) <= up + dest.slack + dmesh.spacing
    ok &= time.monotonic() - start < 60.0
    verdict(4, ok, "extremal brackets contain the interval/disk closed forms")


def test_05_interval_equidistribution():
    start = time.monotonic()
    plan = cli.parse_plan(
        {
            "set": {"kind": "interval", "a": -1, "b": 1},
            "gamma": 1.0,
            "alpha": 1.0,
            "degrees": "2..24",
            "solver": "greedy+refine",
        }
    )
    rep = rates.run_experiment(plan)
    w1 = {r.degree: r.dist_upper for r in rep.rows}
    ok = (
        rep.verdict == "PASS"
        and w1[24] <= w1[4] / 2.0
        and rep.fitted_slope <= -rep.constants.alpha_double_prime
        and time.monotonic() - start < 600.0
    )
    verdict(5, ok, "interval W1 decay and calibrated bound verdict PASS (d=2..24)")


def test_06_circle_experiment():
    mesh = G.roots_of_unity_mesh(256, 24)
    ref = M.uniform_circle_measure()
    ok = True
    prev = math.inf
    for d in range(1, 25):
        cfg = F.solve_configuration(mesh, d, method="greedy")
        ang = np.sort(np.mod(np.angle(cfg.points[:, 0]), 2.0 * np.pi))
        gaps = np.diff(np.concatenate([ang, [ang[0] + 2.0 * np.pi]]))
        ok &= np.all(np.abs(gaps - 2.0 * np.pi / (d + 1)) <= 2.0 * np.pi / 256 + 1e-12)
        mu = M.discrete_measure_descriptor(M.fekete_measure(cfg), ambient="circle")
        w1 = M.w1_distance(mu, ref)
        ok &= w1 < prev
        prev = w1
    plan = cli.parse_plan(
        {
            "set": {"kind": "circle", "radius": 1.0},
            "gamma": 1.0,
            "alpha": 1.0,
            "degrees": "2..24",
            "solver": "greedy",
        }
    )
    ok &= rates.run_experiment(plan).verdict == "PASS"
    verdict(6, ok, "circle configurations equispaced, W1 monotone, verdict PASS")


def test_07_upc_machinery():
    ok = True
    for model in (G.Interval(0.0, 1.0), G.PowerCusp(1.0, 2, 1.0)):
        desc = G.builtin_descriptor(model)
        rep = G.validate_upc(desc, t_count=64, u_count=16)
        ok &= rep.ok and len(rep.witnesses) == 0
        anchors = G.generate_mesh(model, 3).points
        img_anchor = anchors[-1]
        img = G.pyramid_image(desc, img_anchor, 1.0)
        inc = G.check_cusp_inclusion(desc, img)
        ok &= inc.ok
        cb = G.coefficient_bound(desc, anchors)
        ok &= cb.recovery_error <= 1e-8
    iv = G.builtin_descriptor(G.Interval(0.0, 1.0))
    r_prime = G.pyramid_image(iv, np.array([1.0]), 1.0).r_prime
    ok &= r_prime == 1.0 / 3.0
    verdict(7, ok, "cusp inclusions hold with zero witnesses; r' = 1/3 exactly")


def test_08_hcp_probe():
    iv = G.Interval(-1.0, 1.0)
    deltas = np.geomspace(0.02, 0.3, 8)
    samples = [
        X.modulus_of_continuity(iv, np.array([1.0 + 0j]), r, deltas, 16)
        for r in (1.0, 0.5)
    ]
    fit = X.hcp_fit(samples)
    ok = 0.4 <= fit.mu_est <= 0.6
    # synthetic exact-model recovery
    synth = [
        X.ModulusSamples(
            anchor=np.array([1.0 + 0j]),
            radius=r,
            deltas=deltas,
            values=1.7 * deltas**0.5 / r**2.0,
            degree=16,
            mesh_spacing=0.01,
        )
        for r in (1.0, 0.5, 0.25)
    ]
    sfit = X.hcp_fit(synth)
    ok &= (
        abs(sfit.c_est - 1.7) <= 1e-6
        and abs(sfit.mu_est - 0.5) <= 1e-6
        and abs(sfit.q_est - 2.0) <= 1e-6
    )
    verdict(8, ok, f"endpoint fit mu_est={fit.mu_est:.3f} in [0.4, 0.6]; synthetic exact")


def test_09_inequality_suites():
    iv = G.Interval(-1.0, 1.0)
    ok = True
    rep = X.check_polynomial_image_inequality(
        iv, lambda pts: pts**2, 2, [0.3, 0.9, 1.2 + 0.5j, -1.5, 2.0j], degree=8
    )
    ok &= rep.ok and rep.worst_margin >= 0.0
    pairs = [
        (np.array([0.1]), np.array([0.3])),
        (np.array([-0.5]), np.array([0.0])),
        (np.array([0.9]), np.array([1.0])),
        (np.array([1.2]), np.array([1.0])),
    ]
    anchors = [np.array([x], dtype=complex) for x in (-1.0, 0.0, 1.0)]
    rep2 = X.check_blocki_inequality(iv, pairs, anchors, degree=8)
    ok &= rep2.ok and rep2.worst_margin >= 0.0

    def atoms(xs):
        xs = np.asarray(xs, dtype=complex)
        dm = M.DiscreteMeasure(atoms=xs, weights=np.full(len(xs), 1.0 / len(xs)))
        return M.discrete_measure_descriptor(dm)

    arcsine = M.arcsine_measure(-1.0, 1.0)
    corpus = [
        (atoms([-1.0, 0.0, 1.0]), arcsine),
        (atoms([-1.0, 1.0]), atoms([0.0])),
        (atoms(np.linspace(-1, 1, 9)), arcsine),
        (atoms(np.cos(np.pi * np.arange(1, 8) / 8.0)), arcsine),
    ]
    for gamma in (0.5, 1.0, 1.5, 2.0):
        for mu_, nu_ in corpus:
            lo, up = M.dist_gamma(mu_, nu_, gamma)
            ok &= 0.0 <= lo <= up + 1e-15

    failures = 0
    for i in range(100):
        k1, k2, k3 = 2 + i % 5, 2 + (i // 5) % 5, 2 + (i // 25) % 4
        a = np.cos(np.pi * (np.arange(1, k1 + 1) * (i + 1) % 17) / 17.0)
        b = np.cos(np.pi * (np.arange(1, k2 + 1) * (i + 3) % 19) / 19.0)
        c = np.cos(np.pi * (np.arange(1, k3 + 1) * (i + 7) % 23) / 23.0)
        m1, m2, m3 = (atoms(np.unique(v)) for v in (a, b, c))
        if M.w1_distance(m1, m3) > M.w1_distance(m1, m2) + M.w1_distance(m2, m3) + 1e-10:
            failures += 1
    ok &= failures == 0
    verdict(9, ok, "composition/continuity margins nonnegative; W1 triangle holds")


def test_10_determinism(tmp_path):
    plan = cli.parse_plan(
        {
            "set": {"kind": "interval", "a": -1, "b": 1},
            "gamma": 1.0,
            "alpha": 1.0,
            "degrees": "2..8",
            "solver": "greedy+refine",
        }
    )
    blobs = []
    for sub in ("one", "two"):
        out = tmp_path / sub
        cli.dispatch("rates", plan, out_dir=out, stream=io.StringIO())
        cli.dispatch("fekete", plan, out_dir=out, stream=io.StringIO())
        blobs.append(
            {p.name: p.read_bytes() for p in sorted(out.glob("*.csv"))}
        )
    ok = blobs[0] == blobs[1] and len(blobs[0]) >= 8
    verdict(10, ok, "re-running plans produces byte-identical CSV artifacts")
