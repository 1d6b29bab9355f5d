"""End-to-end equidistribution experiment on the interval and the circle.

Fekete measures converge to the equilibrium measure; the workbench measures
the dual-distance decay degree by degree, calibrates the theoretical bound
shape c [log d]^(3 a'') / d^(a'') at the smallest degree, and reports a
verdict: measured distances must stay under the bound and decay at least as
fast as the exponent a''.
"""

from feketelab import cli, rates

for set_cfg, label in (
    ({"kind": "interval", "a": -1, "b": 1}, "interval [-1, 1] vs arcsine"),
    ({"kind": "circle", "radius": 1.0}, "unit circle vs uniform"),
):
    plan = cli.parse_plan(
        {
            "set": set_cfg,
            "gamma": 1.0,
            "alpha": 1.0,
            "degrees": "2..24",
            "solver": "greedy+refine",
        }
    )
    report = rates.run_experiment(plan)
    c = report.constants
    print(f"=== {label} ===")
    print(
        f"exponent chain: mu={c.mu} q={c.q} tau={c.tau:.4f} "
        f"a'={c.alpha_prime:.6f} a''={c.alpha_double_prime:.8f}"
    )
    print(f"{'d':>3s} {'W1 lower':>10s} {'W1 upper':>10s} {'bound':>10s}")
    for row in report.rows:
        if row.degree in (2, 4, 8, 16, 24):
            print(
                f"{row.degree:3d} {row.dist_lower:10.6f} "
                f"{row.dist_upper:10.6f} {row.bound:10.6f}"
            )
    print(f"fitted log-log slope: {report.fitted_slope:.3f} (needs <= {-c.alpha_double_prime:.5f})")
    print(f"verdict: {report.verdict}")
    for note in report.notes:
        print(f"note: {note}")
    print()

print("The same experiment is available from the command line:")
print("  feketelab rates --plan plan.yaml --out results/")
