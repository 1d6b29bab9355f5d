"""Declarative experiment plans, command dispatch, and artifact emission.

Plans are YAML/JSON key-value trees; every run writes CSV tables, a JSON
summary, and a manifest carrying the plan hash, tool version, and duration.
All numeric CSV cells use 17 significant digits.  No randomness anywhere.
"""

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from . import extremal, fekete, geometry, measures, polyspace, rates
from .errors import FeketeLabError, InputError

COMMANDS = ("fekete", "extremal", "hcp", "rates", "constants", "validate-upc")

_KNOWN_KEYS = {
    "set",
    "gamma",
    "alpha",
    "degrees",
    "solver",
    "mesh_density",
    "reference",
    "dictionary_size",
    "weight",
    "scale",
    "m",
    "n",
    "eval_points",
    "anchors",
    "radii",
    "deltas",
    "hcp_degree",
    "out",
}

_SOLVERS = ("brute", "greedy", "greedy+refine", "leja")


@dataclass(frozen=True)
class ExperimentPlan:
    """Validated, fully-defaulted experiment description."""

    model: object
    gamma: float
    alpha: float
    degrees: tuple
    solver: str
    mesh_density: float
    reference_kind: str
    reference_degree: int | None
    dictionary_size: int
    weight_name: str
    scale: float | None
    m_override: int | None
    n_override: int | None
    eval_points: tuple
    anchors: tuple
    radii: tuple
    deltas: tuple
    hcp_degree: int
    document: dict

    @property
    def plan_hash(self):
        payload = json.dumps(self.document, sort_keys=True, default=str)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _parse_degrees(spec, errors):
    if isinstance(spec, str):
        try:
            lo, hi = (int(p) for p in spec.split(".."))
        except ValueError:
            errors.append(f"degrees: cannot parse range {spec!r} (expected 'lo..hi')")
            return ()
    elif isinstance(spec, (list, tuple)) and len(spec) == 2:
        lo, hi = int(spec[0]), int(spec[1])
    elif isinstance(spec, dict):
        lo, hi = int(spec.get("min", 0)), int(spec.get("max", -1))
    elif isinstance(spec, int):
        lo = hi = spec
    else:
        errors.append(f"degrees: unsupported form {spec!r}")
        return ()
    if hi < lo:
        errors.append(f"degrees: empty range {lo}..{hi}")
        return ()
    if lo < 1:
        errors.append("degrees: must be >= 1")
        return ()
    return tuple(range(lo, hi + 1))


def parse_plan(document):
    """Validate a plan document; collects every error before failing."""
    if not isinstance(document, dict):
        raise InputError("plan document must be a key-value tree")
    errors = []
    for key in document:
        if key not in _KNOWN_KEYS:
            errors.append(f"unknown key {key!r}")
    gamma = float(document.get("gamma", 1.0))
    if not 0.0 < gamma <= 2.0:
        errors.append("gamma must lie in (0, 2]")
    alpha = float(document.get("alpha", 1.0))
    if not 0.0 < alpha <= 1.0:
        errors.append("alpha must lie in (0, 1]")
    degrees = _parse_degrees(document.get("degrees", "2..12"), errors)
    solver = document.get("solver", "greedy+refine")
    if solver not in _SOLVERS:
        errors.append(f"solver must be one of {_SOLVERS}, got {solver!r}")
    density = float(document.get("mesh_density", 1.0))
    if density < 1.0:
        errors.append("mesh_density must be >= 1")
    dict_size = int(document.get("dictionary_size", 64))
    if dict_size < 1:
        errors.append("dictionary_size must be >= 1")
    weight = document.get("weight", "none")
    if weight not in rates.WEIGHTS:
        errors.append(f"weight must be one of {sorted(rates.WEIGHTS)}, got {weight!r}")
    scale = document.get("scale")
    scale = None if scale is None else float(scale)
    ref = document.get("reference", {"kind": "closed-form"})
    if isinstance(ref, str):
        ref = {"kind": ref}
    ref_kind = ref.get("kind", "closed-form")
    ref_degree = ref.get("degree")
    if ref_kind not in ("closed-form", "surrogate"):
        errors.append("reference.kind must be 'closed-form' or 'surrogate'")
    if ref_kind == "surrogate":
        if ref_degree is None:
            errors.append("reference.degree is required for surrogate references")
        elif degrees and int(ref_degree) < 4 * max(degrees):
            errors.append("reference.degree must be >= 4x the largest experiment degree")
    model = None
    try:
        model = geometry.model_from_config(document.get("set", {"kind": "interval", "a": -1, "b": 1}))
    except (FeketeLabError, KeyError, TypeError) as exc:
        errors.append(f"set: {exc}")
    if errors:
        raise InputError("invalid plan: " + "; ".join(errors))
    return ExperimentPlan(
        model=model,
        gamma=gamma,
        alpha=alpha,
        degrees=degrees,
        solver=solver,
        mesh_density=density,
        reference_kind=ref_kind,
        reference_degree=None if ref_degree is None else int(ref_degree),
        dictionary_size=dict_size,
        weight_name=weight,
        scale=scale,
        m_override=None if "m" not in document else int(document["m"]),
        n_override=None if "n" not in document else int(document["n"]),
        eval_points=tuple(document.get("eval_points", ())),
        anchors=tuple(document.get("anchors", ())),
        radii=tuple(document.get("radii", (1.0, 0.5))),
        deltas=tuple(document.get("deltas", ())),
        hcp_degree=int(document.get("hcp_degree", 16)),
        document=dict(document),
    )


def plan_to_document(plan):
    return dict(plan.document)


# ---------------------------------------------------------------------------
# artifact helpers


def _write_text(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _write_manifest(out_dir, plan, command, started):
    manifest = {
        "command": command,
        "plan_hash": plan.plan_hash if plan is not None else None,
        "tool_version": __version__,
        "duration_seconds": time.monotonic() - started,
    }
    _write_text(Path(out_dir) / "manifest.json", json.dumps(manifest, indent=2) + "\n")


def _fmt(x):
    return f"{x:.17g}"


# ---------------------------------------------------------------------------
# command implementations


def _cmd_constants(plan, out_dir, stream):
    m = plan.m_override if plan.m_override is not None else rates.cusp_exponent(plan.model)
    n = plan.n_override if plan.n_override is not None else plan.model.dimension
    c = rates.rate_constants(plan.alpha, plan.gamma, m, n)
    lines = [
        f"alpha = {_fmt(c.alpha)}",
        f"gamma = {_fmt(c.gamma)}",
        f"m = {c.m}",
        f"n = {c.n}",
        f"mu = {_fmt(c.mu)}",
        f"q = {_fmt(c.q)}",
        f"tau = {_fmt(c.tau)}",
        f"alpha_prime = {_fmt(c.alpha_prime)}",
        f"alpha_double_prime = {_fmt(c.alpha_double_prime)}",
    ]
    stream.write("\n".join(lines) + "\n")
    if out_dir is not None:
        _write_text(
            Path(out_dir) / "constants.json",
            json.dumps(
                {
                    "alpha": c.alpha,
                    "gamma": c.gamma,
                    "m": c.m,
                    "n": c.n,
                    "mu": c.mu,
                    "q": c.q,
                    "tau": c.tau,
                    "alpha_prime": c.alpha_prime,
                    "alpha_double_prime": c.alpha_double_prime,
                },
                indent=2,
            )
            + "\n",
        )
    return 0


def _cmd_validate_upc(plan, out_dir, stream):
    descriptor = geometry.builtin_descriptor(plan.model)
    report = geometry.validate_upc(descriptor)
    payload = {
        "ok": report.ok,
        "t_resolution": report.t_resolution,
        "u_resolution": report.u_resolution,
        "witness_count": len(report.witnesses),
    }
    stream.write(json.dumps(payload) + "\n")
    if out_dir is not None:
        _write_text(Path(out_dir) / "upc_validation.json", json.dumps(payload, indent=2) + "\n")
    return 0 if report.ok else 1


def _cmd_fekete(plan, out_dir, stream, parallel_map):
    weight = rates.WEIGHTS[plan.weight_name]

    def solve(d):
        mesh = geometry.generate_mesh(plan.model, d, plan.mesh_density)
        cfg = fekete.solve_configuration(
            mesh, d, method=plan.solver, weight=weight, scale=plan.scale
        )
        return d, mesh, cfg

    for d, mesh, cfg in parallel_map(solve, plan.degrees):
        stream.write(f"degree {d}: N_d={cfg.points.shape[0]} objective={_fmt(cfg.objective)}\n")
        if out_dir is not None:
            base = Path(out_dir) / f"config_d{d:03d}"
            with open_text(base.with_suffix(".csv")) as f:
                geometry.points_to_csv(cfg.points, f)
            sidecar = {
                "degree": cfg.degree,
                "scale": cfg.scale,
                "objective": cfg.objective,
                "provenance": cfg.provenance,
                "mesh_spacing": mesh.spacing,
            }
            _write_text(base.with_suffix(".json"), json.dumps(sidecar, indent=2) + "\n")
    return 0


def open_text(path):
    path.parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", encoding="utf-8", newline="\n")


def _default_eval_points(model):
    lows, highs = model._chart_box()
    span = float((highs - lows).max())
    center = (lows + highs) / 2.0
    pts = []
    for factor in (0.75, 1.0, 1.5, 2.0):
        offset = np.zeros_like(center)
        offset[0] = factor * span
        pts.append(center + offset)
    return [p.tolist() for p in pts]


def _cmd_extremal(plan, out_dir, stream):
    d = max(plan.degrees)
    mesh = geometry.generate_mesh(plan.model, d, plan.mesh_density)
    cfg = fekete.solve_configuration(mesh, d, method=plan.solver)
    est = extremal.extremal_estimate(cfg, mesh)
    raw = plan.eval_points or _default_eval_points(plan.model)
    lines = ["point,lower,upper"]
    for p in raw:
        z = np.asarray(
            [complex(c) if not isinstance(c, (list, tuple)) else complex(*c) for c in np.atleast_1d(p)],
            dtype=complex,
        ).reshape(1, -1)
        lo = float(est.lower(z)[0])
        up = float(est.upper(z)[0])
        lines.append(f"\"{p}\",{_fmt(lo)},{_fmt(up)}")
        stream.write(f"{p}: [{_fmt(lo)}, {_fmt(up)}]\n")
    if out_dir is not None:
        _write_text(Path(out_dir) / "extremal_bracket.csv", "\n".join(lines) + "\n")
    return 0


def _default_anchors(model):
    lows, highs = model._chart_box()
    if isinstance(model, geometry.Interval):
        return [[model.b], [model.a]]
    return [lows.tolist(), highs.tolist()]


def _cmd_hcp(plan, out_dir, stream):
    anchors = plan.anchors or _default_anchors(plan.model)
    deltas = plan.deltas or tuple(np.geomspace(0.02, 0.3, 8))
    samples = []
    for anchor in anchors:
        for r in plan.radii:
            samples.append(
                extremal.modulus_of_continuity(
                    plan.model,
                    np.asarray(anchor, dtype=complex),
                    r,
                    np.asarray(deltas, dtype=float),
                    plan.hcp_degree,
                    solver=plan.solver,
                    density=plan.mesh_density,
                )
            )
    fit = extremal.hcp_fit(samples)
    stream.write(
        f"mu_est={_fmt(fit.mu_est)} q_est={_fmt(fit.q_est)} "
        f"C_est={_fmt(fit.c_est)} max_residual={_fmt(fit.max_residual)}\n"
    )
    if out_dir is not None:
        lines = ["anchor,r,delta,modulus"]
        for s in samples:
            tag = ";".join(_fmt(v.real) for v in s.anchor)
            for delta, val in zip(s.deltas, s.values):
                lines.append(f"\"{tag}\",{_fmt(s.radius)},{_fmt(delta)},{_fmt(val)}")
        _write_text(Path(out_dir) / "modulus_samples.csv", "\n".join(lines) + "\n")
        _write_text(
            Path(out_dir) / "hcp_fit.json",
            json.dumps(
                {
                    "mu_est": fit.mu_est,
                    "q_est": fit.q_est,
                    "C_est": fit.c_est,
                    "max_residual": fit.max_residual,
                    "excluded": fit.excluded,
                },
                indent=2,
            )
            + "\n",
        )
    return 0


def _cmd_rates(plan, out_dir, stream, parallel_map):
    report = rates.run_experiment(plan, parallel_map=parallel_map)
    stream.write(
        f"verdict={report.verdict} slope={_fmt(report.fitted_slope)} "
        f"c={_fmt(report.calibration_c)}\n"
    )
    if out_dir is not None:
        _write_text(Path(out_dir) / f"rates_{plan.plan_hash}.csv", rates.report_to_csv(report))
        _write_text(
            Path(out_dir) / f"rates_{plan.plan_hash}.json",
            json.dumps(rates.report_to_json_dict(report), indent=2) + "\n",
        )
    return 0 if report.verdict == "PASS" else 1


def dispatch(command, plan, out_dir=None, workers=1, stream=None):
    """Run a command against a validated plan; returns the exit status."""
    stream = stream if stream is not None else sys.stdout
    started = time.monotonic()
    if workers > 1:
        pool = ThreadPoolExecutor(max_workers=workers)
        parallel_map = pool.map
    else:
        pool = None
        parallel_map = map
    try:
        if command == "constants":
            status = _cmd_constants(plan, out_dir, stream)
        elif command == "validate-upc":
            status = _cmd_validate_upc(plan, out_dir, stream)
        elif command == "fekete":
            status = _cmd_fekete(plan, out_dir, stream, parallel_map)
        elif command == "extremal":
            status = _cmd_extremal(plan, out_dir, stream)
        elif command == "hcp":
            status = _cmd_hcp(plan, out_dir, stream)
        elif command == "rates":
            status = _cmd_rates(plan, out_dir, stream, parallel_map)
        else:
            raise InputError(f"unknown command {command!r}")
    finally:
        if pool is not None:
            pool.shutdown()
    if out_dir is not None:
        _write_manifest(out_dir, plan, command, started)
    return status


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="feketelab",
        description="Fekete configurations, extremal functions, and rate experiments",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--plan", type=Path, help="YAML/JSON plan document")
    parser.add_argument("--out", type=Path, help="artifact output directory")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--verbose", action="store_true")
    parser.add_argument("--alpha", type=float, help="override plan alpha")
    parser.add_argument("--gamma", type=float, help="override plan gamma")
    parser.add_argument("--m", type=int, help="cusp exponent for 'constants'")
    parser.add_argument("--n", type=int, help="dimension for 'constants'")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    document = {}
    if args.plan is not None:
        document = yaml.safe_load(Path(args.plan).read_text(encoding="utf-8")) or {}
    for key in ("alpha", "gamma", "m", "n"):
        value = getattr(args, key)
        if value is not None:
            document[key] = value
    try:
        plan = parse_plan(document)
        return dispatch(args.command, plan, out_dir=args.out, workers=args.workers)
    except InputError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except FeketeLabError as exc:
        report = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(report), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
