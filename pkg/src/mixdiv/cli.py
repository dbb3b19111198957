"""Batch CLI: JSON problem specs in, JSON/CSV reports out.

    mixdiv compute|verify|geometry|falsify --spec FILE [--out FILE]
           [--format json|csv] [--seed N] [--trials N] [--emit-integrand]

Exit codes: 0 all checks pass, 1 at least one verdict unsatisfied,
2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import divergences, geometry, inequalities
from .falsify import FalsifyConfig, falsify as run_falsify_trials
from .errors import MixdivError, SpecError
from .ffunctions import FVector, from_spec
from .measures import Density, DensityBundle, make_space, validate_density

_CSV_COLUMNS = [
    "index", "task", "value", "lhs", "rhs", "slack",
    "satisfied", "equality", "violations", "min_slack",
]


def _fmt(x):
    if isinstance(x, float):
        return format(x, ".17g")
    return "" if x is None else str(x)


def _load_spec(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot read spec file: {exc}") from exc


def _norm_tol(spec):
    tol = os.environ.get("MIXDIV_TOL_OVERRIDE")
    tol = float(tol) if tol else 1e-12
    overrides = spec.get("tolerances", {})
    if "norm" in overrides:
        tol = float(overrides["norm"])
    if tol <= 0:
        raise SpecError("tolerance overrides must be positive")
    return tol

def _require(spec, key, where):
    if key not in spec:
        raise SpecError(f"missing field {key!r} in {where}")
    return spec[key]


def _parse_inputs(spec):
    space = make_space(_require(_require(spec, "space", "spec"), "weights", "space"))
    tol = _norm_tol(spec)
    densities = {}
    for name, values in spec.get("densities", {}).items():
        d = Density(values)
        validate_density(d, space, strictly_positive=True, probability=True, tol=tol)
        densities[name] = d
    return space, densities


def _density(densities, name, where):
    if name not in densities:
        raise SpecError(f"unknown density {name!r} in {where}")
    return densities[name]


def _bundle(space, densities, names, where):
    return DensityBundle(space, tuple(_density(densities, n, where) for n in names))


def _report_entry(task, report, emit_integrand):
    entry = {"task": task["type"], "value": report.value}
    if emit_integrand:
        entry["integrand"] = [float(x) for x in report.integrand]
        entry["convention_hits"] = report.convention_hits
    return entry


def run_compute(spec, emit_integrand=False):
    space, dens = _parse_inputs(spec)
    results = []
    for task in _require(spec, "tasks", "spec"):
        t = _require(task, "type", "task")
        if t == "classical":
            rep = divergences.classical_f_divergence(
                from_spec(task["f"]), _density(dens, task["p"], t),
                _density(dens, task["q"], t), space,
            )
        elif t == "mixed":
            rep = divergences.mixed_f_divergence(
                FVector(from_spec(f) for f in task["fs"]),
                _bundle(space, dens, task["ps"], t),
                _bundle(space, dens, task["qs"], t),
            )
        elif t == "k_form":
            rep = divergences.mixed_k_form(
                FVector(from_spec(f) for f in task["fs"]),
                _bundle(space, dens, task["ps"], t),
                _bundle(space, dens, task["qs"], t),
                int(task["k"]),
            )
        elif t == "ith":
            rep = divergences.ith_mixed(
                from_spec(task["f1"]), from_spec(task["f2"]),
                _density(dens, task["p1"], t), _density(dens, task["q1"], t),
                _density(dens, task["p2"], t), _density(dens, task["q2"], t),
                float(task["i"]), int(task["n"]), space,
            )
        elif t == "ith_reference":
            rep = divergences.ith_mixed_reference(
                from_spec(task["f1"]),
                _density(dens, task["p1"], t), _density(dens, task["q1"], t),
                float(task["i"]), from_spec(task["f2"]), space, int(task["n"]),
            )
        elif t == "named":
            out = divergences.named_divergence(
                task["family"],
                _bundle(space, dens, task["ps"], t),
                _bundle(space, dens, task["qs"], t),
                alphas=task.get("alphas"),
                alpha=task.get("alpha"),
                kl_orientation=task.get("kl_orientation", "pq"),
            )
            if isinstance(out, float):
                results.append({"task": t, "family": task["family"], "value": out})
                continue
            entry = _report_entry(task, out, emit_integrand)
            entry["family"] = task["family"]
            results.append(entry)
            continue
        else:
            raise SpecError(f"unknown compute task type {t!r}")
        results.append(_report_entry(task, rep, emit_integrand))
    return {"command": "compute", "results": results}, 0


def run_verify(spec, emit_integrand=False):
    space, dens = _parse_inputs(spec)
    results = []
    any_violation = False
    for task in _require(spec, "tasks", "spec"):
        t = _require(task, "type", "task")
        if t == "af":
            v = inequalities.af_check(
                FVector(from_spec(f) for f in task["fs"]),
                _bundle(space, dens, task["ps"], t),
                _bundle(space, dens, task["qs"], t),
                int(task["m"]),
            )
            verdicts = [v]
        elif t == "jensen":
            verdicts = [inequalities.jensen_bound_check(
                from_spec(task["f"]), _density(dens, task["p"], t),
                _density(dens, task["q"], t), space,
            )]
        elif t == "concave_chain":
            verdicts = list(inequalities.concave_chain_check(
                FVector(from_spec(f) for f in task["fs"]),
                _bundle(space, dens, task["ps"], t),
                _bundle(space, dens, task["qs"], t),
            ))
        elif t == "interpolation":
            verdicts = [inequalities.interpolation_check(
                from_spec(task["f1"]), from_spec(task["f2"]),
                _density(dens, task["p1"], t), _density(dens, task["q1"], t),
                _density(dens, task["p2"], t), _density(dens, task["q2"], t),
                float(task["i"]), float(task["j"]), float(task["k"]),
                int(task["n"]), space,
            )]
        elif t == "corollary":
            kwargs = {}
            if "p2" in task:
                kwargs["P2"] = _density(dens, task["p2"], t)
                kwargs["Q2"] = _density(dens, task["q2"], t)
            verdicts = [inequalities.corollary_bound_check(
                task["case"], from_spec(task["f1"]), from_spec(task["f2"]),
                _density(dens, task["p1"], t), _density(dens, task["q1"], t),
                float(task["i"]), int(task["n"]), space, **kwargs,
            )]
        else:
            raise SpecError(f"unknown verify task type {t!r}")
        for v in verdicts:
            any_violation = any_violation or not v.satisfied
            results.append({"task": t} | v.to_dict())
    return {"command": "verify", "results": results}, (1 if any_violation else 0)


def run_falsify(spec, seed=None, trials=None):
    results = []
    any_violation = False
    for task in _require(spec, "tasks", "spec"):
        cfg = FalsifyConfig(
            max_atoms=int(task.get("max_atoms", 12)),
            max_n=int(task.get("max_n", 4)),
        )
        report = run_falsify_trials(
            _require(task, "inequality", "falsify task"),
            int(task.get("seed", seed if seed is not None else 0)),
            int(task.get("trials", trials if trials is not None else 1000)),
            cfg,
        )
        any_violation = any_violation or report["violations"] > 0
        results.append(report)
    return {"command": "falsify", "results": results}, (1 if any_violation else 0)


def _body(bodies, name, where):
    if name not in bodies:
        raise SpecError(f"unknown body {name!r} in {where}")
    return bodies[name]


def _parse_body(spec):
    fam = _require(spec, "family", "body spec")
    try:
        if fam == "ellipse":
            return geometry.ellipse(
                float(spec["a"]), float(spec["b"]), float(spec.get("phi", 0.0))
            )
        if fam == "trigball":
            return geometry.trigball(float(spec["eps"]), int(spec["k"]))
    except KeyError as exc:
        raise SpecError(f"body spec missing field {exc}") from exc
    raise SpecError(f"unknown body family {fam!r}")


def run_geometry(spec, emit_integrand=False):
    grid = geometry.CircleGrid(int(spec.get("grid", {}).get("nodes", 256)))
    bodies = {name: _parse_body(b) for name, b in spec.get("bodies", {}).items()}
    results = []
    any_violation = False
    for task in _require(spec, "tasks", "spec"):
        t = _require(task, "type", "task")
        if t == "functionals":
            fn = geometry.body_functionals(_body(bodies, task["body"], t), grid)
            results.append({
                "task": t, "body": task["body"],
                "volume": fn.volume, "polar_volume": fn.polar_volume,
                "boundary_length": fn.boundary_length,
                "affine_surface_area": fn.affine_surface_area,
            })
        elif t == "densities":
            p, q = geometry.body_densities(_body(bodies, task["body"], t), grid)
            space = grid.space()
            entry = {
                "task": t, "body": task["body"],
                "p_mass": space.integrate(p.values),
                "q_mass": space.integrate(q.values),
            }
            if emit_integrand:
                entry["p"] = [float(x) for x in p.values]
                entry["q"] = [float(x) for x in q.values]
            results.append(entry)
        elif t == "mixed":
            rep = geometry.mixed_body_divergence(
                FVector(from_spec(f) for f in task["fs"]),
                [_body(bodies, b, t) for b in task["bodies"]],
                task.get("orientation", "PQ"), grid,
            )
            results.append(_report_entry(task, rep, emit_integrand))
        elif t == "ith":
            rep = geometry.ith_mixed_body_divergence(
                from_spec(task["f1"]), from_spec(task["f2"]),
                _body(bodies, task["bodies"][0], t),
                _body(bodies, task["bodies"][1], t),
                float(task["i"]), task.get("orientation", "PQ"), grid,
            )
            results.append(_report_entry(task, rep, emit_integrand))
        elif t == "isoperimetric":
            v = geometry.isoperimetric_check(_body(bodies, task["body"], t), grid)
            any_violation = any_violation or not v.satisfied
            results.append({"task": t, "body": task["body"]} | v.to_dict())
        else:
            raise SpecError(f"unknown geometry task type {t!r}")
    return {"command": "geometry", "results": results}, (1 if any_violation else 0)


def _to_csv(report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_COLUMNS)
    for idx, entry in enumerate(report["results"]):
        writer.writerow([
            idx,
            entry.get("task", entry.get("inequality", "")),
            _fmt(entry.get("value")),
            _fmt(entry.get("lhs")),
            _fmt(entry.get("rhs")),
            _fmt(entry.get("slack")),
            _fmt(entry.get("satisfied")),
            _fmt(entry.get("equality")),
            _fmt(entry.get("violations")),
            _fmt(entry.get("min_slack")),
        ])
    return buf.getvalue()


def _emit(report, fmt, out):
    if fmt == "csv":
        text = _to_csv(report)
    else:
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="mixdiv", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("compute", "verify", "geometry", "falsify"):
        p = sub.add_parser(name)
        p.add_argument("--spec", required=True)
        p.add_argument("--out")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int)
        p.add_argument("--trials", type=int)
        p.add_argument("--emit-integrand", action="store_true")
    args = parser.parse_args(argv)

    try:
        spec = _load_spec(args.spec)
        if args.command == "compute":
            report, code = run_compute(spec, args.emit_integrand)
        elif args.command == "verify":
            report, code = run_verify(spec, args.emit_integrand)
        elif args.command == "geometry":
            report, code = run_geometry(spec, args.emit_integrand)
        else:
            report, code = run_falsify(spec, seed=args.seed, trials=args.trials)
    except (MixdivError, KeyError, TypeError, ValueError) as exc:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "message": str(exc)}, sort_keys=True
        ) + "\n")
        return 2
    _emit(report, args.format, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
