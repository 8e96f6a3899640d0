"""Command-line entry point.

Every command prints a JSON report (sorted keys, no timings) to stdout and,
with ``--out``, writes it to ``DIR/<command>.json``; ``--csv`` adds the plot
data next to it.  Exit codes: 0 success, 1 bad input or usage, 2 a stage
could not deliver its contract.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

from . import _backend
from .config import AnalysisConfig
from .conical import density_profile, density_rows
from .errors import FavardLabError, StageError, ValidationError
from .favard import crofton_integral, crofton_quadrature, favard_defect, favard_length, favard_report, profile_rows
from .geometry import PI, SegmentSet
from .graphs import coarea_check, cone_condition_check, cover_by_single_graph, minimal_graph_constant
from .grid import GRID_QUAD, energy_I1, generate_grid_set, lipschitz_intersection_mass
from .line_pairs import (
    CurveWithTangents,
    monte_carlo_pair_measure,
    overlap_rows,
    pair_line_measure_formula,
    pair_line_measure_oracle,
)
from .scene import load_scene
from .structure import analyze

SCHEMA_VERSION = "1"
COMMANDS = ("favard", "defect", "crofton-check", "density", "extract-graph", "analyze", "pair-measure", "grid-sweep")


class UsageError(FavardLabError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="favard-lab", description="Favard length, conical densities, graph extraction and line-pair measures.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--scene", help="scene JSON file")
    p.add_argument("--config", help="JSON file of AnalysisConfig overrides")
    p.add_argument("--eps", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--out", help="directory for the report and CSV files")
    p.add_argument("--csv", action="store_true", help="also write plot data as CSV")
    p.add_argument("--axis", type=float, default=PI / 2, help="cone axis angle for density (default vertical)")
    p.add_argument("--samples", type=int, default=1_000_000, help="Monte Carlo lines for pair-measure")
    p.add_argument("--ns", default="2,4,8,16", help="grid sizes for grid-sweep")
    p.add_argument("--poly-sides", type=int, default=32)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--mc-samples", type=int, default=400_000)
    return p


def resolve_config(args, scene_cfg: dict | None) -> AnalysisConfig:
    data = AnalysisConfig.desk().to_dict()
    layers = [scene_cfg or {}]
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            try:
                layers.append(json.load(fh))
            except json.JSONDecodeError as exc:
                raise ValidationError(f"config file: {exc}") from exc
    for layer in layers:
        if not isinstance(layer, dict):
            raise ValidationError("config overrides must be a JSON object")
        for key, val in layer.items():
            if key == "quad" and isinstance(val, dict):
                data["quad"] = {**data["quad"], **val}
            else:
                data[key] = val
    cfg = AnalysisConfig.from_dict(data)
    return cfg.with_overrides(alpha=args.alpha, seed=args.seed, eps_target=args.eps)


def _need_scene(args):
    if not args.scene:
        raise UsageError(f"{args.command} needs --scene")
    return load_scene(args.scene)


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(v)) if isinstance(v, float) else v for v in r])


def _cmd_favard(E, cfg, args):
    return favard_report(E, cfg.quad).to_dict(), ("profile", ("theta", "projection_measure", "multiplicity_excess"), lambda: profile_rows(E, cfg.quad))


def _cmd_defect(E, cfg, args):
    d = favard_defect(E, cfg.quad)
    fav, err = favard_length(E, cfg.quad)
    rep = {"favard_defect": d, "favard": fav, "h1_length": E.h1, "two_h1_minus_favard": 2 * E.h1 - fav, "quadrature_error_estimate": err}
    return rep, ("profile", ("theta", "projection_measure", "multiplicity_excess"), lambda: profile_rows(E, cfg.quad))


def _cmd_crofton(E, cfg, args):
    closed = crofton_integral(E)
    quad, err = crofton_quadrature(E, cfg.quad)
    return {"h1_length": E.h1, "crofton_closed_form": closed, "crofton_quadrature": quad, "abs_difference": abs(quad - closed), "quadrature_error_estimate": err}, None


def _cmd_density(E, cfg, args):
    beta = cfg.C_lip * cfg.alpha / 2.0
    eps1 = cfg.alpha * cfg.eps_target / cfg.C_pipeline
    step = cfg.step_for(E.h1)
    cloud, dens = density_profile(E, beta, step, args.axis, cfg.tol_density)
    high = dens >= eps1
    rep = {
        "beta": beta,
        "axis": args.axis,
        "threshold": eps1,
        "samples": len(cloud),
        "max_theta_star": float(dens.max()) if len(dens) else 0.0,
        "high_density_mass": math.fsum(cloud.weights[high].tolist()),
        "high_density_count": int(high.sum()),
    }
    return rep, ("density", ("s", "x", "y", "theta_star"), lambda: density_rows(E, beta, step, args.axis, cfg.tol_density))


def _cmd_extract(E, cfg, args):
    L, base = minimal_graph_constant(E)
    alpha = max(cfg.alpha, L * (1 + 1e-12)) if math.isfinite(L) else None
    if alpha is None:
        raise StageError("the chord directions of the scene cover every direction; no single graph exists")
    cover = cover_by_single_graph(E, alpha, cfg.eps_target, base, cfg)
    ok, pairs = cone_condition_check(cover.graph_points, cover.lipschitz_constant, base + PI / 2)
    lhs, rhs = coarea_check(cover, E, alpha)
    rep = {
        "minimal_graph_constant": L,
        "base_angle": base,
        "alpha_used": alpha,
        "cone_condition": ok,
        "cone_violations": len(pairs),
        "covered_mass": cover.covered_mass,
        "high_density_mass": cover.high_density_mass,
        "coarea_lhs": lhs,
        "coarea_rhs": rhs,
        **cover.summary(cfg.eps_target),
    }
    summary = cover.summary(cfg.eps_target)
    fields = ("beta", "eps", "total_mass", "removed_mass", "lipschitz_constant")
    return rep, [
        ("summary", fields, lambda: [tuple(summary[f] for f in fields)]),
        ("extension", ("t", "f"), lambda: list(zip(cover.extension_t.tolist(), cover.extension_f.tolist()))),
    ]


def _cmd_analyze(E, cfg, args):
    rep = analyze(E, cfg.eps_target, cfg)
    masses = rep.bucket_masses.tolist()
    return rep.to_dict(), ("buckets", ("bucket", "mass"), lambda: list(enumerate(masses)))


def _pair_curves(E: SegmentSet):
    if len(E.components) != 2:
        raise ValidationError(f"pair-measure needs exactly two components, got {len(E.components)}")
    return [CurveWithTangents(tuple(E.segments[i] for i in comp)) for comp in E.components]


def _cmd_pair(E, cfg, args):
    G1, G2 = _pair_curves(E)
    rep = {
        "formula": pair_line_measure_formula(G1, G2, cfg.tol_pair, cfg.geom_eps),
        "samples": args.samples,
    }
    single = len(G1.segments) == 1 and len(G2.segments) == 1
    if single:
        rep["oracle"] = pair_line_measure_oracle(G1.segments[0], G2.segments[0], cfg.quad)
    est, se = monte_carlo_pair_measure(G1, G2, args.samples, cfg.seed)
    rep["monte_carlo"] = est
    rep["monte_carlo_stderr"] = se
    csv_spec = None
    if single:
        csv_spec = ("overlap", ("theta", "overlap_measure"), lambda: overlap_rows(G1.segments[0], G2.segments[0]))
    return rep, csv_spec


def _cmd_grid(E, cfg, args):
    try:
        ns = [int(v) for v in args.ns.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"--ns must be a comma list of integers: {exc}") from exc
    rows = []
    for n in ns:
        sc = generate_grid_set(n, args.poly_sides)
        fav, _ = favard_length(sc.E, GRID_QUAD)
        I1, se = energy_I1(sc, args.mc_samples, cfg.seed)
        lip = lipschitz_intersection_mass(sc, 1.0, args.trials, cfg.seed)
        rows.append({"n": n, "h1_length": sc.E.h1, "fav": fav, "I1": I1, "I1_stderr": se, "inv_energy": 1.0 / I1, "max_lip_mass": lip["max_random"], "row_hugging_mass": lip["row_hugging"]})
    rep = {"rows": rows, "poly_sides": args.poly_sides, "trials": args.trials, "mc_samples": args.mc_samples}
    table = [(r["n"], r["fav"], r["I1"], r["inv_energy"], r["max_lip_mass"]) for r in rows]
    return rep, ("sweep", ("n", "fav", "I1", "inv_energy", "max_lip_mass"), lambda: table)


HANDLERS = {
    "favard": _cmd_favard,
    "defect": _cmd_defect,
    "crofton-check": _cmd_crofton,
    "density": _cmd_density,
    "extract-graph": _cmd_extract,
    "analyze": _cmd_analyze,
    "pair-measure": _cmd_pair,
    "grid-sweep": _cmd_grid,
}


def run(args) -> str:
    """Execute one command; returns the report text and writes files as requested."""
    threads = args.threads if args.threads is not None else _backend.threads_from_env()
    _backend.set_threads(threads)
    scene = None if args.command == "grid-sweep" else _need_scene(args)
    cfg = resolve_config(args, scene.config if scene else None)
    E = scene.segment_set() if scene else None
    body, csv_spec = HANDLERS[args.command](E, cfg, args)
    report = {"schema_version": SCHEMA_VERSION, "command": args.command, "seed": cfg.seed, "config": cfg.to_dict(), "result": body}
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        stem = args.command.replace("-", "_")
        if args.csv and csv_spec is not None:
            specs = csv_spec if isinstance(csv_spec, list) else [csv_spec]
            report["csv"] = []
            for name, header, rows in specs:
                fname = f"{stem}_{name}.csv"
                _write_csv(os.path.join(args.out, fname), header, rows())
                report["csv"].append(fname)
        text = json.dumps(report, sort_keys=True, indent=2)
        with open(os.path.join(args.out, f"{stem}.json"), "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return json.dumps(report, sort_keys=True, indent=2)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text = run(args)
    except StageError as exc:
        print(f"error [{exc.stage}]: {exc}", file=sys.stderr)
        return 2
    except (FavardLabError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
