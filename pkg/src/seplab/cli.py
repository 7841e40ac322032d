"""Command line front end.

    seplab check GRAPH            admissibility report
    seplab lengths GRAPH          positive edge lengths for the annuli
    seplab realize GRAPH          zones of the rectified surface + degree report
    seplab extract FIELD          separatrix graph of a rational vector field
    seplab roundtrip FIELD        extract, check and compare degrees
    seplab render INPUT           SVG portrait (field, extraction sidecar or graph)

Exit codes: 0 success or admissible, 1 checked and false, 2 malformed input,
3 numerical non-resolution (partial output is still written).

Settings not given on the command line are read from the INI file named by
SEPLAB_CONFIG, section [seplab]; keys are the long option names with
underscores (tol_root, tol_center, delta_land, rho_seed, smax, seed, exact,
size, flow_lines).
"""
from __future__ import annotations

import argparse
import configparser
import os
import sys
from pathlib import Path

from . import __version__
from .admissibility import check_admissible
from .graph_core import GraphError
from .io import FormatError, dumps, graph_from_dict, graph_to_dict, load_json, vf_document
from .length_solver import OneSignedEquationError, feasibility_oracle, solve_lengths
from .realization import ZoneError, build_zones, degree_report
from .render import render_portrait, render_schematic
from .vf.assemble import extract
from .vf.field import TOL_CENTER, TOL_ROOT, FieldError, RationalVF
from .vf.tracing import TraceConfig

EXIT_OK, EXIT_FALSE, EXIT_MALFORMED, EXIT_UNRESOLVED = 0, 1, 2, 3

DEFAULTS = {
    "tol_root": TOL_ROOT,
    "tol_center": TOL_CENTER,
    "delta_land": None,
    "rho_seed": None,
    "smax": None,
    "seed": 0,
    "exact": None,
    "size": 480,
    "flow_lines": 0,
}
_TYPES = {"tol_root": float, "tol_center": float, "delta_land": float, "rho_seed": float,
          "smax": float, "seed": int, "size": int, "flow_lines": int}


class UsageError(Exception):
    pass


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise UsageError(f"config file not found: {path}")
    if not cp.has_section("seplab"):
        return {}
    out = {}
    for key, raw in cp.items("seplab"):
        if key not in DEFAULTS:
            raise UsageError(f"unknown config key {key!r}")
        if key == "exact":
            out[key] = cp.getboolean("seplab", key)
        else:
            try:
                out[key] = _TYPES[key](raw)
            except ValueError as exc:
                raise UsageError(f"bad value for {key}: {raw!r}") from exc
    return out


def settings(args) -> dict:
    """Built-in defaults, overridden by the config file, overridden by flags."""
    merged = dict(DEFAULTS)
    merged.update(load_config(os.environ.get("SEPLAB_CONFIG")))
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    for key in ("tol_root", "tol_center", "delta_land", "rho_seed", "smax"):
        if merged[key] is not None and merged[key] <= 0:
            raise UsageError(f"{key} must be positive")
    return merged


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _err(msg: str):
    print(f"seplab: {msg}", file=sys.stderr)


def _graph_arg(path):
    return graph_from_dict(load_json(path))


def _field_arg(path, cfg) -> RationalVF:
    num, den, exact = vf_document(load_json(path), cfg["exact"])
    return RationalVF.from_coeffs(num, den, exact=exact)


def _extract(path, cfg):
    vf = _field_arg(path, cfg)
    tc = TraceConfig(cfg["delta_land"], cfg["rho_seed"], cfg["smax"])
    return extract(vf, seed=cfg["seed"], config=tc, tol_root=cfg["tol_root"], tol_center=cfg["tol_center"])


# -- subcommands ----------------------------------------------------------------

def cmd_check(args, cfg) -> int:
    report = check_admissible(_graph_arg(args.input))
    _emit(dumps(report.to_dict()), args.out)
    return EXIT_OK if report.verdict else EXIT_FALSE


def cmd_lengths(args, cfg) -> int:
    graph = _graph_arg(args.input)
    report = check_admissible(graph)
    if not report.verdict:
        _err("graph is not admissible: " + ", ".join(report.failed()))
        return EXIT_FALSE
    try:
        sol = solve_lengths(graph, report.face_set)
    except OneSignedEquationError as exc:
        _err(str(exc))
        return EXIT_FALSE
    doc = sol.to_dict()
    if args.verify:
        ok, _ = feasibility_oracle(sol.system)
        doc["verified"] = bool(ok and sol.system.satisfied_by(sol.lengths))
        if not doc["verified"]:
            _emit(dumps(doc), args.out)
            return EXIT_FALSE
    _emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_realize(args, cfg) -> int:
    graph = _graph_arg(args.input)
    report = check_admissible(graph)
    if not report.verdict:
        _err("graph is not admissible: " + ", ".join(report.failed()))
        return EXIT_FALSE
    lengths = solve_lengths(graph, report.face_set).lengths
    surface = build_zones(graph, report.face_set, lengths)
    deg = degree_report(graph, report.face_set)
    _emit(dumps({"surface": surface.to_dict(), "degrees": deg.to_dict()}), args.out)
    return EXIT_OK


def cmd_extract(args, cfg) -> int:
    sg = _extract(args.input, cfg)
    side = sg.sidecar()
    graph_doc = graph_to_dict(sg.graph) if sg.graph is not None else None
    if args.out:
        if graph_doc is not None:
            Path(args.out + ".graph.json").write_text(dumps(graph_doc))
        Path(args.out + ".traces.json").write_text(dumps(side))
    else:
        _emit(dumps({"graph": graph_doc, "traces": side}), None)
    for d in sg.diagnostics:
        _err(d.get("message") or f"{d['kind']}: {d}")
    return EXIT_OK if sg.resolved else EXIT_UNRESOLVED


def roundtrip_report(sg) -> dict:
    doc = {"resolved": sg.resolved, "field_degrees": [sg.vf.n, sg.vf.m], "diagnostics": sg.diagnostics}
    if not sg.resolved:
        return doc
    g = sg.graph
    if not g.vertices:
        doc.update(admissible=True, empty=True, degrees_match=sg.vf.m == 0)
        return doc
    report = check_admissible(g)
    doc.update(admissible=report.verdict, failed=report.failed(), face_classes=report.counts(),
               white=len(g.white), black=len(g.black), edges=len(g.edges), components=g.n_components)
    if report.verdict:
        deg = degree_report(g, report.face_set)
        doc["centers"] = deg.centers
        doc["reported_degrees"] = [deg.deg_P, deg.deg_Q]
        doc["degrees_match"] = (deg.deg_P, deg.deg_Q) == (sg.vf.n, sg.vf.m) and deg.consistent
    return doc


def cmd_roundtrip(args, cfg) -> int:
    sg = _extract(args.input, cfg)
    doc = roundtrip_report(sg)
    _emit(dumps(doc), args.out)
    if not sg.resolved:
        for d in sg.diagnostics:
            _err(f"{d['kind']}: {d}")
        return EXIT_UNRESOLVED
    return EXIT_OK if doc["admissible"] and doc.get("degrees_match", True) else EXIT_FALSE


def cmd_render(args, cfg) -> int:
    doc = load_json(args.input)
    if not isinstance(doc, dict):
        raise FormatError("render input must be a JSON object")
    code = EXIT_OK
    if "numerator" in doc:
        sg = _extract(args.input, cfg)
        side = sg.sidecar()
        code = EXIT_OK if sg.resolved else EXIT_UNRESOLVED
    elif "traces" in doc and isinstance(doc["traces"], dict):
        side = doc["traces"]
    elif "equilibria" in doc and "edges" in doc:
        side = doc
    elif "vertices" in doc:
        svg = render_schematic(graph_from_dict(doc), size=cfg["size"], title=Path(args.input).stem)
        _emit(svg, args.out)
        return EXIT_OK
    else:
        raise FormatError("render input is neither a field, an extraction nor a graph")
    _emit(render_portrait(side, size=cfg["size"], flow_lines=cfg["flow_lines"], title=Path(args.input).stem), args.out)
    return code


COMMANDS = {
    "check": (cmd_check, "admissibility report for a graph"),
    "lengths": (cmd_lengths, "positive edge lengths solving the annulus equations"),
    "realize": (cmd_realize, "rectified zones and degree report"),
    "extract": (cmd_extract, "separatrix graph of a rational vector field"),
    "roundtrip": (cmd_roundtrip, "extract, check admissibility, compare degrees"),
    "render": (cmd_render, "SVG portrait"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="seplab", description="Separatrix graphs of rational vector fields.")
    p.add_argument("--version", action="version", version=f"seplab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("input")
        sp.add_argument("--out", "-o", help="output path (extract: prefix for .graph.json/.traces.json)")
        if name == "lengths":
            sp.add_argument("--verify", action="store_true", help="confirm feasibility with the simplex oracle")
        if name in ("extract", "roundtrip", "render"):
            sp.add_argument("--seed", type=int)
            sp.add_argument("--tol-root", dest="tol_root", type=float)
            sp.add_argument("--tol-center", dest="tol_center", type=float)
            sp.add_argument("--delta-land", dest="delta_land", type=float)
            sp.add_argument("--rho-seed", dest="rho_seed", type=float)
            sp.add_argument("--smax", type=float)
            sp.add_argument("--exact", action="store_true", default=None,
                            help="read coefficients as exact Gaussian rationals")
        if name == "render":
            sp.add_argument("--size", type=int)
            sp.add_argument("--flow-lines", dest="flow_lines", type=int, help="seeds per axis for background flow")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = settings(args)
        return COMMANDS[args.command][0](args, cfg)
    except UsageError as exc:
        _err(str(exc))
        return EXIT_MALFORMED
    except (FormatError, GraphError, FieldError, ZoneError) as exc:
        _err(str(exc))
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
