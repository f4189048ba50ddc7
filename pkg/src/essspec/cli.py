"""Command line front end.

    essspec {spectrum,hull,project,induce,verify} --config FILE [--out DIR]
            [--cell-size R] [--nodes N] [--slack S] [--seed K] [--emit csv,json,svg]

Exit codes: 0 all checks pass, 1 some verdict failed or was not verifiable,
2 invalid input, 3 numerical failure (solver, contour, resolvent).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass

import numpy as np

from . import serialize
from .cplane import CompactSetEstimate, polynomial_hull
from .errors import EssSpecError, HypothesisError, InputError, NumericalError, ValidationError
from .operators import build_operator, build_subspace, induce, invariance_defect, operator_doc
from .plotting import emit_svg
from .projections import contour_projection, rank_vs_fredholm_check
from .spectra import essential_spectrum, spectral_report
from .theoremlab import DEFAULT_CELL, parse_point, parse_suite, run_suite

COMMANDS = ("spectrum", "hull", "project", "induce", "verify")
FORMATS = ("csv", "json", "svg")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    input_path: str
    output_dir: str = "./out"
    emit: frozenset = frozenset(FORMATS)
    seed: int = 0
    cell_size: float = None
    nodes: int = None
    slack: float = None

    def overrides(self):
        o = {"cell_size": self.cell_size, "nodes": self.nodes, "slack": self.slack}
        return {k: v for k, v in o.items() if v is not None}


def _emit_list(text):
    items = [t.strip() for t in text.split(",") if t.strip()]
    bad = [t for t in items if t not in FORMATS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown format(s) {bad}; choose from {','.join(FORMATS)}")
    return frozenset(items)


def _positive_float(text):
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return x


def _nonneg_float(text):
    x = float(text)
    if not x >= 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {text}")
    return x


def build_parser():
    p = argparse.ArgumentParser(prog="essspec", description="Essential spectra of induced operators.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="input JSON document")
    p.add_argument("--out", default="./out", help="output directory (default ./out)")
    p.add_argument("--cell-size", type=_positive_float)
    p.add_argument("--nodes", type=int)
    p.add_argument("--slack", type=_nonneg_float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--emit", type=_emit_list, default=frozenset(FORMATS))
    return p


def parse_args(argv):
    """Parse ``argv``; usage errors exit with status 2."""
    ns = build_parser().parse_args(argv)
    return RunConfig(ns.command, ns.config, ns.out, ns.emit, ns.seed, ns.cell_size, ns.nodes, ns.slack)


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError("config", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError("config", f"invalid JSON: {exc}") from None


def _write_text(path, text):
    with open(path, "w", newline="") as fh:
        fh.write(text)


class _Writer:
    def __init__(self, cfg):
        self.cfg = cfg
        self.written = []

    def path(self, *parts):
        p = os.path.join(self.cfg.output_dir, *parts)
        os.makedirs(os.path.dirname(p), exist_ok=True)
        self.written.append(p)
        return p

    def csv(self, name, S):
        if "csv" in self.cfg.emit:
            serialize.write_points_csv(S, self.path(name))

    def json(self, name, doc):
        if "json" in self.cfg.emit:
            serialize.dump_json(doc, self.path(name))

    def svg(self, name, layers, labels, title=None):
        if "svg" in self.cfg.emit:
            emit_svg(layers, self.path(name), labels, title)


def _cmd_spectrum(doc, cfg, out):
    T = build_operator(doc.get("operator"), "operator")
    nodes = cfg.nodes or doc.get("nodes")
    cell = cfg.cell_size or doc.get("cell_size")
    rep = spectral_report(T, nodes=nodes, cell_size=cell)
    out.csv("spectrum.csv", rep.spectrum)
    out.csv("essential.csv", rep.essential)
    out.json("spectral_report.json", serialize.spectral_report_to_dict(rep, "spectrum.csv", "essential.csv"))
    out.svg("spectrum.svg", [rep.spectrum, rep.essential], ["spectrum", "essential spectrum"], T.label or None)
    return EXIT_OK


def _hull_source(doc):
    if "operator" in doc:
        return essential_spectrum(build_operator(doc["operator"], "operator"))
    if "csv" in doc:
        try:
            with open(doc["csv"]) as fh:
                return serialize.points_from_csv(fh.read(), doc.get("resolution", 0.0))
        except OSError as exc:
            raise ValidationError("csv", f"cannot read {doc['csv']}: {exc.strerror}") from None
    pts = doc.get("points")
    if not isinstance(pts, list):
        raise ValidationError("points", "expected a list of [re, im] pairs")
    try:
        z = np.array([complex(*p) if isinstance(p, list) else complex(p) for p in pts], dtype=complex)
    except (TypeError, ValueError):
        raise ValidationError("points", "expected a list of [re, im] pairs") from None
    kind = doc.get("kind", "eigenvalues" if z.size else "empty")
    res = doc.get("resolution", 0.0)
    if kind == "exact-curve" and not res:
        res = serialize._spacing(z)
    try:
        return CompactSetEstimate(z, kind, res)
    except InputError as exc:
        raise ValidationError("points", str(exc)) from None


def _cmd_hull(doc, cfg, out):
    S = _hull_source(doc)
    cell = cfg.cell_size or doc.get("cell_size", DEFAULT_CELL)
    H = polynomial_hull(S, cell, doc.get("margin"))
    out.csv("points.csv", S)
    out.json("hull.json", serialize.hull_to_dict(H))
    out.svg("hull.svg", [S, H], ["set", "polynomial hull"])
    return EXIT_OK


def _cmd_project(doc, cfg, out):
    T = build_operator(doc.get("operator"), "operator")
    if "lambda" not in doc:
        raise ValidationError("lambda", "missing")
    lam = parse_point(doc["lambda"], "lambda")
    nodes = cfg.nodes or doc.get("nodes", 128)
    rep = contour_projection(T, lam, doc.get("radius"), nodes)
    fred = rank_vs_fredholm_check(T, lam, rep.radius, nodes)
    report = dict(rep.to_dict(), matrix_csv="projection.csv",
                  multiplicity=fred.multiplicity, dimension_drop=fred.dimension_drop,
                  consistent=fred.consistent)
    out.json("projection.json", report)
    if "csv" in cfg.emit:
        _write_text(out.path("projection.csv"), serialize.matrix_to_csv(rep.matrix))
    return EXIT_OK


def _cmd_induce(doc, cfg, out):
    T = build_operator(doc.get("operator"), "operator")
    F = build_subspace(doc.get("subspace"), "subspace")
    tol = doc.get("tol", 1e-10)
    pair = induce(T, F, tol)
    out.json("induced.json", {
        "restriction": operator_doc(pair.restriction),
        "quotient": operator_doc(pair.quotient),
        "invariance_defect": invariance_defect(T, F),
    })
    return EXIT_OK


def _slug(text):
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", text).strip("_") or "case"


FIGURE_LAYERS = {
    "theorem1": [("essential", "sigma_e(T)"), ("hull", "hull of sigma_e(T)"),
                 ("essential_restriction", "sigma_e(T|F)"), ("essential_quotient", "sigma_e(T/F)")],
    "obs_ii": [("spectrum", "sigma(T)"), ("hull", "hull of sigma(T)"),
               ("spectrum_restriction", "sigma(T|F)"), ("spectrum_quotient", "sigma(T/F)")],
    "obs_i": [("spectrum", "sigma(T)"), ("hull", "hull of sigma(T)")],
}


def _cmd_verify(doc, cfg, out):
    cases = parse_suite(doc, cfg.overrides(), cfg.seed)
    summary = run_suite(cases, cfg.seed)
    by_case = {}
    for entry in summary.entries:
        by_case.setdefault(entry.case_index, []).append(entry)
    for idx, case in enumerate(cases):
        folder = f"{idx:03d}_{_slug(case.label)}"
        for entry in by_case.get(idx, []):
            if entry.report is None:
                continue
            rep = entry.report
            out.json(os.path.join(folder, f"{entry.statement}.json"), rep.to_dict())
            for key, val in rep.artifacts.items():
                if key == "hull":
                    out.json(os.path.join(folder, f"{entry.statement}_hull.json"), serialize.hull_to_dict(val))
                else:
                    out.csv(os.path.join(folder, f"{entry.statement}_{key}.csv"), val)
            spec = FIGURE_LAYERS.get(entry.statement)
            if spec and rep.artifacts:
                layers = [(rep.artifacts[k], lbl) for k, lbl in spec if k in rep.artifacts]
                out.svg(os.path.join(folder, f"{entry.statement}.svg"),
                        [l for l, _ in layers], [lbl for _, lbl in layers], f"{case.label}: {entry.statement}")
    serialize.dump_json(summary.to_dict(timings=False), out.path("summary.json"))
    serialize.dump_json({"entries": [{"case": e.case, "statement": e.statement, "seconds": e.seconds}
                                     for e in summary.entries]}, out.path("timings.json"))
    for e in summary.entries:
        if e.status != "pass":
            print(f"{e.status}: {e.case} {e.statement} {e.message}".rstrip(), file=sys.stderr)
    return EXIT_FAIL if summary.failed else EXIT_OK


HANDLERS = {
    "spectrum": _cmd_spectrum,
    "hull": _cmd_hull,
    "project": _cmd_project,
    "induce": _cmd_induce,
    "verify": _cmd_verify,
}


def execute(cfg):
    """Run one command; returns the process exit code."""
    try:
        doc = _load(cfg.input_path)
        if not isinstance(doc, dict):
            raise ValidationError("config", "top level must be an object")
        os.makedirs(cfg.output_dir, exist_ok=True)
        return HANDLERS[cfg.command](doc, cfg, _Writer(cfg))
    except (InputError, HypothesisError) as exc:
        print(f"essspec: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"essspec: numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except EssSpecError as exc:  # pragma: no cover - every subclass is handled above
        print(f"essspec: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"essspec: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None):
    cfg = parse_args(sys.argv[1:] if argv is None else argv)
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())
