#!/usr/bin/env python3
"""
Command-line interface: solve, sweep, onset, verify
"""

import os
import sys
import json
import argparse
import dataclasses
from typing import List, Literal, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from config import configure_logging, get_settings, Settings
from diagram import find_segment_onset, interior_families, sweep
from errors import ElasticaError
from shooting import MODE_CHOICES, OptimalShape, ShapeSolver, check_bounds, stadium, stadium_half_rectangle
from special_functions import rho_constant
from svg import diagram_svg, shape_svg, write_svg
from verify import GROUPS, print_results, run_verify

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARTIAL = 2
MIN_TOLERANCE = float(np.finfo(float).eps) * 1e3


class RunConfig(BaseModel):
    """Validated command-line options"""
    command: Literal["solve", "sweep", "onset", "verify"]
    mu: Optional[float] = Field(default=None, gt=0)
    mu_min: Optional[float] = Field(default=None, gt=0)
    mu_max: Optional[float] = Field(default=None, gt=0)
    steps: int = Field(default=60, ge=2)
    q: int = Field(default=1, ge=1, le=2)
    mode: Literal["auto", "strict", "segments", "disk"] = "auto"
    tol: Optional[float] = None
    grid: Optional[int] = Field(default=None, ge=64)
    out: str = "."
    svg: Optional[str] = None
    json_path: Optional[str] = None
    only: List[str] = Field(default_factory=list)
    onset: bool = False
    lo: float = 3.0
    hi: float = 4.0
    width: float = Field(default=1e-3, gt=0)

    @field_validator("tol")
    @classmethod
    def tolerance_not_below_rounding(cls, v):
        if v is not None and v < MIN_TOLERANCE:
            raise ValueError(f"--tol must be at least {MIN_TOLERANCE:.2e}")
        return v

    @field_validator("only")
    @classmethod
    def known_groups(cls, v):
        unknown = [g for g in v if g not in GROUPS]
        if unknown:
            raise ValueError(f"unknown verify groups {unknown}; choose from {sorted(GROUPS)}")
        return v

    @model_validator(mode="after")
    def check_command(self):
        if self.command == "solve" and self.mu is None:
            raise ValueError("solve needs --mu")
        if self.command == "sweep":
            if self.mu_min is None or self.mu_max is None:
                raise ValueError("sweep needs --mu-min and --mu-max")
            if self.mu_min >= self.mu_max:
                raise ValueError("--mu-min must be below --mu-max")
        if self.command in ("solve", "sweep"):
            os.makedirs(self.out, exist_ok=True)
            if not os.access(self.out, os.W_OK):
                raise ValueError(f"output directory {self.out} is not writable")
        return self

    def settings(self) -> Settings:
        base = get_settings()
        changes = {}
        if self.tol is not None:
            changes["tolerance"] = self.tol
        if self.grid is not None:
            changes["grid"] = self.grid
        return dataclasses.replace(base, **changes)

    def output(self, name: str) -> str:
        return os.path.join(self.out, name)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Optimal convex shapes for elastic energy plus area")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("--q", type=int, default=1, help="number of arcs is 2q")
        p.add_argument("--mode", choices=MODE_CHOICES, default="auto")
        p.add_argument("--tol", type=float, help="shooting residual tolerance")
        p.add_argument("--grid", type=int, help="boundary samples per shape")
        p.add_argument("--out", default=".", help="output directory")

    p_solve = sub.add_parser("solve", help="optimal shape at one mu")
    p_solve.add_argument("--mu", type=float, required=True)
    common(p_solve)
    p_solve.add_argument("--svg", nargs="?", const="shape.svg", help="also write an SVG")
    p_solve.add_argument("--json", dest="json_path", nargs="?", const="shape.json",
                         help="also write the full parameter record")

    p_sweep = sub.add_parser("sweep", help="diagram boundary over a mu range")
    p_sweep.add_argument("--mu-min", type=float, required=True)
    p_sweep.add_argument("--mu-max", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, default=60)
    common(p_sweep)
    p_sweep.add_argument("--svg", nargs="?", const="diagram.svg", help="also write an SVG")

    p_onset = sub.add_parser("onset", help="mu at which segments appear")
    p_onset.add_argument("--lo", type=float, default=3.0)
    p_onset.add_argument("--hi", type=float, default=4.0)
    p_onset.add_argument("--width", type=float, default=1e-3)
    p_onset.add_argument("--q", type=int, default=1)

    p_verify = sub.add_parser("verify", help="run the invariant suite")
    p_verify.add_argument("--only", default="", help="comma-separated groups: " + ", ".join(GROUPS))
    p_verify.add_argument("--onset", action="store_true", help="only the onset bisection")
    return parser


def parse_config(argv: Optional[List[str]] = None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    if isinstance(args.get("only"), str):
        args["only"] = [g.strip() for g in args["only"].split(",") if g.strip()]
    return RunConfig(**{k: v for k, v in args.items() if v is not None})


def shape_frame(shape: OptimalShape) -> pd.DataFrame:
    return pd.DataFrame({
        "s": shape.tf.grid,
        "theta": shape.tf.theta,
        "k": shape.curvature,
        "x": shape.poly.vertices[:, 0],
        "y": shape.poly.vertices[:, 1],
    })


def summary_line(shape: OptimalShape) -> str:
    L = f"{shape.L:.10g}" if shape.L is not None else "-"
    return (f"mu={shape.mu:g} mode={shape.mode.value} k_M={shape.k_M:.10g} lambda={shape.lam:.10g} "
            f"A={shape.f.area:.10g} E={shape.f.energy:.10g} objective={shape.objective:.10g} "
            f"L={L} x={shape.diagram.x:.10g} y={shape.diagram.y:.10g} residual={shape.residual_norm:.2e}")


def cmd_solve(cfg: RunConfig) -> int:
    solver = ShapeSolver(cfg.settings())
    try:
        shape = solver.solve(cfg.mu, cfg.q, cfg.mode)
    except ElasticaError as e:
        detail = e.to_dict() if hasattr(e, "to_dict") else {"error": str(e)}
        print(f"✗ solve failed: {json.dumps(detail)}", file=sys.stderr)
        return EXIT_FAILURE
    finally:
        solver.cache.save()

    path = cfg.output("shape.csv")
    shape_frame(shape).to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    print("=" * 50)
    print(f"Optimal shape at mu={cfg.mu:g}")
    print("=" * 50)
    print(summary_line(shape))

    report = check_bounds(shape)
    for check in report.checks:
        if check.applicable:
            print(f"  {'✓' if check.passed else '✗'} {check.description}")
    if cfg.mu >= 1.0:
        print(f"  stadium objective 3 pi sqrt(mu) - pi = {stadium(cfg.mu):.10g}")
    print(f"  stadium objective of radius 1/2 = {stadium_half_rectangle(cfg.mu):.10g}")
    if cfg.svg:
        write_svg(cfg.output(cfg.svg), shape_svg(shape))
    if cfg.json_path:
        with open(cfg.output(cfg.json_path), "w") as f:
            json.dump(shape.to_record(), f, indent=2)
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_sweep(cfg: RunConfig) -> int:
    table = sweep(cfg.mu_min, cfg.mu_max, cfg.steps, q=cfg.q, mode=cfg.mode, settings=cfg.settings())
    table.to_csv(cfg.output("diagram.csv"))

    print("=" * 50)
    print(f"Sweep mu in [{cfg.mu_min:g}, {cfg.mu_max:g}], {cfg.steps} rows")
    print("=" * 50)
    for row in table.rows:
        mark = "✓" if row.converged and row.bounds_passed else "✗"
        print(f"  {mark} mu={row.mu:<12.6g} {row.mode:<9} x={row.x:.8f} y={row.y:.8f} {row.message}")

    if cfg.svg:
        families = interior_families(6, 40, cross_check=False)
        write_svg(cfg.output(cfg.svg), diagram_svg(table, families, rho_constant()))

    if table.failures:
        print(f"\n✗ {len(table.failures)} rows did not converge", file=sys.stderr)
        return EXIT_PARTIAL
    if not all(r.bounds_passed for r in table.rows):
        return EXIT_FAILURE
    return EXIT_OK


def cmd_onset(cfg: RunConfig) -> int:
    try:
        onset = find_segment_onset(cfg.lo, cfg.hi, cfg.width, q=cfg.q)
    except ElasticaError as e:
        print(f"✗ onset failed: {e}", file=sys.stderr)
        return EXIT_FAILURE
    print(f"segment onset mu* = {onset:.6f}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    groups = ["onset"] if cfg.onset else cfg.only
    results = run_verify(groups or None)
    return EXIT_OK if print_results(results) else EXIT_FAILURE


COMMANDS = {"solve": cmd_solve, "sweep": cmd_sweep, "onset": cmd_onset, "verify": cmd_verify}


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    try:
        cfg = parse_config(argv)
    except ValidationError as e:
        print(f"✗ invalid arguments:\n{e}", file=sys.stderr)
        return EXIT_FAILURE
    return COMMANDS[cfg.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
