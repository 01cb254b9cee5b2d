"""Command line front end: ``confpersist <subcommand> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import io
from .complex import DEFAULT_BUDGET, build_independence_filtration, delta_check
from .covering import build_config_rips
from .errors import ConfPersistError, GuardViolated
from .metric import FiniteMetricSpace, sample_circle, shortest_path_metric
from .obstruction import obstruction_report
from .packing import max_packing_radius
from .persistence import compute_persistence
from .regular import DEFAULT_RANK_TOL, is_affine_kr_regular, is_kr_regular

SUBCOMMANDS = ("build", "persist", "obstruct", "verify-regular", "pack", "delta-check")


@dataclass
class RunConfig:
    subcommand: str
    input: str | None = None
    metric: str = "matrix"
    n: int | None = None
    length: float = 1.0
    k: int = 2
    r: float = 0.0
    delta: float | None = None
    r_grid: list[float] = field(default_factory=lambda: [0.0])
    k_max: int = 2
    max_dim: int = 1
    t_max: int = 2
    tol: float = DEFAULT_RANK_TOL
    budget: int = DEFAULT_BUDGET
    out: str = "."
    seed: int = 0
    map: str | None = None
    field: str = "real"
    mode: str = "exact"

    def validate(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand}")
        for name in ("k", "k_max", "t_max", "budget"):
            if getattr(self, name) < 1:
                raise ValueError(f"--{name.replace('_', '-')} must be positive")
        if self.r < 0 or any(x < 0 for x in self.r_grid):
            raise ValueError("radii must be nonnegative")
        if not self.tol > 0:
            raise ValueError("--tol must be positive")
        if self.subcommand == "obstruct":
            if self.delta is None or not self.delta > 0:
                raise ValueError("obstruct needs a positive --delta")
            if self.r_grid and self.delta > self.r + min(self.r_grid):
                raise GuardViolated(f"--delta {self.delta} exceeds the smallest radius {self.r + min(self.r_grid)}")
        if self.subcommand == "verify-regular" and not self.map:
            raise ValueError("verify-regular needs --map")

    def hash_payload(self) -> dict:
        payload = asdict(self)
        payload.pop("out")
        for key in ("input", "map"):
            if payload[key]:
                payload[key + "_sha256"] = io.file_digest(payload[key])
                payload[key] = Path(payload[key]).name
        return payload


def load_metric(cfg: RunConfig) -> FiniteMetricSpace:
    if cfg.metric == "circle":
        if not cfg.n:
            raise ValueError("--metric circle needs --n")
        return sample_circle(cfg.n, cfg.length)
    if not cfg.input:
        raise ValueError("--input is required for matrix and graph metrics")
    if cfg.metric == "matrix":
        return io.read_distance_csv(cfg.input)
    if cfg.metric == "graph":
        return shortest_path_metric(io.read_graph_json(cfg.input))
    raise ValueError(f"unknown metric kind {cfg.metric}")


def dispatch(cfg: RunConfig) -> tuple[int, list[Path]]:
    """Run one subcommand; returns the exit status and the files written."""
    cfg.validate()
    X = load_metric(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    chash = io.config_hash(cfg.hash_payload())
    written: list[Path] = []
    status = 0

    if cfg.subcommand == "build":
        K = build_independence_filtration(X, cfg.k_max, cfg.budget)
        written.append(io.write_jsonl(out / "complex.jsonl", "complex", chash, K.records()))

    elif cfg.subcommand == "persist":
        K = build_independence_filtration(X, cfg.k_max, cfg.budget)
        bc = compute_persistence(K, cfg.max_dim)
        written.append(io.write_json(out / "barcode.json", "barcode", chash, {"intervals": bc.as_records()}))

    elif cfg.subcommand == "obstruct":
        rep = obstruction_report(X, cfg.k, cfg.r, cfg.delta, cfg.r_grid, cfg.t_max, budget=cfg.budget)
        written.append(io.write_json(out / "report.json", "obstruction_report", chash, rep.as_dict()))
        if cfg.r_grid:
            model = build_config_rips(
                X, cfg.k, cfg.delta, [cfg.r + x for x in cfg.r_grid], max(2, cfg.t_max), cfg.budget
            )
            written.append(
                io.write_jsonl(out / "cocycle.jsonl", "covering_cocycle", chash, model.cocycle.records(X.points))
            )

    elif cfg.subcommand == "verify-regular":
        f = io.read_map_csv(cfg.map, X, cfg.field)
        verdicts = {"linear": is_kr_regular(f, cfg.k, cfg.r, cfg.tol, cfg.budget).as_dict()}
        if cfg.field == "real":
            verdicts["affine"] = is_affine_kr_regular(f, cfg.k, cfg.r, cfg.tol, cfg.budget).as_dict()
        payload = {"k": cfg.k, "r": cfg.r, "N": f.N, "field": cfg.field, **verdicts}
        written.append(io.write_json(out / "verdict.json", "regularity_verdict", chash, payload))
        status = 0 if verdicts["linear"]["passed"] else 1

    elif cfg.subcommand == "pack":
        res = max_packing_radius(X, cfg.k, cfg.mode, cfg.budget, cfg.seed)
        written.append(io.write_json(out / "packing.json", "packing_result", chash, res.as_dict()))

    elif cfg.subcommand == "delta-check":
        rep = delta_check(X, cfg.k_max)
        written.append(io.write_json(out / "delta_check.json", "delta_check", chash, rep.as_dict()))
        status = 0 if rep.ok else 1

    return status, written


def _grid(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="confpersist", description=__doc__)
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--input", help="distance CSV (matrix) or graph JSON (graph)")
    p.add_argument("--metric", choices=("matrix", "graph", "circle"), default="matrix")
    p.add_argument("--n", type=int, help="number of samples for --metric circle")
    p.add_argument("--length", type=float, default=1.0, help="circumference for --metric circle")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--r", type=float, default=0.0)
    p.add_argument("--delta", type=float)
    p.add_argument("--r-grid", type=_grid, default=[0.0], help="comma separated offsets r'")
    p.add_argument("--k-max", type=int, default=2)
    p.add_argument("--max-dim", type=int, default=1)
    p.add_argument("--t-max", type=int, default=2)
    p.add_argument("--tol", type=float, default=DEFAULT_RANK_TOL)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--out", default=".")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--map", help="map CSV for verify-regular")
    p.add_argument("--field", choices=("real", "complex"), default="real")
    p.add_argument("--mode", choices=("exact", "greedy"), default="exact")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k.replace("-", "_"): v for k, v in vars(args).items()})
    try:
        status, written = dispatch(cfg)
    except (ConfPersistError, ValueError, OSError, KeyError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "subcommand": cfg.subcommand}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return 2
    print(json.dumps({"status": status, "outputs": [str(p) for p in written]}, sort_keys=True))
    return status


if __name__ == "__main__":
    sys.exit(main())
