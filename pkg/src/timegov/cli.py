"""Command line: ``run``, ``compare`` and ``verify``.

Exit codes: 0 success, 1 error (message on stderr), 2 run finished
without reaching the end of the path.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from .errors import DomainError, NumericError, ScenarioError, SetupError
from .scenario import Scenario, load_scenario
from .simulator import Metrics, SimLog, run
from .svg import render_scene

EXIT_OK, EXIT_ERROR, EXIT_INCOMPLETE = 0, 1, 2
SUMMARY_COLUMNS = ("travel_time", "mean_err", "max_err", "min_clearance")
PREDICTORS = ("lyapunov", "vandermonde")


@dataclass(frozen=True)
class Cell:
    order: int
    predictor: str
    velocity_feedback: bool

    @property
    def id(self) -> str:
        fb = "posvel" if self.velocity_feedback else "pos"
        return f"n{self.order}-{self.predictor}-{fb}"

    def apply(self, scenario: Scenario) -> Scenario:
        return scenario.variant(order=self.order, predictor=self.predictor,
                                velocity_feedback=self.velocity_feedback)


def matrix_cells(orders) -> list[Cell]:
    """{order} x {predictor} x {feedback}; Vandermonde is skipped for n = 1."""
    return [Cell(n, p, vf) for n in orders for p in PREDICTORS for vf in (False, True)
            if not (p == "vandermonde" and n < 2)]


def write_outputs(scenario: Scenario, log: SimLog, metrics: Metrics, out: Path,
                  seed: int = 0) -> None:
    out.mkdir(parents=True, exist_ok=True)
    log.to_csv(out / "trajectory.csv")
    doc = asdict(metrics)
    doc.update(scenario=scenario.name, order=scenario.order, predictor=scenario.predictor,
               velocity_feedback=scenario.velocity_feedback, dt=scenario.sim.dt, seed=seed)
    (out / "metrics.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    (out / "scene.svg").write_text(render_scene(scenario.environment(), scenario.compile(False).path, log))


def run_scenario(scenario: Scenario, out: Path | None = None, seed: int = 0):
    log, metrics = run(scenario.compile(check=False))
    if out is not None:
        write_outputs(scenario, log, metrics, out, seed)
    return log, metrics


def _run_cell(args):
    scenario, cell, out, seed = args
    _, metrics = run_scenario(cell.apply(scenario), out, seed)
    return cell, metrics


def _error(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_ERROR


def cmd_run(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.dt is not None:
        scenario = scenario.variant(dt=args.dt)
    _, metrics = run_scenario(scenario, Path(args.out), args.seed)
    status = "completed" if metrics.completed else "not completed"
    print(f"{scenario.name}: {status}, travel_time={metrics.travel_time}")
    return EXIT_OK if metrics.completed else EXIT_INCOMPLETE


def cmd_compare(args) -> int:
    try:
        orders = [int(v) for v in args.orders.split(",") if v.strip()]
    except ValueError:
        return _error(f"--orders must be a comma separated list of integers, got {args.orders!r}")
    if not orders or min(orders) < 1:
        return _error("--orders needs at least one positive order")
    scenario = load_scenario(args.scenario, check=False)
    if args.dt is not None:
        scenario = scenario.variant(dt=args.dt)
    cells = matrix_cells(orders)
    for cell in cells:  # every cell must pass its safety precheck before anything runs
        try:
            cell.apply(scenario).compile(check=True)
        except (ScenarioError, SetupError, DomainError, NumericError) as exc:
            return _error(f"cell {cell.id}: {exc}")

    out = Path(args.out)
    jobs = [(scenario, c, out / c.id, args.seed) for c in cells]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_cell, jobs))
    else:
        results = [_run_cell(j) for j in jobs]

    out.mkdir(parents=True, exist_ok=True)
    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("cell", "order", "predictor", "velocity_feedback", *SUMMARY_COLUMNS, "completed"))
        for cell, m in results:
            w.writerow((cell.id, cell.order, cell.predictor, int(cell.velocity_feedback),
                        m.travel_time if m.travel_time is not None else "",
                        f"{m.mean_path_error:.17g}", f"{m.max_path_error:.17g}",
                        f"{m.min_clearance:.17g}", int(m.completed)))
            print(f"{cell.id:26s} travel_time={m.travel_time} mean_err={m.mean_path_error:.4f} "
                  f"min_clearance={m.min_clearance:.4f}")
    return EXIT_OK if all(m.completed for _, m in results) else EXIT_INCOMPLETE


def cmd_verify(args) -> int:
    from .verify import run_all  # scipy is only needed here

    results = run_all(trials=args.trials, seed=args.seed)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="timegov", description="Safe path following with time governors.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate one scenario")
    p.add_argument("scenario", help="scenario file or built-in name (corridor, office)")
    p.add_argument("--out", required=True)
    p.add_argument("--dt", type=float)
    p.add_argument("--seed", type=int, default=0, help="recorded in metrics.json; runs are deterministic")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="run the predictor x feedback matrix")
    p.add_argument("scenario")
    p.add_argument("--out", required=True)
    p.add_argument("--orders", default="2,3")
    p.add_argument("--dt", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="cells to run concurrently")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="run the independent oracles")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", 0) < 0:
        return _error("--seed must be non-negative")
    try:
        return args.func(args)
    except (ScenarioError, SetupError, DomainError, NumericError, FileNotFoundError, OSError) as exc:
        return _error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
