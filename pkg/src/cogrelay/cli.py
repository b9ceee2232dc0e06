"""Command-line front end.

Subcommands: solve (one policy problem, JSON result on stdout), simulate
(one slot-simulation run, JSON report), sweep (a declarative sweep from a
JSON config file, CSV output) and reproduce (the canned experiments, CSV
output).

Exit codes: 0 on success, 2 when a solve is infeasible, 1 on usage or
validation errors.  Output files are written atomically.  The default output
directory is $COGRELAY_OUT_DIR, falling back to the working directory.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .model import DelayBound, ModelError, NetworkParams, Policy, config_warnings
from .optimize import SearchConfig, solve_max_throughput, solve_min_delay, solve_unconstrained
from .sim import SimConfig, run
from .sweeps import (
    FIGURES,
    SimAttach,
    SweepPlan,
    figure_rows,
    frange,
    run_sweep,
    write_rows,
)

PROBLEMS = ("p1", "p3", "bl-throughput", "bl-delay")


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; 2 is reserved for
    # infeasible results here, so remap usage errors to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _out_dir(explicit: str | None) -> str:
    return explicit or os.environ.get("COGRELAY_OUT_DIR") or "."


def _net_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lp", type=float, required=True, help="PU arrival probability per slot")
    p.add_argument("--ls", type=float, required=True, help="SU arrival probability per slot")
    p.add_argument("--hpd", type=float, required=True, help="PU-to-destination success probability")
    p.add_argument("--hps", type=float, required=True, help="PU-to-SU success probability")
    p.add_argument("--hsd", type=float, required=True, help="SU-to-destination success probability")


def _params_from(args) -> NetworkParams:
    params = NetworkParams(
        lambda_p=args.lp, lambda_s=args.ls, h_pd=args.hpd, h_ps=args.hps, h_sd=args.hsd
    )
    for note in config_warnings(params):
        print(f"warning: {note}", file=sys.stderr)
    return params


def _finite_or_none(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def _cmd_solve(args) -> int:
    params = _params_from(args)
    cfg = SearchConfig(delta=args.delta)
    if args.problem in ("p1", "p3"):
        if args.psi is None:
            raise ValueError(f"--psi is required for --problem {args.problem}")
        bound = DelayBound(args.psi)
        res = (solve_max_throughput if args.problem == "p1" else solve_min_delay)(
            params, bound, cfg
        )
    else:
        objective = "throughput" if args.problem == "bl-throughput" else "delay"
        res = solve_unconstrained(params, objective, cfg)

    doc = {"problem": args.problem, "psi": _finite_or_none(args.psi), "status": res.status}
    if res.feasible:
        doc.update(
            a=res.policy.admit,
            b=res.policy.pick_own,
            mu_p=res.mu_p_star,
            objective=_finite_or_none(res.objective),
            metrics={
                "n_p": _finite_or_none(res.metrics.n_p),
                "n_sp": _finite_or_none(res.metrics.n_sp),
                "n_s": _finite_or_none(res.metrics.n_s),
                "d_p": _finite_or_none(res.metrics.d_p),
                "d_s": _finite_or_none(res.metrics.d_s),
            },
        )
    print(json.dumps(doc, indent=2))
    return 0 if res.feasible else 2


def _cmd_simulate(args) -> int:
    params = _params_from(args)
    policy = Policy(admit=args.a, pick_own=args.b)
    cfg = SimConfig(params, policy, horizon=args.slots, warmup=args.warmup, seed=args.seed)
    print(run(cfg).to_json())
    return 0


def _cmd_reproduce(args) -> int:
    rows = figure_rows(args.figure, slots=args.slots, seed=args.seed)
    path = os.path.join(_out_dir(args.out_dir), f"{args.figure}.csv")
    write_rows(rows, path)
    print(f"wrote {path} ({len(rows)} rows)")
    return 0


def _require_keys(doc: dict, what: str, required: set[str], optional: set[str] = frozenset()):
    if not isinstance(doc, dict):
        raise ValueError(f"{what} must be a JSON object")
    unknown = set(doc) - required - optional
    if unknown:
        raise ValueError(f"unknown {what} keys: {sorted(unknown)}")
    missing = required - set(doc)
    if missing:
        raise ValueError(f"missing {what} keys: {sorted(missing)}")


def _parse_run_config(doc) -> tuple[SweepPlan, str | None]:
    _require_keys(
        doc, "config", {"op", "params", "psi", "grid"}, {"baseline", "sim", "delta", "out"}
    )
    _require_keys(doc["params"], "params", {"lambda_p", "lambda_s", "h_pd", "h_ps", "h_sd"})
    params = NetworkParams(**{k: float(v) for k, v in doc["params"].items()})

    psi = doc["psi"]
    if not (isinstance(psi, list) and psi and all(isinstance(p, (int, float)) for p in psi)):
        raise ValueError("psi must be a non-empty list of numbers")

    grid = doc["grid"]
    if isinstance(grid, dict):
        _require_keys(grid, "grid", {"start", "stop", "step"})
        values = frange(float(grid["start"]), float(grid["stop"]), float(grid["step"]))
    elif isinstance(grid, list) and grid and all(isinstance(v, (int, float)) for v in grid):
        values = [float(v) for v in grid]
    else:
        raise ValueError("grid must be a list of numbers or {start, stop, step}")

    sim = None
    if "sim" in doc:
        _require_keys(doc["sim"], "sim", {"slots", "seed"}, {"warmup"})
        sim = SimAttach(
            slots=int(doc["sim"]["slots"]),
            seed=int(doc["sim"]["seed"]),
            warmup=int(doc["sim"]["warmup"]) if "warmup" in doc["sim"] else None,
        )

    baseline = doc.get("baseline", doc["op"] != "delay_tradeoff_pu")
    if not isinstance(baseline, bool):
        raise ValueError("baseline must be a boolean")
    search = SearchConfig(delta=float(doc["delta"])) if "delta" in doc else None
    plan = SweepPlan(
        op=doc["op"],
        params=params,
        psi_list=tuple(float(p) for p in psi),
        grid=tuple(values),
        baseline=baseline,
        sim=sim,
        search=search,
    )
    out = doc.get("out")
    if out is not None and not isinstance(out, str):
        raise ValueError("out must be a string path")
    return plan, out


def _cmd_sweep(args) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"config is not valid JSON: {exc}") from exc
    plan, cfg_out = _parse_run_config(doc)
    rows = run_sweep(plan)
    path = args.out or cfg_out or os.path.join(_out_dir(None), f"{plan.op}.csv")
    write_rows(rows, path)
    print(f"wrote {path} ({len(rows)} rows)")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="cogrelay", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve one policy problem")
    p.add_argument("--problem", choices=PROBLEMS, required=True)
    _net_flags(p)
    p.add_argument("--psi", type=float, help="PU mean-delay bound in slots (p1/p3)")
    p.add_argument("--delta", type=float, default=1e-4, help="mu_p grid increment")
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("simulate", help="run the slot simulator once")
    _net_flags(p)
    p.add_argument("--a", type=float, required=True, help="admission probability")
    p.add_argument("--b", type=float, required=True, help="own-queue pick probability")
    p.add_argument("--slots", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--warmup", type=int, default=None, help="slots excluded from statistics")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("sweep", help="run a sweep described by a JSON config")
    p.add_argument("--config", required=True, help="path to the run config")
    p.add_argument("--out", help="output CSV path (overrides the config)")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("reproduce", help="run a canned experiment and write its CSV")
    p.add_argument("--figure", choices=list(FIGURES), required=True)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--slots", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ModelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
