"""Parameter sweeps over the arrival rates, with optional simulation attach.

Each sweep solves one policy problem per grid point and per delay bound,
emits one :class:`SweepRow` per (bound, point), and can validate feasible
rows against the slot simulator.  Rows serialize to a fixed-column CSV, the
interchange format consumed by the figure renderer:

    swept,psi,status,a,b,mu_p,objective,d_p_analytic,d_s_analytic,mu_s_analytic,d_p_sim,d_s_sim,thr_sim,seed

Unconstrained-baseline rows carry psi = inf (written as "inf").  Fields that
do not apply (no simulation attached, infeasible point, undefined metric)
are left empty.  A baseline row whose queue split is pinned at the relay
stability edge reports d_p_analytic as "inf": its PU delay is unbounded in
the limit the optimizer approaches.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass, replace

from .model import DelayBound, NetworkParams
from .optimize import (
    OptResult,
    SearchConfig,
    solve_max_throughput,
    solve_min_delay,
    solve_unconstrained,
)
from .sim import SimConfig, run

CSV_COLUMNS = (
    "swept",
    "psi",
    "status",
    "a",
    "b",
    "mu_p",
    "objective",
    "d_p_analytic",
    "d_s_analytic",
    "mu_s_analytic",
    "d_p_sim",
    "d_s_sim",
    "thr_sim",
    "seed",
)


@dataclass(frozen=True)
class SimAttach:
    """How to validate feasible rows empirically.  Row i uses seed + i."""

    slots: int = 100_000
    seed: int = 0
    warmup: int | None = None


@dataclass(frozen=True)
class SweepRow:
    swept: float
    psi: float
    status: str
    a: float | None = None
    b: float | None = None
    mu_p: float | None = None
    objective: float | None = None
    d_p_analytic: float | None = None
    d_s_analytic: float | None = None
    mu_s_analytic: float | None = None
    d_p_sim: float | None = None
    d_s_sim: float | None = None
    thr_sim: float | None = None
    seed: int | None = None


@dataclass(frozen=True)
class SweepPlan:
    """Declarative form of one sweep, as parsed from a run config."""

    op: str  # one of the four sweep operations below
    params: NetworkParams
    psi_list: tuple[float, ...]
    grid: tuple[float, ...]
    baseline: bool = True
    sim: SimAttach | None = None
    search: SearchConfig | None = None


def frange(start: float, stop: float, step: float) -> list[float]:
    """Inclusive arithmetic grid with float noise rounded away."""
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    if not 0.0 <= start <= stop <= 1.0:
        raise ValueError(f"range [{start}, {stop}] must sit inside [0, 1]")
    out = []
    k = 0
    while True:
        v = round(start + k * step, 12)
        if v > stop + step * 1e-9:
            return out
        out.append(v)
        k += 1


def _solve(params: NetworkParams, psi: float, kind: str, cfg: SearchConfig | None) -> OptResult:
    if math.isinf(psi):
        return solve_unconstrained(params, kind, cfg)
    if kind == "delay":
        return solve_min_delay(params, DelayBound(psi), cfg)
    return solve_max_throughput(params, DelayBound(psi), cfg)


def _row(
    swept: float,
    psi: float,
    params: NetworkParams,
    kind: str,
    sim: SimAttach | None,
    index: int,
    cfg: SearchConfig | None,
) -> SweepRow:
    res = _solve(params, psi, kind, cfg)
    if not res.feasible:
        return SweepRow(swept=swept, psi=psi, status="infeasible")
    m = res.metrics
    baseline = math.isinf(psi)
    # Baseline optima pinned below pick_own = 1 sit at the relay stability
    # edge, where the PU delay grows without bound; report the limit.
    edge_pinned = baseline and res.policy.pick_own < 1.0 - 1e-12
    d_p = math.inf if edge_pinned else m.d_p
    mu_p = res.mu_p_star
    mu_s = res.policy.pick_own * params.h_sd * (1.0 - params.lambda_p / mu_p)
    row = SweepRow(
        swept=swept,
        psi=psi,
        status="feasible",
        a=res.policy.admit,
        b=res.policy.pick_own,
        mu_p=mu_p,
        objective=res.objective,
        d_p_analytic=d_p,
        d_s_analytic=m.d_s,
        mu_s_analytic=mu_s,
    )
    if sim is None:
        return row
    seed = sim.seed + index
    rep = run(SimConfig(params, res.policy, sim.slots, sim.warmup, seed))
    return replace(
        row,
        # The empirical PU delay is meaningless for an edge-pinned baseline
        # (the relay queue never reaches steady state); leave it out.
        d_p_sim=None if edge_pinned else rep.pu_delay_mean,
        d_s_sim=rep.su_delay_mean,
        thr_sim=rep.su_throughput,
        seed=seed,
    )


def _sweep(
    params_base: NetworkParams,
    psi_list,
    grid,
    swept_field: str,
    kind: str,
    baseline: bool,
    sim: SimAttach | None,
    cfg: SearchConfig | None,
) -> list[SweepRow]:
    psis = [float(p) for p in psi_list]
    if baseline:
        psis.append(math.inf)
    for p in psis:
        if not p > 0.0:
            raise ValueError(f"delay bounds must be positive, got {p}")
    rows: list[SweepRow] = []
    for psi in psis:
        for v in grid:
            params = replace(params_base, **{swept_field: float(v)})
            rows.append(_row(float(v), psi, params, kind, sim, len(rows), cfg))
    return rows


def throughput_region(
    params_base: NetworkParams,
    psi_list,
    grid,
    baseline: bool = True,
    cfg: SearchConfig | None = None,
) -> list[SweepRow]:
    """Boundary of the supportable SU load versus lambda_p.

    Each row's objective is the largest stable lambda_s at that lambda_p
    (it does not depend on params_base.lambda_s).  Tighter delay bounds can
    only shrink the region; the baseline rows bound it from above.
    """
    return _sweep(params_base, psi_list, grid, "lambda_p", "throughput", baseline, None, cfg)


def delay_tradeoff_su(
    params_base: NetworkParams,
    psi_list,
    lambda_s_grid,
    baseline: bool = True,
    sim: SimAttach | None = None,
    cfg: SearchConfig | None = None,
) -> list[SweepRow]:
    """Best mean SU delay versus the SU's own load, at fixed lambda_p."""
    return _sweep(params_base, psi_list, lambda_s_grid, "lambda_s", "delay", baseline, sim, cfg)


def pu_delay_check(
    params_base: NetworkParams,
    psi_list,
    lambda_s_grid,
    baseline: bool = True,
    sim: SimAttach | None = None,
    cfg: SearchConfig | None = None,
) -> list[SweepRow]:
    """Same sweep as delay_tradeoff_su, read for its d_p columns.

    On every feasible bounded row the analytic PU delay must sit exactly at
    the bound (the optimizer trades all available slack for SU service), and
    it must not vary with lambda_s.
    """
    return _sweep(params_base, psi_list, lambda_s_grid, "lambda_s", "delay", baseline, sim, cfg)


def delay_tradeoff_pu(
    params_base: NetworkParams,
    psi_list,
    lambda_p_grid,
    sim: SimAttach | None = None,
    cfg: SearchConfig | None = None,
) -> list[SweepRow]:
    """PU delay at the optimum versus lambda_p, at fixed lambda_s.

    Feasible rows end at a bound-dependent cutoff; past it the policy cannot
    meet the bound and keep all queues stable, and rows are infeasible.
    """
    return _sweep(params_base, psi_list, lambda_p_grid, "lambda_p", "delay", False, sim, cfg)


def run_sweep(plan: SweepPlan) -> list[SweepRow]:
    if plan.op == "throughput_region":
        return throughput_region(plan.params, plan.psi_list, plan.grid, plan.baseline, plan.search)
    if plan.op == "delay_tradeoff_su":
        return delay_tradeoff_su(plan.params, plan.psi_list, plan.grid, plan.baseline, plan.sim, plan.search)
    if plan.op == "pu_delay_check":
        return pu_delay_check(plan.params, plan.psi_list, plan.grid, plan.baseline, plan.sim, plan.search)
    if plan.op == "delay_tradeoff_pu":
        if plan.baseline:
            raise ValueError("delay_tradeoff_pu does not take baseline rows")
        return delay_tradeoff_pu(plan.params, plan.psi_list, plan.grid, plan.sim, plan.search)
    raise ValueError(f"unknown sweep op {plan.op!r}")


# ---------------------------------------------------------------- CSV


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        if math.isnan(v):
            return ""
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.6g}"
    return str(v)


def rows_to_csv(rows: list[SweepRow]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in rows:
        lines.append(",".join(_fmt(getattr(r, c)) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def write_rows(rows: list[SweepRow], path: str) -> None:
    """Write the CSV atomically (temp file in the target dir, then rename)."""
    text = rows_to_csv(rows)
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ------------------------------------------------- canned experiment presets

# Default operating point for the canned experiments: moderately loaded PU,
# relay link twice as good as the direct link.
PRESET_PARAMS = NetworkParams(lambda_p=0.2, lambda_s=0.2, h_pd=0.3, h_ps=0.4, h_sd=0.8)
PRESET_PSIS = (20.0, 10.0)

FIGURES = ("fig2", "fig3", "fig4", "fig5")


def figure_rows(figure: str, slots: int = 100_000, seed: int = 0) -> list[SweepRow]:
    """Rows behind one canned experiment.

    fig2: supportable-load region boundary over lambda_p (analytic only).
    fig3: SU delay versus lambda_s at lambda_p = 0.2, with simulation.
    fig4: PU delay versus lambda_s (bound activity check), with simulation.
    fig5: PU delay versus lambda_p at lambda_s = 0.2, with simulation.
    """
    base = PRESET_PARAMS
    sim = SimAttach(slots=slots, seed=seed)
    if figure == "fig2":
        return throughput_region(base, PRESET_PSIS, frange(0.0, 0.44, 0.01))
    if figure == "fig3":
        return delay_tradeoff_su(base, PRESET_PSIS, frange(0.02, 0.40, 0.02), sim=sim)
    if figure == "fig4":
        return pu_delay_check(base, PRESET_PSIS, frange(0.05, 0.35, 0.05), sim=sim)
    if figure == "fig5":
        return delay_tradeoff_pu(base, PRESET_PSIS, frange(0.01, 0.32, 0.01), sim=sim)
    raise ValueError(f"unknown figure {figure!r}; expected one of {FIGURES}")
