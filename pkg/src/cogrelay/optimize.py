"""Policy search for the cooperative cognitive-radio link.

Both optimization problems share one structure: for a fixed PU service rate
mu_p (equivalently a fixed admission probability), the best queue split
pick_own has a closed form, so the solvers reduce to a line search over a
mu_p grid.

solve_max_throughput : largest SU service rate mu_s subject to the PU delay
                       bound.  The objective does not involve lambda_s; the
                       result doubles as the boundary of the stable SU load.
solve_min_delay      : smallest mean SU delay subject to the same bound,
                       additionally requiring the SU's own queue to be stable
                       at the given lambda_s.
solve_unconstrained  : either objective with the delay bound dropped; only
                       strict queue stability (with an eps_stab margin)
                       constrains the policy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (
    DelayBound,
    NetworkParams,
    Policy,
    PrimaryUnstableError,
    QueueMetrics,
    UnstableQueueError,
    _pu_queue_lengths,
    _su_queue_length,
    pu_service_rate,
)

# Grid objectives within this distance of the incumbent are treated as ties
# and resolved toward the smaller mu_p (least relaying burden).
OBJ_TIE = 1e-9

_TIE_RULE = "smallest-mu-p"


@dataclass(frozen=True)
class SearchConfig:
    """Line-search knobs.

    delta: mu_p grid increment.  eps_stab: margin by which strict stability
    must hold for a grid point to count as usable.  tie_break: identifier of
    the deterministic tie rule (only "smallest-mu-p" is defined).
    """

    delta: float = 1e-4
    eps_stab: float = 1e-6
    tie_break: str = _TIE_RULE

    def __post_init__(self) -> None:
        if not self.delta > 0.0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if not self.eps_stab > 0.0:
            raise ValueError(f"eps_stab must be positive, got {self.eps_stab}")
        if self.tie_break != _TIE_RULE:
            raise ValueError(f"unknown tie_break rule {self.tie_break!r}")


@dataclass(frozen=True)
class OptResult:
    status: str  # "feasible" | "infeasible"
    policy: Policy | None
    objective: float | None
    mu_p_star: float | None
    metrics: QueueMetrics | None

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


_INFEASIBLE = OptResult("infeasible", None, None, None, None)


def best_pick_own(
    params: NetworkParams,
    mu_p: float,
    bound: DelayBound,
    eps_stab: float = 1e-6,
) -> float | None:
    """Largest usable pick_own at this mu_p, or None if no value works.

    With a finite bound the maximizer either saturates at 1 or sits exactly
    where the PU delay equals the bound; it is returned without any stability
    shaving, so the bound stays active.  With an infinite bound only relay
    stability constrains pick_own and the result backs off the stability
    boundary by eps_stab (in service-rate units).

    Raises PrimaryUnstableError unless lambda_p < mu_p - eps_stab, and
    ValueError for mu_p outside the achievable range.
    """
    lp, hpd, hsd = params.lambda_p, params.h_pd, params.h_sd
    hi = hpd + (1.0 - hpd) * params.h_ps
    if not (hpd - 1e-9 <= mu_p <= hi + 1e-9):
        raise ValueError(f"mu_p={mu_p} outside achievable range [{hpd}, {hi}]")
    if lp >= mu_p - eps_stab:
        raise PrimaryUnstableError(f"lambda_p={lp} too close to mu_p={mu_p}")

    if lp == 0.0:
        return 1.0  # no PU traffic: nothing to relay, no delay to bound

    gap = mu_p - lp
    rly = mu_p - hpd  # admission probability per backlogged slot
    n_p = lp * (1.0 - lp) / gap

    if math.isinf(bound.psi):
        if rly <= 0.0:
            return 1.0  # nothing is admitted, the relay queue stays empty
        cap = 1.0 - (lp * rly + eps_stab * mu_p) / (hsd * gap)
        if cap < 0.0:
            return None  # relay queue unstable even with every free slot
        return min(1.0, cap)

    slack = lp * bound.psi - n_p
    if rly <= 0.0:
        # No relaying: the PU is on its own and pick_own costs it nothing.
        return 1.0 if slack >= 0.0 else None
    if slack <= 0.0:
        return None  # the PU's own queue alone already exceeds the bound
    den0 = hsd * gap - lp * rly
    if den0 <= 0.0:
        return None  # relay queue unstable even at pick_own = 0
    num = (
        lp * lp * rly * (-hpd / mu_p - rly)
        + lp * mu_p * rly
        - slack * rly * (lp * lp - lp * mu_p)
    )
    den = (hsd / mu_p) * (mu_p * gap * gap * slack - lp * lp * rly * (1.0 - mu_p))
    if den <= 0.0:
        return None  # bound unreachable at this mu_p: even pick_own = 0 violates it
    f = 1.0 - num / den
    if f < 0.0:
        return None
    return min(1.0, f)


def _mu_grid(params: NetworkParams, delta: float) -> list[float]:
    lo = params.h_pd
    width = (1.0 - params.h_pd) * params.h_ps
    if width == 0.0:
        return [lo]
    if delta > width:
        raise ValueError(
            f"delta={delta} exceeds the mu_p interval width {width}; "
            "the grid needs at least two points"
        )
    n = int(width / delta + 1e-9)
    mus = [lo + k * delta for k in range(n + 1)]
    if (lo + width) - mus[-1] > 1e-12:
        mus.append(lo + width)
    return mus


def _metrics_at(params: NetworkParams, policy: Policy) -> QueueMetrics:
    # PU side is guaranteed stable at any policy the scan accepts; the SU's
    # own queue need not be when the objective is throughput.
    n_p, n_sp, _ = _pu_queue_lengths(params, policy)
    try:
        n_s = _su_queue_length(params, policy)
    except UnstableQueueError:
        n_s = math.nan
    d_p = (n_p + n_sp) / params.lambda_p if params.lambda_p > 0.0 else math.nan
    d_s = n_s / params.lambda_s if params.lambda_s > 0.0 else math.nan
    return QueueMetrics(n_p=n_p, n_sp=n_sp, n_s=n_s, d_p=d_p, d_s=d_s)


def _scan(
    params: NetworkParams,
    psi: float,
    kind: str,
    cfg: SearchConfig,
) -> OptResult:
    bound = DelayBound(psi)
    lo = params.h_pd
    width = (1.0 - params.h_pd) * params.h_ps
    best: tuple[float, float, float] | None = None  # (objective, mu_p, pick_own)

    for mu in _mu_grid(params, cfg.delta):
        if params.lambda_p >= mu - cfg.eps_stab:
            continue
        b = best_pick_own(params, mu, bound, cfg.eps_stab)
        if b is None:
            continue
        mu_s = b * params.h_sd * (1.0 - params.lambda_p / mu)
        if kind == "delay":
            if mu_s - params.lambda_s <= cfg.eps_stab:
                continue
            admit = _admit_for(mu, lo, width)
            obj = _su_queue_length(params, Policy(admit, b)) / params.lambda_s
            if best is None or obj < best[0] - OBJ_TIE:
                best = (obj, mu, b)
        else:
            if best is None or mu_s > best[0] + OBJ_TIE:
                best = (mu_s, mu, b)

    if best is None:
        return _INFEASIBLE
    obj, mu, b = best
    policy = Policy(_admit_for(mu, lo, width), b)
    return OptResult("feasible", policy, obj, mu, _metrics_at(params, policy))


def _admit_for(mu_p: float, lo: float, width: float) -> float:
    if width == 0.0:
        return 0.0
    return min(1.0, max(0.0, (mu_p - lo) / width))


def solve_max_throughput(
    params: NetworkParams, bound: DelayBound, cfg: SearchConfig | None = None
) -> OptResult:
    """Maximize mu_s subject to the PU delay bound (and PU-side stability)."""
    return _scan(params, bound.psi, "throughput", cfg or SearchConfig())


def solve_min_delay(
    params: NetworkParams, bound: DelayBound, cfg: SearchConfig | None = None
) -> OptResult:
    """Minimize the mean SU delay subject to the PU delay bound.

    Also enforces stability of the SU's own queue at lambda_s, with the
    eps_stab margin, so the reported delay is finite.
    """
    if params.lambda_s <= 0.0:
        raise ValueError("the delay objective needs lambda_s > 0")
    return _scan(params, bound.psi, "delay", cfg or SearchConfig())


def solve_unconstrained(
    params: NetworkParams, objective: str, cfg: SearchConfig | None = None
) -> OptResult:
    """Same objectives with no PU delay bound, only stability constraints."""
    if objective not in ("throughput", "delay"):
        raise ValueError(f"objective must be 'throughput' or 'delay', got {objective!r}")
    if objective == "delay" and params.lambda_s <= 0.0:
        raise ValueError("the delay objective needs lambda_s > 0")
    kind = "delay" if objective == "delay" else "throughput"
    return _scan(params, math.inf, kind, cfg or SearchConfig())
