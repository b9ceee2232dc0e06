"""Closed-form queueing model of a slotted channel shared by a licensed
primary transmitter (PU) and a cognitive secondary transmitter (SU) that
cooperatively relays failed PU packets.

Three queues drive the dynamics:

    Q_p    the PU's own packets,
    Q_sp   PU packets the SU captured and agreed to relay,
    Q_s    the SU's own packets.

Slot protocol: whenever Q_p is backlogged the PU transmits its head-of-line
packet.  If the destination misses it but the SU decodes it, the SU admits the
packet into Q_sp with probability ``admit`` (the PU then drops it).  In slots
the PU leaves free, the SU picks Q_s with probability ``pick_own``, otherwise
Q_sp, and transmits from the picked queue.  Picking an empty queue wastes the
slot even if the other queue is backlogged.

All functions below are pure.  Queue lengths and delays are stationary
averages and require strict stability (arrival rate < service rate) of every
queue they involve; violations raise :class:`UnstableQueueError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Formula denominators smaller than this are treated as numerically singular
# rather than being allowed to produce astronomic garbage.
DEN_EPS = 1e-12


class ModelError(ValueError):
    """Base class for domain errors raised by the analytic model."""


class UnstableQueueError(ModelError):
    """A requested stationary quantity does not exist: a queue is unstable.

    ``queue`` identifies the offender: "primary" (Q_p), "relay" (Q_sp) or
    "own" (Q_s).
    """

    def __init__(self, queue: str, detail: str = ""):
        self.queue = queue
        msg = f"queue '{queue}' is not strictly stable"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class PrimaryUnstableError(UnstableQueueError):
    def __init__(self, detail: str = ""):
        super().__init__("primary", detail)


class NearSingularError(ModelError):
    """A formula denominator fell below DEN_EPS (operating point is too close
    to a stability boundary for the closed forms to be meaningful)."""


def _check_prob(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value)):
        raise ValueError(f"{name} must be a finite number, got {value!r}")
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class NetworkParams:
    """Traffic and channel description.

    lambda_p, lambda_s: Bernoulli arrival probabilities per slot for the PU
    and SU queues.  h_pd, h_ps, h_sd: per-transmission success probabilities
    of the PU-to-destination, PU-to-SU (overhearing) and SU-to-destination
    links.
    """

    lambda_p: float
    lambda_s: float
    h_pd: float
    h_ps: float
    h_sd: float

    def __post_init__(self) -> None:
        for name in ("lambda_p", "lambda_s", "h_pd", "h_ps", "h_sd"):
            _check_prob(name, getattr(self, name))


def config_warnings(params: NetworkParams) -> list[str]:
    """Non-fatal sanity flags for configurations that are valid but pointless."""
    notes = []
    if params.h_sd <= params.h_pd:
        notes.append(
            "h_sd <= h_pd: the relay link is no better than the direct link, "
            "so cooperation cannot pay off"
        )
    return notes


@dataclass(frozen=True)
class Policy:
    """The two tunable probabilities of the cooperation policy.

    admit: probability an overheard, destination-missed PU packet is accepted
    into the relay queue.  pick_own: probability the SU picks its own queue
    (rather than the relay queue) in a PU-free slot.
    """

    admit: float
    pick_own: float

    def __post_init__(self) -> None:
        _check_prob("admit", self.admit)
        _check_prob("pick_own", self.pick_own)


@dataclass(frozen=True)
class DerivedRates:
    """Per-queue service rates and the relay-queue arrival rate.

    When the primary queue is not strictly stable the SU-side rates have no
    stationary meaning and are reported as None.
    """

    mu_p: float
    mu_s: float | None
    mu_sp: float | None
    lambda_sp: float | None


@dataclass(frozen=True)
class QueueMetrics:
    """Stationary mean queue lengths (packets) and mean delays (slots).

    d_p covers a PU packet end to end, including time spent in the relay
    queue.  Delays are NaN when the corresponding arrival rate is zero.
    """

    n_p: float
    n_sp: float
    n_s: float
    d_p: float
    d_s: float


@dataclass(frozen=True)
class DelayBound:
    """Upper bound (slots) imposed on the mean PU packet delay.

    psi may be math.inf, which turns the bound off.
    """

    psi: float

    def __post_init__(self) -> None:
        if not (isinstance(self.psi, (int, float)) and self.psi > 0):
            raise ValueError(f"psi must be positive, got {self.psi!r}")


# ---------------------------------------------------------------- rates


def pu_service_rate(params: NetworkParams, admit: float) -> float:
    """Service rate of Q_p: direct success, or SU capture that gets admitted."""
    return params.h_pd + (1.0 - params.h_pd) * params.h_ps * admit


def derived_rates(params: NetworkParams, policy: Policy) -> DerivedRates:
    """Service/arrival rates induced by the policy.

    The SU transmits only in the fraction 1 - lambda_p/mu_p of slots the PU
    leaves free, and splits them pick_own / (1 - pick_own) between its two
    queues.  The relay queue is fed by admitted PU failures, which occur only
    while Q_p is backlogged (a fraction lambda_p/mu_p of slots).
    """
    mu_p = pu_service_rate(params, policy.admit)
    if params.lambda_p >= mu_p:
        return DerivedRates(mu_p=mu_p, mu_s=None, mu_sp=None, lambda_sp=None)
    free = 1.0 - params.lambda_p / mu_p
    busy = params.lambda_p / mu_p
    return DerivedRates(
        mu_p=mu_p,
        mu_s=policy.pick_own * params.h_sd * free,
        mu_sp=(1.0 - policy.pick_own) * params.h_sd * free,
        lambda_sp=policy.admit * (1.0 - params.h_pd) * params.h_ps * busy,
    )


def stability(params: NetworkParams, rates: DerivedRates) -> tuple[bool, bool, bool]:
    """Strict stability of (Q_p, Q_s, Q_sp).

    A saturated primary queue starves the SU of transmission slots, so the
    SU-side queues are classified unstable whenever the primary one is
    (their service rates are None).
    """
    primary = params.lambda_p < rates.mu_p
    own = rates.mu_s is not None and params.lambda_s < rates.mu_s
    relay = rates.mu_sp is not None and rates.lambda_sp < rates.mu_sp
    return primary, own, relay


# ---------------------------------------------------------------- queue lengths

# The relay and own-queue length formulas below share two structural facts
# worth naming:
#   * relay_margin > 0  is exactly strict stability of Q_sp,
#   * own_margin   > 0  is exactly lambda_s < mu_s.
# Each margin is also the sign-carrying factor of the respective denominator.


def _relay_margin(params: NetworkParams, policy: Policy, mu_p: float) -> float:
    lp = params.lambda_p
    return (1.0 - policy.pick_own) * params.h_sd * (mu_p - lp) - lp * (mu_p - params.h_pd)


def _own_margin(params: NetworkParams, policy: Policy, mu_p: float) -> float:
    lp = params.lambda_p
    return policy.pick_own * params.h_sd * (mu_p - lp) - params.lambda_s * mu_p


def _pu_queue_lengths(
    params: NetworkParams, policy: Policy, den_eps: float = DEN_EPS
) -> tuple[float, float, float]:
    """(n_p, n_sp, mu_p) under strict stability of Q_p and Q_sp."""
    lp = params.lambda_p
    mu_p = pu_service_rate(params, policy.admit)
    gap = mu_p - lp
    if gap <= 0.0:
        raise PrimaryUnstableError(f"lambda_p={lp} >= mu_p={mu_p}")
    if gap < den_eps:
        raise NearSingularError(f"mu_p - lambda_p = {gap} below {den_eps}")
    n_p = lp * (1.0 - lp) / gap

    lambda_sp = policy.admit * (1.0 - params.h_pd) * params.h_ps * (lp / mu_p)
    if lambda_sp == 0.0:
        return n_p, 0.0, mu_p  # nothing is ever relayed

    margin = _relay_margin(params, policy, mu_p)
    if margin <= 0.0:
        raise UnstableQueueError("relay", f"margin={margin}")
    den = mu_p * gap * margin
    if abs(den) < den_eps:
        raise NearSingularError(f"relay-length denominator {den} below {den_eps}")
    rly = mu_p - params.h_pd
    num = lp * rly * (
        (1.0 - policy.pick_own) * params.h_sd * (1.0 - mu_p) * lp
        - rly * mu_p * lp
        - params.h_pd * lp
        + mu_p * mu_p
    )
    return n_p, num / den, mu_p


def _su_queue_length(
    params: NetworkParams, policy: Policy, den_eps: float = DEN_EPS
) -> float:
    """n_s under strict stability of Q_p and Q_s."""
    lp, ls = params.lambda_p, params.lambda_s
    mu_p = pu_service_rate(params, policy.admit)
    gap = mu_p - lp
    if gap <= 0.0:
        raise PrimaryUnstableError(f"lambda_p={lp} >= mu_p={mu_p}")
    if ls == 0.0:
        return 0.0
    margin = _own_margin(params, policy, mu_p)
    if margin <= 0.0:
        raise UnstableQueueError("own", f"margin={margin}")
    den = gap * margin
    if abs(den) < den_eps:
        raise NearSingularError(f"own-length denominator {den} below {den_eps}")
    num = (
        policy.pick_own * params.h_sd * lp * ls * (1.0 - mu_p)
        + ls * (1.0 - ls) * gap * mu_p
    )
    return num / den


def queue_metrics(
    params: NetworkParams, policy: Policy, den_eps: float = DEN_EPS
) -> QueueMetrics:
    """Stationary queue lengths plus Little's-law delays for the whole system.

    Requires all three queues strictly stable.  d_p divides the total PU
    backlog (own queue plus relay queue) by lambda_p because a relayed packet
    spends time in both before reaching the destination.
    """
    n_p, n_sp, _ = _pu_queue_lengths(params, policy, den_eps)
    n_s = _su_queue_length(params, policy, den_eps)
    d_p = (n_p + n_sp) / params.lambda_p if params.lambda_p > 0.0 else math.nan
    d_s = n_s / params.lambda_s if params.lambda_s > 0.0 else math.nan
    return QueueMetrics(n_p=n_p, n_sp=n_sp, n_s=n_s, d_p=d_p, d_s=d_s)


# ---------------------------------------------------------------- delay bound


def pu_delay_gap(params: NetworkParams, policy: Policy, bound: DelayBound) -> float:
    """Affine-in-pick_own surrogate for the PU delay bound.

    Whenever the relay queue is strictly stable, the sign of the returned
    value matches the sign of d_p - psi; in particular it is <= 0 exactly
    when the bound holds.  Unlike :func:`queue_metrics` this is a polynomial
    in the policy (no relay-side division), which is what makes it usable as
    a feasibility test while scanning policies.
    """
    lp = params.lambda_p
    mu_p = pu_service_rate(params, policy.admit)
    gap = mu_p - lp
    if gap <= 0.0:
        raise PrimaryUnstableError(f"lambda_p={lp} >= mu_p={mu_p}")
    n_p = lp * (1.0 - lp) / gap if lp > 0.0 else 0.0
    slack = lp * bound.psi - n_p
    rly = mu_p - params.h_pd
    num = lp * rly * (
        (1.0 - policy.pick_own) * params.h_sd * (1.0 - mu_p) * lp
        - rly * mu_p * lp
        - params.h_pd * lp
        + mu_p * mu_p
    )
    den = mu_p * gap * _relay_margin(params, policy, mu_p)
    return num - den * slack


def su_delay_slope(params: NetworkParams, policy: Policy) -> float:
    """Derivative of the mean SU delay with respect to pick_own.

    Strictly negative on the stable region: giving the SU's own queue a
    larger share of free slots always shortens its delay.  The common
    lambda_s factor of the raw derivative is cancelled so the light-traffic
    limit lambda_s -> 0 stays finite.
    """
    lp, ls = params.lambda_p, params.lambda_s
    mu_p = pu_service_rate(params, policy.admit)
    gap = mu_p - lp
    if gap <= 0.0:
        raise PrimaryUnstableError(f"lambda_p={lp} >= mu_p={mu_p}")
    if _own_margin(params, policy, mu_p) <= 0.0:
        raise UnstableQueueError("own", "su_delay_slope needs lambda_s < mu_s")
    num = params.h_sd * mu_p * (
        lp * ls * (1.0 - mu_p) * gap + (1.0 - ls) * gap ** 3
    )
    root = ls * mu_p * gap - params.h_sd * gap * gap * policy.pick_own
    den = root * root
    if den < DEN_EPS:
        raise NearSingularError(f"slope denominator {den} below {DEN_EPS}")
    return -num / den
