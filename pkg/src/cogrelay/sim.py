"""Slot-level Monte Carlo simulation of the cooperation policy.

This is the ground-truth oracle for the closed-form model: it executes the
protocol literally, one slot at a time, with seven independent uniform draws
per slot (PU arrival, SU arrival, PU-to-destination success, PU-to-SU
success, admission, queue pick, SU-to-destination success).  All seven are
consumed every slot whether or not the corresponding event can occur, so a
run's draw stream depends only on the seed and the horizon.

Conventions, chosen to match the analytic model exactly:
  * departures act on start-of-slot state; the slot's arrivals are appended
    afterwards, so a packet is first eligible for service in the next slot;
  * a packet's delay is its departure slot minus its arrival slot (a packet
    served in the very next slot has delay 1);
  * a relayed PU packet keeps its original arrival stamp, so its delay covers
    both queues end to end;
  * queue-length averages sample start-of-slot state.

RNG: numpy's Philox (4x64, 10 rounds) counter-based generator, seeded through
numpy's SeedSequence.  Same seed, same horizon: bit-identical reports.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, fields

import numpy as np

from .model import NetworkParams, Policy

_CHUNK = 1 << 16


@dataclass(frozen=True)
class SimConfig:
    params: NetworkParams
    policy: Policy
    horizon: int = 100_000
    warmup: int | None = None  # default: 10% of horizon
    seed: int = 0

    def __post_init__(self) -> None:
        if not (isinstance(self.horizon, int) and self.horizon > 0):
            raise ValueError(f"horizon must be a positive integer, got {self.horizon!r}")
        w = self.warmup
        if w is not None and not (isinstance(w, int) and 0 <= w < self.horizon):
            raise ValueError(f"warmup must satisfy 0 <= warmup < horizon, got {w!r}")
        if not isinstance(self.seed, int):
            raise ValueError(f"seed must be an integer, got {self.seed!r}")


@dataclass(frozen=True)
class SimReport:
    """Empirical counterpart of QueueMetrics plus bookkeeping counters.

    Delay means cover only packets that arrived at or after the warmup slot;
    queue-length means and rate counters cover slots at or after warmup;
    arrival/departure totals and final queue lengths cover the whole run so
    packet conservation can be checked exactly.  Means over zero samples are
    NaN (serialized as null).
    """

    horizon: int
    warmup: int
    seed: int
    pu_delay_mean: float
    su_delay_mean: float
    su_throughput: float
    mean_q_p: float
    mean_q_sp: float
    mean_q_s: float
    pu_delivered: int
    su_delivered: int
    relay_admissions: int
    wasted_slots: int
    arrivals_p: int
    arrivals_s: int
    departures_p_direct: int
    departures_p_relayed: int
    departures_s: int
    final_q_p: int
    final_q_sp: int
    final_q_s: int
    measured_slots: int
    pu_backlogged_slots: int
    pu_hol_departures: int
    su_access_slots: int
    pick_own_count: int
    admission_chances: int
    admissions_taken: int
    su_departures_measured: int

    def to_json(self) -> str:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, float) and not math.isfinite(v):
                v = None
            out[f.name] = v
        return json.dumps(out, indent=2)


class QueueSim:
    """Mutable simulation state: three stamp queues plus counters.

    Queues hold arrival-slot stamps in FIFO order.  ``step`` consumes one
    7-tuple of uniforms and advances exactly one slot; it is deterministic in
    (state, draws).
    """

    def __init__(self, params: NetworkParams, policy: Policy, warmup: int = 0):
        self.params = params
        self.policy = policy
        self.warmup = warmup
        self.slot = 0
        self.q_p: deque[int] = deque()
        self.q_sp: deque[int] = deque()
        self.q_s: deque[int] = deque()
        self.arrivals_p = 0
        self.arrivals_s = 0
        self.dep_p_direct = 0
        self.dep_p_relayed = 0
        self.dep_s = 0
        self.relay_admissions = 0
        self.wasted_slots = 0
        self.measured_slots = 0
        self.len_p_sum = 0
        self.len_sp_sum = 0
        self.len_s_sum = 0
        self.pu_delay_sum = 0
        self.pu_delivered = 0
        self.su_delay_sum = 0
        self.su_delivered = 0
        self.pu_backlogged_slots = 0
        self.pu_hol_departures = 0
        self.su_access_slots = 0
        self.pick_own_count = 0
        self.admission_chances = 0
        self.admissions_taken = 0
        self.su_departures_measured = 0

    def step(self, draws) -> None:
        u_ap, u_as, u_pd, u_ps, u_adm, u_pick, u_sd = draws
        t = self.slot
        measured = t >= self.warmup
        if measured:
            self.measured_slots += 1
            self.len_p_sum += len(self.q_p)
            self.len_sp_sum += len(self.q_sp)
            self.len_s_sum += len(self.q_s)

        if self.q_p:
            if measured:
                self.pu_backlogged_slots += 1
            if u_pd < self.params.h_pd:
                # Destination got it; the SU's decode outcome is irrelevant.
                stamp = self.q_p.popleft()
                self.dep_p_direct += 1
                if measured:
                    self.pu_hol_departures += 1
                if stamp >= self.warmup:
                    self.pu_delay_sum += t - stamp
                    self.pu_delivered += 1
            else:
                decoded = u_ps < self.params.h_ps
                if decoded and measured:
                    self.admission_chances += 1
                if decoded and u_adm < self.policy.admit:
                    self.q_sp.append(self.q_p.popleft())
                    self.relay_admissions += 1
                    if measured:
                        self.admissions_taken += 1
                        self.pu_hol_departures += 1
        else:
            if measured:
                self.su_access_slots += 1
            own = u_pick < self.policy.pick_own
            if own and measured:
                self.pick_own_count += 1
            src = self.q_s if own else self.q_sp
            other = self.q_sp if own else self.q_s
            if src:
                if u_sd < self.params.h_sd:
                    stamp = src.popleft()
                    if own:
                        self.dep_s += 1
                        if measured:
                            self.su_departures_measured += 1
                        if stamp >= self.warmup:
                            self.su_delay_sum += t - stamp
                            self.su_delivered += 1
                    else:
                        self.dep_p_relayed += 1
                        if stamp >= self.warmup:
                            self.pu_delay_sum += t - stamp
                            self.pu_delivered += 1
            elif other:
                # Non-work-conserving: the picked queue is empty, the other
                # one is backlogged, and the slot is thrown away.
                self.wasted_slots += 1

        if u_ap < self.params.lambda_p:
            self.q_p.append(t)
            self.arrivals_p += 1
        if u_as < self.params.lambda_s:
            self.q_s.append(t)
            self.arrivals_s += 1
        self.slot = t + 1

    def report(self, horizon: int, seed: int) -> SimReport:
        m = self.measured_slots
        return SimReport(
            horizon=horizon,
            warmup=self.warmup,
            seed=seed,
            pu_delay_mean=self.pu_delay_sum / self.pu_delivered if self.pu_delivered else math.nan,
            su_delay_mean=self.su_delay_sum / self.su_delivered if self.su_delivered else math.nan,
            su_throughput=self.su_departures_measured / m if m else math.nan,
            mean_q_p=self.len_p_sum / m if m else math.nan,
            mean_q_sp=self.len_sp_sum / m if m else math.nan,
            mean_q_s=self.len_s_sum / m if m else math.nan,
            pu_delivered=self.pu_delivered,
            su_delivered=self.su_delivered,
            relay_admissions=self.relay_admissions,
            wasted_slots=self.wasted_slots,
            arrivals_p=self.arrivals_p,
            arrivals_s=self.arrivals_s,
            departures_p_direct=self.dep_p_direct,
            departures_p_relayed=self.dep_p_relayed,
            departures_s=self.dep_s,
            final_q_p=len(self.q_p),
            final_q_sp=len(self.q_sp),
            final_q_s=len(self.q_s),
            measured_slots=m,
            pu_backlogged_slots=self.pu_backlogged_slots,
            pu_hol_departures=self.pu_hol_departures,
            su_access_slots=self.su_access_slots,
            pick_own_count=self.pick_own_count,
            admission_chances=self.admission_chances,
            admissions_taken=self.admissions_taken,
            su_departures_measured=self.su_departures_measured,
        )


def run(cfg: SimConfig) -> SimReport:
    """Run the full horizon and summarize.  Deterministic in cfg."""
    warmup = cfg.warmup if cfg.warmup is not None else cfg.horizon // 10
    sim = QueueSim(cfg.params, cfg.policy, warmup)
    rng = np.random.Generator(np.random.Philox(cfg.seed))
    remaining = cfg.horizon
    step = sim.step
    while remaining > 0:
        n = min(_CHUNK, remaining)
        for row in rng.random((n, 7)).tolist():
            step(row)
        remaining -= n
    return sim.report(cfg.horizon, cfg.seed)
