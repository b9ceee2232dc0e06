"""Slot simulator: scripted single-slot mechanics, exact conservation and
determinism, empirical rates against their nominal probabilities, and
agreement with the closed-form model at a stable operating point."""

import math

import numpy as np
import pytest

from cogrelay import (
    NetworkParams,
    Policy,
    QueueSim,
    SimConfig,
    queue_metrics,
    run,
)

PRESET = NetworkParams(0.2, 0.2, 0.3, 0.4, 0.8)
POINT = Policy(admit=0.6, pick_own=0.5)

# Hand-scripted five-slot run: one direct PU delivery, one SU delivery, one
# relay admission, one relayed delivery.  Draw order per slot is
# (PU arrival, SU arrival, direct link, overhear link, admission, pick, SU link).
SCRIPT_PARAMS = NetworkParams(lambda_p=0.5, lambda_s=0.5, h_pd=0.5, h_ps=1.0, h_sd=1.0)
SCRIPT_POLICY = Policy(admit=1.0, pick_own=0.6)
SCRIPT_DRAWS = [
    (0.4, 0.9, 0.9, 0.9, 0.9, 0.1, 0.9),  # PU arrival lands at slot end
    (0.9, 0.4, 0.3, 0.9, 0.9, 0.1, 0.9),  # direct success; SU arrival
    (0.4, 0.9, 0.9, 0.5, 0.2, 0.1, 0.3),  # SU serves its own packet; PU arrival
    (0.9, 0.9, 0.9, 0.5, 0.2, 0.1, 0.9),  # direct miss, overheard, admitted
    (0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.3),  # SU picks relay queue, delivers
]


def _scripted(warmup: int) -> QueueSim:
    sim = QueueSim(SCRIPT_PARAMS, SCRIPT_POLICY, warmup=warmup)
    for d in SCRIPT_DRAWS:
        sim.step(d)
    return sim


def test_scripted_run_mechanics():
    rep = _scripted(warmup=0).report(horizon=5, seed=0)
    assert rep.arrivals_p == 2 and rep.arrivals_s == 1
    assert rep.departures_p_direct == 1
    assert rep.departures_p_relayed == 1
    assert rep.departures_s == 1
    assert rep.relay_admissions == 1
    assert rep.admission_chances == 1 and rep.admissions_taken == 1
    assert rep.final_q_p == 0 and rep.final_q_sp == 0 and rep.final_q_s == 0
    assert rep.wasted_slots == 0
    # direct delivery after 1 slot, relayed one after 2
    assert rep.pu_delivered == 2 and rep.pu_delay_mean == pytest.approx(1.5)
    assert rep.su_delivered == 1 and rep.su_delay_mean == pytest.approx(1.0)
    assert rep.su_throughput == pytest.approx(0.2)
    assert rep.mean_q_p == pytest.approx(0.4)
    assert rep.mean_q_sp == pytest.approx(0.2)
    assert rep.mean_q_s == pytest.approx(0.2)
    assert rep.pu_backlogged_slots == 2 and rep.pu_hol_departures == 2
    assert rep.su_access_slots == 3 and rep.pick_own_count == 2


def test_scripted_run_warmup_filtering():
    # Same trajectory, but statistics start at slot 3: every delivered packet
    # arrived before the cutoff, so the delay means are empty (NaN).
    rep = _scripted(warmup=3).report(horizon=5, seed=0)
    assert rep.measured_slots == 2
    assert rep.arrivals_p == 2  # conservation counters still span the full run
    assert rep.departures_p_relayed == 1
    assert rep.pu_delivered == 0 and math.isnan(rep.pu_delay_mean)
    assert rep.su_delivered == 0 and math.isnan(rep.su_delay_mean)
    assert rep.su_throughput == 0.0
    assert rep.pu_backlogged_slots == 1
    assert rep.su_access_slots == 1 and rep.pick_own_count == 0
    assert rep.mean_q_p == pytest.approx(0.5)
    assert rep.mean_q_sp == pytest.approx(0.5)


def test_picking_the_empty_queue_wastes_the_slot():
    params = NetworkParams(lambda_p=0.0, lambda_s=1.0, h_pd=0.5, h_ps=0.5, h_sd=1.0)
    sim = QueueSim(params, Policy(admit=0.5, pick_own=0.0), warmup=0)
    sim.step((0.9, 0.1, 0.9, 0.9, 0.9, 0.5, 0.9))  # SU packet arrives
    sim.step((0.9, 0.1, 0.9, 0.9, 0.9, 0.5, 0.9))  # relay queue picked, empty
    rep = sim.report(horizon=2, seed=0)
    assert rep.wasted_slots == 1
    assert rep.departures_s == 0 and rep.final_q_s == 2


def test_same_seed_reproduces_identical_reports():
    cfg = SimConfig(PRESET, POINT, horizon=50_000, seed=123)
    assert run(cfg).to_json() == run(cfg).to_json()


def test_different_seeds_differ():
    a = run(SimConfig(PRESET, POINT, horizon=50_000, seed=1))
    b = run(SimConfig(PRESET, POINT, horizon=50_000, seed=2))
    assert a.to_json() != b.to_json()


def test_packet_conservation_on_random_configs():
    rng = np.random.default_rng(99)
    for k in range(12):
        lp, ls, hpd, hps, hsd, a, b = rng.uniform(0.0, 1.0, 7)
        cfg = SimConfig(
            NetworkParams(lp, ls, hpd, hps, hsd),
            Policy(a, b),
            horizon=20_000,
            seed=1000 + k,
        )
        rep = run(cfg)
        assert rep.arrivals_p == (
            rep.departures_p_direct + rep.departures_p_relayed + rep.final_q_p + rep.final_q_sp
        )
        assert rep.arrivals_s == rep.departures_s + rep.final_q_s
        assert rep.relay_admissions >= rep.admissions_taken
        assert rep.measured_slots == cfg.horizon - cfg.horizon // 10


def test_empirical_rates_match_their_probabilities():
    # Admissions, queue picks and PU head-of-line departures are Bernoulli
    # trials given their opportunity counts; check each against a 3-sigma
    # binomial band.
    rep = run(SimConfig(PRESET, POINT, horizon=200_000, seed=3))

    def band(p, n):
        return 3.0 * math.sqrt(p * (1.0 - p) / n)

    adm = rep.admissions_taken / rep.admission_chances
    assert abs(adm - POINT.admit) <= band(POINT.admit, rep.admission_chances)

    pick = rep.pick_own_count / rep.su_access_slots
    assert abs(pick - POINT.pick_own) <= band(POINT.pick_own, rep.su_access_slots)

    mu_p = 0.468
    served = rep.pu_hol_departures / rep.pu_backlogged_slots
    assert abs(served - mu_p) <= band(mu_p, rep.pu_backlogged_slots)


def test_relay_feed_rate_matches_model():
    lam_sp = 0.6 * 0.7 * 0.4 * (0.2 / 0.468)
    rates = [
        run(SimConfig(PRESET, POINT, horizon=100_000, seed=40 + s)).admissions_taken / 90_000
        for s in range(8)
    ]
    mean = float(np.mean(rates))
    se = float(np.std(rates, ddof=1)) / math.sqrt(len(rates))
    assert abs(mean - lam_sp) <= 4.0 * max(se, 1e-4)


def test_no_pu_traffic_reduces_to_a_single_queue():
    params = NetworkParams(0.0, 0.2, 0.3, 0.4, 0.8)
    rep = run(SimConfig(params, Policy(0.3, 1.0), horizon=400_000, seed=5))
    assert rep.arrivals_p == 0
    # slotted queue at service rate 0.8 under load 0.2
    assert rep.su_delay_mean == pytest.approx((1 - 0.2) / (0.8 - 0.2), rel=0.02)
    assert rep.su_throughput == pytest.approx(0.2, rel=0.02)


def test_stable_point_agrees_with_closed_form():
    m = queue_metrics(PRESET, POINT)
    rep = run(SimConfig(PRESET, POINT, horizon=400_000, seed=11))
    assert rep.pu_delay_mean == pytest.approx(m.d_p, rel=0.04)
    assert rep.su_delay_mean == pytest.approx(m.d_s, rel=0.08)
    assert rep.su_throughput == pytest.approx(0.2, rel=0.02)
    assert rep.mean_q_p == pytest.approx(m.n_p, rel=0.05)


def test_unstable_queues_visibly_grow():
    rep = run(SimConfig(NetworkParams(0.5, 0.2, 0.3, 0.4, 0.8), Policy(0.0, 0.5),
                        horizon=100_000, seed=2))
    assert rep.final_q_p > 10_000  # drifts up by ~0.2 packets per slot
    rep = run(SimConfig(PRESET, Policy(0.6, 0.9), horizon=100_000, seed=2))
    assert rep.final_q_sp > 1_000  # relay queue starved of service slots


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(PRESET, POINT, horizon=0)
    with pytest.raises(ValueError):
        SimConfig(PRESET, POINT, horizon=100, warmup=100)
    with pytest.raises(ValueError):
        SimConfig(PRESET, POINT, seed="abc")
    rep = run(SimConfig(PRESET, POINT, horizon=1000))
    assert rep.warmup == 100


def test_report_serializes_nan_as_null():
    sim = QueueSim(PRESET, POINT, warmup=0)
    rep = sim.report(horizon=0, seed=0)
    import json

    doc = json.loads(rep.to_json())
    assert doc["pu_delay_mean"] is None
    assert doc["mean_q_p"] is None
    assert doc["arrivals_p"] == 0
