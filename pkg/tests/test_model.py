"""Closed-form model: frozen reference values, edge conventions, and
sampled structural properties (affinity, sign agreement, derivative)."""

import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cogrelay import (
    DelayBound,
    NetworkParams,
    Policy,
    PrimaryUnstableError,
    UnstableQueueError,
    config_warnings,
    derived_rates,
    pu_delay_gap,
    pu_service_rate,
    queue_metrics,
    stability,
    su_delay_slope,
)

PRESET = NetworkParams(0.2, 0.2, 0.3, 0.4, 0.8)
POINT = Policy(admit=0.6, pick_own=0.5)

probs = st.floats(0.02, 0.98)


# ---------------------------------------------------------------- rates


def test_pu_service_rate_endpoints():
    assert pu_service_rate(PRESET, 0.0) == pytest.approx(0.3, abs=1e-15)
    assert pu_service_rate(PRESET, 1.0) == pytest.approx(0.58, abs=1e-15)
    assert pu_service_rate(PRESET, 0.6) == pytest.approx(0.468, abs=1e-15)


def test_derived_rates_at_reference_point():
    r = derived_rates(PRESET, POINT)
    assert r.mu_p == pytest.approx(0.468, abs=1e-15)
    assert r.mu_s == pytest.approx(0.22905982905982903, rel=1e-12)
    assert r.mu_sp == pytest.approx(0.22905982905982903, rel=1e-12)
    assert r.lambda_sp == pytest.approx(0.07179487179487181, rel=1e-12)
    assert stability(PRESET, r) == (True, True, True)


def test_derived_rates_full_admission():
    r = derived_rates(PRESET, Policy(1.0, 1.0))
    assert r.mu_p == pytest.approx(0.58, abs=1e-15)
    assert r.mu_s == pytest.approx(0.5241379310344828, rel=1e-12)
    assert r.mu_sp == 0.0
    assert r.lambda_sp == pytest.approx(0.09655172413793104, rel=1e-12)


def test_saturated_primary_reports_none_rates():
    params = replace(PRESET, lambda_p=0.5)
    r = derived_rates(params, Policy(0.0, 0.5))  # mu_p = 0.3 < 0.5
    assert r.mu_p == pytest.approx(0.3)
    assert r.mu_s is None and r.mu_sp is None and r.lambda_sp is None
    assert stability(params, r) == (False, False, False)
    with pytest.raises(PrimaryUnstableError):
        queue_metrics(params, Policy(0.0, 0.5))


# ---------------------------------------------------------------- lengths and delays


def test_queue_metrics_at_reference_point():
    m = queue_metrics(PRESET, POINT)
    assert m.n_p == pytest.approx(0.5970149253731345, rel=1e-12)
    assert m.n_sp == pytest.approx(0.676495449175527, rel=1e-12)
    assert m.n_s == pytest.approx(7.841264266900798, rel=1e-12)
    assert m.d_p == pytest.approx(6.367551872743307, rel=1e-12)
    assert m.d_s == pytest.approx(39.20632133450399, rel=1e-12)


def test_relay_overload_raises():
    with pytest.raises(UnstableQueueError) as exc:
        queue_metrics(PRESET, Policy(0.6, 0.9))
    assert exc.value.queue == "relay"


def test_own_queue_overload_raises():
    with pytest.raises(UnstableQueueError) as exc:
        queue_metrics(PRESET, Policy(1.0, 0.2))
    assert exc.value.queue == "own"


def test_no_admission_means_empty_relay_queue():
    # admit = 0 leaves the PU alone: single slotted queue at rate h_pd.
    m = queue_metrics(PRESET, Policy(0.0, 1.0))
    assert m.n_sp == 0.0
    assert m.n_p == pytest.approx(1.6, rel=1e-12)
    assert m.d_p == pytest.approx((1 - 0.2) / (0.3 - 0.2), rel=1e-12)


def test_zero_arrival_conventions():
    m = queue_metrics(replace(PRESET, lambda_p=0.0), POINT)
    assert m.n_p == 0.0 and m.n_sp == 0.0
    assert math.isnan(m.d_p)
    m = queue_metrics(replace(PRESET, lambda_s=0.0), POINT)
    assert m.n_s == 0.0
    assert math.isnan(m.d_s)


def test_light_su_traffic_delay_limit():
    # As the SU's own load vanishes its delay does NOT drop to one service
    # time: arriving packets still find the channel held by the PU share.
    params = replace(PRESET, lambda_s=1e-12)
    pol = Policy(1.0, 0.6)
    mu_p = 0.58
    mu_s = 0.6 * 0.8 * (1 - 0.2 / mu_p)
    expected = 1 / mu_s + 0.2 * (1 - mu_p) / (mu_p - 0.2) ** 2
    assert queue_metrics(params, pol).d_s == pytest.approx(expected, rel=1e-6)


# ---------------------------------------------------------------- validation


def test_invalid_inputs_rejected():
    with pytest.raises(ValueError):
        NetworkParams(-0.1, 0.2, 0.3, 0.4, 0.8)
    with pytest.raises(ValueError):
        NetworkParams(0.2, 0.2, 0.3, 0.4, float("nan"))
    with pytest.raises(ValueError):
        Policy(1.2, 0.5)
    with pytest.raises(ValueError):
        DelayBound(0.0)
    DelayBound(math.inf)  # explicitly allowed: bound switched off


def test_config_warnings_flag_useless_relay_link():
    assert config_warnings(PRESET) == []
    notes = config_warnings(replace(PRESET, h_sd=0.25))
    assert len(notes) == 1 and "h_sd" in notes[0]


# ---------------------------------------------------------------- properties


@given(lp=probs, ls=probs, hpd=probs, hps=probs, hsd=probs, a=probs, b=probs)
@settings(max_examples=80, deadline=None)
def test_rate_identities_hold_everywhere(lp, ls, hpd, hps, hsd, a, b):
    params = NetworkParams(lp, ls, hpd, hps, hsd)
    r = derived_rates(params, Policy(a, b))
    assert 0.0 <= r.mu_p <= 1.0
    if r.mu_s is not None:
        free = 1.0 - lp / r.mu_p
        # the SU's two service rates split the free slots exactly
        assert r.mu_s + r.mu_sp == pytest.approx(hsd * free, rel=1e-12)
        assert 0.0 <= r.lambda_sp <= lp / r.mu_p


def test_stable_metrics_are_physical():
    import oracles

    rng = np.random.default_rng(23)
    for params, a, b in oracles.stable_policy_points(rng, 200):
        m = queue_metrics(params, Policy(a, b))
        assert m.n_p >= 0 and m.n_sp >= 0 and m.n_s >= 0
        # no packet can depart in its arrival slot
        assert m.d_p >= 1.0 - 1e-12
        assert m.d_s >= 1.0 - 1e-12


def test_bound_surrogate_sign_matches_delay_gap():
    import oracles

    rng = np.random.default_rng(29)
    both_signs = set()
    for params, a, b in oracles.stable_policy_points(rng, 300):
        pol = Policy(a, b)
        psi = float(rng.uniform(1.5, 60.0))
        diff = queue_metrics(params, pol).d_p - psi
        if abs(diff) <= 1e-9 * psi:
            continue
        phi = pu_delay_gap(params, pol, DelayBound(psi))
        assert (phi > 0) == (diff > 0)
        both_signs.add(diff > 0)
    assert both_signs == {True, False}


def test_bound_surrogate_is_affine_in_pick_own():
    rng = np.random.default_rng(7)
    for _ in range(200):
        lp, ls, hpd, hps, hsd = rng.uniform(0.05, 0.95, 5)
        a = float(rng.uniform(0, 1))
        psi = float(rng.uniform(2, 50))
        params = NetworkParams(lp, ls, hpd, hps, hsd)
        if lp >= pu_service_rate(params, a):
            continue
        bound = DelayBound(psi)
        vals = [pu_delay_gap(params, Policy(a, b), bound) for b in (0.0, 0.25, 0.5, 0.75, 1.0)]
        scale = max(1.0, max(abs(v) for v in vals))
        second = [vals[i + 2] - 2 * vals[i + 1] + vals[i] for i in range(3)]
        assert max(abs(s) for s in second) <= 1e-9 * scale


def test_delay_slope_matches_finite_difference_sample():
    import oracles

    rng = np.random.default_rng(11)
    h = 1e-6
    for params, a, b in oracles.stable_policy_points(rng, 40):
        slope = su_delay_slope(params, Policy(a, b))
        fd = (
            queue_metrics(params, Policy(a, b + h)).d_s
            - queue_metrics(params, Policy(a, b - h)).d_s
        ) / (2 * h)
        assert slope < 0
        assert fd == pytest.approx(slope, rel=1e-4)


def test_delay_slope_requires_own_queue_stability():
    with pytest.raises(UnstableQueueError):
        su_delay_slope(PRESET, Policy(1.0, 0.2))
