from __future__ import annotations

from dataclasses import replace

import pytest

from fieldtriage.backlog import (
    Case,
    SimConfig,
    _run_queue,
    compare_disciplines,
    generate_caseload,
    simulate,
)
from fieldtriage.errors import InvalidConfig

from oracles import fifo_multiserver_oracle


def _tiny_cases(arrivals_services: list[tuple[float, float]], severity="fraud") -> list[Case]:
    return [
        Case(
            seq=i, arrival=arrival, severity=severity, exhibits=1,
            exhibit_services=(service,), forward_draw=0.0,
        )
        for i, (arrival, service) in enumerate(arrivals_services)
    ]


# --- validation -----------------------------------------------------------------


def test_invalid_config_fields():
    with pytest.raises(InvalidConfig):
        SimConfig(horizon=0).validate()
    with pytest.raises(InvalidConfig):
        SimConfig(analysts=0).validate()
    with pytest.raises(InvalidConfig):
        SimConfig(discipline="lifo").validate()
    with pytest.raises(InvalidConfig):
        SimConfig(severity_mix={"arson": 1.0}).validate()
    with pytest.raises(InvalidConfig):
        SimConfig(dft_threshold_pass=1.5).validate()
    with pytest.raises(InvalidConfig):
        SimConfig.from_dict({"horizont": 10})


# --- basics ----------------------------------------------------------------------


def test_zero_arrivals_drains():
    trace = simulate(SimConfig(arrival_rate=0.0, horizon=30))
    assert trace.arrivals == 0
    assert trace.final_backlog == 0
    assert all(q == 0 for q in trace.queue_lengths)


def test_identical_seeds_identical_traces():
    config = SimConfig(horizon=200, arrival_rate=2.0, analysts=2, seed=77)
    assert simulate(config) == simulate(config)


def test_different_seeds_differ():
    base = SimConfig(horizon=200, arrival_rate=2.0, analysts=2)
    a = simulate(replace(base, seed=1))
    b = simulate(replace(base, seed=2))
    assert a != b


def test_flow_conservation():
    for seed in range(5):
        config = SimConfig(horizon=300, arrival_rate=3.0, analysts=2, seed=seed)
        trace = simulate(config)
        assert trace.arrivals == trace.completions + trace.final_backlog


def test_caseload_independent_of_service_settings():
    base = SimConfig(horizon=100, arrival_rate=1.5, seed=5)
    cases = generate_caseload(base)
    same = generate_caseload(replace(base, analysts=9, discipline="severity"))
    assert cases == same


# --- oracle comparison -------------------------------------------------------------


def test_event_loop_matches_recurrence_oracle_single_server():
    # 6 hand-listed cases, one analyst: the start-time recurrence is exact
    spec = [(0.5, 2.0), (1.0, 1.0), (1.2, 3.0), (4.0, 0.5), (9.0, 1.0), (9.5, 4.0)]
    cases = _tiny_cases(spec)
    config = SimConfig(horizon=10.0, arrival_rate=1.0, analysts=1, discipline="fifo")
    trace = _run_queue(cases, config)
    oracle = fifo_multiserver_oracle(
        [a for a, _ in spec], [s for _, s in spec], servers=1, horizon=10.0
    )
    assert trace.completions == oracle["completions"]
    assert trace.final_backlog == oracle["backlog"]
    expected_mean = sum(oracle["waits"]) / len(oracle["waits"])
    assert trace.mean_wait_by_severity["fraud"] == pytest.approx(expected_mean)


def test_event_loop_matches_recurrence_oracle_two_servers():
    spec = [(0.0, 5.0), (0.1, 5.0), (0.2, 1.0), (0.3, 1.0), (6.0, 2.0)]
    cases = _tiny_cases(spec)
    config = SimConfig(horizon=8.0, arrival_rate=1.0, analysts=2, discipline="fifo")
    trace = _run_queue(cases, config)
    oracle = fifo_multiserver_oracle(
        [a for a, _ in spec], [s for _, s in spec], servers=2, horizon=8.0
    )
    assert trace.completions == oracle["completions"]
    assert trace.final_backlog == oracle["backlog"]


def test_generated_load_matches_recurrence_oracle():
    config = SimConfig(horizon=100, arrival_rate=2.0, analysts=3, seed=11, discipline="fifo")
    cases = generate_caseload(config)
    trace = _run_queue(cases, config)
    oracle = fifo_multiserver_oracle(
        [c.arrival for c in cases],
        [sum(c.exhibit_services) for c in cases],
        servers=3,
        horizon=config.horizon,
    )
    assert trace.completions == oracle["completions"]
    assert trace.final_backlog == oracle["backlog"]


# --- field-triage diversion -----------------------------------------------------------


def test_dft_strictly_reduces_backlog_on_tiny_instance():
    # 12 cases, one analyst, utilization > 1: hand-check via the oracle
    spec = [(float(i) * 0.5, 1.2) for i in range(12)]
    cases = [
        Case(seq=i, arrival=a, severity="fraud", exhibits=4,
             exhibit_services=(s / 4,) * 4, forward_draw=(0.1 if i % 2 == 0 else 0.9))
        for i, (a, s) in enumerate(spec)
    ]
    base = SimConfig(horizon=6.0, arrival_rate=1.0, analysts=1)
    no_dft = _run_queue(cases, base)
    with_dft = _run_queue(cases, replace(base, dft_enabled=True, dft_threshold_pass=0.5))
    # even-seq cases forward with 1 exhibit; odd-seq cases diverted
    assert with_dft.diverted == 6
    assert with_dft.arrivals == 6
    assert with_dft.final_backlog < no_dft.final_backlog
    oracle = fifo_multiserver_oracle(
        [c.arrival for c in cases if c.forward_draw < 0.5],
        [c.exhibit_services[0] for c in cases if c.forward_draw < 0.5],
        servers=1, horizon=6.0,
    )
    assert with_dft.final_backlog == oracle["backlog"]


def test_dft_reduction_lowers_backlog_under_overload():
    base = SimConfig(
        horizon=500, arrival_rate=2.0, analysts=2,
        service_days=0.5, exhibits_per_case=4.0,  # utilization 2.0 without triage
        dft_threshold_pass=0.5, exhibit_reduction=0.75,
    )
    for seed in range(5):
        off = simulate(replace(base, seed=seed))
        on = simulate(replace(base, seed=seed, dft_enabled=True))
        assert on.final_backlog < off.final_backlog


def test_exhibit_reduction_minimum_one():
    case = Case(seq=0, arrival=0.0, severity="fraud", exhibits=2,
                exhibit_services=(1.0, 1.0), forward_draw=0.0)
    config = SimConfig(dft_enabled=True, dft_threshold_pass=1.0, exhibit_reduction=1.0)
    trace = _run_queue([case], config)
    assert trace.arrivals == 1  # still forwarded, one exhibit kept


# --- disciplines -------------------------------------------------------------------------


def test_single_severity_class_disciplines_identical():
    config = SimConfig(
        horizon=300, arrival_rate=2.0, analysts=1,
        severity_mix={"fraud": 1.0}, seed=3,
    )
    comparison = compare_disciplines(config)
    assert comparison.fifo_waits == comparison.severity_waits


def test_underload_disciplines_approximately_equal():
    config = SimConfig(
        horizon=400, arrival_rate=0.5, analysts=4,
        service_days=0.25, exhibits_per_case=1.0, seed=9,
    )
    comparison = compare_disciplines(config)
    for severity in comparison.fifo_waits:
        assert abs(comparison.fifo_waits[severity] - comparison.severity_waits[severity]) < 0.05


def test_overload_fraud_waits_longer_under_severity():
    config = SimConfig(
        horizon=600, arrival_rate=2.0, analysts=2,
        service_days=0.5, exhibits_per_case=3.0, seed=21,
    )
    comparison = compare_disciplines(config)
    assert comparison.severity_waits["fraud"] >= comparison.fifo_waits["fraud"]
    assert comparison.severity_waits["person_crime"] <= comparison.fifo_waits["person_crime"]


# --- invariants ------------------------------------------------------------------------


def test_more_analysts_never_increase_backlog():
    base = SimConfig(horizon=300, arrival_rate=3.0, service_days=0.5, exhibits_per_case=2.0)
    for seed in range(4):
        for discipline in ("fifo", "severity"):
            backlogs = [
                simulate(replace(base, seed=seed, discipline=discipline, analysts=n)).final_backlog
                for n in (1, 2, 3, 5, 8)
            ]
            assert backlogs == sorted(backlogs, reverse=True) or all(
                b1 >= b2 for b1, b2 in zip(backlogs, backlogs[1:])
            )


def test_queue_series_sampled_daily():
    config = SimConfig(horizon=30, arrival_rate=1.0, seed=2)
    trace = simulate(config)
    assert len(trace.queue_lengths) == 31  # days 0..30 inclusive
    assert all(q >= 0 for q in trace.queue_lengths)


def test_series_csv_shape():
    trace = simulate(SimConfig(horizon=5, arrival_rate=1.0, seed=4))
    lines = trace.series_csv().strip().splitlines()
    assert lines[0] == "day,queue_length"
    assert len(lines) == 7
