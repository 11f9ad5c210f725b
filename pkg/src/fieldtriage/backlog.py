"""Discrete-event model of the laboratory analysis queue.

Cases arrive faster than the analyst pool can clear them, so a backlog
forms; the model compares first-in-first-out against severity-based
assignment (crimes against a person first, fraud last) and shows what
field triage does to the queue: a fraction of cases never gets forwarded,
and forwarded ones carry fewer exhibits.

All randomness is drawn up front from one seeded generator, so a run is a
pure function of its configuration and different disciplines or analyst
counts face the identical caseload (common random numbers).
"""

from __future__ import annotations

import heapq
import json
import math
import random
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import InvalidConfig

SEVERITIES = ("person_crime", "fraud", "property")
# Assignment priority under the severity discipline, best first. Fraud
# sits at the bottom of the pile.
SEVERITY_PRIORITY = {"person_crime": 0, "property": 1, "fraud": 2}

DISCIPLINES = ("fifo", "severity")


@dataclass(frozen=True)
class SimConfig:
    horizon: float = 365.0                 # days
    arrival_rate: float = 1.0              # cases/day
    severity_mix: dict[str, float] = field(
        default_factory=lambda: {"person_crime": 0.4, "fraud": 0.3, "property": 0.3}
    )
    analysts: int = 2
    service_days: float = 1.0              # mean per exhibit
    exhibits_per_case: float = 3.0         # mean, geometric, minimum 1
    discipline: str = "fifo"
    dft_enabled: bool = False
    dft_threshold_pass: float = 0.5        # fraction of cases forwarded
    exhibit_reduction: float = 0.75        # fraction of exhibits not forwarded
    seed: int = 0

    def validate(self) -> None:
        if self.horizon <= 0:
            raise InvalidConfig("horizon", "must be positive")
        if self.arrival_rate < 0:
            raise InvalidConfig("arrival_rate", "must be non-negative")
        if self.analysts < 1:
            raise InvalidConfig("analysts", "need at least one analyst")
        if self.service_days <= 0:
            raise InvalidConfig("service_days", "must be positive")
        if self.exhibits_per_case < 1:
            raise InvalidConfig("exhibits_per_case", "mean exhibit count is at least 1")
        if self.discipline not in DISCIPLINES:
            raise InvalidConfig("discipline", f"must be one of {DISCIPLINES}")
        if not self.severity_mix or any(w < 0 for w in self.severity_mix.values()):
            raise InvalidConfig("severity_mix", "weights must be non-negative")
        if sum(self.severity_mix.values()) <= 0:
            raise InvalidConfig("severity_mix", "weights must not all be zero")
        for key in self.severity_mix:
            if key not in SEVERITIES:
                raise InvalidConfig("severity_mix", f"unknown severity {key!r}")
        for name in ("dft_threshold_pass", "exhibit_reduction"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidConfig(name, "must be in [0, 1]")

    @classmethod
    def from_dict(cls, raw: dict) -> "SimConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise InvalidConfig(sorted(unknown)[0], "unknown config field")
        return cls(**raw)


def load_sim_config(path: str | Path) -> SimConfig:
    return SimConfig.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class Case:
    seq: int
    arrival: float
    severity: str
    exhibits: int
    exhibit_services: tuple[float, ...]  # service demand per exhibit, days
    forward_draw: float                  # uniform draw deciding DFT forwarding


@dataclass(frozen=True)
class BacklogTrace:
    queue_lengths: tuple[int, ...]          # sampled at each whole day, 0..horizon
    mean_wait_by_severity: dict[str, float]
    arrivals: int                           # cases that entered the queue
    completions: int
    diverted: int                           # cases field triage kept out of the queue
    final_backlog: int                      # queued + in service at the horizon

    def series_csv(self) -> str:
        lines = ["day,queue_length"]
        lines += [f"{day},{q}" for day, q in enumerate(self.queue_lengths)]
        return "\n".join(lines) + "\n"


def _sample_severity(rng: random.Random, mix: dict[str, float]) -> str:
    total = sum(mix.values())
    u = rng.random() * total
    acc = 0.0
    for name in SEVERITIES:  # fixed order keeps sampling deterministic
        if name in mix:
            acc += mix[name]
            if u < acc:
                return name
    return next(name for name in reversed(SEVERITIES) if name in mix)


def _sample_exhibit_count(rng: random.Random, mean: float) -> int:
    if mean <= 1.0:
        return 1
    p = 1.0 / mean
    u = rng.random()
    return 1 + int(math.log1p(-u) / math.log1p(-p))


def generate_caseload(config: SimConfig) -> list[Case]:
    """Draw the full arrival stream for a configuration's seed."""
    rng = random.Random(config.seed)
    cases = []
    t = 0.0
    seq = 0
    if config.arrival_rate <= 0:
        return cases
    while True:
        t += rng.expovariate(config.arrival_rate)
        if t >= config.horizon:
            break
        severity = _sample_severity(rng, config.severity_mix)
        exhibits = _sample_exhibit_count(rng, config.exhibits_per_case)
        services = tuple(
            rng.expovariate(1.0 / config.service_days) for _ in range(exhibits)
        )
        cases.append(
            Case(
                seq=seq, arrival=t, severity=severity,
                exhibits=exhibits, exhibit_services=services,
                forward_draw=rng.random(),
            )
        )
        seq += 1
    return cases


def _forwarded_work(case: Case, config: SimConfig) -> tuple[bool, float]:
    """Whether the case reaches the queue, and its total service demand.

    With field triage on, a case is forwarded with the configured pass
    probability and its exhibit count shrinks by the reduction factor
    (minimum one exhibit); the retained exhibits keep their original
    service draws.
    """
    if not config.dft_enabled:
        return True, sum(case.exhibit_services)
    if case.forward_draw >= config.dft_threshold_pass:
        return False, 0.0
    kept = max(1, int(case.exhibits * (1.0 - config.exhibit_reduction)))
    return True, sum(case.exhibit_services[:kept])


def _run_queue(cases: list[Case], config: SimConfig) -> BacklogTrace:
    """Serve a prepared caseload; pure and deterministic."""
    use_priority = config.discipline == "severity"

    entered = 0
    diverted = 0
    completions = 0
    busy = 0
    queue: list[tuple] = []  # heap: (priority key..., seq, case, demand)
    waits: dict[str, list[float]] = {s: [] for s in SEVERITIES}
    pending: dict[int, Case] = {}

    events: list[tuple[float, int, int, object]] = []  # (time, kind, tiebreak, payload)
    ARRIVAL, DEPARTURE = 0, 1
    for case in cases:
        forwarded, demand = _forwarded_work(case, config)
        if forwarded:
            heapq.heappush(events, (case.arrival, ARRIVAL, case.seq, (case, demand)))
            entered += 1
        else:
            diverted += 1

    def queue_key(case: Case) -> tuple:
        if use_priority:
            return (SEVERITY_PRIORITY[case.severity], case.seq)
        return (case.seq,)

    day_samples: list[int] = []
    next_day = 0.0

    def sample_until(time: float) -> None:
        nonlocal next_day
        while next_day <= min(time, config.horizon) and next_day <= config.horizon:
            day_samples.append(len(queue))
            next_day += 1.0

    while events:
        time, kind, _tie, payload = heapq.heappop(events)
        if time > config.horizon:
            break
        sample_until(time)
        if kind == ARRIVAL:
            case, demand = payload
            if busy < config.analysts:
                busy += 1
                waits[case.severity].append(0.0)
                heapq.heappush(events, (time + demand, DEPARTURE, case.seq, case))
            else:
                pending[case.seq] = case
                heapq.heappush(queue, (*queue_key(case), demand))
        else:
            completions += 1
            busy -= 1
            if queue:
                entry = heapq.heappop(queue)
                seq, demand = entry[-2], entry[-1]
                case = pending.pop(seq)
                busy += 1
                waits[case.severity].append(time - case.arrival)
                heapq.heappush(events, (time + demand, DEPARTURE, case.seq, case))
        assert busy == config.analysts or not queue, "idle analyst with queued work"

    sample_until(config.horizon)

    # Cases still waiting at the horizon carry their accrued (censored) wait.
    for case in pending.values():
        waits[case.severity].append(config.horizon - case.arrival)

    mean_waits = {
        severity: (sum(values) / len(values)) if values else 0.0
        for severity, values in waits.items()
    }
    return BacklogTrace(
        queue_lengths=tuple(day_samples),
        mean_wait_by_severity=mean_waits,
        arrivals=entered,
        completions=completions,
        diverted=diverted,
        final_backlog=entered - completions,
    )


def simulate(config: SimConfig) -> BacklogTrace:
    """Run the queue model; identical configs produce identical traces."""
    config.validate()
    return _run_queue(generate_caseload(config), config)


@dataclass(frozen=True)
class DisciplineComparison:
    fifo_waits: dict[str, float]
    severity_waits: dict[str, float]

    def to_dict(self) -> dict:
        return {"fifo": self.fifo_waits, "severity": self.severity_waits}


def compare_disciplines(config: SimConfig) -> DisciplineComparison:
    """Same caseload under both disciplines; per-severity mean waits."""
    config.validate()
    fifo = simulate(replace(config, discipline="fifo"))
    severity = simulate(replace(config, discipline="severity"))
    return DisciplineComparison(
        fifo_waits=fifo.mean_wait_by_severity,
        severity_waits=severity.mean_wait_by_severity,
    )
