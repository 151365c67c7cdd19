"""Floor-descent planning for multi-level garages.

A car enters above floor 1 and may only drive downward.  Visiting a
floor costs a scan time ``t1``; if the car parks on floor ``a`` the
passenger walks back up, costing ``a * t2``; driving down one floor
costs ``t3``.  With ``p_i`` the probability that floor ``i`` has a free
spot, the minimum expected remaining time after arriving on floor ``i``
satisfies

    f(N) = t1 + N * t2                       (deepest floor, always parks)
    f(i) = p_i * (t1 + i * t2)
         + (1 - p_i) * (t1 + min_{j > i} ((j - i) * t3 + f(j)))

and the floor to drive to next from floor ``i`` (0 = entrance) is

    u(i) = argmin_{j > i} ((j - i) * t3 + f(j))

with ties broken toward the smallest ``j`` so the walk back stays short.

The closed loop re-estimates the temperature from the floor fills seen
so far, converts it to per-floor availabilities, re-solves the program
and takes ``u(current floor)``.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .fitting import FitConfig, Observation, fit_temperature
from .model import (
    T_MAX,
    T_MIN,
    EntropyParams,
    level_availability_prob,
    level_energies,
    level_energy,
    spot_occupancy_prob,
)


class GarageExhaustedError(RuntimeError):
    """No reachable floor can yield a parking spot."""


@dataclass(frozen=True)
class TimeConstants:
    """Per-floor time constants, in seconds."""

    t1: float = 30.0  # scanning one floor for a spot
    t2: float = 10.0  # passenger walking up one floor
    t3: float = 5.0   # vehicle driving down one floor

    def __post_init__(self):
        for name in ("t1", "t2", "t3"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive finite number")


@dataclass(frozen=True)
class GarageShape:
    num_levels: int
    capacity_per_level: int

    def __post_init__(self):
        if self.num_levels < 1:
            raise ValueError("num_levels must be >= 1")
        if self.capacity_per_level < 1:
            raise ValueError("capacity_per_level must be >= 1")


@dataclass(frozen=True)
class DpSolution:
    """Value function and control actions of the descent program.

    ``values[i-1]`` is f(i) for floors i = 1..N; ``actions[i]`` is u(i)
    for i = 0..N-1; ``entrance_value`` is min_j (j*t3 + f(j)), the
    expected total time for a car at the entrance.
    """

    values: np.ndarray
    actions: np.ndarray
    entrance_value: float

    @property
    def num_levels(self) -> int:
        return int(self.values.size)

    def value(self, floor: int) -> float:
        if not 1 <= floor <= self.num_levels:
            raise ValueError(f"floor {floor} outside [1, {self.num_levels}]")
        return float(self.values[floor - 1])

    def action(self, floor: int) -> int:
        if not 0 <= floor <= self.num_levels - 1:
            raise ValueError(f"no action from floor {floor}")
        return int(self.actions[floor])


def solve_dp(availability, times: TimeConstants) -> DpSolution:
    """Solve the descent program for one availability vector.

    ``availability`` lists p_1..p_N.  Runs bottom-up in O(N^2).  The
    deepest floor's value is the boundary t1 + N*t2 regardless of p_N.
    """
    p = np.asarray(availability, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("availability must be a non-empty 1-D sequence")
    if np.any(p < 0) or np.any(p > 1) or not np.all(np.isfinite(p)):
        raise ValueError("availability entries must lie in [0, 1]")
    n = p.size
    t1, t2, t3 = times.t1, times.t2, times.t3

    f = np.empty(n + 1)  # f[i] for floors 1..N; f[0] unused
    u = np.empty(n, dtype=int)  # u[i] for i = 0..N-1
    f[n] = t1 + n * t2
    for i in range(n - 1, 0, -1):
        js = np.arange(i + 1, n + 1)
        costs = (js - i) * t3 + f[i + 1:]
        k = int(np.argmin(costs))  # first minimum = smallest j
        u[i] = i + 1 + k
        f[i] = p[i - 1] * (t1 + i * t2) + (1.0 - p[i - 1]) * (t1 + costs[k])
    entrance_costs = np.arange(1, n + 1) * t3 + f[1:]
    k = int(np.argmin(entrance_costs))
    u[0] = 1 + k
    return DpSolution(values=f[1:].copy(), actions=u,
                      entrance_value=float(entrance_costs[k]))


def total_time(num_scans: int, parked_floor: int, times: TimeConstants) -> float:
    """Total time for a descent that scanned ``num_scans`` floors and
    parked on ``parked_floor``: n*t1 + a*(t2 + t3)."""
    if num_scans < 1:
        raise ValueError("num_scans must be >= 1")
    if parked_floor < 1:
        raise ValueError("parked_floor must be >= 1")
    return num_scans * times.t1 + parked_floor * (times.t2 + times.t3)


@dataclass(frozen=True)
class TippState:
    """Closed-loop policy memory: position, temperature estimate, floor fills seen.

    Treat instances as values; :func:`observe_floor` returns updated
    copies instead of mutating.
    """

    current_floor: int = 0
    temperature_estimate: float = 0.5
    floor_observations: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.current_floor < 0:
            raise ValueError("current_floor must be >= 0")
        if not T_MIN <= self.temperature_estimate <= T_MAX:
            raise ValueError(
                f"temperature_estimate must lie in [{T_MIN}, {T_MAX}]"
            )
        for floor, fill in self.floor_observations.items():
            if floor < 1:
                raise ValueError("observed floors must be >= 1")
            if not 0.0 <= fill <= 1.0:
                raise ValueError("observed fills must lie in [0, 1]")


def observe_floor(state: TippState, floor: int, fill_fraction: float) -> TippState:
    """Record the latest fill fraction seen on a floor (last writer wins)."""
    if floor < 1:
        raise ValueError("floor must be >= 1")
    if not 0.0 <= fill_fraction <= 1.0:
        raise ValueError("fill_fraction must lie in [0, 1]")
    observations = dict(state.floor_observations)
    observations[floor] = float(fill_fraction)
    return replace(state, floor_observations=observations)


@dataclass(frozen=True)
class TippPlan:
    """One re-planning step: refitted temperature, availabilities, DP solution, decision."""

    next_floor: int
    temperature: float
    availability: np.ndarray
    solution: DpSolution


def plan_parking(state: TippState, shape: GarageShape, times: TimeConstants,
                 fit_config: FitConfig | None = None) -> TippPlan:
    """Re-estimate, re-solve, and pick the next floor from the current one.

    If any floor fills have been observed, the temperature is refitted
    on {(E(k), fill_k)} starting from the current estimate; otherwise
    the prior estimate is kept.  Availabilities follow from the model
    and the DP supplies u(current floor).
    """
    n = shape.num_levels
    if state.current_floor >= n:
        raise GarageExhaustedError("garage exhausted: no floor below the current one")
    if fit_config is None:
        fit_config = FitConfig()
    temperature = state.temperature_estimate
    if state.floor_observations:
        observations = [
            Observation(level_energy(floor, n), fill)
            for floor, fill in sorted(state.floor_observations.items())
        ]
        warm = replace(fit_config, initial_temperature=temperature)
        temperature = fit_temperature(observations, warm).temperature
    q = spot_occupancy_prob(level_energies(n), EntropyParams(temperature))
    availability = level_availability_prob(q, shape.capacity_per_level)
    solution = solve_dp(availability, times)
    return TippPlan(
        next_floor=solution.action(state.current_floor),
        temperature=temperature,
        availability=availability,
        solution=solution,
    )


def tipp_decide(state: TippState, shape: GarageShape, times: TimeConstants,
                fit_config: FitConfig | None = None) -> int:
    """The floor to drive to next under the closed-loop policy."""
    return plan_parking(state, shape, times, fit_config).next_floor
