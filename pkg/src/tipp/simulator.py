"""Seeded multi-level garage simulation and the four parking policies.

The garage is an N x S boolean occupancy grid.  Initial occupancy per
level comes from the occupancy model at a chosen temperature; which
spots within a level start occupied is a seeded uniform draw (timing
depends only on floor fill counts, never on spot identity).  Arrivals
run under one of four policies:

* benchmark: sweep floors 1, 2, 3, ... and take the first free spot;
* inverse:   drive to the deepest floor, sweep N, N-1, ... upward;
* optimal:   full grid visibility, park on the shallowest free floor;
* tipp:      closed loop; re-estimate the temperature from observed
             floor fills, re-solve the descent program, drive to u(i).

Descending itineraries are timed by n*t1 + a*(t2 + t3).  The inverse
policy also drives upward, so it is timed by the generalized accounting
t1 per scan + t3 per floor actually driven (in either direction) + t2
per walk-up floor, which reduces to the same law on descents.
"""

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .fitting import FitConfig
from .model import EntropyParams, level_energies, level_fill_count, spot_occupancy_prob
from .planner import (
    GarageExhaustedError,
    GarageShape,
    TimeConstants,
    TippState,
    observe_floor,
    plan_parking,
    total_time,
)


class PolicyKind(str, Enum):
    BENCHMARK = "benchmark"
    INVERSE = "inverse"
    OPTIMAL = "optimal"
    TIPP = "tipp"


@dataclass(frozen=True)
class GarageSnapshot:
    """Read-only view: occupancy grid copy plus per-level occupied counts."""

    occupancy: np.ndarray
    per_level_counts: tuple

    @property
    def total_occupied(self) -> int:
        return sum(self.per_level_counts)


@dataclass(frozen=True)
class ArrivalOutcome:
    """One car's journey: floors visited, where it parked, elapsed seconds."""

    car_index: int
    floors_scanned: tuple
    parked_floor: int | None
    spot_index: int | None
    elapsed_time: float
    temperature_estimate_after: float | None = None


class Garage:
    """Mutable garage state; single-writer, mutated only by arrivals and renewal."""

    def __init__(self, num_levels: int, capacity_per_level: int, seed: int = 0):
        if num_levels < 1 or capacity_per_level < 1:
            raise ValueError("garage dimensions must be >= 1")
        self.num_levels = int(num_levels)
        self.capacity_per_level = int(capacity_per_level)
        self.seed = int(seed)
        self.occupancy = np.zeros((num_levels, capacity_per_level), dtype=bool)
        self.rng = np.random.default_rng(seed)
        self.init_temperature: float | None = None

    @classmethod
    def from_temperature(cls, num_levels: int, capacity_per_level: int,
                         temperature: float, seed: int = 0) -> "Garage":
        """Garage whose level fill counts follow the occupancy model.

        Level i holds round(q(E(i), T) * S) occupied spots; the spots
        chosen within each level are a seeded uniform sample.
        Deterministic given (num_levels, capacity, temperature, seed).
        """
        garage = cls(num_levels, capacity_per_level, seed)
        garage.init_temperature = float(temperature)
        params = EntropyParams(temperature)
        q = spot_occupancy_prob(level_energies(num_levels), params)
        for level in range(num_levels):
            count = level_fill_count(float(q[level]), capacity_per_level)
            spots = garage.rng.choice(capacity_per_level, size=count, replace=False)
            garage.occupancy[level, spots] = True
        return garage

    @classmethod
    def from_occupancy(cls, occupancy, seed: int = 0) -> "Garage":
        """Garage with an explicit occupancy grid (levels x spots)."""
        grid = np.asarray(occupancy, dtype=bool)
        if grid.ndim != 2:
            raise ValueError("occupancy must be a 2-D grid")
        garage = cls(grid.shape[0], grid.shape[1], seed)
        garage.occupancy[:] = grid
        return garage

    @property
    def shape(self) -> GarageShape:
        return GarageShape(self.num_levels, self.capacity_per_level)

    def level_occupied_count(self, floor: int) -> int:
        self._check_floor(floor)
        return int(self.occupancy[floor - 1].sum())

    def level_fill_fraction(self, floor: int) -> float:
        return self.level_occupied_count(floor) / self.capacity_per_level

    def free_spot_count(self) -> int:
        return int((~self.occupancy).sum())

    def lowest_free_floor(self) -> int | None:
        """Shallowest floor with a free spot, or None if the garage is full."""
        free_per_level = self.capacity_per_level - self.occupancy.sum(axis=1)
        for level in range(self.num_levels):
            if free_per_level[level] > 0:
                return level + 1
        return None

    def scan_and_park(self, floor: int) -> int | None:
        """Occupy the lowest-indexed free spot on the floor; None if full.

        The grid is mutated only on success.
        """
        self._check_floor(floor)
        row = self.occupancy[floor - 1]
        free = np.flatnonzero(~row)
        if free.size == 0:
            return None
        spot = int(free[0])
        row[spot] = True
        return spot

    def renewal_step(self, departure_prob: float) -> int:
        """Vacate each occupied spot independently with the given probability."""
        if not 0.0 <= departure_prob <= 1.0:
            raise ValueError("departure_prob must lie in [0, 1]")
        draws = self.rng.random(self.occupancy.shape)
        vacate = self.occupancy & (draws < departure_prob)
        self.occupancy[vacate] = False
        return int(vacate.sum())

    def snapshot(self) -> GarageSnapshot:
        counts = tuple(int(c) for c in self.occupancy.sum(axis=1))
        return GarageSnapshot(self.occupancy.copy(), counts)

    def _check_floor(self, floor: int) -> None:
        if not 1 <= floor <= self.num_levels:
            raise ValueError(f"floor {floor} outside [1, {self.num_levels}]")


def run_arrival(garage: Garage, policy: PolicyKind, times: TimeConstants | None = None,
                fit_config: FitConfig | None = None,
                tipp_state: TippState | None = None,
                car_index: int = 0) -> tuple[ArrivalOutcome, TippState | None]:
    """Drive one car through the garage under a policy.

    Returns the outcome and, for the tipp policy, the updated policy
    memory (None otherwise).  Raises GarageExhaustedError when the
    policy runs out of floors to try.
    """
    if times is None:
        times = TimeConstants()
    policy = PolicyKind(policy)
    n = garage.num_levels

    if policy is PolicyKind.BENCHMARK:
        scanned = []
        for floor in range(1, n + 1):
            scanned.append(floor)
            spot = garage.scan_and_park(floor)
            if spot is not None:
                elapsed = total_time(len(scanned), floor, times)
                return ArrivalOutcome(car_index, tuple(scanned), floor, spot, elapsed), None
        raise GarageExhaustedError("garage exhausted: benchmark sweep found no spot")

    if policy is PolicyKind.INVERSE:
        scanned = []
        for floor in range(n, 0, -1):
            scanned.append(floor)
            spot = garage.scan_and_park(floor)
            if spot is not None:
                # n floors down, then one up per failed floor; drive is
                # charged per transition regardless of direction.
                driven = n + (n - floor)
                elapsed = len(scanned) * times.t1 + driven * times.t3 + floor * times.t2
                return ArrivalOutcome(car_index, tuple(scanned), floor, spot, elapsed), None
        raise GarageExhaustedError("garage exhausted: inverse sweep found no spot")

    if policy is PolicyKind.OPTIMAL:
        floor = garage.lowest_free_floor()
        if floor is None:
            raise GarageExhaustedError("garage exhausted: no free spot anywhere")
        spot = garage.scan_and_park(floor)
        elapsed = total_time(1, floor, times)
        return ArrivalOutcome(car_index, (floor,), floor, spot, elapsed), None

    # TIPP: re-plan from the entrance, observing each visited floor's
    # fill before parking on it so the decision's evidence stays clean.
    state = tipp_state if tipp_state is not None else TippState(
        temperature_estimate=garage.init_temperature if garage.init_temperature is not None else 0.5
    )
    state = replace(state, current_floor=0)
    scanned = []
    while True:
        plan = plan_parking(state, garage.shape, times, fit_config)
        state = replace(state, temperature_estimate=plan.temperature)
        floor = plan.next_floor
        state = observe_floor(state, floor, garage.level_fill_fraction(floor))
        scanned.append(floor)
        spot = garage.scan_and_park(floor)
        if spot is not None:
            elapsed = total_time(len(scanned), floor, times)
            outcome = ArrivalOutcome(car_index, tuple(scanned), floor, spot, elapsed,
                                     temperature_estimate_after=state.temperature_estimate)
            return outcome, state
        state = replace(state, current_floor=floor)


def run_policy_sequence(garage: Garage, policy: PolicyKind, num_cars: int,
                        times: TimeConstants | None = None,
                        fit_config: FitConfig | None = None,
                        prior_temperature: float | None = None,
                        departure_prob: float = 0.0) -> list[ArrivalOutcome]:
    """Insert cars sequentially under one policy.

    Stops early if the garage is exhausted; the returned list then holds
    fewer than ``num_cars`` outcomes.  ``prior_temperature`` seeds the
    tipp policy's initial estimate (defaults to the temperature the
    garage was built from).  A positive ``departure_prob`` applies one
    renewal step after every arrival.
    """
    if num_cars < 1:
        raise ValueError("num_cars must be >= 1")
    policy = PolicyKind(policy)
    state = None
    if policy is PolicyKind.TIPP:
        prior = prior_temperature
        if prior is None:
            prior = garage.init_temperature if garage.init_temperature is not None else 0.5
        state = TippState(temperature_estimate=prior)
    outcomes = []
    for car in range(num_cars):
        try:
            outcome, new_state = run_arrival(garage, policy, times, fit_config,
                                             tipp_state=state, car_index=car)
        except GarageExhaustedError:
            break
        if new_state is not None:
            state = new_state
        outcomes.append(outcome)
        if departure_prob > 0.0:
            garage.renewal_step(departure_prob)
    return outcomes


def render_text(garage_or_snapshot) -> str:
    """Plain-text occupancy grid: one row per level, '#' occupied, '.' free."""
    snap = _as_snapshot(garage_or_snapshot)
    rows = ["".join("#" if cell else "." for cell in level) for level in snap.occupancy]
    return "\n".join(rows) + "\n"


def render_ppm(garage_or_snapshot, pixel_size: int = 8) -> bytes:
    """Portable pixmap (P3) of the grid: red = occupied, white = free."""
    if pixel_size < 1:
        raise ValueError("pixel_size must be >= 1")
    snap = _as_snapshot(garage_or_snapshot)
    levels, spots = snap.occupancy.shape
    width, height = spots * pixel_size, levels * pixel_size
    lines = [f"P3 {width} {height} 255"]
    for level in snap.occupancy:
        row = " ".join("255 0 0" if cell else "255 255 255"
                       for cell in level for _ in range(pixel_size))
        lines.extend([row] * pixel_size)
    return ("\n".join(lines) + "\n").encode("ascii")


def write_outcomes_csv(path, policy: PolicyKind, outcomes) -> None:
    """Per-car outcome stream with a running cumulative-time column."""
    policy = PolicyKind(policy)
    cumulative = 0.0
    with open(path, "w", newline="") as fh:
        fh.write("car_index,policy,floors_scanned,parked_floor,spot_index,"
                 "elapsed_seconds,cumulative_seconds,temperature_estimate\n")
        for outcome in outcomes:
            cumulative += outcome.elapsed_time
            floors = "|".join(str(f) for f in outcome.floors_scanned)
            parked = "" if outcome.parked_floor is None else str(outcome.parked_floor)
            spot = "" if outcome.spot_index is None else str(outcome.spot_index)
            temp = ("" if outcome.temperature_estimate_after is None
                    else f"{outcome.temperature_estimate_after:.6f}")
            fh.write(f"{outcome.car_index},{policy.value},{floors},{parked},{spot},"
                     f"{outcome.elapsed_time:.6f},{cumulative:.6f},{temp}\n")


def _as_snapshot(garage_or_snapshot) -> GarageSnapshot:
    if isinstance(garage_or_snapshot, Garage):
        return garage_or_snapshot.snapshot()
    return garage_or_snapshot
