#!/usr/bin/env python3
"""Race the four parking policies on the same garage.

30 cars arrive sequentially; the garage resets to the same seeded state
before each policy.  Per-car and cumulative times are printed and the
per-car CSVs are written to demo_output/.
"""

from pathlib import Path

from tipp import Garage, PolicyKind, TimeConstants, run_policy_sequence, write_outcomes_csv

TEMPERATURE = 0.5
NUM_CARS = 30
times = TimeConstants()

out_dir = Path("demo_output")
out_dir.mkdir(exist_ok=True)

runs = {}
for policy in PolicyKind:
    garage = Garage.from_temperature(10, 30, TEMPERATURE, seed=0)
    outcomes = run_policy_sequence(garage, policy, NUM_CARS, times,
                                   prior_temperature=TEMPERATURE)
    runs[policy] = outcomes
    write_outcomes_csv(out_dir / f"{policy.value}_percar.csv", policy, outcomes)

print(f"Temperature {TEMPERATURE}, {NUM_CARS} sequential cars, garage reset per policy\n")
print("car   benchmark   inverse   optimal   tipp")
for car in range(NUM_CARS):
    row = [runs[p][car].elapsed_time for p in
           (PolicyKind.BENCHMARK, PolicyKind.INVERSE, PolicyKind.OPTIMAL, PolicyKind.TIPP)]
    print(f"{car:3d}   {row[0]:9.0f}   {row[1]:7.0f}   {row[2]:7.0f}   {row[3]:4.0f}")

print("\ncumulative seconds:")
for policy in PolicyKind:
    total = sum(o.elapsed_time for o in runs[policy])
    print(f"  {policy.value:10s} {total:8.0f}")

print("\nBenchmark climbs steadily (each car re-scans the floors the previous")
print("ones filled); inverse pays a fixed deep-dive overhead; tipp fluctuates")
print("as its temperature estimate overshoots and corrects, cumulatively")
print("beating both sweeps here; optimal is the full-information floor.")
print(f"\nPer-car CSVs written to {out_dir}/")
