"""Command-line experiment runner.

Verbs: ``simulate`` (four-policy comparison on one garage), ``sweep``
(simulate across temperatures), ``fit`` (estimate a lot's temperature
from a survey CSV), ``sample-curve`` (subset-fit sample-efficiency
curve), ``render`` (text + PPM pictures of the initialized garage).

Every command is a pure function of (config, input files): re-running
with the same configuration and seed reproduces outputs byte for byte.
Configuration comes from an optional JSON file (--config) mirroring the
scenario fields, with any individual field overridable by a flag of the
same name.  Exit codes: 0 success, 2 config/usage error, 3 simulation
failure (garage exhausted).
"""

import argparse
import json
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from .fitting import (
    FitConfig,
    fit_temperature,
    load_survey,
    sample_efficiency_curve,
    survey_to_observations,
)
from .planner import GarageExhaustedError, TimeConstants
from .simulator import (
    Garage,
    PolicyKind,
    render_ppm,
    render_text,
    run_policy_sequence,
    write_outcomes_csv,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SIMULATION = 3

ALL_POLICIES = (PolicyKind.BENCHMARK, PolicyKind.INVERSE, PolicyKind.OPTIMAL, PolicyKind.TIPP)


@dataclass(frozen=True)
class ScenarioConfig:
    """One simulation scenario; defaults match the reference experiment
    (10 levels x 30 spots, temperature 0.5, 30 sequential cars)."""

    num_levels: int = 10
    capacity_per_level: int = 30
    temperature: float = 0.5
    num_cars: int = 30
    times: TimeConstants = field(default_factory=TimeConstants)
    fit: FitConfig = field(default_factory=FitConfig)
    policies: tuple = ALL_POLICIES
    seed: int = 0
    departure_prob: float = 0.0
    output_dir: str = "results"

    def __post_init__(self):
        if self.num_levels < 1 or self.capacity_per_level < 1:
            raise ValueError("garage dimensions must be >= 1")
        if self.num_cars < 1:
            raise ValueError("num_cars must be >= 1")
        if not 0.0 <= self.departure_prob <= 1.0:
            raise ValueError("departure_prob must lie in [0, 1]")
        if not self.policies:
            raise ValueError("at least one policy is required")


_SCENARIO_SCALARS = ("num_levels", "capacity_per_level", "temperature", "num_cars",
                     "seed", "departure_prob", "output_dir")
_TIME_FIELDS = ("t1", "t2", "t3")
_FIT_FIELDS = ("learning_rate", "max_iterations", "gradient_tolerance", "initial_temperature")


def _parse_policies(value) -> tuple:
    if isinstance(value, str):
        value = [p for p in value.split(",") if p]
    policies = tuple(PolicyKind(p) for p in value)
    if not policies:
        raise ValueError("at least one policy is required")
    return policies


def _load_config_file(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    known = set(_SCENARIO_SCALARS) | {"times", "fit", "policies"}
    for key in data:
        if key not in known:
            raise ValueError(f"{path}: unknown config field {key!r}")
    return data


def build_config(args) -> ScenarioConfig:
    """Merge defaults, the optional config file, and command-line flags
    (flags win)."""
    data = _load_config_file(args.config) if getattr(args, "config", None) else {}

    scalars = {}
    for name in _SCENARIO_SCALARS:
        if name in data:
            scalars[name] = data[name]
        flag = getattr(args, name, None)
        if flag is not None:
            scalars[name] = flag
    if getattr(args, "out", None) is not None:
        scalars["output_dir"] = args.out

    times_kw = dict(data.get("times", {}))
    fit_kw = dict(data.get("fit", {}))
    for name in _TIME_FIELDS:
        flag = getattr(args, name, None)
        if flag is not None:
            times_kw[name] = flag
    for name in _FIT_FIELDS:
        flag = getattr(args, name, None)
        if flag is not None:
            fit_kw[name] = flag

    policies = data.get("policies", ALL_POLICIES)
    if getattr(args, "policies", None) is not None:
        policies = args.policies

    try:
        times = TimeConstants(**times_kw)
        fit = FitConfig(**fit_kw)
    except TypeError as exc:
        raise ValueError(f"bad times/fit config: {exc}") from None
    return ScenarioConfig(times=times, fit=fit, policies=_parse_policies(policies), **scalars)


def build_fit_config(args) -> FitConfig:
    data = _load_config_file(args.config).get("fit", {}) if getattr(args, "config", None) else {}
    kw = dict(data)
    for name in _FIT_FIELDS:
        flag = getattr(args, name, None)
        if flag is not None:
            kw[name] = flag
    try:
        return FitConfig(**kw)
    except TypeError as exc:
        raise ValueError(f"bad fit config: {exc}") from None


def _run_policies(config: ScenarioConfig):
    """Run every requested policy on a freshly initialized garage.

    The garage is rebuilt from (temperature, seed) before each policy, so
    all policies face the same starting state.
    """
    runs = []
    for policy in config.policies:
        garage = Garage.from_temperature(config.num_levels, config.capacity_per_level,
                                         config.temperature, config.seed)
        outcomes = run_policy_sequence(
            garage, policy, config.num_cars, config.times, config.fit,
            prior_temperature=config.temperature,
            departure_prob=config.departure_prob,
        )
        runs.append((policy, outcomes, config.num_cars - len(outcomes)))
    return runs


def cmd_simulate(config: ScenarioConfig) -> int:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = []
    any_failures = False
    for policy, outcomes, failures in _run_policies(config):
        write_outcomes_csv(out / f"{policy.value}_percar.csv", policy, outcomes)
        total = sum(o.elapsed_time for o in outcomes)
        summary.append({
            "policy": policy.value,
            "total_time": total,
            "mean_time": total / len(outcomes) if outcomes else 0.0,
            "failures": failures,
        })
        any_failures = any_failures or failures > 0
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return EXIT_SIMULATION if any_failures else EXIT_OK


def cmd_sweep(config: ScenarioConfig, temperatures) -> int:
    if not temperatures:
        raise ValueError("at least one temperature is required")
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["temperature,policy,cumulative_seconds"]
    any_failures = False
    for temperature in temperatures:
        scenario = replace(config, temperature=float(temperature))
        for policy, outcomes, failures in _run_policies(scenario):
            total = sum(o.elapsed_time for o in outcomes)
            lines.append(f"{float(temperature)!r},{policy.value},{total:.6f}")
            any_failures = any_failures or failures > 0
    (out / "sweep.csv").write_text("\n".join(lines) + "\n")
    return EXIT_SIMULATION if any_failures else EXIT_OK


def cmd_fit(survey_path, fit_config: FitConfig, out_dir=None) -> int:
    survey = load_survey(survey_path)
    observations = survey_to_observations(survey)
    result = fit_temperature(observations, fit_config)
    report = {
        "temperature": result.temperature,
        "final_loss": result.final_loss,
        "iterations": result.iterations,
        "n_observations": len(observations),
        "clamped": result.clamped,
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "fit_report.json").write_text(text + "\n")
    return EXIT_OK


def cmd_sample_curve(survey_path, sizes, trials: int, seed: int,
                     fit_config: FitConfig, out_dir) -> int:
    survey = load_survey(survey_path)
    points = sample_efficiency_curve(survey, sizes, trials, seed, fit_config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["sample_size,mean_mse,std_mse"]
    lines.extend(f"{p.sample_size},{p.mean_mse!r},{p.std_mse!r}" for p in points)
    path = out / "sample_curve.csv"
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_render(config: ScenarioConfig) -> int:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    garage = Garage.from_temperature(config.num_levels, config.capacity_per_level,
                                     config.temperature, config.seed)
    snapshot = garage.snapshot()
    (out / "garage.txt").write_text(render_text(snapshot))
    (out / "garage.ppm").write_bytes(render_ppm(snapshot))
    return EXIT_OK


def _comma_floats(value: str) -> list:
    return [float(v) for v in value.split(",") if v]


def _comma_ints(value: str) -> list:
    return [int(v) for v in value.split(",") if v]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file mirroring the scenario fields")
    parser.add_argument("--seed", type=int, help="random seed")
    parser.add_argument("--out", help="output directory")


def _add_scenario_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--num-levels", dest="num_levels", type=int)
    parser.add_argument("--capacity-per-level", dest="capacity_per_level", type=int)
    parser.add_argument("--temperature", type=float)
    parser.add_argument("--num-cars", dest="num_cars", type=int)
    parser.add_argument("--departure-prob", dest="departure_prob", type=float)
    parser.add_argument("--policies", help="comma-separated subset of benchmark,inverse,optimal,tipp")
    parser.add_argument("--t1", type=float, help="floor scan time, seconds")
    parser.add_argument("--t2", type=float, help="walk-up time per floor, seconds")
    parser.add_argument("--t3", type=float, help="drive-down time per floor, seconds")
    _add_fit_flags(parser)


def _add_fit_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--learning-rate", dest="learning_rate", type=float)
    parser.add_argument("--max-iterations", dest="max_iterations", type=int)
    parser.add_argument("--gradient-tolerance", dest="gradient_tolerance", type=float)
    parser.add_argument("--initial-temperature", dest="initial_temperature", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tipp",
        description="Temperature-informed parking experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="compare policies on one garage")
    _add_common(p)
    _add_scenario_flags(p)

    p = sub.add_parser("sweep", help="simulate across temperatures")
    _add_common(p)
    _add_scenario_flags(p)
    p.add_argument("--temperatures", type=_comma_floats, required=True,
                   help="comma-separated temperatures, e.g. 0.1,0.5,1.0")

    p = sub.add_parser("fit", help="fit a lot temperature from a survey CSV")
    _add_common(p)
    _add_fit_flags(p)
    p.add_argument("survey", help="survey CSV path")

    p = sub.add_parser("sample-curve", help="sample-efficiency curve for a survey")
    _add_common(p)
    _add_fit_flags(p)
    p.add_argument("survey", help="survey CSV path")
    p.add_argument("--sizes", type=_comma_ints, required=True,
                   help="comma-separated sample sizes, e.g. 5,10,20,50,105")
    p.add_argument("--trials", type=int, default=50)

    p = sub.add_parser("render", help="render the initialized garage")
    _add_common(p)
    _add_scenario_flags(p)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(build_config(args))
        if args.command == "sweep":
            return cmd_sweep(build_config(args), args.temperatures)
        if args.command == "fit":
            return cmd_fit(args.survey, build_fit_config(args), args.out)
        if args.command == "sample-curve":
            seed = args.seed if args.seed is not None else 0
            out = args.out if args.out is not None else "results"
            return cmd_sample_curve(args.survey, args.sizes, args.trials, seed,
                                    build_fit_config(args), out)
        if args.command == "render":
            return cmd_render(build_config(args))
        raise ValueError(f"unknown command {args.command!r}")
    except GarageExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIMULATION
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
