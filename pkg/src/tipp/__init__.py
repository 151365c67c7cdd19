"""Temperature-informed parking: occupancy model, descent planner, simulator."""

from .fitting import (
    FitConfig,
    FitDivergedError,
    FitResult,
    LotSurvey,
    Observation,
    SampleEfficiencyPoint,
    fit_temperature,
    load_survey,
    mse_loss,
    sample_efficiency_curve,
    save_survey,
    survey_to_observations,
    synthetic_survey,
)
from .model import (
    BOLTZMANN_CONSTANT,
    T_MAX,
    T_MIN,
    EnergySpec,
    EntropyParams,
    PerLevelEnergies,
    PerSpotEnergies,
    level_availability_prob,
    level_energies,
    level_energy,
    level_fill_count,
    spot_occupancy_prob,
)
from .planner import (
    DpSolution,
    GarageExhaustedError,
    GarageShape,
    TimeConstants,
    TippPlan,
    TippState,
    observe_floor,
    plan_parking,
    solve_dp,
    tipp_decide,
    total_time,
)
from .simulator import (
    ArrivalOutcome,
    Garage,
    GarageSnapshot,
    PolicyKind,
    render_ppm,
    render_text,
    run_arrival,
    run_policy_sequence,
    write_outcomes_csv,
)

__version__ = "0.1.0"
