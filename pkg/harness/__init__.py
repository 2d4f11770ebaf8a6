from harness.bounds import (
    composite_bound_exact,
    composite_bound_star,
    generator_bound,
    is_vacuous,
    step_bound_exact,
    step_bound_star,
)
from harness.experiment import (
    ExperimentResult,
    build_orders,
    build_programs,
    build_spec,
    config_hash,
    is_monotone,
    monotonicity_suite,
    rows_to_frame,
    run_experiment,
    summarize_report,
    write_report,
)
from harness.fooling import (
    FoolingError,
    SampledError,
    StepParams,
    exact_fooling_error,
    expectation_under,
    sampled_error_from_outputs,
    sampled_fooling_error,
    single_step_error,
)
from harness.lemmas import (
    CharacterKill,
    HBoundCheck,
    LevelProfile,
    NoiseProfile,
    character_kill_check,
    lemma_h_bound_check,
    level_error_profile,
    noise_mask_profile,
)
from harness.schemas import ErrorRow, ExperimentConfig
