from generator.distribution import (
    exact_output_distribution,
    level_distributions,
    mask_distribution,
    seed_enumeration_histogram,
    step_distribution,
)
from generator.expand import check_sampling_budget, expand_seed, expand_seed_word, sample_generator_outputs
from generator.params import StarParams, derive_params_exact, derive_params_star
from generator.spec import (
    BASE_INDEPENDENCE_FACTOR,
    GeneratorSpec,
    LayoutEntry,
    Role,
    Variant,
    exact_spec,
    random_seed,
    seed_from_hex,
    seed_length,
    seed_to_hex,
    star_spec,
)
