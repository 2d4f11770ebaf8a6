from primitives.audit import audit_kwise, exact_bias, mask_kill_probability, max_bias, measure_bias
from primitives.descriptor import (
    DistributionDescriptor,
    Kind,
    almost_kwise,
    kwise,
    point_mass,
    small_bias,
    uniform,
)
from primitives.distribution import ExactDistribution, enumerated_counts, exact_counts
from primitives.samplers import (
    check_sampling,
    enumerate_outputs,
    iter_output_chunks,
    outputs_from_seeds,
    random_words,
    sample,
    sample_almost_kwise,
    sample_kwise,
    sample_outputs,
    sample_small_bias,
    sample_word,
)
