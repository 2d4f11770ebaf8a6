from fourier.decompose import HighPart, Prop1Decomposition, decompose_prop1
from fourier.expansion import (
    FourierExpansion,
    coefficient_stack,
    expand,
    level_mass,
    level_masses,
    parseval_check,
)
from fourier.mass import MassBound, mass_bound, max_level_mass_sampled
