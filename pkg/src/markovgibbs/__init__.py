"""Gibbs measures of edge potentials on topological Markov shifts.

The package turns a primitive zero-one transition matrix and an edge
potential into a column-stochastic chain with exact cylinder measures,
computes the entropy spectrum of the measure as a Legendre transform of
the pressure, decodes words from entry-value streams, induces sliding
block conjugacies, and produces machine-checkable certificates that equal
entropy spectra do not force isomorphic systems.
"""

from .errors import (
    DegenerateError,
    PreconditionError,
    ReconstructionError,
    SolverError,
    WrongBaseError,
)
from .shiftcore import (
    AutomorphismResult,
    ShiftStructure,
    TransitionMatrix,
    admissible_words,
    automorphisms,
    cycle_intersection_condition,
    is_admissible,
    is_primitive,
    simple_cycles,
    structure,
    total_amalgamation,
)
from .gibbs import (
    GibbsChain,
    PerronData,
    Potential,
    chains_cohomologous,
    cohomologous_with_constant,
    cycle_sum,
    cylinder_measure,
    gibbs_ratio_bounds,
    ks_entropy,
    normalize,
    perron,
    weight_matrix,
)
from .spectrum import (
    DEFAULT_Q_GRID,
    SpectrumCurve,
    char_poly,
    char_poly_family_equal,
    pressure,
    pressure_derivative,
    q_power,
    spectrum_curve,
    spectrum_point,
    topological_entropy,
)
from .rigidity import (
    BlockCode,
    ConjugacyObstruction,
    SNRCertificate,
    VALUE_MATCH_TOL,
    counterexample_matrix,
    has_distinct_branch_values,
    induce_conjugacy,
    reconstruct_word,
    sampled_distinct_fraction,
    snr_certificate,
    spectral_twin,
    spectral_twin_chain,
)

__version__ = "0.1.0"
