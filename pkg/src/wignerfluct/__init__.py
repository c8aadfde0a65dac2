"""Trace fluctuations of polynomials in Wigner and deterministic matrices.

The package computes the limiting covariance of centered traces (the
second-order distribution) combinatorially over annular non-crossing
pairings, samples the matching matrix models, and verifies both against an
exact finite-N partition-sum oracle.
"""

from .annular import (
    AnnularPairing,
    CyclePermutation,
    enumerate_nc2,
    enumerate_nc2_disc,
    filter_by_through,
    gamma,
    is_annular_noncrossing,
    is_annular_noncrossing_recursive,
    is_non_mixing,
    kreweras,
    through_cycles,
)
from .covariance import (
    GOE,
    GUE,
    RADEMACHER,
    WignerParams,
    conjugate_cov,
    first_order,
    first_order_poly,
    phi2,
    phi2_poly,
    phi2_terms,
    phi2_two_term,
)
from .ensembles import (
    EntryLaw,
    SymmetricDiscreteLaw,
    diagonal_moment,
    entry_moment,
    goe_law,
    gue_law,
    params_of,
    rademacher_law,
    sample_wigner,
    solve_law,
)
from .graphs import (
    LabeledGraph,
    build_cycle_graph,
    classify,
    exact_moment,
    exact_tau2,
    injective_trace,
    leaves_count,
    omega_X,
    quotient,
    set_partitions,
)
from .montecarlo import (
    TraceSamples,
    convergence_sweep,
    empirical_cov,
    empirical_cumulants,
    is_gaussian,
    mixed_third_cumulant,
    run_traces,
)
from .states import (
    DetFamily,
    FiniteNState,
    SymbolicState,
    eval_phi_K,
    eval_phi_tilde_K,
    family_from_json,
)
from .words import (
    DetLetter,
    IDENTITY_LETTER,
    Monomial,
    Polynomial,
    canonicalize,
    parse_word,
    s_transform,
)

__version__ = "0.1.0"
