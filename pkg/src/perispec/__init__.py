"""Spectra of Schrodinger operators on periodic graphs and their large-coupling decay."""

from .cycles import (
    ExponentReport,
    GaugeForm,
    WeightAssignment,
    cycle_index,
    distances_to_set,
    edge_weights,
    level_sets,
    mst_gauge,
    omega,
    omega_of_value,
    shortest_nontrivial_cycle,
)
from .floquet import (
    BandStructure,
    IntervalUnion,
    band_structure,
    band_width_bound,
    floquet_matrix,
    gauge_equivalence_check,
    hermitian_eigen,
    spectrum_measure,
)
from .graph_model import (
    OneForm,
    PeriodicGraphSpec,
    ValidationReport,
    derive_indices,
    parse_graph,
    validate,
)
from .sweep import (
    ClusterOverlap,
    SweepResult,
    cluster_bands,
    eigenvector_decay_check,
    fit_decay_exponent,
    last_gamma,
    lower_bound_total_bandwidth,
    sweep,
)

__version__ = "0.1.0"
