"""Exact-arithmetic circuit compiler, simulator and ZH rewrite engine
built around quantum catalysis."""

from .ring import (
    Dyadic,
    DependentGeneratorError,
    RingElement,
    RingError,
    TowerSpec,
    UnrepresentablePhaseError,
    format_ring,
    make_clifford_t_tower,
    make_cyclotomic_tower,
    make_gaussian_tower,
    parse_ring,
)
from .circuit import (
    Circuit,
    CircuitError,
    CircuitParseError,
    Gate,
    Observable,
    StateVector,
    format_state,
    parse_circuit,
    serialize_circuit,
    simulate,
    unitary_of,
)
from .catalysis import (
    CatalysisError,
    CatalyticEmbedding,
    MixedDecomposition,
    VerificationReport,
    adder,
    apply_embedding,
    catalyst_bank,
    ccz_to_3t,
    check_catalysis_identity,
    controlled_decrementer,
    controlled_phase_gadget,
    decompose_t_dm,
    phase_gadget,
    real_encode_circuit,
    real_encode_matrix,
    run_gadget_suite,
    subtractor,
    synth_small_phase,
    t_gadget,
    t_to_cs_embedding,
    transpile_t_to_cs,
    verify_adder_catalysis,
    verify_synth_small_phase,
)
from .estimator import (
    Ensemble,
    EstimateReport,
    EstimatorError,
    build_ensemble,
    exact_value,
    overhead,
    qp_estimate,
)

__version__ = "0.1.0"
