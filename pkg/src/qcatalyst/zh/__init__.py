"""ZH diagrams: exact tensor semantics, rewrite rules, catalyst extraction."""

from .diagram import (
    DiagramBuilder,
    EvalCapError,
    ZhDiagram,
    ZhError,
    ccx_diagram,
    ccz_diagram,
    circuit_to_diagram,
    compose,
    controlled_phase_diagram,
    cx_diagram,
    cz_diagram,
    eval_tensor,
    h_box_euler,
    h_gate_diagram,
    h_state,
    parse_diagram,
    phase_gate_diagram,
    semantic_equal,
    serialize_diagram,
    state_one,
    state_plus,
    state_zero,
    tensor,
    wire_diagram,
    x_gate_diagram,
    x_spider_diagram,
    z_spider_diagram,
)
from .rules import (
    RewriteRule,
    UnsoundRuleError,
    apply_rule,
    bialgebra_xh_rule,
    bialgebra_zx_rule,
    catalysis_rule,
    copy_rule,
    find_matches,
    fusion_rule,
    h_cancel_rule,
    identity_rule,
    multiply_rule,
    parallel_edge_rule,
    register_rule,
    scalar_intro_rule,
    standard_rules,
)
from .extract import (
    ProofTrace,
    extract_catalyst,
    parse_trace,
    replay,
    serialize_trace,
    split_on_catalyst,
)

__all__ = [n for n in dir() if not n.startswith("_")]
