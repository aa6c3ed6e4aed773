mod construct;
mod direction;
mod verdict;

pub use construct::{
    build_p_and_k, build_witness, p_trace, PatternChoice, Replication, ResidualRow, TraceRow, WitnessReport,
    WitnessStep, WitnessVerdict,
};
pub use direction::{choose_w, on_unit_circle, root_of_unity_order, Direction, DirectionCase, UNIT_TOLERANCE};
pub use verdict::{accumulation_verdict, DiscreteReason, Verdict, VerdictReport, DEFAULT_TRACE_DEPTH};
