//! Windows of `X^m(q)`, `Y^m(q)` and `A(q)`, gap statistics, and the
//! breadth-first search for the smallest positive spectrum value.

mod bfs;
mod digits;
mod estimate;
mod gaps;
mod kernel;
pub mod naive;
mod window;

pub use bfs::{min_positive_bfs, BfsOptions, BfsResult, DepthRow};
pub use digits::{zq_canonicalize, zq_compare, DigitString};
pub use estimate::{
    liminf_estimate, limsup_estimate, LiminfEstimate, LiminfRow, LiminfVerdict, LimsupEstimate,
    LimsupRow, LimsupVerdict,
};
pub use gaps::{gap_report, gaps, histogram, GapOptions, GapReport, GapValue, HistogramBin, DEFAULT_TAIL_FRACTION};
pub use window::{
    covering_radius, enumerate_a, enumerate_x, enumerate_y, y_degree_suffices, Kind, SpectrumWindow,
    WindowPoint, DEFAULT_STATE_BUDGET,
};
