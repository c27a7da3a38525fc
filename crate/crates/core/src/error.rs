use thiserror::Error;

use crate::stats::{ExtReal, MomentSummary};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty support: no atom carries positive probability")]
    EmptySupport,

    #[error("atom {index} has negative or non-finite value x = {value}")]
    NegativeValue { index: usize, value: f64 },

    #[error("atom {index} has negative or non-finite probability p = {prob}")]
    NegativeProb { index: usize, prob: f64 },

    #[error("probabilities sum to {sum}, outside 1 +/- 1e-12")]
    ProbSumOutOfTolerance { sum: f64 },

    #[error("inadmissible pair ({name_v}, {name_w}) = ({v}, {w}): {reason}")]
    InadmissiblePair {
        name_v: &'static str,
        name_w: &'static str,
        v: f64,
        w: ExtReal,
        reason: &'static str,
    },

    #[error("inadmissible parameters: {0}")]
    InadmissibleParams(String),

    #[error("shift c = {c} is below -u = {min}")]
    ShiftOutOfRange { c: f64, min: f64 },

    #[error("sandwich violated: lower {lower} <= gap {gap} <= upper {upper} fails (summary: {summary:?})")]
    SandwichViolation {
        lower: f64,
        gap: f64,
        upper: f64,
        summary: Box<MomentSummary>,
    },
}
