use thiserror::Error;

/// Slack allowed when validating probabilities at module boundaries.
pub const PROB_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{name} = {value} is outside its legal range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("recommendation has zero marginal probability; posterior is undefined")]
    UndefinedPosterior,
    #[error("reputation curve is invalid: {0}")]
    InvalidCurve(String),
    #[error("regime {0} conditions reputations on the recommendation; use the public-persuasion module")]
    RecommendationConditioned(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("regime {0} is not handled by this solver")]
    UnsupportedRegime(String),
    #[error("root finder failed: {0}")]
    Root(#[from] RootError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}")]
    NoSignChange { lo: f64, hi: f64, flo: f64, fhi: f64 },
    #[error("function is not finite at {x}")]
    NotFinite { x: f64 },
}

/// Check that `value` is a probability, snapping values within [`PROB_SLACK`]
/// of the unit interval onto it.
pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64, ModelError> {
    if !(-PROB_SLACK..=1.0 + PROB_SLACK).contains(&value) {
        return Err(ModelError::OutOfRange {
            name,
            value,
            range: "[0, 1]",
        });
    }
    Ok(value.clamp(0.0, 1.0))
}
