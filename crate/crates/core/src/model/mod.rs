//! Primitive types of the game and the formulas every solver shares: Bayes
//! updating, reputations under each information set, payoffs and welfare.

mod curve;
mod experiment;
mod params;
mod payoff;
mod reputation;

pub use curve::{CurveDescriptor, ReputationCurve, SampledCurve};
pub use experiment::{
    a_given_b_for_posterior, posterior, Action, Experiment, PoliticianStrategy, Recommendation,
};
pub use params::{extended_real, parse_theta, Disclosure, Observables, Params, Persuasion, Regime};
pub use payoff::{lobbyist_payoff, low_type_accuracy, welfare};
pub use reputation::{
    loss_bracket, quality_gain, reputation, reputation_loss, LobbyistPlay, ReputationLoss, ReputationProfile,
};

pub(crate) use params::net_gain;
pub(crate) use reputation::reputation_parts;
