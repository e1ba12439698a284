use super::experiment::{Action, Experiment, PoliticianStrategy};
use super::params::Params;
use super::reputation::LobbyistPlay;

/// Probability that the low-ability politician takes `preferred`.
pub fn lobbyist_payoff(
    params: &Params,
    exp: &Experiment,
    strat: &PoliticianStrategy,
    preferred: Action,
) -> f64 {
    let mu0 = params.mu0;
    let a = mu0 * strat.prob_a_in_state(exp, Action::A) + (1.0 - mu0) * strat.prob_a_in_state(exp, Action::B);
    match preferred {
        Action::A => a,
        Action::B => 1.0 - a,
    }
}

/// Probability that the low-ability politician decides correctly.
pub fn low_type_accuracy(params: &Params, exp: &Experiment, strat: &PoliticianStrategy) -> f64 {
    let mu0 = params.mu0;
    mu0 * strat.prob_a_in_state(exp, Action::A) + (1.0 - mu0) * (1.0 - strat.prob_a_in_state(exp, Action::B))
}

/// Public welfare: the probability of a correct decision, mixed over the
/// lobbyist types in `plays` by their weights.
pub fn welfare(params: &Params, plays: &[LobbyistPlay]) -> f64 {
    let accuracy: f64 = plays
        .iter()
        .map(|p| p.weight * low_type_accuracy(params, &p.experiment, &p.strategy))
        .sum();
    params.tau + (1.0 - params.tau) * accuracy
}
