use serde::{Deserialize, Serialize};

use super::curve::ReputationCurve;
use super::experiment::{Action, Experiment, PoliticianStrategy};
use super::params::{Observables, Params, Persuasion, Regime};
use crate::error::ModelError;

/// One lobbyist type as the public sees it: its prior weight, its experiment
/// and the politician's response to that experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LobbyistPlay {
    pub weight: f64,
    pub experiment: Experiment,
    pub strategy: PoliticianStrategy,
}

impl LobbyistPlay {
    pub fn new(weight: f64, experiment: Experiment, strategy: PoliticianStrategy) -> Self {
        LobbyistPlay {
            weight,
            experiment,
            strategy,
        }
    }

    /// Single lobbyist whose type the public knows.
    pub fn sole(experiment: Experiment, strategy: PoliticianStrategy) -> Self {
        Self::new(1.0, experiment, strategy)
    }

    pub fn mirrored(&self) -> Self {
        LobbyistPlay {
            weight: self.weight,
            experiment: self.experiment.mirrored(),
            strategy: self.strategy.mirrored(),
        }
    }

    fn prob_a(&self, state: Action) -> f64 {
        self.strategy.prob_a_in_state(&self.experiment, state)
    }
}

/// Public posterior that the politician is high-ability after each action.
///
/// With `ActionAndState` the values are `tau(a, A)` and `tau(b, B)`; wrong
/// decisions reveal the low type and carry reputation zero. With `ActionOnly`
/// they are `tau(a)` and `tau(b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReputationProfile {
    pub rep_a: f64,
    pub rep_b: f64,
    pub basis: Observables,
}

impl ReputationProfile {
    /// Reputation after choosing `action` when the state is `state`.
    pub fn value(&self, action: Action, state: Action) -> f64 {
        match self.basis {
            Observables::ActionAndState if action != state => 0.0,
            _ => match action {
                Action::A => self.rep_a,
                Action::B => self.rep_b,
            },
        }
    }

    pub fn mirrored(&self) -> Self {
        ReputationProfile {
            rep_a: self.rep_b,
            rep_b: self.rep_a,
            basis: self.basis,
        }
    }
}

/// Net decision-quality payoff from choosing `a` over `b` at posterior `mu`.
pub fn quality_gain(mu: f64) -> f64 {
    2.0 * mu - 1.0
}

/// Reputational payoff forgone by choosing `a` over `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReputationLoss {
    Finite(f64),
    /// `theta = inf`: only the sign of the bracket matters.
    InfiniteScale {
        bracket: f64,
    },
}

impl ReputationLoss {
    /// Sign-preserving `gain - loss`; positive favours `a`.
    pub fn net_of(&self, gain: f64) -> f64 {
        match *self {
            ReputationLoss::Finite(loss) => gain - loss,
            ReputationLoss::InfiniteScale { bracket } => -bracket,
        }
    }
}

/// The bracket multiplying `theta` in the reputation loss.
pub fn loss_bracket(mu: f64, reps: &ReputationProfile, curve: &ReputationCurve) -> f64 {
    let fa = curve.eval_extended(reps.rep_a);
    let fb = curve.eval_extended(reps.rep_b);
    match reps.basis {
        Observables::ActionAndState => (1.0 - mu) * fb - mu * fa,
        Observables::ActionOnly => fb - fa,
    }
}

pub fn reputation_loss(
    params: &Params,
    mu: f64,
    reps: &ReputationProfile,
    curve: &ReputationCurve,
) -> ReputationLoss {
    let bracket = loss_bracket(mu, reps, curve);
    if params.theta.is_infinite() {
        ReputationLoss::InfiniteScale { bracket }
    } else if params.theta == 0.0 {
        ReputationLoss::Finite(0.0)
    } else {
        ReputationLoss::Finite(params.theta * bracket)
    }
}

/// Numerators and denominators of the two reputations. Denominators are
/// affine in every strategy component, which the best-response solver uses
/// to find the admissible domain of an unclamped strategy parameter.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RepParts {
    pub num_a: f64,
    pub den_a: f64,
    pub num_b: f64,
    pub den_b: f64,
}

impl RepParts {
    pub fn profile(&self, basis: Observables) -> ReputationProfile {
        ReputationProfile {
            rep_a: self.num_a / self.den_a,
            rep_b: self.num_b / self.den_b,
            basis,
        }
    }
}

pub(crate) fn reputation_parts(params: &Params, basis: Observables, population: &[LobbyistPlay]) -> RepParts {
    let tau = params.tau;
    let mu0 = params.mu0;
    let low = 1.0 - tau;
    match basis {
        Observables::ActionAndState => {
            let a_in_a: f64 = population.iter().map(|p| p.weight * p.prob_a(Action::A)).sum();
            let b_in_b: f64 = population
                .iter()
                .map(|p| p.weight * (1.0 - p.prob_a(Action::B)))
                .sum();
            RepParts {
                num_a: tau,
                den_a: tau + low * a_in_a,
                num_b: tau,
                den_b: tau + low * b_in_b,
            }
        }
        Observables::ActionOnly => {
            let low_a: f64 = population
                .iter()
                .map(|p| p.weight * (mu0 * p.prob_a(Action::A) + (1.0 - mu0) * p.prob_a(Action::B)))
                .sum();
            let low_b: f64 = population
                .iter()
                .map(|p| {
                    p.weight * (mu0 * (1.0 - p.prob_a(Action::A)) + (1.0 - mu0) * (1.0 - p.prob_a(Action::B)))
                })
                .sum();
            RepParts {
                num_a: tau * mu0,
                den_a: tau * mu0 + low * low_a,
                num_b: tau * (1.0 - mu0),
                den_b: tau * (1.0 - mu0) + low * low_b,
            }
        }
    }
}

/// Public reputations by Bayes' rule over the regime's information set.
///
/// `population` lists the lobbyist types the public cannot tell apart: a
/// single play with weight one when intent is revealed, both types weighted by
/// `gamma` and `1 - gamma` when it is concealed. A correct decision that only
/// the high type reaches gets reputation one.
pub fn reputation(
    params: &Params,
    regime: &Regime,
    population: &[LobbyistPlay],
) -> Result<ReputationProfile, ModelError> {
    if regime.persuasion == Persuasion::FullyPublic {
        return Err(ModelError::RecommendationConditioned("fully-public"));
    }
    let total: f64 = population.iter().map(|p| p.weight).sum();
    if population.is_empty() || (total - 1.0).abs() > 1e-12 {
        return Err(ModelError::OutOfRange {
            name: "population weight",
            value: total,
            range: "{1}",
        });
    }
    Ok(reputation_parts(params, regime.observables(), population).profile(regime.observables()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_params() -> Params {
        Params::new(1.0 / 3.0, 0.5, f64::INFINITY, 8.0 / 9.0).unwrap()
    }

    #[test]
    fn quality_gain_values() {
        assert_eq!(quality_gain(0.5), 0.0);
        assert!((quality_gain(7.0 / 13.0) - 1.0 / 13.0).abs() < 1e-15);
        assert_eq!(quality_gain(0.0), -1.0);
    }

    #[test]
    fn obedient_with_revealing_a_gives_prior_ability() {
        let p = Params::new(0.3, 0.5, 1.0, 0.5).unwrap();
        let e = Experiment::new(1.0, 0.4).unwrap();
        let r = reputation(
            &p,
            &Regime::baseline(),
            &[LobbyistPlay::sole(e, PoliticianStrategy::obedient())],
        )
        .unwrap();
        assert!((r.rep_a - 0.5).abs() < 1e-15);
    }

    #[test]
    fn example_reputations_revealed_intent() {
        let p = example_params();
        let e = Experiment::new(1.0, 3.0 / 7.0).unwrap();
        let s = PoliticianStrategy::new(8.0 / 9.0, 0.0).unwrap();
        let r = reputation(&p, &Regime::baseline(), &[LobbyistPlay::sole(e, s)]).unwrap();
        assert!((r.rep_a - 9.0 / 17.0).abs() < 1e-15);
        assert!((r.rep_b - 21.0 / 34.0).abs() < 1e-15);
    }

    #[test]
    fn example_reputations_concealed_intent() {
        let p = example_params();
        let pop = [
            LobbyistPlay::new(
                p.gamma,
                Experiment::new(1.0, 3.0 / 7.0).unwrap(),
                PoliticianStrategy::obedient(),
            ),
            LobbyistPlay::new(
                1.0 - p.gamma,
                Experiment::always_b(),
                PoliticianStrategy::obedient(),
            ),
        ];
        let r = reputation(&p, &Regime::concealed_intent(), &pop).unwrap();
        assert!((r.rep_b - 21.0 / 34.0).abs() < 1e-15);
        assert!((r.rep_a - 9.0 / 17.0).abs() < 1e-15);
    }

    #[test]
    fn action_only_reputations_match_closed_form() {
        let p = Params::new(0.3, 0.4, 1.0, 0.5).unwrap();
        let x = 0.35;
        let e = Experiment::new(1.0, x).unwrap();
        let r = reputation(
            &p,
            &Regime::concealed_consequence(),
            &[LobbyistPlay::sole(e, PoliticianStrategy::obedient())],
        )
        .unwrap();
        let (tau, mu0) = (p.tau, p.mu0);
        let ra = tau * mu0 / (tau * mu0 + (1.0 - tau) * (mu0 + (1.0 - mu0) * x));
        let rb = tau * (1.0 - mu0) / (tau * (1.0 - mu0) + (1.0 - tau) * (1.0 - mu0) * (1.0 - x));
        assert!((r.rep_a - ra).abs() < 1e-15);
        assert!((r.rep_b - rb).abs() < 1e-15);
    }

    #[test]
    fn unreached_correct_cell_gets_reputation_one() {
        let p = Params::new(0.3, 0.4, 1.0, 0.5).unwrap();
        let r = reputation(
            &p,
            &Regime::baseline(),
            &[LobbyistPlay::sole(
                Experiment::always_a(),
                PoliticianStrategy::obedient(),
            )],
        )
        .unwrap();
        assert_eq!(r.rep_b, 1.0);
    }

    #[test]
    fn reputation_loss_cases() {
        let p = Params::new(0.3, 0.4, 2.0, 0.5).unwrap();
        let c = ReputationCurve::linear();
        let reps = ReputationProfile {
            rep_a: 0.4,
            rep_b: 0.4,
            basis: Observables::ActionAndState,
        };
        assert_eq!(reputation_loss(&p, 0.5, &reps, &c), ReputationLoss::Finite(0.0));
        let zero = p.with_theta(0.0);
        let reps2 = ReputationProfile { rep_a: 0.2, ..reps };
        assert_eq!(
            reputation_loss(&zero, 0.7, &reps2, &c),
            ReputationLoss::Finite(0.0)
        );
        // Example: the bracket vanishes at mu = 7/13 with reps (9/17, 21/34).
        let ex = ReputationProfile {
            rep_a: 9.0 / 17.0,
            rep_b: 21.0 / 34.0,
            basis: Observables::ActionAndState,
        };
        match reputation_loss(&p.with_theta(f64::INFINITY), 7.0 / 13.0, &ex, &c) {
            ReputationLoss::InfiniteScale { bracket } => assert!(bracket.abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_fully_public_and_bad_weights() {
        let p = Params::new(0.3, 0.4, 2.0, 0.5).unwrap();
        let play = LobbyistPlay::sole(Experiment::fully_revealing(), PoliticianStrategy::obedient());
        assert!(reputation(&p, &Regime::fully_public(), &[play]).is_err());
        let half = LobbyistPlay { weight: 0.5, ..play };
        assert!(reputation(&p, &Regime::baseline(), &[half]).is_err());
    }
}
