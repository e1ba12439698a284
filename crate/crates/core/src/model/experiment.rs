use serde::{Deserialize, Serialize};

use crate::error::{check_probability, ModelError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    A,
    B,
}

impl Action {
    pub fn other(self) -> Self {
        match self {
            Action::A => Action::B,
            Action::B => Action::A,
        }
    }
}

/// Signal realization of an experiment: `RecA` recommends `a`, `RecB`
/// recommends `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Recommendation {
    RecA,
    RecB,
}

/// A binary experiment `pi(s | omega)`, stored as the probabilities of
/// recommending `a` in each state.
///
/// Labels are canonical: `p_a_given_a >= p_a_given_b`, so the posterior after
/// `RecA` is never below the posterior after `RecB`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    p_a_given_a: f64,
    p_a_given_b: f64,
}

impl Experiment {
    /// Build from `pi(RecA | A)` and `pi(RecA | B)`, swapping labels if needed.
    pub fn new(p_a_given_a: f64, p_a_given_b: f64) -> Result<Self, ModelError> {
        let x = check_probability("pi(a~|A)", p_a_given_a)?;
        let y = check_probability("pi(a~|B)", p_a_given_b)?;
        Ok(Self::canonical(x, y))
    }

    pub(crate) fn canonical(x: f64, y: f64) -> Self {
        if x >= y {
            Experiment {
                p_a_given_a: x,
                p_a_given_b: y,
            }
        } else {
            Experiment {
                p_a_given_a: 1.0 - x,
                p_a_given_b: 1.0 - y,
            }
        }
    }

    /// Always recommends `a`.
    pub fn always_a() -> Self {
        Experiment {
            p_a_given_a: 1.0,
            p_a_given_b: 1.0,
        }
    }

    /// Always recommends `b`.
    pub fn always_b() -> Self {
        Experiment {
            p_a_given_a: 0.0,
            p_a_given_b: 0.0,
        }
    }

    pub fn fully_revealing() -> Self {
        Experiment {
            p_a_given_a: 1.0,
            p_a_given_b: 0.0,
        }
    }

    /// The experiment with `pi(RecA | A) = 1` whose `RecA` posterior is `mu`.
    pub fn revealing_b_with_posterior(mu0: f64, mu: f64) -> Self {
        Experiment::canonical(1.0, a_given_b_for_posterior(mu0, mu))
    }

    pub fn p_a_given_a(&self) -> f64 {
        self.p_a_given_a
    }

    pub fn p_a_given_b(&self) -> f64 {
        self.p_a_given_b
    }

    pub fn p_b_given_a(&self) -> f64 {
        1.0 - self.p_a_given_a
    }

    pub fn p_b_given_b(&self) -> f64 {
        1.0 - self.p_a_given_b
    }

    pub fn prob(&self, rec: Recommendation, state: Action) -> f64 {
        match (rec, state) {
            (Recommendation::RecA, Action::A) => self.p_a_given_a,
            (Recommendation::RecA, Action::B) => self.p_a_given_b,
            (Recommendation::RecB, Action::A) => 1.0 - self.p_a_given_a,
            (Recommendation::RecB, Action::B) => 1.0 - self.p_a_given_b,
        }
    }

    pub fn is_uninformative(&self) -> bool {
        self.p_a_given_a == self.p_a_given_b
    }

    /// Marginal probability of a recommendation under prior `mu0`.
    pub fn marginal(&self, mu0: f64, rec: Recommendation) -> f64 {
        mu0 * self.prob(rec, Action::A) + (1.0 - mu0) * self.prob(rec, Action::B)
    }

    /// Relabel `A <-> B`, `a <-> b`, `RecA <-> RecB`.
    pub fn mirrored(&self) -> Self {
        Experiment {
            p_a_given_a: 1.0 - self.p_a_given_b,
            p_a_given_b: 1.0 - self.p_a_given_a,
        }
    }

    /// Row-stochastic 2x2 matrix: rows are states `(A, B)`, columns are
    /// recommendations `(RecA, RecB)`.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [
            [self.p_a_given_a, 1.0 - self.p_a_given_a],
            [self.p_a_given_b, 1.0 - self.p_a_given_b],
        ]
    }
}

/// `pi(RecA | B)` that makes the `RecA` posterior equal `mu` when
/// `pi(RecA | A) = 1`.
pub fn a_given_b_for_posterior(mu0: f64, mu: f64) -> f64 {
    mu0 * (1.0 - mu) / ((1.0 - mu0) * mu)
}

/// Bayes' rule: probability of state `A` after `rec`.
pub fn posterior(prior: f64, exp: &Experiment, rec: Recommendation) -> Result<f64, ModelError> {
    let num = prior * exp.prob(rec, Action::A);
    let den = num + (1.0 - prior) * exp.prob(rec, Action::B);
    if den <= 0.0 {
        return Err(ModelError::UndefinedPosterior);
    }
    Ok(num / den)
}

/// Probabilities of choosing `a` after each recommendation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoliticianStrategy {
    pub p_after_a: f64,
    pub p_after_b: f64,
}

impl PoliticianStrategy {
    pub fn new(p_after_a: f64, p_after_b: f64) -> Result<Self, ModelError> {
        Ok(PoliticianStrategy {
            p_after_a: check_probability("p_after_a", p_after_a)?,
            p_after_b: check_probability("p_after_b", p_after_b)?,
        })
    }

    pub const fn obedient() -> Self {
        PoliticianStrategy {
            p_after_a: 1.0,
            p_after_b: 0.0,
        }
    }

    pub const fn always(action: Action) -> Self {
        match action {
            Action::A => PoliticianStrategy {
                p_after_a: 1.0,
                p_after_b: 1.0,
            },
            Action::B => PoliticianStrategy {
                p_after_a: 0.0,
                p_after_b: 0.0,
            },
        }
    }

    pub fn prob_a(&self, rec: Recommendation) -> f64 {
        match rec {
            Recommendation::RecA => self.p_after_a,
            Recommendation::RecB => self.p_after_b,
        }
    }

    pub fn mirrored(&self) -> Self {
        PoliticianStrategy {
            p_after_a: 1.0 - self.p_after_b,
            p_after_b: 1.0 - self.p_after_a,
        }
    }

    /// Probability that the low type chooses `a` in `state`.
    pub fn prob_a_in_state(&self, exp: &Experiment, state: Action) -> f64 {
        exp.prob(Recommendation::RecA, state) * self.p_after_a
            + exp.prob(Recommendation::RecB, state) * self.p_after_b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn posterior_examples() {
        let prior = 1.0 / 3.0;
        let uninformative = Experiment::new(1.0, 1.0).unwrap();
        let p = posterior(prior, &uninformative, Recommendation::RecA).unwrap();
        assert!((p - 1.0 / 3.0).abs() < 1e-15);

        let e = Experiment::new(1.0, 3.0 / 7.0).unwrap();
        let pa = posterior(prior, &e, Recommendation::RecA).unwrap();
        assert!((pa - 7.0 / 13.0).abs() < 1e-15);
        assert_eq!(posterior(prior, &e, Recommendation::RecB).unwrap(), 0.0);
    }

    #[test]
    fn zero_probability_recommendation_has_no_posterior() {
        let e = Experiment::always_a();
        assert_eq!(
            posterior(0.3, &e, Recommendation::RecB),
            Err(ModelError::UndefinedPosterior)
        );
    }

    #[test]
    fn labels_are_canonicalized() {
        let e = Experiment::new(0.2, 0.7).unwrap();
        assert!((e.p_a_given_a() - 0.8).abs() < 1e-15);
        assert!((e.p_a_given_b() - 0.3).abs() < 1e-15);
        let hi = posterior(0.4, &e, Recommendation::RecA).unwrap();
        let lo = posterior(0.4, &e, Recommendation::RecB).unwrap();
        assert!(hi >= lo);
    }

    #[test]
    fn probabilities_are_validated_not_clamped() {
        assert!(Experiment::new(1.0 + 1e-13, 0.5).is_ok());
        assert!(Experiment::new(1.0 + 1e-9, 0.5).is_err());
        assert!(PoliticianStrategy::new(-0.1, 0.0).is_err());
    }

    #[test]
    fn mirror_round_trip() {
        let e = Experiment::new(0.9, 0.35).unwrap();
        assert_eq!(e.mirrored().mirrored(), e);
        let s = PoliticianStrategy::new(0.7, 0.0).unwrap();
        assert_eq!(s.mirrored().mirrored(), s);
        assert_eq!(
            PoliticianStrategy::obedient().mirrored(),
            PoliticianStrategy::obedient()
        );
    }
}
