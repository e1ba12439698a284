//! Politician optimality by direct payoff enumeration.

use serde::{Deserialize, Serialize};

use crate::model::{
    posterior, Action, Experiment, Params, PoliticianStrategy, Recommendation, ReputationCurve,
    ReputationProfile,
};

/// Utility differences within this distance of zero are ties.
pub const TIE: f64 = 1e-9;
/// Mixed probabilities tried after each recommendation.
pub const MIXED_GRID: usize = 1000;

/// Expected utility of taking `action` at posterior `mu` when reputations
/// are `reps`. With `theta = inf` only the reputational term counts.
pub fn action_value(
    params: &Params,
    curve: &ReputationCurve,
    reps: &ReputationProfile,
    mu: f64,
    action: Action,
) -> f64 {
    let quality = match action {
        Action::A => mu,
        Action::B => 1.0 - mu,
    };
    let career = mu * curve.eval(reps.value(action, Action::A))
        + (1.0 - mu) * curve.eval(reps.value(action, Action::B));
    if params.theta.is_infinite() {
        career
    } else if params.theta == 0.0 {
        quality
    } else {
        quality + params.theta * career
    }
}

/// `U(a) - U(b)` at posterior `mu`.
pub fn value_gap(params: &Params, curve: &ReputationCurve, reps: &ReputationProfile, mu: f64) -> f64 {
    action_value(params, curve, reps, mu, Action::A) - action_value(params, curve, reps, mu, Action::B)
}

/// Pure best response at posterior `mu`; a tie goes to the recommended
/// action.
pub fn pure_choice(
    params: &Params,
    curve: &ReputationCurve,
    reps: &ReputationProfile,
    mu: f64,
    rec: Recommendation,
) -> f64 {
    let gap = value_gap(params, curve, reps, mu);
    if gap > TIE {
        1.0
    } else if gap < -TIE {
        0.0
    } else {
        match rec {
            Recommendation::RecA => 1.0,
            Recommendation::RecB => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoliticianCheck {
    /// Best ex-ante improvement over the candidate strategy.
    pub gain: f64,
    pub witness: PoliticianStrategy,
}

fn recs() -> [Recommendation; 2] {
    [Recommendation::RecA, Recommendation::RecB]
}

/// Best improvement over `strategy` against `exp` when reputations are held
/// at `reps` after both recommendations.
pub fn verify_politician(
    params: &Params,
    curve: &ReputationCurve,
    exp: &Experiment,
    strategy: &PoliticianStrategy,
    reps: &ReputationProfile,
) -> PoliticianCheck {
    verify_with(params, curve, exp, strategy, |_, _| *reps)
}

/// As [`verify_politician`] when the public sees the recommendation: the
/// reputations after each recommendation are the Bayes posteriors given the
/// candidate's probability of choosing `a` there.
pub fn verify_politician_public(
    params: &Params,
    curve: &ReputationCurve,
    exp: &Experiment,
    strategy: &PoliticianStrategy,
) -> PoliticianCheck {
    let tau = params.tau;
    verify_with(params, curve, exp, strategy, |rec, _| {
        let q = strategy.prob_a(rec);
        ReputationProfile {
            rep_a: tau / (tau + (1.0 - tau) * q),
            rep_b: tau / (tau + (1.0 - tau) * (1.0 - q)),
            basis: crate::model::Observables::ActionAndState,
        }
    })
}

fn verify_with(
    params: &Params,
    curve: &ReputationCurve,
    exp: &Experiment,
    strategy: &PoliticianStrategy,
    reps_after: impl Fn(Recommendation, f64) -> ReputationProfile,
) -> PoliticianCheck {
    let mut gain = 0.0;
    let mut witness = *strategy;
    for rec in recs() {
        let weight = exp.marginal(params.mu0, rec);
        let Ok(mu) = posterior(params.mu0, exp, rec) else {
            continue;
        };
        if weight <= 0.0 {
            continue;
        }
        let reps = reps_after(rec, mu);
        let ua = action_value(params, curve, &reps, mu, Action::A);
        let ub = action_value(params, curve, &reps, mu, Action::B);
        let u = |q: f64| q * ua + (1.0 - q) * ub;
        let current = strategy.prob_a(rec);
        let base = u(current);
        let mut best = (current, base);
        let candidates = [0.0, 1.0]
            .into_iter()
            .chain((0..=MIXED_GRID).map(|i| i as f64 / MIXED_GRID as f64));
        for q in candidates {
            let v = u(q);
            if v > best.1 {
                best = (q, v);
            }
        }
        gain += weight * (best.1 - base);
        match rec {
            Recommendation::RecA => witness.p_after_a = best.0,
            Recommendation::RecB => witness.p_after_b = best.0,
        }
    }
    PoliticianCheck { gain, witness }
}
