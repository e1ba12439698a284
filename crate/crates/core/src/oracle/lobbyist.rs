//! Lobbyist optimality by grid search over experiments.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::politician::{pure_choice, value_gap, TIE};
use crate::best_response::{solve_indifference, PublicBeliefs};
use crate::model::{
    lobbyist_payoff, posterior, Action, Experiment, Params, Persuasion, PoliticianStrategy, Recommendation,
    Regime, ReputationCurve, ReputationProfile,
};
use crate::public::solve_p_star_public;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LobbyistGrid {
    /// Points per axis of the global grid over `(pi(a~|A), pi(a~|B))`.
    pub coarse: usize,
    /// Points per axis of the local grid spanning one coarse step on each
    /// side of the candidate.
    pub zoom: usize,
}

impl Default for LobbyistGrid {
    fn default() -> Self {
        LobbyistGrid {
            coarse: 300,
            zoom: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LobbyistCheck {
    pub gain: f64,
    pub candidate_payoff: f64,
    pub best_payoff: f64,
    pub witness: Experiment,
    pub probes: usize,
}

fn recs() -> [Recommendation; 2] {
    [Recommendation::RecA, Recommendation::RecB]
}

fn share(preferred: Action, prob_a: f64) -> f64 {
    match preferred {
        Action::A => prob_a,
        Action::B => 1.0 - prob_a,
    }
}

/// Probability of `a` when the politician best-responds after each
/// recommendation with reputations fixed at `reps`. `keep` is tried first
/// after each recommendation and kept if it is itself a best response.
fn fixed_reputation_prob_a(
    params: &Params,
    curve: &ReputationCurve,
    reps: &ReputationProfile,
    exp: &Experiment,
    keep: Option<&PoliticianStrategy>,
) -> f64 {
    let mut total = 0.0;
    for rec in recs() {
        let weight = exp.marginal(params.mu0, rec);
        if weight <= 0.0 {
            continue;
        }
        let Ok(mu) = posterior(params.mu0, exp, rec) else {
            continue;
        };
        let q = match keep.map(|s| s.prob_a(rec)) {
            Some(q) if is_best(value_gap(params, curve, reps, mu), q) => q,
            _ => pure_choice(params, curve, reps, mu, rec),
        };
        total += weight * q;
    }
    total
}

fn is_best(gap: f64, q: f64) -> bool {
    (q == 1.0 && gap >= -TIE) || (q == 0.0 && gap <= TIE) || gap.abs() <= TIE
}

fn public_prob_a(params: &Params, curve: &ReputationCurve, exp: &Experiment) -> Option<f64> {
    let mut total = 0.0;
    for rec in recs() {
        let weight = exp.marginal(params.mu0, rec);
        if weight <= 0.0 {
            continue;
        }
        let mu = posterior(params.mu0, exp, rec).ok()?;
        total += weight * solve_p_star_public(params, mu, curve).ok()?;
    }
    Some(total)
}

/// Best improvement over `candidate` for the lobbyist who prefers
/// `preferred`.
///
/// Under private persuasion the public does not see a deviation, so
/// reputations stay at `reps` and the politician best-responds to each probe
/// with them; the candidate's own strategy is kept wherever it is a best
/// response. When the public sees the experiment, reputations track each
/// probe and `reps` and `strategy` are not used.
pub fn verify_lobbyist(
    params: &Params,
    regime: &Regime,
    curve: &ReputationCurve,
    candidate: &Experiment,
    strategy: &PoliticianStrategy,
    preferred: Action,
    reps: &ReputationProfile,
    grid: &LobbyistGrid,
) -> LobbyistCheck {
    let payoff = |exp: &Experiment, keep: Option<&PoliticianStrategy>| -> f64 {
        let prob_a = match regime.persuasion {
            Persuasion::Private => Some(fixed_reputation_prob_a(params, curve, reps, exp, keep)),
            Persuasion::ExperimentPublic => {
                solve_indifference(params, exp, regime, curve, &PublicBeliefs::consistent())
                    .ok()
                    .map(|br| lobbyist_payoff(params, exp, &br.strategy, Action::A))
            }
            Persuasion::FullyPublic => public_prob_a(params, curve, exp),
        };
        prob_a.map_or(f64::NEG_INFINITY, |a| share(preferred, a))
    };
    let candidate_payoff = payoff(candidate, Some(strategy));

    let probes = probe_points(candidate, grid);
    let (best_payoff, witness) = probes
        .par_iter()
        .map(|&(x, y)| {
            let e = Experiment::canonical(x, y);
            (payoff(&e, None), e)
        })
        .reduce(
            || (f64::NEG_INFINITY, *candidate),
            |a, b| if b.0 > a.0 { b } else { a },
        );
    let (best_payoff, witness) = if best_payoff > candidate_payoff {
        (best_payoff, witness)
    } else {
        (candidate_payoff, *candidate)
    };
    LobbyistCheck {
        gain: best_payoff - candidate_payoff,
        candidate_payoff,
        best_payoff,
        witness,
        probes: probes.len(),
    }
}

/// Coarse grid with `x >= y` plus the local zoom around the candidate.
fn probe_points(candidate: &Experiment, grid: &LobbyistGrid) -> Vec<(f64, f64)> {
    let n = grid.coarse.max(2);
    let step = 1.0 / (n - 1) as f64;
    let mut pts = Vec::with_capacity(n * (n + 1) / 2 + grid.zoom * grid.zoom);
    for i in 0..n {
        for j in 0..=i {
            pts.push((i as f64 * step, j as f64 * step));
        }
    }
    let m = grid.zoom;
    if m >= 2 {
        let (xc, yc) = (candidate.p_a_given_a(), candidate.p_a_given_b());
        let axis = |c: f64| -> Vec<f64> {
            (0..m)
                .map(|k| (c - step + 2.0 * step * k as f64 / (m - 1) as f64).clamp(0.0, 1.0))
                .collect()
        };
        let (xs, ys) = (axis(xc), axis(yc));
        for &x in &xs {
            for &y in &ys {
                if x >= y {
                    pts.push((x, y));
                }
            }
        }
    }
    pts
}
