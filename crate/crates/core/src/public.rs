//! Persuasion the public can see: either the experiment alone, or the
//! experiment together with the realized recommendation.
//!
//! When recommendations are public, reputations condition on them and the
//! politician's behaviour after each recommendation depends only on its own
//! posterior through `p*(mu)`. The lobbyist's problem then reduces to
//! choosing the `a~`-posterior, with the other recommendation revealing `B`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::best_response::{solve_indifference, PublicBeliefs};
use crate::equilibrium::solve_baseline;
use crate::error::SolveError;
use crate::model::{
    a_given_b_for_posterior, lobbyist_payoff, net_gain, Action, Experiment, Params, Persuasion,
    PoliticianStrategy, Regime, ReputationCurve,
};
use crate::roots::{bisect, golden_max, grid_then_golden};

const ROOT_TOL: f64 = 1e-15;
const ELASTICITY_GRID: usize = 10_000;
const FD_STEP: f64 = 1e-6;
const ELASTICITY_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticityCheck {
    pub holds: bool,
    /// First grid point where the elasticity exceeds the bound.
    pub witness: Option<f64>,
    pub max_elasticity: f64,
    pub bound: f64,
}

/// Check that `tau f'(tau) / f(tau) <= 1 + 1/theta` on a grid of `(0, 1)`,
/// using centered differences.
pub fn check_elasticity(curve: &ReputationCurve, theta: f64) -> ElasticityCheck {
    let bound = if theta == 0.0 {
        f64::INFINITY
    } else {
        1.0 + 1.0 / theta
    };
    let mut witness = None;
    let mut max_elasticity = f64::NEG_INFINITY;
    for i in 1..ELASTICITY_GRID {
        let t = i as f64 / ELASTICITY_GRID as f64;
        let slope = (curve.eval(t + FD_STEP) - curve.eval(t - FD_STEP)) / (2.0 * FD_STEP);
        let e = t * slope / curve.eval(t);
        max_elasticity = max_elasticity.max(e);
        if witness.is_none() && e > bound + ELASTICITY_SLACK {
            witness = Some(t);
        }
    }
    ElasticityCheck {
        holds: witness.is_none(),
        witness,
        max_elasticity,
        bound,
    }
}

fn public_rep(tau: f64, prob: f64) -> f64 {
    tau / (tau + (1.0 - tau) * prob)
}

/// Unclamped solution of the recommendation-conditional indifference
/// condition at posterior `mu`. Infinite when `theta = 0` and `mu != 1/2`.
pub fn p_star_public_raw(params: &Params, mu: f64, curve: &ReputationCurve) -> Result<f64, SolveError> {
    let tau = params.tau;
    if params.theta == 0.0 {
        return Ok(match mu.partial_cmp(&0.5) {
            Some(std::cmp::Ordering::Greater) => f64::INFINITY,
            Some(std::cmp::Ordering::Less) => f64::NEG_INFINITY,
            _ => 0.5,
        });
    }
    let g = |p: f64| {
        let bracket = (1.0 - mu) * curve.eval_extended(public_rep(tau, 1.0 - p))
            - mu * curve.eval_extended(public_rep(tau, p));
        net_gain(params.theta, 2.0 * mu - 1.0, bracket)
    };
    let lo = -tau / (1.0 - tau);
    let hi = 1.0 / (1.0 - tau);
    let shift = 1e-14 * (hi - lo);
    let (lo, hi) = (lo + shift, hi - shift);
    // At mu = 0 or 1 one reputation drops out and the sign never changes.
    if g(lo) <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if g(hi) >= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(bisect(g, lo, hi, ROOT_TOL)?)
}

/// Probability of choosing `a` after a public recommendation with posterior
/// `mu`. With no career concerns the politician follows the posterior and
/// breaks the tie at one half toward `a`.
pub fn solve_p_star_public(params: &Params, mu: f64, curve: &ReputationCurve) -> Result<f64, SolveError> {
    if params.theta == 0.0 {
        return Ok(if mu >= 0.5 { 1.0 } else { 0.0 });
    }
    Ok(p_star_public_raw(params, mu, curve)?.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublicPersuasionSolution {
    pub mode: Persuasion,
    pub experiment: Experiment,
    pub strategy: PoliticianStrategy,
    /// Politician's response to the `a~`-posterior `mu`, sampled on `[mu0, 1]`.
    pub p_star_curve: Vec<(f64, f64)>,
    pub mu_dagger_a: f64,
    pub mu_dagger_b: f64,
    pub lobbyist_payoff: f64,
}

const CURVE_SAMPLES: usize = 101;
const PUBLIC_GRID: usize = 20_000;

fn sample_curve(mu0: f64, p: impl Fn(f64) -> Result<f64, SolveError>) -> Result<Vec<(f64, f64)>, SolveError> {
    (0..CURVE_SAMPLES)
        .map(|i| {
            let mu = mu0 + (1.0 - mu0) * i as f64 / (CURVE_SAMPLES - 1) as f64;
            Ok((mu, p(mu)?))
        })
        .collect()
}

/// Lobbyist-optimal experiment when the recommendation is public.
///
/// The `b~` posterior is zero and the `a~` posterior maximizes
/// `mu0 p*(mu) / mu` over `[1/2, 1]`.
pub fn solve_fully_public(
    params: &Params,
    curve: &ReputationCurve,
) -> Result<PublicPersuasionSolution, SolveError> {
    params.validate()?;
    let mu0 = params.mu0;
    let (mu, value) = if params.theta == 0.0 {
        (0.5, 2.0 * mu0)
    } else {
        let obj = |mu: f64| {
            solve_p_star_public(params, mu, curve)
                .map(|p| mu0 * p / mu)
                .unwrap_or(f64::NEG_INFINITY)
        };
        grid_then_golden(obj, 0.5, 1.0, PUBLIC_GRID, 1e-13)
    };
    let p = solve_p_star_public(params, mu, curve)?;
    Ok(PublicPersuasionSolution {
        mode: Persuasion::FullyPublic,
        experiment: Experiment::revealing_b_with_posterior(mu0, mu),
        strategy: PoliticianStrategy::new(p, 0.0)?,
        p_star_curve: sample_curve(mu0, |m| solve_p_star_public(params, m, curve))?,
        mu_dagger_a: mu,
        mu_dagger_b: 0.0,
        lobbyist_payoff: value,
    })
}

/// Lobbyist's payoff from `(1, y)` when the public sees the experiment and
/// reputations follow it.
fn experiment_public_payoff(
    params: &Params,
    curve: &ReputationCurve,
    y: f64,
) -> Result<(f64, PoliticianStrategy), SolveError> {
    let exp = Experiment::canonical(1.0, y);
    let br = solve_indifference(
        params,
        &exp,
        &Regime::experiment_public(),
        curve,
        &PublicBeliefs::consistent(),
    )?;
    Ok((
        lobbyist_payoff(params, &exp, &br.strategy, Action::A),
        br.strategy,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub grid_points: usize,
    /// `pi(a~ | B)` of the best grid point.
    pub grid_optimum: f64,
    /// Best `pi(a~ | B)` after refining between the neighbouring grid points.
    pub refined_optimum: f64,
    /// `pi(a~ | B)` of the private-persuasion equilibrium.
    pub private_optimum: f64,
    pub distance: f64,
    pub payoff: f64,
    pub p_at_optimum: f64,
}

/// Search experiments with `pi(a~ | A) = 1` when the public sees the
/// experiment, and compare the best one to the private-persuasion optimum.
pub fn verify_experiment_public_equivalence(
    params: &Params,
    curve: &ReputationCurve,
    grid_points: usize,
) -> Result<EquivalenceReport, SolveError> {
    params.validate()?;
    let private = solve_baseline(params, curve)?;
    let private_optimum = private.outcome.experiment_a.p_a_given_b();
    let n = grid_points.max(2);
    let values: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let y = i as f64 / (n - 1) as f64;
            experiment_public_payoff(params, curve, y)
                .map(|(v, _)| v)
                .unwrap_or(f64::NEG_INFINITY)
        })
        .collect();
    let (best_i, _) =
        values.iter().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
        );
    let step = 1.0 / (n - 1) as f64;
    let grid_optimum = best_i as f64 * step;
    let lo = (grid_optimum - step).max(0.0);
    let hi = (grid_optimum + step).min(1.0);
    let obj = |y: f64| {
        experiment_public_payoff(params, curve, y)
            .map(|(v, _)| v)
            .unwrap_or(f64::NEG_INFINITY)
    };
    let (refined, _) = golden_max(obj, lo, hi, 1e-13);
    let (refined, payoff) = if obj(refined) >= values[best_i] {
        (refined, obj(refined))
    } else {
        (grid_optimum, values[best_i])
    };
    let (_, strat) = experiment_public_payoff(params, curve, refined)?;
    Ok(EquivalenceReport {
        grid_points: n,
        grid_optimum,
        refined_optimum: refined,
        private_optimum,
        distance: (refined - private_optimum).abs(),
        payoff,
        p_at_optimum: strat.p_after_a,
    })
}

/// Lobbyist-optimal experiment when only the experiment is public: the best
/// point of [`verify_experiment_public_equivalence`].
pub fn solve_experiment_public(
    params: &Params,
    curve: &ReputationCurve,
    grid_points: usize,
) -> Result<PublicPersuasionSolution, SolveError> {
    let report = verify_experiment_public_equivalence(params, curve, grid_points)?;
    let experiment = Experiment::canonical(1.0, report.refined_optimum);
    let (payoff, strategy) = experiment_public_payoff(params, curve, report.refined_optimum)?;
    let mu0 = params.mu0;
    Ok(PublicPersuasionSolution {
        mode: Persuasion::ExperimentPublic,
        experiment,
        strategy,
        p_star_curve: sample_curve(mu0, |mu| {
            experiment_public_payoff(params, curve, a_given_b_for_posterior(mu0, mu))
                .map(|(_, s)| s.p_after_a)
        })?,
        mu_dagger_a: mu0 / (mu0 + (1.0 - mu0) * report.refined_optimum),
        mu_dagger_b: 0.0,
        lobbyist_payoff: payoff,
    })
}

/// `a~`-posterior of the private experiment with `pi(a~ | A) = 1` under which
/// the politician, obeying `b~`, is indifferent after `a~` when she chooses
/// `a` with probability `p_public`.
pub fn replication_posterior(
    params: &Params,
    curve: &ReputationCurve,
    p_public: f64,
) -> Result<f64, SolveError> {
    let (mu0, tau) = (params.mu0, params.tau);
    let residual = |mu: f64| {
        let x_a = a_given_b_for_posterior(mu0, mu);
        let rb = public_rep(tau, x_a * (1.0 - p_public) + 1.0 - x_a);
        let ra = public_rep(tau, p_public);
        let bracket = (1.0 - mu) * curve.eval(rb) - mu * curve.eval(ra);
        net_gain(params.theta, 2.0 * mu - 1.0, bracket)
    };
    if residual(mu0) >= 0.0 {
        return Ok(mu0);
    }
    Ok(bisect(residual, mu0, 1.0, ROOT_TOL)?)
}
