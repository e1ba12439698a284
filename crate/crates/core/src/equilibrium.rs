//! Lobbyist-optimal experiments and the resulting equilibria under the four
//! private-persuasion regimes.
//!
//! In every regime the informing lobbyist reveals the state he dislikes with
//! one recommendation and makes the politician exactly indifferent after the
//! other. Each regime therefore reduces to one increasing scalar equation in
//! the posterior `mu` at the informative recommendation, solved by bisection
//! on `(mu0, 1]`. A lobbyist whose equation is already satisfied (or slack)
//! at the prior does not inform.

use serde::{Deserialize, Serialize};

use crate::best_response::{solve_indifference, PublicBeliefs};
use crate::error::SolveError;
use crate::model::{
    a_given_b_for_posterior, lobbyist_payoff, net_gain, posterior, reputation, welfare, Action, Disclosure,
    Experiment, LobbyistPlay, Params, Persuasion, PoliticianStrategy, Recommendation, Regime,
    ReputationCurve, ReputationProfile,
};
use crate::roots::bisect;

const MU_TOL: f64 = 1e-15;
/// Absolute tolerance on the classification condition for the knife-edge
/// case where neither lobbyist type informs.
pub const CLUB_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "A_informs")]
    AInforms,
    #[serde(rename = "B_informs")]
    BInforms,
    #[serde(rename = "Neither_informs")]
    NeitherInforms,
    #[serde(rename = "Baseline")]
    Baseline,
}

impl CaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseLabel::AInforms => "A_informs",
            CaseLabel::BInforms => "B_informs",
            CaseLabel::NeitherInforms => "Neither_informs",
            CaseLabel::Baseline => "Baseline",
        }
    }
}

/// Equilibrium play of both lobbyist types.
///
/// `mu_info` is the posterior on state `A` at the informative recommendation:
/// after `a~` when lobbyist-A informs (or intent is revealed), after `b~` when
/// only lobbyist-B informs, and the prior when neither does. Payoffs are the
/// low-ability politician's probability of taking each type's preferred
/// action; `welfare` is the ex-ante mixture over lobbyist types.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumOutcome {
    pub experiment_a: Experiment,
    pub experiment_b: Experiment,
    pub strategy_a: PoliticianStrategy,
    pub strategy_b: PoliticianStrategy,
    pub mu_info: f64,
    pub reputations: ReputationProfile,
    pub welfare: f64,
    pub welfare_a: f64,
    pub welfare_b: f64,
    pub payoff_a: f64,
    pub payoff_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeEquilibrium {
    pub regime: Regime,
    pub case_label: CaseLabel,
    pub outcome: EquilibriumOutcome,
    pub defining_residual: f64,
}

/// `pi(b~ | B)` of the experiment with `pi(a~ | A) = 1` and `a~`-posterior `mu`.
fn b_given_b(mu0: f64, mu: f64) -> f64 {
    1.0 - a_given_b_for_posterior(mu0, mu)
}

fn rep(tau: f64, mass: f64) -> f64 {
    tau / (tau + (1.0 - tau) * mass)
}

/// Defining equation with intent and consequence revealed.
fn eq_baseline(p: &Params, f: &ReputationCurve, mu: f64) -> f64 {
    let x = b_given_b(p.mu0, mu);
    let bracket = (1.0 - mu) * f.eval_extended(rep(p.tau, x)) - mu * f.eval(p.tau);
    net_gain(p.theta, 2.0 * mu - 1.0, bracket)
}

/// Intent concealed; the other type sends an uninformative `b~`.
fn eq_concealed_intent(p: &Params, f: &ReputationCurve, mu: f64) -> f64 {
    let x = b_given_b(p.mu0, mu);
    let g = p.gamma;
    let bracket = (1.0 - mu) * f.eval(rep(p.tau, g * x + 1.0 - g)) - mu * f.eval(rep(p.tau, g));
    net_gain(p.theta, 2.0 * mu - 1.0, bracket)
}

/// Consequence concealed, intent revealed.
fn eq_concealed_consequence(p: &Params, f: &ReputationCurve, mu: f64) -> f64 {
    let x = b_given_b(p.mu0, mu);
    let bracket = f.eval_extended(rep(p.tau, x)) - f.eval(rep(p.tau, 1.0 / mu));
    net_gain(p.theta, 2.0 * mu - 1.0, bracket)
}

/// Intent and consequence concealed; the other type sends an uninformative
/// `b~`.
fn eq_concealed_both(p: &Params, f: &ReputationCurve, mu: f64) -> f64 {
    let x = b_given_b(p.mu0, mu);
    let g = p.gamma;
    let bracket = f.eval(rep(p.tau, g * x + (1.0 - g) / (1.0 - p.mu0))) - f.eval(rep(p.tau, g / mu));
    net_gain(p.theta, 2.0 * mu - 1.0, bracket)
}

type Equation = fn(&Params, &ReputationCurve, f64) -> f64;

/// Posterior at `a~` of the optimal experiment for a lobbyist who prefers
/// `a`, or `None` if he does not inform.
fn informer_posterior(p: &Params, f: &ReputationCurve, eq: Equation) -> Result<Option<f64>, SolveError> {
    if eq(p, f, p.mu0) >= 0.0 {
        return Ok(None);
    }
    Ok(Some(bisect(|mu| eq(p, f, mu), p.mu0, 1.0, MU_TOL)?))
}

/// Optimal experiment for lobbyist-A; lobbyist-B's is the mirror image of
/// lobbyist-A's in the relabeled game.
fn experiment_for(p: &Params, f: &ReputationCurve, eq: Equation) -> Result<(Experiment, f64), SolveError> {
    Ok(match informer_posterior(p, f, eq)? {
        Some(mu) => (Experiment::revealing_b_with_posterior(p.mu0, mu), mu),
        None => (Experiment::always_a(), p.mu0),
    })
}

fn mirrored_experiment_for(
    p: &Params,
    f: &ReputationCurve,
    eq: Equation,
) -> Result<(Experiment, f64), SolveError> {
    let (e, mu) = experiment_for(&p.mirrored(), f, eq)?;
    Ok((e.mirrored(), 1.0 - mu))
}

/// Politician responses and the summary numbers for a pair of experiments.
fn assemble(
    p: &Params,
    regime: &Regime,
    f: &ReputationCurve,
    exp_a: Experiment,
    exp_b: Experiment,
    mu_info: f64,
    informer: Action,
) -> Result<EquilibriumOutcome, SolveError> {
    let (strat_a, strat_b, reps) = match regime.intent {
        Disclosure::Revealed => {
            let sa = solve_indifference(p, &exp_a, regime, f, &PublicBeliefs::consistent())?.strategy;
            let sb = solve_indifference(p, &exp_b, regime, f, &PublicBeliefs::consistent())?.strategy;
            let (e, s) = match informer {
                Action::A => (exp_a, sa),
                Action::B => (exp_b, sb),
            };
            let reps = reputation(p, regime, &[LobbyistPlay::sole(e, s)])?;
            (sa, sb, reps)
        }
        Disclosure::Concealed => {
            let g = p.gamma;
            let obedient = PoliticianStrategy::obedient();
            let b_fixed = vec![LobbyistPlay::new(1.0 - g, exp_b, obedient)];
            let sa = solve_indifference(p, &exp_a, regime, f, &PublicBeliefs::mixture(g, b_fixed))?.strategy;
            let a_fixed = vec![LobbyistPlay::new(g, exp_a, sa)];
            let sb =
                solve_indifference(p, &exp_b, regime, f, &PublicBeliefs::mixture(1.0 - g, a_fixed))?.strategy;
            let reps = reputation(
                p,
                regime,
                &[
                    LobbyistPlay::new(g, exp_a, sa),
                    LobbyistPlay::new(1.0 - g, exp_b, sb),
                ],
            )?;
            (sa, sb, reps)
        }
    };
    let welfare_a = welfare(p, &[LobbyistPlay::sole(exp_a, strat_a)]);
    let welfare_b = welfare(p, &[LobbyistPlay::sole(exp_b, strat_b)]);
    Ok(EquilibriumOutcome {
        experiment_a: exp_a,
        experiment_b: exp_b,
        strategy_a: strat_a,
        strategy_b: strat_b,
        mu_info,
        reputations: reps,
        welfare: p.gamma * welfare_a + (1.0 - p.gamma) * welfare_b,
        welfare_a,
        welfare_b,
        payoff_a: lobbyist_payoff(p, &exp_a, &strat_a, Action::A),
        payoff_b: lobbyist_payoff(p, &exp_b, &strat_b, Action::B),
    })
}

fn revealed_intent(
    p: &Params,
    f: &ReputationCurve,
    regime: Regime,
    eq: Equation,
) -> Result<RegimeEquilibrium, SolveError> {
    p.validate()?;
    let (exp_a, mu) = experiment_for(p, f, eq)?;
    let (exp_b, _) = mirrored_experiment_for(p, f, eq)?;
    let outcome = assemble(p, &regime, f, exp_a, exp_b, mu, Action::A)?;
    Ok(RegimeEquilibrium {
        regime,
        case_label: CaseLabel::Baseline,
        outcome,
        defining_residual: eq(p, f, mu),
    })
}

/// Intent and consequence revealed, private persuasion.
pub fn solve_baseline(params: &Params, curve: &ReputationCurve) -> Result<RegimeEquilibrium, SolveError> {
    revealed_intent(params, curve, Regime::baseline(), eq_baseline)
}

/// Left side minus right side of the classification condition for concealed
/// intent: the net gain from `a` at the prior when both types send
/// uninformative recommendations that are obeyed. Negative means lobbyist-A
/// must inform, positive means lobbyist-B must, and zero means neither.
pub fn check_condition_club(params: &Params, curve: &ReputationCurve) -> f64 {
    eq_concealed_intent(params, curve, params.mu0)
}

pub fn classify(club: f64) -> CaseLabel {
    if club.abs() <= CLUB_TOL {
        CaseLabel::NeitherInforms
    } else if club < 0.0 {
        CaseLabel::AInforms
    } else {
        CaseLabel::BInforms
    }
}

/// Left side minus right side of the assumption that makes lobbyist-A the
/// informer when intent and consequence are both concealed. It holds iff the
/// value is negative; it never holds for `theta = inf`.
pub fn check_spade(params: &Params, curve: &ReputationCurve) -> f64 {
    let (mu0, tau) = (params.mu0, params.tau);
    let r = tau * (1.0 - mu0) / (tau * (1.0 - mu0) + 1.0 - tau);
    net_gain(params.theta, 2.0 * mu0 - 1.0, curve.eval(r) - 1.0)
}

pub fn spade_holds(params: &Params, curve: &ReputationCurve) -> bool {
    check_spade(params, curve) < 0.0
}

/// Intent concealed, consequence revealed.
pub fn solve_concealed_intent(
    params: &Params,
    curve: &ReputationCurve,
) -> Result<RegimeEquilibrium, SolveError> {
    params.validate()?;
    let p = params;
    let regime = Regime::concealed_intent();
    let club = check_condition_club(p, curve);
    let case = classify(club);
    let (exp_a, exp_b, mu, informer, residual) = match case {
        CaseLabel::AInforms => {
            let (e, mu) = experiment_for(p, curve, eq_concealed_intent)?;
            (
                e,
                Experiment::always_b(),
                mu,
                Action::A,
                eq_concealed_intent(p, curve, mu),
            )
        }
        CaseLabel::BInforms => {
            let (e, mu) = mirrored_experiment_for(p, curve, eq_concealed_intent)?;
            let residual = eq_concealed_intent(&p.mirrored(), curve, 1.0 - mu);
            (Experiment::always_a(), e, mu, Action::B, residual)
        }
        _ => (
            Experiment::always_a(),
            Experiment::always_b(),
            p.mu0,
            Action::A,
            club,
        ),
    };
    let outcome = assemble(p, &regime, curve, exp_a, exp_b, mu, informer)?;
    Ok(RegimeEquilibrium {
        regime,
        case_label: case,
        outcome,
        defining_residual: residual,
    })
}

/// Consequence concealed. With intent also concealed the characterization
/// needs the assumption checked by [`check_spade`]; otherwise the solver
/// refuses.
pub fn solve_consequence_concealed(
    params: &Params,
    intent: Disclosure,
    curve: &ReputationCurve,
) -> Result<RegimeEquilibrium, SolveError> {
    match intent {
        Disclosure::Revealed => revealed_intent(
            params,
            curve,
            Regime::concealed_consequence(),
            eq_concealed_consequence,
        ),
        Disclosure::Concealed => {
            params.validate()?;
            let spade = check_spade(params, curve);
            if spade >= 0.0 {
                return Err(SolveError::AssumptionViolated(format!(
                    "lobbyist-A is not guaranteed to be the informer (margin {spade:.3e} >= 0)"
                )));
            }
            let regime = Regime::concealed_both();
            let (exp_a, mu) = experiment_for(params, curve, eq_concealed_both)?;
            let outcome = assemble(
                params,
                &regime,
                curve,
                exp_a,
                Experiment::always_b(),
                mu,
                Action::A,
            )?;
            Ok(RegimeEquilibrium {
                regime,
                case_label: CaseLabel::AInforms,
                outcome,
                defining_residual: eq_concealed_both(params, curve, mu),
            })
        }
    }
}

/// Dispatch on the regime. Public persuasion lives in [`crate::public`].
pub fn solve(
    params: &Params,
    regime: &Regime,
    curve: &ReputationCurve,
) -> Result<RegimeEquilibrium, SolveError> {
    if regime.persuasion != Persuasion::Private {
        return Err(SolveError::UnsupportedRegime(regime.name().into()));
    }
    match (regime.intent, regime.consequence) {
        (Disclosure::Revealed, Disclosure::Revealed) => solve_baseline(params, curve),
        (Disclosure::Concealed, Disclosure::Revealed) => solve_concealed_intent(params, curve),
        (intent, Disclosure::Concealed) => solve_consequence_concealed(params, intent, curve),
    }
}

/// Interval of `gamma` in which concealed-intent information shrinks as
/// career concerns grow.
pub fn theta_decay_window(params: &Params) -> (f64, f64) {
    let (mu0, tau) = (params.mu0, params.tau);
    ((mu0 - tau + tau * mu0) / (1.0 - tau), 1.0 - mu0)
}

/// Analytic upper bound on the difference between the reputation losses
/// with consequences concealed and revealed, valid for `mu` in
/// `(mu0, 1/2)` and linear `f`.
pub fn loss_gap_bound(params: &Params, gamma: f64) -> f64 {
    let (mu0, tau, g) = (params.mu0, params.tau, gamma);
    let r = |mass: f64| tau / (tau + (1.0 - tau) * mass);
    let inner = r((1.0 - g) / (1.0 - mu0)) - 0.5 * r(1.0 - mu0 / (1.0 - mu0) * g) - r(g / mu0) + 0.5 * r(g);
    if params.theta_is_infinite() {
        inner * f64::INFINITY
    } else {
        params.theta * inner
    }
}

/// Limit of [`loss_gap_bound`] as `gamma -> 0`.
pub fn loss_gap_bound_limit(params: &Params) -> f64 {
    let (mu0, tau) = (params.mu0, params.tau);
    -params.theta * (1.0 - tau) * (1.0 + tau * mu0) / (2.0 * (1.0 - tau * mu0))
}

/// Posteriors at `a~` for lobbyist-A with intent concealed, with the
/// consequence revealed and concealed respectively.
pub fn concealed_intent_posteriors(
    params: &Params,
    curve: &ReputationCurve,
) -> Result<(f64, f64), SolveError> {
    let revealed = informer_posterior(params, curve, eq_concealed_intent)?.unwrap_or(params.mu0);
    let concealed = informer_posterior(params, curve, eq_concealed_both)?.unwrap_or(params.mu0);
    Ok((revealed, concealed))
}

/// Numerical threshold below which concealing the consequence makes
/// lobbyist-A's experiment less informative when intent is concealed.
///
/// Scans `gamma` over `(0, 1/2)` for the first point where the posterior with
/// concealed consequence is no longer below the one with revealed
/// consequence, then bisects the crossing. Returns `1/2` if there is none.
pub fn find_gamma_bar(params: &Params, curve: &ReputationCurve) -> Result<f64, SolveError> {
    if !spade_holds(params, curve) {
        return Err(SolveError::AssumptionViolated(
            "lobbyist-A is not guaranteed to be the informer".into(),
        ));
    }
    let gap = |g: f64| -> Result<f64, SolveError> {
        let (rev, con) = concealed_intent_posteriors(&params.with_gamma(g), curve)?;
        Ok(con - rev)
    };
    const N: usize = 200;
    let mut prev = 1e-9;
    if gap(prev)? >= 0.0 {
        return Ok(prev);
    }
    for i in 1..N {
        let g = 0.5 * i as f64 / N as f64;
        if gap(g)? >= 0.0 {
            let root = bisect(|x| gap(x).unwrap_or(f64::NAN), prev, g, 1e-13)?;
            return Ok(root);
        }
        prev = g;
    }
    Ok(0.5)
}

/// `P(A | rec)` for every recommendation the experiment sends.
pub fn posteriors(mu0: f64, exp: &Experiment) -> Vec<(Recommendation, f64)> {
    [Recommendation::RecA, Recommendation::RecB]
        .into_iter()
        .filter_map(|r| posterior(mu0, exp, r).ok().map(|m| (r, m)))
        .collect()
}
