//! Brute-force checks of equilibrium claims: politician deviations by payoff
//! enumeration, lobbyist deviations by experiment grid search, and
//! reputations by simulation.

pub mod lobbyist;
pub mod monte_carlo;
pub mod politician;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equilibrium::RegimeEquilibrium;
use crate::error::SolveError;
use crate::model::{
    reputation, Action, Disclosure, Experiment, LobbyistPlay, Params, PoliticianStrategy, Regime,
    ReputationCurve,
};
use crate::public::PublicPersuasionSolution;

pub use lobbyist::{verify_lobbyist, LobbyistCheck, LobbyistGrid};
pub use monte_carlo::{
    compare_reputations, monte_carlo_reputation, Cell, CellComparison, CellCount, EmpiricalReputation,
};
pub use politician::{verify_politician, verify_politician_public, PoliticianCheck};

/// Largest deviation gain a certified equilibrium may show.
pub const GAIN_TOL: f64 = 1e-7;
/// Monte Carlo agreement band in standard errors.
pub const MC_STANDARD_ERRORS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{samples} samples requested; at least {min} are required")]
    TooFewSamples { samples: u64, min: u64 },
    #[error("lobbyist population is empty")]
    EmptyPopulation,
    #[error(transparent)]
    Solve(#[from] SolveError),
}

impl From<crate::error::ModelError> for OracleError {
    fn from(e: crate::error::ModelError) -> Self {
        OracleError::Solve(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    Politician {
        lobbyist: Action,
        gain: f64,
        strategy: PoliticianStrategy,
    },
    Lobbyist {
        lobbyist: Action,
        gain: f64,
        experiment: Experiment,
        payoff: f64,
        candidate_payoff: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub max_politician_gain: f64,
    pub max_lobbyist_gain: f64,
    /// The best deviation found for each player checked.
    pub witnesses: Vec<Witness>,
    pub grid_resolution: usize,
    pub mc_samples: u64,
    pub seed: u64,
    pub mc_cells: Vec<CellComparison>,
}

impl DeviationReport {
    pub fn mc_within(&self) -> bool {
        self.mc_cells.iter().all(|c| c.within)
    }

    pub fn certified(&self) -> bool {
        self.max_politician_gain <= GAIN_TOL && self.max_lobbyist_gain <= GAIN_TOL && self.mc_within()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub grid: LobbyistGrid,
    /// Zero skips the simulation.
    pub mc_samples: u64,
    pub seed: u64,
}

/// The plays the public pools when forming reputations for the politician
/// facing `lobbyist`: that type alone when intent is revealed, both types
/// otherwise.
pub fn public_population(params: &Params, eq: &RegimeEquilibrium, lobbyist: Action) -> Vec<LobbyistPlay> {
    let o = &eq.outcome;
    let a = LobbyistPlay::new(params.gamma, o.experiment_a, o.strategy_a);
    let b = LobbyistPlay::new(1.0 - params.gamma, o.experiment_b, o.strategy_b);
    match (eq.regime.intent, lobbyist) {
        (Disclosure::Concealed, _) => vec![a, b],
        (Disclosure::Revealed, Action::A) => vec![LobbyistPlay::sole(o.experiment_a, o.strategy_a)],
        (Disclosure::Revealed, Action::B) => vec![LobbyistPlay::sole(o.experiment_b, o.strategy_b)],
    }
}

/// Run every check on a private-persuasion equilibrium.
pub fn certify(
    params: &Params,
    curve: &ReputationCurve,
    eq: &RegimeEquilibrium,
    opts: &CertifyOptions,
) -> Result<DeviationReport, OracleError> {
    let regime = eq.regime;
    let mut report = empty_report(opts);
    for lobbyist in [Action::A, Action::B] {
        let (exp, strat) = match lobbyist {
            Action::A => (eq.outcome.experiment_a, eq.outcome.strategy_a),
            Action::B => (eq.outcome.experiment_b, eq.outcome.strategy_b),
        };
        let population = public_population(params, eq, lobbyist);
        let reps = reputation(params, &regime, &population)?;
        let pol = verify_politician(params, curve, &exp, &strat, &reps);
        let lob = verify_lobbyist(params, &regime, curve, &exp, &strat, lobbyist, &reps, &opts.grid);
        record(&mut report, lobbyist, &pol, &lob);
        let simulate =
            opts.mc_samples > 0 && (regime.intent == Disclosure::Revealed || lobbyist == Action::A);
        if simulate {
            let emp = monte_carlo_reputation(
                params,
                regime.observables(),
                &population,
                opts.mc_samples,
                opts.seed,
            )?;
            report
                .mc_cells
                .extend(compare_reputations(&emp, &reps, MC_STANDARD_ERRORS));
        }
    }
    Ok(report)
}

/// Politician and lobbyist checks for a public-persuasion solution. Only the
/// lobbyist who prefers `a` is modeled there.
pub fn certify_public(
    params: &Params,
    curve: &ReputationCurve,
    sol: &PublicPersuasionSolution,
    opts: &CertifyOptions,
) -> Result<DeviationReport, OracleError> {
    let regime = match sol.mode {
        crate::model::Persuasion::FullyPublic => Regime::fully_public(),
        _ => Regime::experiment_public(),
    };
    let mut report = empty_report(opts);
    let play = [LobbyistPlay::sole(sol.experiment, sol.strategy)];
    let pol = match sol.mode {
        crate::model::Persuasion::FullyPublic => {
            verify_politician_public(params, curve, &sol.experiment, &sol.strategy)
        }
        _ => {
            let reps = reputation(params, &regime, &play)?;
            verify_politician(params, curve, &sol.experiment, &sol.strategy, &reps)
        }
    };
    // Reputations are not used when the probe is public.
    let reps = reputation(params, &Regime::experiment_public(), &play)?;
    let lob = verify_lobbyist(
        params,
        &regime,
        curve,
        &sol.experiment,
        &sol.strategy,
        Action::A,
        &reps,
        &opts.grid,
    );
    record(&mut report, Action::A, &pol, &lob);
    Ok(report)
}

fn empty_report(opts: &CertifyOptions) -> DeviationReport {
    DeviationReport {
        max_politician_gain: 0.0,
        max_lobbyist_gain: 0.0,
        witnesses: Vec::new(),
        grid_resolution: opts.grid.coarse,
        mc_samples: opts.mc_samples,
        seed: opts.seed,
        mc_cells: Vec::new(),
    }
}

fn record(report: &mut DeviationReport, lobbyist: Action, pol: &PoliticianCheck, lob: &LobbyistCheck) {
    report.max_politician_gain = report.max_politician_gain.max(pol.gain);
    report.max_lobbyist_gain = report.max_lobbyist_gain.max(lob.gain);
    report.witnesses.push(Witness::Politician {
        lobbyist,
        gain: pol.gain,
        strategy: pol.witness,
    });
    report.witnesses.push(Witness::Lobbyist {
        lobbyist,
        gain: lob.gain,
        experiment: lob.witness,
        payoff: lob.best_payoff,
        candidate_payoff: lob.candidate_payoff,
    });
}
