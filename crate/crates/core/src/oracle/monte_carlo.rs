//! Reputations as simulated Bayes frequencies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::model::{Action, LobbyistPlay, Observables, Params, Recommendation, ReputationProfile};

pub const MIN_SAMPLES: u64 = 100_000;
pub const SHARDS: u64 = 16;

/// One conditioning cell of the public's information set. `state` is `None`
/// when the consequence is concealed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub action: Action,
    pub state: Option<Action>,
}

impl Cell {
    fn index(&self) -> usize {
        let a = matches!(self.action, Action::B) as usize;
        match self.state {
            None => a,
            Some(s) => 2 * a + matches!(s, Action::B) as usize,
        }
    }

    fn all(basis: Observables) -> Vec<Cell> {
        let acts = [Action::A, Action::B];
        match basis {
            Observables::ActionOnly => acts.iter().map(|&action| Cell { action, state: None }).collect(),
            Observables::ActionAndState => acts
                .iter()
                .flat_map(|&action| {
                    acts.iter().map(move |&s| Cell {
                        action,
                        state: Some(s),
                    })
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellCount {
    pub cell: Cell,
    pub observations: u64,
    pub high: u64,
}

impl CellCount {
    /// Frequency of the high type, or `None` for a cell never observed.
    pub fn frequency(&self) -> Option<f64> {
        (self.observations > 0).then(|| self.high as f64 / self.observations as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalReputation {
    pub basis: Observables,
    pub cells: Vec<CellCount>,
    pub samples: u64,
    pub seed: u64,
}

impl EmpiricalReputation {
    pub fn get(&self, action: Action, state: Option<Action>) -> Option<&CellCount> {
        self.cells
            .iter()
            .find(|c| c.cell.action == action && c.cell.state == state)
    }

    pub fn empty_cells(&self) -> Vec<Cell> {
        self.cells
            .iter()
            .filter(|c| c.observations == 0)
            .map(|c| c.cell)
            .collect()
    }
}

fn simulate_shard(
    params: &Params,
    basis: Observables,
    population: &[LobbyistPlay],
    samples: u64,
    seed: u64,
    shard: u64,
) -> [[u64; 2]; 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    let mut counts = [[0u64; 2]; 4];
    for _ in 0..samples {
        let high = rng.gen_bool(params.tau);
        let state = if rng.gen_bool(params.mu0) {
            Action::A
        } else {
            Action::B
        };
        let mut u: f64 = rng.gen();
        let mut play = &population[population.len() - 1];
        for p in population {
            if u < p.weight {
                play = p;
                break;
            }
            u -= p.weight;
        }
        let rec = if rng.gen::<f64>() < play.experiment.prob(Recommendation::RecA, state) {
            Recommendation::RecA
        } else {
            Recommendation::RecB
        };
        let action = if high {
            state
        } else if rng.gen::<f64>() < play.strategy.prob_a(rec) {
            Action::A
        } else {
            Action::B
        };
        let cell = Cell {
            action,
            state: match basis {
                Observables::ActionAndState => Some(state),
                Observables::ActionOnly => None,
            },
        };
        let slot = &mut counts[cell.index()];
        slot[0] += 1;
        slot[1] += high as u64;
    }
    counts
}

/// Simulate ability, state, lobbyist type, recommendation and action, and
/// count how often the politician is high-ability in each cell the public
/// can condition on. Shards use independent streams of one seed, so the
/// result does not depend on the thread count.
pub fn monte_carlo_reputation(
    params: &Params,
    basis: Observables,
    population: &[LobbyistPlay],
    samples: u64,
    seed: u64,
) -> Result<EmpiricalReputation, OracleError> {
    if samples < MIN_SAMPLES {
        return Err(OracleError::TooFewSamples {
            samples,
            min: MIN_SAMPLES,
        });
    }
    if population.is_empty() {
        return Err(OracleError::EmptyPopulation);
    }
    let per = samples / SHARDS;
    let extra = samples % SHARDS;
    let shards: Vec<[[u64; 2]; 4]> = (0..SHARDS)
        .into_par_iter()
        .map(|s| {
            let n = per + u64::from(s < extra);
            simulate_shard(params, basis, population, n, seed, s)
        })
        .collect();
    let mut total = [[0u64; 2]; 4];
    for s in &shards {
        for (t, c) in total.iter_mut().zip(s) {
            t[0] += c[0];
            t[1] += c[1];
        }
    }
    let cells = Cell::all(basis)
        .into_iter()
        .map(|cell| {
            let [observations, high] = total[cell.index()];
            CellCount {
                cell,
                observations,
                high,
            }
        })
        .collect();
    Ok(EmpiricalReputation {
        basis,
        cells,
        samples,
        seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellComparison {
    pub cell: Cell,
    pub analytic: f64,
    pub frequency: Option<f64>,
    pub standard_error: f64,
    pub within: bool,
}

/// Compare frequencies with `analytic` within `k` standard errors. The
/// standard error uses the analytic value, so a cell whose analytic value is
/// 0 or 1 must match exactly. Unobserved cells are reported and pass.
pub fn compare_reputations(
    empirical: &EmpiricalReputation,
    analytic: &ReputationProfile,
    k: f64,
) -> Vec<CellComparison> {
    empirical
        .cells
        .iter()
        .map(|c| {
            let state = c.cell.state.unwrap_or(c.cell.action);
            let value = analytic.value(c.cell.action, state);
            let n = c.observations.max(1) as f64;
            let se = (value * (1.0 - value) / n).sqrt();
            let frequency = c.frequency();
            CellComparison {
                cell: c.cell,
                analytic: value,
                frequency,
                standard_error: se,
                within: frequency.is_none_or(|fr| (fr - value).abs() <= k * se + 1e-15),
            }
        })
        .collect()
}
