use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibrium::{solve, CaseLabel, RegimeEquilibrium};
use crate::error::SolveError;
use crate::model::{Params, Regime, ReputationCurve};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Theta,
    Gamma,
    Mu0,
    Tau,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::Theta => "theta",
            Axis::Gamma => "gamma",
            Axis::Mu0 => "mu0",
            Axis::Tau => "tau",
        }
    }

    pub fn apply(&self, params: &Params, value: f64) -> Params {
        let mut p = *params;
        match self {
            Axis::Theta => p.theta = value,
            Axis::Gamma => p.gamma = value,
            Axis::Mu0 => p.mu0 = value,
            Axis::Tau => p.tau = value,
        }
        p
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "theta" => Ok(Axis::Theta),
            "gamma" => Ok(Axis::Gamma),
            "mu0" => Ok(Axis::Mu0),
            "tau" => Ok(Axis::Tau),
            other => Err(format!("unknown axis `{other}`")),
        }
    }
}

/// `steps` evenly spaced points from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![from],
        n => (0..n)
            .map(|i| {
                if i == n - 1 {
                    to
                } else {
                    from + (to - from) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub case: CaseLabel,
    pub mu_info: f64,
    pub welfare: f64,
    pub payoff_a: f64,
    pub payoff_b: f64,
}

impl From<&RegimeEquilibrium> for PointSummary {
    fn from(eq: &RegimeEquilibrium) -> Self {
        PointSummary {
            case: eq.case_label,
            mu_info: eq.outcome.mu_info,
            welfare: eq.outcome.welfare,
            payoff_a: eq.outcome.payoff_a,
            payoff_b: eq.outcome.payoff_b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub params: Params,
    pub summary: Result<PointSummary, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Trend {
    Constant,
    Nondecreasing,
    Nonincreasing,
    Mixed,
    /// Fewer than two successful points.
    Undetermined,
}

fn trend(values: &[f64]) -> Trend {
    if values.len() < 2 {
        return Trend::Undetermined;
    }
    let up = values.windows(2).all(|w| w[1] >= w[0]);
    let down = values.windows(2).all(|w| w[1] <= w[0]);
    match (up, down) {
        (true, true) => Trend::Constant,
        (true, false) => Trend::Nondecreasing,
        (false, true) => Trend::Nonincreasing,
        _ => Trend::Mixed,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: Axis,
    pub regime: Regime,
    pub grid: Vec<f64>,
    pub points: Vec<SweepPoint>,
    pub mu_info_trend: Trend,
    pub welfare_trend: Trend,
}

/// Solve `regime` at every grid value of `axis`. Points are solved in
/// parallel and kept in grid order; a failing point records its error and
/// the sweep continues.
pub fn sweep(
    params: &Params,
    regime: &Regime,
    axis: Axis,
    grid: &[f64],
    curve: &ReputationCurve,
) -> Result<SweepResult, SolveError> {
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(SolveError::Model(crate::error::ModelError::OutOfRange {
            name: "sweep grid",
            value: f64::NAN,
            range: "strictly ascending",
        }));
    }
    let points: Vec<SweepPoint> = grid
        .par_iter()
        .map(|&value| {
            let p = axis.apply(params, value);
            let summary = p
                .validate()
                .map_err(SolveError::from)
                .and_then(|_| solve(&p, regime, curve))
                .map(|eq| PointSummary::from(&eq))
                .map_err(|e| e.to_string());
            SweepPoint {
                value,
                params: p,
                summary,
            }
        })
        .collect();
    let ok: Vec<&PointSummary> = points.iter().filter_map(|p| p.summary.as_ref().ok()).collect();
    let mu: Vec<f64> = ok.iter().map(|s| s.mu_info).collect();
    let w: Vec<f64> = ok.iter().map(|s| s.welfare).collect();
    Ok(SweepResult {
        axis,
        regime: *regime,
        grid: grid.to_vec(),
        mu_info_trend: trend(&mu),
        welfare_trend: trend(&w),
        points,
    })
}
