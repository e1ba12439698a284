use std::fmt::Write as _;

use anyhow::anyhow;
use lobbycc::analysis::emit::{
    figure_rows, fmt_sig, rows_to_json, sweep_rows, to_rounded_json, write_csv, Row,
};
use lobbycc::analysis::{linspace, sweep, transparency_table};
use lobbycc::best_response::{indifference_residual, solve_indifference, PublicBeliefs};
use lobbycc::equilibrium::{solve, solve_baseline};
use lobbycc::oracle::{certify, certify_public, CertifyOptions, LobbyistGrid, OracleError};
use lobbycc::public::{
    check_elasticity, solve_experiment_public, solve_fully_public, PublicPersuasionSolution,
};
use lobbycc::{
    low_type_accuracy, posterior, Experiment, LobbyistPlay, Params, Persuasion, PoliticianStrategy,
    Recommendation, Regime, ReputationCurve, SolveError,
};
use num_rational::Ratio;
use serde_json::{json, Value};

use crate::config::{Command, Format, RunConfig};

/// Why a run stopped, mapped onto the process exit status.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Assumption(String),
    Other(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Assumption(_) => 3,
            Failure::Other(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "invalid configuration: {m}"),
            Failure::Assumption(m) => write!(f, "solver refused: {m}"),
            Failure::Other(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::AssumptionViolated(m) => Failure::Assumption(m),
            SolveError::Model(m) => Failure::Config(m.to_string()),
            other => Failure::Other(other.into()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Solve(s) => s.into(),
            other => Failure::Other(other.into()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Other(e.into())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Other(e.into())
    }
}

/// The emitted artifact and whether the run's check passed.
pub struct Outcome {
    pub artifact: String,
    pub verified: bool,
}

impl Outcome {
    fn ok(artifact: String) -> Outcome {
        Outcome {
            artifact,
            verified: true,
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let curve = cfg.curve().map_err(|e| Failure::Config(e.0))?;
    match cfg.command {
        Command::Solve => run_solve(cfg, &curve),
        Command::Sweep => run_sweep(cfg, &curve),
        Command::Verify => run_verify(cfg, &curve),
        Command::Fig1 => run_fig1(cfg, &curve),
        Command::Example1 => run_example1(cfg, &curve),
        Command::Public => run_public(cfg, &curve),
    }
}

fn unsupported(cfg: &RunConfig) -> Failure {
    Failure::Config(format!(
        "format {} is not available for {}",
        cfg.format,
        cfg.command.name()
    ))
}

fn envelope(cfg: &RunConfig, result: Value) -> Result<String, Failure> {
    let mut text = serde_json::to_string_pretty(&json!({ "config": cfg, "result": result }))?;
    text.push('\n');
    Ok(text)
}

fn csv_text(rows: &[Row]) -> Result<String, Failure> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Failure::Other(e.into()))
}

fn is_public(regime: &Regime) -> bool {
    regime.persuasion != Persuasion::Private
}

fn solve_public(cfg: &RunConfig, curve: &ReputationCurve) -> Result<PublicPersuasionSolution, Failure> {
    let p = cfg.params();
    Ok(match cfg.regime.persuasion {
        Persuasion::FullyPublic => solve_fully_public(&p, curve)?,
        _ => solve_experiment_public(&p, curve, cfg.equivalence_points)?,
    })
}

fn run_solve(cfg: &RunConfig, curve: &ReputationCurve) -> Result<Outcome, Failure> {
    let p = cfg.params();
    if is_public(&cfg.regime) {
        let sol = solve_public(cfg, curve)?;
        return Ok(Outcome::ok(match cfg.format {
            Format::Json => envelope(cfg, json!({ "solution": to_rounded_json(&sol)? }))?,
            Format::Csv => public_csv(&p, &[(cfg.regime.name(), public_record(&p, &sol))])?,
            Format::Text => return Err(unsupported(cfg)),
        }));
    }
    let eq = solve(&p, &cfg.regime, curve)?;
    let row = Row::from_equilibrium(&p, &eq);
    Ok(Outcome::ok(match cfg.format {
        Format::Json => envelope(
            cfg,
            json!({ "summary": row.to_json(), "equilibrium": to_rounded_json(&eq)? }),
        )?,
        Format::Csv => csv_text(&[row])?,
        Format::Text => return Err(unsupported(cfg)),
    }))
}

fn run_sweep(cfg: &RunConfig, curve: &ReputationCurve) -> Result<Outcome, Failure> {
    if is_public(&cfg.regime) {
        return Err(Failure::Config("sweeps cover private persuasion only".into()));
    }
    let grid = linspace(cfg.from, cfg.to, cfg.steps);
    let result = sweep(&cfg.params(), &cfg.regime, cfg.axis, &grid, curve)?;
    let rows = sweep_rows(&result);
    Ok(Outcome::ok(match cfg.format {
        Format::Csv => csv_text(&rows)?,
        Format::Json => envelope(
            cfg,
            json!({
                "axis": result.axis,
                "regime": result.regime.name(),
                "mu_info_trend": result.mu_info_trend,
                "welfare_trend": result.welfare_trend,
                "rows": rows_to_json(&rows),
            }),
        )?,
        Format::Text => return Err(unsupported(cfg)),
    }))
}

fn run_verify(cfg: &RunConfig, curve: &ReputationCurve) -> Result<Outcome, Failure> {
    if cfg.format != Format::Json {
        return Err(unsupported(cfg));
    }
    let p = cfg.params();
    let opts = CertifyOptions {
        grid: LobbyistGrid {
            coarse: cfg.grid,
            zoom: cfg.zoom,
        },
        mc_samples: cfg.mc_samples,
        seed: cfg.seed,
    };
    let report = if is_public(&cfg.regime) {
        certify_public(&p, curve, &solve_public(cfg, curve)?, &opts)?
    } else {
        certify(&p, curve, &solve(&p, &cfg.regime, curve)?, &opts)?
    };
    let verified = report.certified();
    Ok(Outcome {
        artifact: envelope(
            cfg,
            json!({ "certified": verified, "report": to_rounded_json(&report)? }),
        )?,
        verified,
    })
}

fn run_fig1(cfg: &RunConfig, curve: &ReputationCurve) -> Result<Outcome, Failure> {
    let table = transparency_table(&cfg.params(), curve)?;
    Ok(Outcome::ok(match cfg.format {
        Format::Text => format!("{table}\n"),
        Format::Csv => csv_text(&figure_rows(&table))?,
        Format::Json => envelope(cfg, to_rounded_json(&table)?)?,
    }))
}

struct PublicRecord {
    mu_dagger: f64,
    p_after_a: f64,
    lobbyist_payoff: f64,
    accuracy: f64,
}

fn public_record(p: &Params, sol: &PublicPersuasionSolution) -> PublicRecord {
    PublicRecord {
        mu_dagger: sol.mu_dagger_a,
        p_after_a: sol.strategy.p_after_a,
        lobbyist_payoff: sol.lobbyist_payoff,
        accuracy: low_type_accuracy(p, &sol.experiment, &sol.strategy),
    }
}

fn public_csv(p: &Params, records: &[(&str, PublicRecord)]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "mu0",
        "tau",
        "theta",
        "gamma",
        "regime",
        "mu_dagger_a",
        "p_after_a",
        "lobbyist_payoff",
        "accuracy",
    ])?;
    for (name, r) in records {
        w.write_record([
            fmt_sig(p.mu0),
            fmt_sig(p.tau),
            fmt_sig(p.theta),
            fmt_sig(p.gamma),
            name.to_string(),
            fmt_sig(r.mu_dagger),
            fmt_sig(r.p_after_a),
            fmt_sig(r.lobbyist_payoff),
            fmt_sig(r.accuracy),
        ])?;
    }
    let buf = w
        .into_inner()
        .map_err(|e| anyhow!("{e}"))
        .map_err(Failure::Other)?;
    String::from_utf8(buf).map_err(|e| Failure::Other(e.into()))
}

/// Fully public and experiment-public persuasion next to the private
/// benchmark.
fn run_public(cfg: &RunConfig, curve: &ReputationCurve) -> Result<Outcome, Failure> {
    let p = cfg.params();
    let fully = solve_fully_public(&p, curve)?;
    let experiment = solve_experiment_public(&p, curve, cfg.equivalence_points)?;
    let private = solve_baseline(&p, curve)?;
    let o = &private.outcome;
    let private_record = PublicRecord {
        mu_dagger: o.mu_info,
        p_after_a: o.strategy_a.p_after_a,
        lobbyist_payoff: o.payoff_a,
        accuracy: low_type_accuracy(&p, &o.experiment_a, &o.strategy_a),
    };
    Ok(Outcome::ok(match cfg.format {
        Format::Json => envelope(
            cfg,
            json!({
                "fully_public": to_rounded_json(&fully)?,
                "experiment_public": to_rounded_json(&experiment)?,
                "private": Row::from_equilibrium(&p, &private).to_json(),
                "elasticity": to_rounded_json(&check_elasticity(curve, p.theta))?,
            }),
        )?,
        Format::Csv => public_csv(
            &p,
            &[
                (Regime::fully_public().name(), public_record(&p, &fully)),
                (Regime::experiment_public().name(), public_record(&p, &experiment)),
                (Regime::baseline().name(), private_record),
            ],
        )?,
        Format::Text => return Err(unsupported(cfg)),
    }))
}

/// The worked example with lobbyist-A's experiment `pi(a~|A) = 1`,
/// `pi(b~|B) = 4/7`. The parameters are fixed; only the curve is configurable.
fn run_example1(cfg: &RunConfig, curve: &ReputationCurve) -> Result<Outcome, Failure> {
    let p = Params::new(1.0 / 3.0, 0.5, f64::INFINITY, 8.0 / 9.0).map_err(SolveError::from)?;
    let e = Experiment::new(1.0, 3.0 / 7.0).map_err(SolveError::from)?;

    let mu0 = Ratio::new(1i64, 3);
    let exact = mu0 / (mu0 + (Ratio::from_integer(1) - mu0) * Ratio::new(3, 7));
    let mu = posterior(p.mu0, &e, Recommendation::RecA).map_err(SolveError::from)?;

    let revealed = solve_indifference(&p, &e, &Regime::baseline(), curve, &PublicBeliefs::consistent())?;

    let regime = Regime::concealed_intent();
    let beliefs = PublicBeliefs::mixture(
        p.gamma,
        vec![LobbyistPlay::new(
            1.0 - p.gamma,
            Experiment::always_b(),
            PoliticianStrategy::obedient(),
        )],
    );
    let residual = indifference_residual(
        &p,
        &e,
        Recommendation::RecA,
        &regime,
        curve,
        &beliefs,
        PoliticianStrategy::obedient(),
    )?;
    let concealed = solve_indifference(&p, &e, &regime, curve, &beliefs)?;

    let w_concealed = low_type_accuracy(&p, &e, &concealed.strategy);
    let w_revealed = low_type_accuracy(&p, &e, &revealed.strategy);
    let loss = w_concealed - w_revealed;
    let obeys = concealed.strategy == PoliticianStrategy::obedient();

    Ok(Outcome::ok(match cfg.format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "parameters: mu0 = 1/3, tau = 1/2, gamma = 8/9, theta = inf");
            let _ = writeln!(s, "experiment: pi(a~|A) = 1, pi(b~|B) = 4/7");
            let _ = writeln!(s, "posterior after a~: {exact} = {}", fmt_sig(mu));
            let _ = writeln!(
                s,
                "intent revealed: politician plays a after a~ with probability {}",
                fmt_sig(revealed.strategy.p_after_a)
            );
            let _ = writeln!(
                s,
                "intent concealed: indifference residual below 1e-12: {}; politician obeys: {}",
                if residual.abs() < 1e-12 { "yes" } else { "no" },
                if obeys { "yes" } else { "no" }
            );
            let _ = writeln!(
                s,
                "correct decisions: concealed {}, revealed {}",
                fmt_sig(w_concealed),
                fmt_sig(w_revealed)
            );
            let _ = writeln!(s, "welfare loss from revealing intent: {}", fmt_sig(loss));
            s
        }
        Format::Json => envelope(
            cfg,
            to_rounded_json(&json!({
                "posterior": { "exact": exact.to_string(), "value": mu },
                "revealed": { "strategy": revealed.strategy, "welfare": w_revealed },
                "concealed": {
                    "residual": residual,
                    "strategy": concealed.strategy,
                    "welfare": w_concealed,
                },
                "welfare_loss": loss,
            }))?,
        )?,
        Format::Csv => return Err(unsupported(cfg)),
    }))
}
