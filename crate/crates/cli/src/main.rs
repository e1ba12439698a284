mod config;
mod run;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{Command, Format, Settings};
use run::Failure;

/// Equilibria of lobbyist persuasion with a career-concerned politician.
#[derive(Debug, Parser)]
#[command(name = "lobbycc", version)]
struct Cli {
    /// What to run. May instead come from `--config`.
    #[arg(value_enum)]
    command: Option<Command>,
    /// Settings file: JSON (a previous artifact works) or `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Prior on state A, in (0, 1/2).
    #[arg(long)]
    mu0: Option<String>,
    /// Prior that the politician is high-ability.
    #[arg(long)]
    tau: Option<String>,
    /// Career-concern intensity; `inf` for pure reputation concerns.
    #[arg(long)]
    theta: Option<String>,
    /// Prior that the lobbyist prefers a.
    #[arg(long)]
    gamma: Option<String>,
    /// baseline, concealed-intent, concealed-consequence, concealed-both,
    /// experiment-public or fully-public.
    #[arg(long)]
    regime: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the artifact here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// linear, sqrt, power:<k> or file:<path>.
    #[arg(long)]
    curve: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Coarse lobbyist grid per axis for `verify`.
    #[arg(long)]
    grid: Option<String>,
    /// Zoom grid per axis for `verify`.
    #[arg(long)]
    zoom: Option<String>,
    /// Simulated outcomes for the reputation check in `verify`; 0 skips it.
    #[arg(long)]
    mc_samples: Option<String>,
    /// Grid size of the experiment-public search.
    #[arg(long)]
    equivalence_points: Option<String>,
    /// Sweep axis: theta, gamma, mu0 or tau.
    #[arg(long)]
    axis: Option<String>,
    #[arg(long)]
    from: Option<String>,
    #[arg(long)]
    to: Option<String>,
    #[arg(long)]
    steps: Option<String>,
}

impl Cli {
    fn settings(&self) -> Result<Settings, config::ConfigError> {
        let mut s = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        if let Some(c) = self.command {
            flags.set("command", c.name())?;
        }
        if let Some(f) = self.format {
            flags.set("format", f.to_string())?;
        }
        if let Some(o) = &self.output {
            flags.set("output", o.to_string_lossy())?;
        }
        let text = [
            ("mu0", &self.mu0),
            ("tau", &self.tau),
            ("theta", &self.theta),
            ("gamma", &self.gamma),
            ("regime", &self.regime),
            ("curve", &self.curve),
            ("seed", &self.seed),
            ("grid", &self.grid),
            ("zoom", &self.zoom),
            ("mc_samples", &self.mc_samples),
            ("equivalence_points", &self.equivalence_points),
            ("axis", &self.axis),
            ("from", &self.from),
            ("to", &self.to),
            ("steps", &self.steps),
        ];
        for (key, value) in text {
            if let Some(v) = value {
                flags.set(key, v.as_str())?;
            }
        }
        s.overlay(flags);
        Ok(s)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.settings().and_then(|s| s.resolve()) {
        Ok(cfg) => cfg,
        Err(e) => return fail(Failure::Config(e.0)),
    };
    let outcome = match run::run(&cfg) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    let written = match &cfg.output {
        Some(path) => std::fs::write(path, &outcome.artifact)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(outcome.artifact.as_bytes())
            .map_err(anyhow::Error::from),
    };
    if let Err(e) = written {
        return fail(Failure::Other(e));
    }
    if !outcome.verified {
        eprintln!("lobbycc: verification failed");
        return ExitCode::from(4);
    }
    ExitCode::SUCCESS
}

fn fail(e: Failure) -> ExitCode {
    eprintln!("lobbycc: {e}");
    ExitCode::from(e.exit_code())
}
