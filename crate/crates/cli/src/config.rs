//! Run configuration: defaults, then a config file, then command-line flags.
//!
//! A config file is either JSON (an object of settings, or a previous JSON
//! artifact whose `config` key holds them) or flat `key = value` lines with
//! `#` comments. Every value is collected as text and parsed once, so all
//! three sources go through the same validation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use lobbycc::analysis::Axis;
use lobbycc::{extended_real, parse_theta, Params, Regime, ReputationCurve, SampledCurve};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Solve,
    Sweep,
    Verify,
    Fig1,
    Example1,
    Public,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Sweep => "sweep",
            Command::Verify => "verify",
            Command::Fig1 => "fig1",
            Command::Example1 => "example1",
            Command::Public => "public",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Sweep => Format::Csv,
            Command::Fig1 | Command::Example1 => Format::Text,
            _ => Format::Json,
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Command as clap::ValueEnum>::from_str(s, true).map_err(|_| format!("unknown command `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Format as clap::ValueEnum>::from_str(s, true).map_err(|_| format!("unknown format `{s}`"))
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        })
    }
}

/// A fully resolved and validated run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub mu0: f64,
    pub tau: f64,
    #[serde(with = "extended_real")]
    pub theta: f64,
    pub gamma: f64,
    #[serde(with = "regime_name")]
    pub regime: Regime,
    pub format: Format,
    /// Reputation curve: `linear`, `sqrt`, `power:<k>` or `file:<path>`.
    pub curve: String,
    pub seed: u64,
    /// Coarse grid per axis of the lobbyist deviation search.
    pub grid: usize,
    /// Zoom grid per axis around the candidate experiment.
    pub zoom: usize,
    /// Simulated outcomes per reputation check; zero skips it.
    pub mc_samples: u64,
    /// Grid over `pi(a~ | B)` for the experiment-public search.
    pub equivalence_points: usize,
    pub axis: Axis,
    #[serde(with = "extended_real")]
    pub from: f64,
    #[serde(with = "extended_real")]
    pub to: f64,
    pub steps: usize,
    /// Never written back into artifacts, so that re-running an artifact
    /// reproduces it byte for byte wherever it is written.
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

pub const KEYS: [&str; 18] = [
    "command",
    "mu0",
    "tau",
    "theta",
    "gamma",
    "regime",
    "format",
    "curve",
    "seed",
    "grid",
    "zoom",
    "mc_samples",
    "equivalence_points",
    "axis",
    "from",
    "to",
    "steps",
    "output",
];

const DEFAULTS: [(&str, &str); 15] = [
    ("mu0", "0.3"),
    ("tau", "0.5"),
    ("theta", "1"),
    ("gamma", "0.5"),
    ("regime", "baseline"),
    ("curve", "linear"),
    ("seed", "0"),
    ("grid", "300"),
    ("zoom", "100"),
    ("mc_samples", "0"),
    ("equivalence_points", "2000"),
    ("axis", "theta"),
    ("from", "0"),
    ("to", "4"),
    ("steps", "17"),
];

mod regime_name {
    use lobbycc::Regime;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Regime, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(r.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Regime, D::Error> {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

/// Settings as text, keyed by name.
#[derive(Debug, Default, Clone)]
pub struct Settings(BTreeMap<String, String>);

impl Settings {
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        if !KEYS.contains(&key) {
            return Err(bad(format!("unknown setting `{key}`")));
        }
        self.0.insert(key.to_string(), value.into());
        Ok(())
    }

    /// Later settings win.
    pub fn overlay(&mut self, other: Settings) {
        self.0.extend(other.0);
    }

    pub fn load(path: &Path) -> Result<Settings, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad(format!("cannot read config {}: {e}", path.display())))?;
        if text.trim_start().starts_with('{') {
            Self::from_json(&text)
        } else {
            Self::from_key_values(&text)
        }
    }

    pub fn from_key_values(text: &str) -> Result<Settings, ConfigError> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("config line {}: expected `key = value`", i + 1)))?;
            s.set(k.trim(), v.trim())?;
        }
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Settings, ConfigError> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| bad(format!("config is not valid JSON: {e}")))?;
        let obj = match v.get("config").unwrap_or(&v) {
            Value::Object(o) => o.clone(),
            _ => return Err(bad("JSON config must be an object")),
        };
        let mut s = Settings::default();
        for (k, v) in obj {
            let text = match v {
                Value::String(t) => t.clone(),
                Value::Number(n) => n.to_string(),
                Value::Bool(b) => b.to_string(),
                Value::Null => continue,
                other if k == "regime" => serde_json::from_value::<Regime>(other.clone())
                    .map_err(|e| bad(format!("regime: {e}")))?
                    .name()
                    .to_string(),
                _ => return Err(bad(format!("setting `{k}` must be a scalar"))),
            };
            s.set(&k, text)?;
        }
        Ok(s)
    }

    fn get<T>(&self, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> Result<T, ConfigError> {
        let v = self
            .0
            .get(key)
            .map(String::as_str)
            .or_else(|| DEFAULTS.iter().find(|(k, _)| *k == key).map(|(_, v)| *v))
            .ok_or_else(|| bad(format!("missing setting `{key}`")))?;
        parse(v).map_err(|e| bad(format!("{key}: {e}")))
    }

    pub fn resolve(&self) -> Result<RunConfig, ConfigError> {
        let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
        let int = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("`{s}`: {e}"));
        let command: Command = self.get("command", |s| s.parse())?;
        let format = match self.0.get("format") {
            Some(f) => f.parse().map_err(|e: String| bad(format!("format: {e}")))?,
            None => command.default_format(),
        };
        let cfg = RunConfig {
            command,
            mu0: self.get("mu0", num)?,
            tau: self.get("tau", num)?,
            theta: self.get("theta", parse_theta)?,
            gamma: self.get("gamma", num)?,
            regime: self.get("regime", |s| s.parse())?,
            format,
            curve: self.get("curve", |s| Ok(s.to_string()))?,
            seed: self.get("seed", |s| s.trim().parse::<u64>().map_err(|e| e.to_string()))?,
            grid: self.get("grid", int)?,
            zoom: self.get("zoom", int)?,
            mc_samples: self.get("mc_samples", |s| {
                s.trim().parse::<u64>().map_err(|e| e.to_string())
            })?,
            equivalence_points: self.get("equivalence_points", int)?,
            axis: self.get("axis", |s| s.parse())?,
            from: self.get("from", parse_theta)?,
            to: self.get("to", parse_theta)?,
            steps: self.get("steps", int)?,
            output: self.0.get("output").map(PathBuf::from),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl RunConfig {
    pub fn params(&self) -> Params {
        Params {
            mu0: self.mu0,
            tau: self.tau,
            theta: self.theta,
            gamma: self.gamma,
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        self.params().validate().map_err(|e| bad(e.to_string()))?;
        self.curve()?;
        if self.grid < 2 {
            return Err(bad("grid must be at least 2"));
        }
        if self.equivalence_points < 2 {
            return Err(bad("equivalence_points must be at least 2"));
        }
        if self.command == Command::Sweep {
            if self.steps == 0 {
                return Err(bad("steps must be positive"));
            }
            if !(self.to > self.from) && self.steps > 1 {
                return Err(bad("sweep needs `to` above `from`"));
            }
            for v in [self.from, self.to] {
                self.axis
                    .apply(&self.params(), v)
                    .validate()
                    .map_err(|e| bad(format!("sweep endpoint {v}: {e}")))?;
            }
        }
        Ok(())
    }

    pub fn curve(&self) -> Result<ReputationCurve, ConfigError> {
        match self.curve.strip_prefix("file:") {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| bad(format!("cannot read curve {path}: {e}")))?;
                let table = SampledCurve::parse(&text).map_err(|e| bad(e.to_string()))?;
                Ok(ReputationCurve::sampled(table))
            }
            None => ReputationCurve::parse_builtin(&self.curve).map_err(|e| bad(e.to_string())),
        }
    }
}
