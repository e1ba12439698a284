use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Primitive environment of the game.
///
/// `theta` may be `f64::INFINITY`, meaning the politician cares only about
/// her reputation. All indifference equations are then solved in the
/// rearranged form `bracket = gain / theta` with `1 / theta = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    /// Prior probability that the state is `A`.
    pub mu0: f64,
    /// Prior probability that the politician is high-ability.
    pub tau: f64,
    /// Career-concern intensity.
    #[serde(with = "extended_real")]
    pub theta: f64,
    /// Prior probability that the lobbyist prefers action `a`.
    pub gamma: f64,
}

impl Params {
    pub fn new(mu0: f64, tau: f64, theta: f64, gamma: f64) -> Result<Self, ModelError> {
        let p = Params {
            mu0,
            tau,
            theta,
            gamma,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.mu0 > 0.0 && self.mu0 < 0.5) {
            return Err(ModelError::OutOfRange {
                name: "mu0",
                value: self.mu0,
                range: "(0, 1/2)",
            });
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(ModelError::OutOfRange {
                name: "tau",
                value: self.tau,
                range: "(0, 1)",
            });
        }
        if self.theta.is_nan() || self.theta < 0.0 {
            return Err(ModelError::OutOfRange {
                name: "theta",
                value: self.theta,
                range: "[0, inf]",
            });
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(ModelError::OutOfRange {
                name: "gamma",
                value: self.gamma,
                range: "(0, 1)",
            });
        }
        Ok(())
    }

    pub fn with_theta(self, theta: f64) -> Self {
        Params { theta, ..self }
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        Params { gamma, ..self }
    }

    /// Relabel `A <-> B`: the prior flips to `1 - mu0` and the lobbyist-type
    /// prior to `1 - gamma`. The result generally violates `mu0 < 1/2` and is
    /// only meant for internal use by the solvers.
    pub fn mirrored(self) -> Self {
        Params {
            mu0: 1.0 - self.mu0,
            gamma: 1.0 - self.gamma,
            ..self
        }
    }

    pub fn theta_is_infinite(&self) -> bool {
        self.theta.is_infinite()
    }

    /// Sign-preserving form of `gain - theta * bracket`.
    ///
    /// For `theta = inf` this returns `-bracket`; for `theta = 0` it returns
    /// `gain`. Positive means choosing `a` is strictly better.
    pub fn net_gain(&self, gain: f64, bracket: f64) -> f64 {
        net_gain(self.theta, gain, bracket)
    }
}

pub(crate) fn net_gain(theta: f64, gain: f64, bracket: f64) -> f64 {
    if theta.is_infinite() {
        -bracket
    } else if theta == 0.0 {
        gain
    } else {
        gain - theta * bracket
    }
}

/// Whether the public learns which action the lobbyist prefers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Disclosure {
    Revealed,
    Concealed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Persuasion {
    /// Neither the experiment nor the recommendation is public.
    Private,
    /// The public observes the experiment.
    ExperimentPublic,
    /// The public observes the experiment and the realized recommendation.
    FullyPublic,
}

/// A transparency regime: intent disclosure, consequence disclosure and the
/// publicity of the persuasion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Regime {
    pub intent: Disclosure,
    pub consequence: Disclosure,
    pub persuasion: Persuasion,
}

/// What the public conditions reputations on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Observables {
    ActionAndState,
    ActionOnly,
}

impl Regime {
    pub const fn new(intent: Disclosure, consequence: Disclosure, persuasion: Persuasion) -> Self {
        Regime {
            intent,
            consequence,
            persuasion,
        }
    }

    pub const fn baseline() -> Self {
        Self::new(Disclosure::Revealed, Disclosure::Revealed, Persuasion::Private)
    }

    pub const fn concealed_intent() -> Self {
        Self::new(Disclosure::Concealed, Disclosure::Revealed, Persuasion::Private)
    }

    pub const fn concealed_consequence() -> Self {
        Self::new(Disclosure::Revealed, Disclosure::Concealed, Persuasion::Private)
    }

    pub const fn concealed_both() -> Self {
        Self::new(Disclosure::Concealed, Disclosure::Concealed, Persuasion::Private)
    }

    pub const fn experiment_public() -> Self {
        Self::new(
            Disclosure::Revealed,
            Disclosure::Revealed,
            Persuasion::ExperimentPublic,
        )
    }

    pub const fn fully_public() -> Self {
        Self::new(
            Disclosure::Revealed,
            Disclosure::Revealed,
            Persuasion::FullyPublic,
        )
    }

    pub fn observables(&self) -> Observables {
        match self.consequence {
            Disclosure::Revealed => Observables::ActionAndState,
            Disclosure::Concealed => Observables::ActionOnly,
        }
    }

    pub fn name(&self) -> &'static str {
        use Disclosure::*;
        match (self.persuasion, self.intent, self.consequence) {
            (Persuasion::Private, Revealed, Revealed) => "baseline",
            (Persuasion::Private, Concealed, Revealed) => "concealed-intent",
            (Persuasion::Private, Revealed, Concealed) => "concealed-consequence",
            (Persuasion::Private, Concealed, Concealed) => "concealed-both",
            (Persuasion::ExperimentPublic, Revealed, Revealed) => "experiment-public",
            (Persuasion::FullyPublic, Revealed, Revealed) => "fully-public",
            _ => "unsupported",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "baseline" => Ok(Regime::baseline()),
            "concealed-intent" => Ok(Regime::concealed_intent()),
            "concealed-consequence" => Ok(Regime::concealed_consequence()),
            "concealed-both" => Ok(Regime::concealed_both()),
            "experiment-public" => Ok(Regime::experiment_public()),
            "fully-public" => Ok(Regime::fully_public()),
            other => Err(format!("unknown regime `{other}`")),
        }
    }
}

/// Parse a career-concern intensity; `inf` spells infinity.
pub fn parse_theta(s: &str) -> Result<f64, String> {
    match s.trim() {
        "inf" | "+inf" | "infinity" | "Infinity" => Ok(f64::INFINITY),
        other => other
            .parse::<f64>()
            .map_err(|e| format!("invalid theta `{other}`: {e}")),
    }
}

/// Serde helper that writes infinity as the string `"inf"`.
pub mod extended_real {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_infinite() && *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*x)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Str(s) => super::parse_theta(&s).map_err(de::Error::custom),
        }
    }
}
