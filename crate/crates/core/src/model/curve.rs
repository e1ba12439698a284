use std::fmt;
use std::sync::Arc;

use crate::error::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveDescriptor {
    Linear,
    UserSupplied,
}

#[derive(Clone)]
enum Kind {
    Linear,
    Power(f64),
    Sampled(SampledCurve),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// The reputational payoff `f`: strictly increasing on `[0, 1]` with
/// `f(0) = 0` and `f(1) = 1`.
#[derive(Clone)]
pub struct ReputationCurve {
    kind: Kind,
    label: String,
}

impl fmt::Debug for ReputationCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReputationCurve")
            .field("label", &self.label)
            .finish()
    }
}

impl Default for ReputationCurve {
    fn default() -> Self {
        Self::linear()
    }
}

const FD_STEP: f64 = 1e-6;

impl ReputationCurve {
    pub fn linear() -> Self {
        ReputationCurve {
            kind: Kind::Linear,
            label: "linear".into(),
        }
    }

    /// `f(x) = x^k` for `k > 0`.
    pub fn power(exponent: f64) -> Result<Self, ModelError> {
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(ModelError::InvalidCurve(format!(
                "power exponent must be positive, got {exponent}"
            )));
        }
        Ok(ReputationCurve {
            kind: Kind::Power(exponent),
            label: format!("power:{exponent}"),
        })
    }

    pub fn sampled(table: SampledCurve) -> Self {
        ReputationCurve {
            kind: Kind::Sampled(table),
            label: "table".into(),
        }
    }

    /// Wrap an arbitrary function. The endpoint and monotonicity requirements
    /// are checked on a grid.
    pub fn custom<F>(label: impl Into<String>, f: F) -> Result<Self, ModelError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let curve = ReputationCurve {
            kind: Kind::Custom(Arc::new(f)),
            label: label.into(),
        };
        curve.check_shape(1000)?;
        Ok(curve)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn descriptor(&self) -> CurveDescriptor {
        match self.kind {
            Kind::Linear => CurveDescriptor::Linear,
            _ => CurveDescriptor::UserSupplied,
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.kind, Kind::Linear)
    }

    /// Evaluate `f` on `[0, 1]`.
    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Linear => x,
            Kind::Power(k) => x.max(0.0).powf(*k),
            Kind::Sampled(t) => t.eval(x),
            Kind::Custom(f) => f(x.clamp(0.0, 1.0)),
        }
    }

    /// Evaluate on `[0, inf)`. Reputations above one only occur when a
    /// strategy parameter is pushed outside `[0, 1]` while locating the
    /// unclamped indifference root; there the curve continues as the identity,
    /// which keeps it increasing and continuous at 1.
    pub(crate) fn eval_extended(&self, x: f64) -> f64 {
        if x > 1.0 {
            x
        } else {
            self.eval(x)
        }
    }

    /// `f'(x)`, analytic for the built-in families and a centered finite
    /// difference (one-sided at the endpoints) otherwise.
    pub fn derivative(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Linear => 1.0,
            Kind::Power(k) => k * x.powf(k - 1.0),
            _ => {
                let lo = (x - FD_STEP).max(0.0);
                let hi = (x + FD_STEP).min(1.0);
                (self.eval(hi) - self.eval(lo)) / (hi - lo)
            }
        }
    }

    fn check_shape(&self, n: usize) -> Result<(), ModelError> {
        if self.eval(0.0).abs() > 1e-12 || (self.eval(1.0) - 1.0).abs() > 1e-12 {
            return Err(ModelError::InvalidCurve(format!(
                "{}: need f(0) = 0 and f(1) = 1",
                self.label
            )));
        }
        let mut prev = self.eval(0.0);
        for i in 1..=n {
            let v = self.eval(i as f64 / n as f64);
            if !(v > prev) {
                return Err(ModelError::InvalidCurve(format!(
                    "{}: not strictly increasing near {}",
                    self.label,
                    i as f64 / n as f64
                )));
            }
            prev = v;
        }
        Ok(())
    }

    /// Parse `linear`, `sqrt`, or `power:<k>`.
    pub fn parse_builtin(spec: &str) -> Result<Self, ModelError> {
        match spec.trim() {
            "linear" => Ok(Self::linear()),
            "sqrt" => Self::power(0.5),
            s => match s.strip_prefix("power:") {
                Some(k) => {
                    let k: f64 = k
                        .parse()
                        .map_err(|_| ModelError::InvalidCurve(format!("bad power exponent `{k}`")))?;
                    Self::power(k)
                }
                None => Err(ModelError::InvalidCurve(format!("unknown curve `{s}`"))),
            },
        }
    }
}

/// A reputation curve given as `(tau, f(tau))` samples on an ascending grid,
/// interpolated piecewise-linearly (which preserves monotonicity).
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl SampledCurve {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, ModelError> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(ModelError::InvalidCurve(
                "need at least two (tau, f) pairs".into(),
            ));
        }
        if xs[0] != 0.0 || *xs.last().unwrap() != 1.0 {
            return Err(ModelError::InvalidCurve(
                "grid must start at 0 and end at 1".into(),
            ));
        }
        if ys[0] != 0.0 || *ys.last().unwrap() != 1.0 {
            return Err(ModelError::InvalidCurve("need f(0) = 0 and f(1) = 1".into()));
        }
        for w in xs.windows(2) {
            if !(w[1] > w[0]) {
                return Err(ModelError::InvalidCurve("grid must be strictly ascending".into()));
            }
        }
        for w in ys.windows(2) {
            if !(w[1] > w[0]) {
                return Err(ModelError::InvalidCurve(
                    "values must be strictly increasing".into(),
                ));
            }
        }
        Ok(SampledCurve { xs, ys })
    }

    /// Plain text: one `tau f` pair per line, separated by whitespace or a
    /// comma. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty());
            let parse = |s: Option<&str>| -> Result<f64, ModelError> {
                s.ok_or_else(|| ModelError::InvalidCurve(format!("line {}: missing value", lineno + 1)))?
                    .parse::<f64>()
                    .map_err(|e| ModelError::InvalidCurve(format!("line {}: {e}", lineno + 1)))
            };
            xs.push(parse(it.next())?);
            ys.push(parse(it.next())?);
            if it.next().is_some() {
                return Err(ModelError::InvalidCurve(format!(
                    "line {}: expected two columns",
                    lineno + 1
                )));
            }
        }
        Self::new(xs, ys)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let i = self.xs.partition_point(|&v| v <= x);
        if i == 0 {
            return self.ys[0];
        }
        if i >= self.xs.len() {
            return *self.ys.last().unwrap();
        }
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (y0, y1) = (self.ys[i - 1], self.ys[i]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}
