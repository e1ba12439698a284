//! CSV and JSON emission of equilibrium summaries.
//!
//! The CSV schema is fixed:
//! `mu0,tau,theta,gamma,regime,case,mu_info,welfare,payoff_A,payoff_B`.
//! Numbers carry 12 significant digits and infinity is written `inf`. A row
//! whose solve failed has `case` set to `error` and empty numeric outputs.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

use super::figure::TransparencyTable;
use super::sweep::{PointSummary, SweepResult};
use crate::equilibrium::RegimeEquilibrium;
use crate::model::{Params, Regime};

pub const CSV_HEADER: [&str; 10] = [
    "mu0", "tau", "theta", "gamma", "regime", "case", "mu_info", "welfare", "payoff_A", "payoff_B",
];

/// Format with 12 significant digits, in the style of `%.12g`.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let sci = format!("{:.11e}", x);
    // Rounding can bump the exponent, so read it back.
    let (mantissa, e) = sci.split_once('e').unwrap();
    let e: i32 = e.parse().unwrap_or(exp);
    if !(-5..12).contains(&e) {
        let m = trim_zeros(mantissa);
        return format!("{m}e{}{:02}", if e < 0 { "-" } else { "+" }, e.abs());
    }
    let decimals = (11 - e).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Number rounded to 12 significant digits, or the string `inf`.
fn json_num(x: f64) -> Value {
    if x.is_finite() {
        fmt_sig(x)
            .parse::<f64>()
            .ok()
            .and_then(serde_json::Number::from_f64)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    } else {
        Value::String(fmt_sig(x))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub params: Params,
    pub regime: Regime,
    pub summary: Result<PointSummary, String>,
}

impl Row {
    pub fn from_equilibrium(params: &Params, eq: &RegimeEquilibrium) -> Row {
        Row {
            params: *params,
            regime: eq.regime,
            summary: Ok(PointSummary::from(eq)),
        }
    }

    fn fields(&self) -> [String; 10] {
        let p = &self.params;
        let (case, rest) = match &self.summary {
            Ok(s) => (
                s.case.as_str().to_string(),
                [s.mu_info, s.welfare, s.payoff_a, s.payoff_b].map(fmt_sig),
            ),
            Err(_) => ("error".to_string(), Default::default()),
        };
        let [m, w, pa, pb] = rest;
        [
            fmt_sig(p.mu0),
            fmt_sig(p.tau),
            fmt_sig(p.theta),
            fmt_sig(p.gamma),
            self.regime.name().to_string(),
            case,
            m,
            w,
            pa,
            pb,
        ]
    }

    pub fn to_json(&self) -> Value {
        let p = &self.params;
        let mut v = json!({
            "mu0": json_num(p.mu0),
            "tau": json_num(p.tau),
            "theta": json_num(p.theta),
            "gamma": json_num(p.gamma),
            "regime": self.regime.name(),
        });
        let obj = v.as_object_mut().unwrap();
        match &self.summary {
            Ok(s) => {
                obj.insert("case".into(), json!(s.case.as_str()));
                obj.insert("mu_info".into(), json_num(s.mu_info));
                obj.insert("welfare".into(), json_num(s.welfare));
                obj.insert("payoff_A".into(), json_num(s.payoff_a));
                obj.insert("payoff_B".into(), json_num(s.payoff_b));
            }
            Err(e) => {
                obj.insert("case".into(), json!("error"));
                obj.insert("error".into(), json!(e));
            }
        }
        v
    }
}

pub fn sweep_rows(result: &SweepResult) -> Vec<Row> {
    result
        .points
        .iter()
        .map(|pt| Row {
            params: pt.params,
            regime: result.regime,
            summary: pt.summary.clone(),
        })
        .collect()
}

pub fn figure_rows(table: &TransparencyTable) -> Vec<Row> {
    [
        &table.baseline,
        &table.concealed_intent,
        &table.concealed_consequence,
        &table.concealed_both,
    ]
    .into_iter()
    .map(|eq| Row::from_equilibrium(&table.params, eq))
    .collect()
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn rows_to_json(rows: &[Row]) -> Value {
    Value::Array(rows.iter().map(Row::to_json).collect())
}

/// Serialize any value and round every float in it to 12 significant digits.
pub fn to_rounded_json<T: Serialize>(value: &T) -> serde_json::Result<Value> {
    Ok(round_floats(serde_json::to_value(value)?))
}

fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => json_num(n.as_f64().unwrap()),
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::solve_baseline;
    use crate::model::ReputationCurve;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(7.0 / 13.0), "0.538461538462");
        assert_eq!(fmt_sig(0.5), "0.5");
        assert_eq!(fmt_sig(8.0), "8");
        assert_eq!(fmt_sig(f64::INFINITY), "inf");
        assert_eq!(fmt_sig(1.0 / 3.0 * 1e-7), "3.33333333333e-08");
        assert_eq!(fmt_sig(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_sig(-0.25), "-0.25");
        assert_eq!(fmt_sig(0.99999999999999), "1");
    }

    #[test]
    fn csv_has_fixed_columns() {
        let p = Params::new(0.3, 0.6, 0.0, 0.5).unwrap();
        let eq = solve_baseline(&p, &ReputationCurve::linear()).unwrap();
        let mut buf = Vec::new();
        write_csv(&[Row::from_equilibrium(&p, &eq)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "mu0,tau,theta,gamma,regime,case,mu_info,welfare,payoff_A,payoff_B"
        );
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[4], "baseline");
        assert_eq!(row[5], "Baseline");
        assert_eq!(row[6], "0.5");
    }

    #[test]
    fn json_mirrors_csv_and_spells_infinity() {
        let p = Params::new(0.3, 0.6, f64::INFINITY, 0.5).unwrap();
        let eq = solve_baseline(&p, &ReputationCurve::linear()).unwrap();
        let v = Row::from_equilibrium(&p, &eq).to_json();
        assert_eq!(v["theta"], "inf");
        for key in CSV_HEADER {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
