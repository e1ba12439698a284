use std::fmt;

use serde::{Deserialize, Serialize};

use crate::equilibrium::{solve, RegimeEquilibrium};
use crate::error::SolveError;
use crate::model::{Params, Regime, ReputationCurve};

/// Differences smaller than this are reported as zero.
pub const SIGN_DEAD_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x > SIGN_DEAD_BAND {
            Sign::Positive
        } else if x < -SIGN_DEAD_BAND {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
            Sign::Zero => "≈0",
        })
    }
}

/// Welfare change from making one dimension transparent, holding the other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Effect {
    pub delta: f64,
    pub sign: Sign,
}

impl Effect {
    fn new(transparent: f64, opaque: f64) -> Effect {
        let delta = transparent - opaque;
        Effect {
            delta,
            sign: Sign::of(delta),
        }
    }
}

/// Ex-ante welfare in the four private-persuasion regimes and the effect of
/// each kind of transparency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransparencyTable {
    pub params: Params,
    pub baseline: RegimeEquilibrium,
    pub concealed_intent: RegimeEquilibrium,
    pub concealed_consequence: RegimeEquilibrium,
    pub concealed_both: RegimeEquilibrium,
    /// Revealing intent, consequence revealed.
    pub intent_effect_consequence_revealed: Effect,
    /// Revealing intent, consequence concealed. Computed but carries no
    /// proven sign.
    pub intent_effect_consequence_concealed: Effect,
    /// Revealing the consequence, intent revealed.
    pub consequence_effect_intent_revealed: Effect,
    /// Revealing the consequence, intent concealed.
    pub consequence_effect_intent_concealed: Effect,
}

pub fn transparency_table(params: &Params, curve: &ReputationCurve) -> Result<TransparencyTable, SolveError> {
    let baseline = solve(params, &Regime::baseline(), curve)?;
    let concealed_intent = solve(params, &Regime::concealed_intent(), curve)?;
    let concealed_consequence = solve(params, &Regime::concealed_consequence(), curve)?;
    let concealed_both = solve(params, &Regime::concealed_both(), curve)?;
    let w = |e: &RegimeEquilibrium| e.outcome.welfare;
    Ok(TransparencyTable {
        params: *params,
        intent_effect_consequence_revealed: Effect::new(w(&baseline), w(&concealed_intent)),
        intent_effect_consequence_concealed: Effect::new(w(&concealed_consequence), w(&concealed_both)),
        consequence_effect_intent_revealed: Effect::new(w(&baseline), w(&concealed_consequence)),
        consequence_effect_intent_concealed: Effect::new(w(&concealed_intent), w(&concealed_both)),
        baseline,
        concealed_intent,
        concealed_consequence,
        concealed_both,
    })
}

impl fmt::Display for TransparencyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::analysis::emit::fmt_sig;
        let w = |e: &RegimeEquilibrium| fmt_sig(e.outcome.welfare);
        writeln!(
            f,
            "{:<22}{:>20}{:>20}{:>10}",
            "", "consequence revealed", "consequence hidden", "effect"
        )?;
        writeln!(
            f,
            "{:<22}{:>20}{:>20}{:>10}",
            "intent revealed",
            w(&self.baseline),
            w(&self.concealed_consequence),
            self.consequence_effect_intent_revealed.sign
        )?;
        writeln!(
            f,
            "{:<22}{:>20}{:>20}{:>10}",
            "intent concealed",
            w(&self.concealed_intent),
            w(&self.concealed_both),
            self.consequence_effect_intent_concealed.sign
        )?;
        write!(
            f,
            "{:<22}{:>20}{:>20}",
            "effect",
            self.intent_effect_consequence_revealed.sign,
            self.intent_effect_consequence_concealed.sign
        )
    }
}
