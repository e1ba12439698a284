//! The politician's response to a given experiment.
//!
//! After a recommendation with posterior `mu`, choosing `a` yields a quality
//! gain `2 mu - 1` and costs the reputation loss. Holding the public's view of
//! the experiment fixed but letting its view of the strategy equal the actual
//! strategy, the net gain is strictly decreasing in the probability of
//! choosing `a`, so the indifference point is unique and found by bisection.

use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::model::{
    loss_bracket, net_gain, posterior, quality_gain, reputation_parts, Action, Experiment, LobbyistPlay,
    Params, Persuasion, PoliticianStrategy, Recommendation, Regime, ReputationCurve, ReputationProfile,
};
use crate::roots::bisect;

/// Net gains within this distance of zero count as indifference.
pub const TIE_TOL: f64 = 1e-12;
const ROOT_TOL: f64 = 1e-15;
const DOMAIN_CAP: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Randomizing {
    None,
    RecA,
    RecB,
    /// Only for uninformative experiments, where both recommendations carry
    /// the same posterior and the politician mixes identically after each.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestResponse {
    /// Unclamped indifference root. For `RecB` this is the probability of
    /// choosing `b` after `b~`. Infinite when the net gain never changes sign.
    pub p_star_raw: f64,
    pub strategy: PoliticianStrategy,
    pub randomizing_on: Randomizing,
}

/// What the public believes about lobbyist play when it forms reputations.
///
/// The lobbyist being responded to (the focal type) carries `focal_weight`.
/// The public's view of the focal experiment is `focal_experiment`, or the
/// actual experiment when `None`. Its view of the politician's strategy
/// always equals the actual response. `others` are the remaining lobbyist
/// types, held fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublicBeliefs {
    pub focal_weight: f64,
    pub focal_experiment: Option<Experiment>,
    pub others: Vec<LobbyistPlay>,
}

impl Default for PublicBeliefs {
    fn default() -> Self {
        Self::consistent()
    }
}

impl PublicBeliefs {
    /// A single lobbyist whose experiment the public gets right.
    pub fn consistent() -> Self {
        PublicBeliefs {
            focal_weight: 1.0,
            focal_experiment: None,
            others: Vec::new(),
        }
    }

    /// A single lobbyist believed to run `believed`.
    pub fn believing(believed: Experiment) -> Self {
        PublicBeliefs {
            focal_experiment: Some(believed),
            ..Self::consistent()
        }
    }

    pub fn mixture(focal_weight: f64, others: Vec<LobbyistPlay>) -> Self {
        PublicBeliefs {
            focal_weight,
            focal_experiment: None,
            others,
        }
    }

    pub fn mirrored(&self) -> Self {
        PublicBeliefs {
            focal_weight: self.focal_weight,
            focal_experiment: self.focal_experiment.map(|e| e.mirrored()),
            others: self.others.iter().map(LobbyistPlay::mirrored).collect(),
        }
    }

    fn population(&self, exp: &Experiment, strat: PoliticianStrategy) -> Vec<LobbyistPlay> {
        let mut pop = self.others.clone();
        pop.push(LobbyistPlay::new(
            self.focal_weight,
            self.focal_experiment.unwrap_or(*exp),
            strat,
        ));
        pop
    }
}

struct Problem<'a> {
    params: Params,
    exp: Experiment,
    regime: Regime,
    curve: &'a ReputationCurve,
    beliefs: PublicBeliefs,
}

impl Problem<'_> {
    fn reps(&self, strat: PoliticianStrategy) -> ReputationProfile {
        let pop = self.beliefs.population(&self.exp, strat);
        reputation_parts(&self.params, self.regime.observables(), &pop).profile(self.regime.observables())
    }

    fn net(&self, mu: f64, strat: PoliticianStrategy) -> f64 {
        let bracket = loss_bracket(mu, &self.reps(strat), self.curve);
        net_gain(self.params.theta, quality_gain(mu), bracket)
    }

    /// Admissible range of `t` for the strategy line `line(t)`: every
    /// reputation denominator must stay positive.
    fn domain(&self, line: impl Fn(f64) -> PoliticianStrategy) -> (f64, f64) {
        let obs = self.regime.observables();
        let parts =
            |t: f64| reputation_parts(&self.params, obs, &self.beliefs.population(&self.exp, line(t)));
        let (p0, p1) = (parts(0.0), parts(1.0));
        let mut lo = -DOMAIN_CAP;
        let mut hi = DOMAIN_CAP;
        for (d0, d1) in [(p0.den_a, p1.den_a), (p0.den_b, p1.den_b)] {
            let slope = d1 - d0;
            if slope > 0.0 {
                lo = lo.max(-d0 / slope);
            } else if slope < 0.0 {
                hi = hi.min(-d0 / slope);
            }
        }
        // Far enough inside that rounding in the denominators cannot flip
        // their sign.
        let shift = 1e-9 * (hi - lo);
        (lo + shift, hi - shift)
    }

    /// Unclamped root of the decreasing function `g` over `(lo, hi)`.
    fn raw_root(&self, g: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64, SolveError> {
        // Rounding in the affine denominators can leave an endpoint on the
        // wrong side of a pole; walk it inward until the residual is finite.
        let width = hi - lo;
        let inward = |mut x: f64, dir: f64| {
            let mut step = 1e-12 * width;
            while !g(x).is_finite() && step < 0.5 * width {
                x += dir * step;
                step *= 2.0;
            }
            x
        };
        let (lo, hi) = (inward(lo, 1.0), inward(hi, -1.0));
        let (glo, ghi) = (g(lo), g(hi));
        if glo <= 0.0 && ghi <= 0.0 {
            return Ok(if glo == 0.0 { lo } else { f64::NEG_INFINITY });
        }
        if glo >= 0.0 && ghi >= 0.0 {
            return Ok(if ghi == 0.0 { hi } else { f64::INFINITY });
        }
        Ok(bisect(g, lo, hi, ROOT_TOL * (hi - lo).max(1.0))?)
    }

    /// Obey `b~`; find the probability of `a` after `a~`.
    fn obey_b(&self) -> Result<Option<BestResponse>, SolveError> {
        let mu_a = posterior(self.params.mu0, &self.exp, Recommendation::RecA)?;
        let mu_b = posterior(self.params.mu0, &self.exp, Recommendation::RecB)?;
        let line = |t: f64| PoliticianStrategy {
            p_after_a: t,
            p_after_b: 0.0,
        };
        let g = |t: f64| self.net(mu_a, line(t));
        let (lo, hi) = self.domain(line);
        let raw = if self.params.theta == 0.0 {
            let gain = quality_gain(mu_a);
            if gain > 0.0 {
                f64::INFINITY
            } else if gain < 0.0 {
                f64::NEG_INFINITY
            } else {
                1.0
            }
        } else {
            self.raw_root(g, lo, hi)?
        };
        let (p, randomizing) = if g(1.0) >= -TIE_TOL {
            (1.0, Randomizing::None)
        } else if g(0.0) <= 0.0 {
            (0.0, Randomizing::None)
        } else {
            (raw.clamp(0.0, 1.0), Randomizing::RecA)
        };
        if self.net(mu_b, line(p)) > TIE_TOL {
            return Ok(None);
        }
        Ok(Some(BestResponse {
            p_star_raw: raw,
            strategy: line(p),
            randomizing_on: randomizing,
        }))
    }

    fn mirrored(&self) -> Self {
        Problem {
            params: self.params.mirrored(),
            exp: self.exp.mirrored(),
            regime: self.regime,
            curve: self.curve,
            beliefs: self.beliefs.mirrored(),
        }
    }

    /// Both recommendations carry the prior: mix identically after each.
    fn degenerate(&self) -> Result<BestResponse, SolveError> {
        let mu = self.params.mu0;
        let line = |t: f64| PoliticianStrategy {
            p_after_a: t,
            p_after_b: t,
        };
        let g = |t: f64| self.net(mu, line(t));
        let (lo, hi) = self.domain(line);
        let raw = self.raw_root(g, lo, hi)?;
        // The obedient corner is checked first.
        let t = if self.exp.p_a_given_a() == 0.0 {
            if g(0.0) <= TIE_TOL {
                0.0
            } else if g(1.0) >= 0.0 {
                1.0
            } else {
                raw.clamp(0.0, 1.0)
            }
        } else if g(1.0) >= -TIE_TOL {
            1.0
        } else if g(0.0) <= 0.0 {
            0.0
        } else {
            raw.clamp(0.0, 1.0)
        };
        let randomizing = if t > 0.0 && t < 1.0 {
            Randomizing::Both
        } else {
            Randomizing::None
        };
        Ok(BestResponse {
            p_star_raw: raw,
            strategy: line(t),
            randomizing_on: randomizing,
        })
    }
}

/// The politician's best response to `exp` under private or
/// experiment-public persuasion.
///
/// The politician first tries to obey `b~` and solves for her behaviour after
/// `a~`. If obeying `b~` is then not optimal, she obeys `a~` instead and the
/// problem is solved in the relabeled game.
pub fn solve_indifference(
    params: &Params,
    exp: &Experiment,
    regime: &Regime,
    curve: &ReputationCurve,
    beliefs: &PublicBeliefs,
) -> Result<BestResponse, SolveError> {
    if regime.persuasion == Persuasion::FullyPublic {
        return Err(SolveError::UnsupportedRegime(regime.name().into()));
    }
    let problem = Problem {
        params: *params,
        exp: *exp,
        regime: *regime,
        curve,
        beliefs: beliefs.clone(),
    };
    if exp.is_uninformative() {
        return problem.degenerate();
    }
    if let Some(br) = problem.obey_b()? {
        return Ok(br);
    }
    let mirror = problem.mirrored();
    let br = mirror.obey_b()?.ok_or_else(|| {
        SolveError::AssumptionViolated("no obedient recommendation in either labeling".into())
    })?;
    Ok(BestResponse {
        p_star_raw: br.p_star_raw,
        strategy: br.strategy.mirrored(),
        randomizing_on: match br.randomizing_on {
            Randomizing::RecA => Randomizing::RecB,
            other => other,
        },
    })
}

/// Net gain from choosing `a` after `rec` when the politician plays `strat`
/// and reputations follow `beliefs`. Zero at an interior equilibrium.
pub fn indifference_residual(
    params: &Params,
    exp: &Experiment,
    rec: Recommendation,
    regime: &Regime,
    curve: &ReputationCurve,
    beliefs: &PublicBeliefs,
    strat: PoliticianStrategy,
) -> Result<f64, SolveError> {
    let problem = Problem {
        params: *params,
        exp: *exp,
        regime: *regime,
        curve,
        beliefs: beliefs.clone(),
    };
    let mu = posterior(params.mu0, exp, rec)?;
    Ok(problem.net(mu, strat))
}

/// Forward difference of the unclamped root in `theta`. `None` when the root
/// is not finite at either point or `theta` is infinite.
pub fn dp_dtheta(
    params: &Params,
    exp: &Experiment,
    regime: &Regime,
    curve: &ReputationCurve,
    beliefs: &PublicBeliefs,
    delta: f64,
) -> Result<Option<f64>, SolveError> {
    if params.theta_is_infinite() {
        return Ok(None);
    }
    let p0 = solve_indifference(params, exp, regime, curve, beliefs)?.p_star_raw;
    let p1 = solve_indifference(
        &params.with_theta(params.theta + delta),
        exp,
        regime,
        curve,
        beliefs,
    )?
    .p_star_raw;
    if p0.is_finite() && p1.is_finite() {
        Ok(Some((p1 - p0) / delta))
    } else {
        Ok(None)
    }
}

/// Probability that the low type ends up choosing `action` in `state`.
pub fn action_prob(exp: &Experiment, strat: &PoliticianStrategy, action: Action, state: Action) -> f64 {
    let a = strat.prob_a_in_state(exp, state);
    match action {
        Action::A => a,
        Action::B => 1.0 - a,
    }
}
