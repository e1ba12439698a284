//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p lobbycc --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lobbycc::analysis::{blackwell_compare, linspace, Relation};
use lobbycc::best_response::{indifference_residual, solve_indifference, PublicBeliefs};
use lobbycc::equilibrium::{
    check_condition_club, classify, concealed_intent_posteriors, find_gamma_bar, solve, solve_baseline,
    solve_concealed_intent, spade_holds, theta_decay_window, CaseLabel, RegimeEquilibrium,
};
use lobbycc::oracle::{
    certify, certify_public, compare_reputations, monte_carlo_reputation, verify_lobbyist, CertifyOptions,
    LobbyistGrid, GAIN_TOL, MC_STANDARD_ERRORS,
};
use lobbycc::public::{
    solve_experiment_public, solve_fully_public, solve_p_star_public, PublicPersuasionSolution,
};
use lobbycc::{
    posterior, reputation, Action, Experiment, LobbyistPlay, Observables, Params, PoliticianStrategy,
    Recommendation, Regime, ReputationCurve,
};

const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;
/// Name, check and optional time budget.
type Criterion = (&'static str, fn(&mut Ctx) -> Outcome, Option<Duration>);

struct Ctx {
    rng: ChaCha8Rng,
    linear: ReputationCurve,
    /// Private-persuasion equilibria produced by criteria 3 to 9.
    equilibria: Vec<(Params, RegimeEquilibrium)>,
    public: Vec<(Params, ReputationCurve, PublicPersuasionSolution)>,
}

impl Ctx {
    fn mu0(&mut self) -> f64 {
        self.rng.gen_range(0.02..0.48)
    }

    fn tau(&mut self) -> f64 {
        self.rng.gen_range(0.02..0.98)
    }

    fn gamma(&mut self) -> f64 {
        self.rng.gen_range(0.02..0.98)
    }

    /// Log-uniform on `[0.05, 20]`.
    fn theta(&mut self) -> f64 {
        let (lo, hi) = (0.05f64.ln(), 20f64.ln());
        self.rng.gen_range(lo..hi).exp()
    }

    fn params(&mut self) -> Params {
        let (m, t, th, g) = (self.mu0(), self.tau(), self.theta(), self.gamma());
        Params::new(m, t, th, g).unwrap()
    }

    fn keep(&mut self, p: &Params, eq: &RegimeEquilibrium) {
        self.equilibria.push((*p, eq.clone()));
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(p: &Params) -> impl FnOnce(E) -> String + '_ {
    move |e| format!("{p:?}: {e}")
}

fn mu_a(eq: &RegimeEquilibrium) -> f64 {
    eq.outcome.mu_info
}

fn c1_example(_: &mut Ctx) -> Outcome {
    // Exact path.
    let mu0 = Ratio::new(1i64, 3);
    let y = Ratio::new(3i64, 7);
    let exact = mu0 / (mu0 + (Ratio::from_integer(1) - mu0) * y);
    ensure(exact == Ratio::new(7, 13), || format!("exact posterior {exact}"))?;

    let p = Params::new(1.0 / 3.0, 0.5, f64::INFINITY, 8.0 / 9.0).unwrap();
    let f = ReputationCurve::linear();
    let e = Experiment::new(1.0, 3.0 / 7.0).unwrap();
    let mu = posterior(p.mu0, &e, Recommendation::RecA).map_err(err(&p))?;
    let exact_f = *exact.numer() as f64 / *exact.denom() as f64;
    ensure((mu - exact_f).abs() < 1e-12, || format!("posterior {mu}"))?;

    let br =
        solve_indifference(&p, &e, &Regime::baseline(), &f, &PublicBeliefs::consistent()).map_err(err(&p))?;
    ensure((br.strategy.p_after_a - 8.0 / 9.0).abs() < 1e-9, || {
        format!("intent-revealed p_after_a {}", br.strategy.p_after_a)
    })?;

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
        &f,
        &beliefs,
        PoliticianStrategy::obedient(),
    )
    .map_err(err(&p))?;
    ensure(residual.abs() < 1e-12, || {
        format!("concealed-intent residual {residual:e}")
    })?;
    let ci = solve_indifference(&p, &e, &regime, &f, &beliefs).map_err(err(&p))?;
    ensure(
        ci.strategy.p_after_a == 1.0 && ci.strategy.p_after_b == 0.0,
        || format!("concealed-intent strategy {:?}", ci.strategy),
    )?;
    Ok(format!(
        "posterior 7/13, p_after_a {:.12}, concealed residual {residual:.1e}, obeys",
        br.strategy.p_after_a
    ))
}

fn c2_theta_zero(ctx: &mut Ctx) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let p = Params::new(ctx.mu0(), ctx.tau(), 0.0, 0.5).unwrap();
        for regime in [Regime::baseline(), Regime::concealed_consequence()] {
            let eq = solve(&p, &regime, &ctx.linear).map_err(err(&p))?;
            let d = (mu_a(&eq) - 0.5).abs();
            worst = worst.max(d);
            ensure(d < 1e-12, || format!("{p:?} {regime}: mu {}", mu_a(&eq)))?;
        }
    }
    Ok(format!("50 draws, max |mu - 1/2| = {worst:.1e}"))
}

fn c3_informative(ctx: &mut Ctx) -> Outcome {
    let start = Instant::now();
    let mut min_gap = f64::INFINITY;
    let mut max_res: f64 = 0.0;
    for i in 0..500 {
        let mut p = ctx.params();
        if i % 10 == 0 {
            p.theta = f64::INFINITY;
        }
        let eq = solve_baseline(&p, &ctx.linear).map_err(err(&p))?;
        min_gap = min_gap.min(mu_a(&eq) - 0.5);
        max_res = max_res.max(eq.defining_residual.abs());
        ensure(mu_a(&eq) > 0.5, || format!("{p:?}: mu* = {}", mu_a(&eq)))?;
        ensure(eq.defining_residual.abs() < 1e-10, || {
            format!("{p:?}: residual {:e}", eq.defining_residual)
        })?;
        ctx.keep(&p, &eq);
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!(
        "500 draws, min(mu* - 1/2) = {min_gap:.3e}, max residual {max_res:.1e}"
    ))
}

fn c4_monotone_in_theta(ctx: &mut Ctx) -> Outcome {
    let grid = linspace(0.0, 8.0, 33);
    let draws = 20;
    for _ in 0..draws {
        let p = Params::new(ctx.mu0(), ctx.tau(), 0.0, 0.5).unwrap();
        let mut prev: Option<RegimeEquilibrium> = None;
        for &theta in &grid {
            let q = p.with_theta(theta);
            let eq = solve_baseline(&q, &ctx.linear).map_err(err(&q))?;
            if let Some(pr) = &prev {
                ensure(mu_a(&eq) >= mu_a(pr), || format!("{q:?}: mu* fell"))?;
                ensure(eq.outcome.welfare >= pr.outcome.welfare, || {
                    format!("{q:?}: welfare fell")
                })?;
                let v = blackwell_compare(&eq.outcome.experiment_a, &pr.outcome.experiment_a, q.mu0);
                ensure(
                    matches!(v.relation, Relation::Dominates | Relation::Equal),
                    || format!("{q:?}: Blackwell verdict {:?}", v.relation),
                )?;
            }
            ctx.keep(&q, &eq);
            prev = Some(eq);
        }
    }
    Ok(format!(
        "{draws} draws x 33 theta points, all monotone and Blackwell-ordered"
    ))
}

fn c5_trichotomy(ctx: &mut Ctx) -> Outcome {
    let (mut na, mut nb, mut nn) = (0, 0, 0);
    let mut min_gap = f64::INFINITY;
    for _ in 0..500 {
        let p = ctx.params();
        let club = check_condition_club(&p, &ctx.linear);
        let ci = solve_concealed_intent(&p, &ctx.linear).map_err(err(&p))?;
        let expected = classify(club);
        ensure(ci.case_label == expected, || {
            format!("{p:?}: label {:?}, club {club:e}", ci.case_label)
        })?;
        let base = solve_baseline(&p, &ctx.linear).map_err(err(&p))?;
        match ci.case_label {
            CaseLabel::AInforms => {
                na += 1;
                let gap = mu_a(&base) - mu_a(&ci);
                min_gap = min_gap.min(gap);
                ensure(gap > 1e-9, || format!("{p:?}: mu_A** - mu* = {:e}", -gap))?;
            }
            CaseLabel::BInforms => {
                nb += 1;
                let concealed =
                    posterior(p.mu0, &ci.outcome.experiment_b, Recommendation::RecB).map_err(err(&p))?;
                let revealed =
                    posterior(p.mu0, &base.outcome.experiment_b, Recommendation::RecB).map_err(err(&p))?;
                let gap = concealed - revealed;
                min_gap = min_gap.min(gap);
                ensure(gap > 1e-9, || format!("{p:?}: B posterior gap {gap:e}"))?;
            }
            _ => nn += 1,
        }
        ctx.keep(&p, &ci);
        ctx.keep(&p, &base);
    }
    Ok(format!(
        "500 draws ({na} A_informs, {nb} B_informs, {nn} neither), min strict gap {min_gap:.3e}"
    ))
}

fn c6_concealed_intent(ctx: &mut Ctx) -> Outcome {
    let thetas = linspace(0.5, 8.0, 9);
    for _ in 0..100 {
        let (mu0, tau) = (ctx.mu0(), ctx.tau());
        let probe = Params::new(mu0, tau, 1.0, 0.5).unwrap();
        let (lo, hi) = theta_decay_window(&probe);
        let lo = lo.max(0.0);
        let g = lo + (hi - lo) * ctx.rng.gen_range(0.02..0.98);
        let theta = ctx.theta();
        let p = Params::new(mu0, tau, theta, g).unwrap();
        let ci = solve_concealed_intent(&p, &ctx.linear).map_err(err(&p))?;
        let base = solve_baseline(&p, &ctx.linear).map_err(err(&p))?;
        ensure(ci.case_label == CaseLabel::AInforms, || {
            format!("{p:?}: {:?}", ci.case_label)
        })?;
        ensure(mu_a(&ci) < 0.5, || format!("{p:?}: mu_A** = {}", mu_a(&ci)))?;
        ensure(ci.outcome.experiment_b.is_uninformative(), || {
            format!("{p:?}: pi_B** informative")
        })?;
        ensure(ci.outcome.welfare < base.outcome.welfare, || {
            format!(
                "{p:?}: welfare {} vs {}",
                ci.outcome.welfare, base.outcome.welfare
            )
        })?;
        ctx.keep(&p, &ci);
        let mut prev = f64::INFINITY;
        for &t in &thetas {
            let q = p.with_theta(t);
            let eq = solve_concealed_intent(&q, &ctx.linear).map_err(err(&q))?;
            ensure(mu_a(&eq) < prev, || format!("{q:?}: mu_A** not decreasing"))?;
            prev = mu_a(&eq);
            ctx.keep(&q, &eq);
        }
    }
    Ok("100 draws in the gamma window: mu_A** < 1/2, decreasing on 9 thetas, pi_B** uninformative, welfare lower".into())
}

fn c7_concealed_consequence(ctx: &mut Ctx) -> Outcome {
    let mut min_mu = f64::INFINITY;
    let mut min_w = f64::INFINITY;
    for _ in 0..200 {
        let p = ctx.params();
        let rev = solve(&p, &Regime::baseline(), &ctx.linear).map_err(err(&p))?;
        let con = solve(&p, &Regime::concealed_consequence(), &ctx.linear).map_err(err(&p))?;
        let dm = mu_a(&con) - mu_a(&rev);
        let dw = con.outcome.welfare - rev.outcome.welfare;
        min_mu = min_mu.min(dm);
        min_w = min_w.min(dw);
        ensure(dm > 1e-9, || format!("{p:?}: mu gap {dm:e}"))?;
        ensure(dw > 1e-9, || format!("{p:?}: welfare gap {dw:e}"))?;
        ctx.keep(&p, &rev);
        ctx.keep(&p, &con);
    }
    Ok(format!(
        "200 draws, min mu gap {min_mu:.3e}, min welfare gap {min_w:.3e}"
    ))
}

fn c8_reversal(ctx: &mut Ctx) -> Outcome {
    let mut min_mu = f64::INFINITY;
    let mut min_w = f64::INFINITY;
    let mut tries = 0;
    let mut done = 0;
    while done < 100 {
        tries += 1;
        ensure(tries < 100_000, || {
            "could not draw parameters satisfying the assumption".into()
        })?;
        let p = ctx.params();
        if !spade_holds(&p, &ctx.linear) {
            continue;
        }
        let gb = find_gamma_bar(&p, &ctx.linear).map_err(err(&p))?;
        let g = gb.min(0.5) * ctx.rng.gen_range(0.1..0.9);
        let p = p.with_gamma(g);
        let (mu_rev, mu_con) = concealed_intent_posteriors(&p, &ctx.linear).map_err(err(&p))?;
        let ci = solve(&p, &Regime::concealed_intent(), &ctx.linear).map_err(err(&p))?;
        let cb = solve(&p, &Regime::concealed_both(), &ctx.linear).map_err(err(&p))?;
        let dm = mu_rev - mu_con;
        let dw = ci.outcome.welfare - cb.outcome.welfare;
        min_mu = min_mu.min(dm);
        min_w = min_w.min(dw);
        ensure(dm > 0.0, || format!("{p:?}: mu_hat_A** - mu_A** = {:e}", -dm))?;
        ensure(dw > 0.0, || format!("{p:?}: welfare not reversed, gap {:e}", -dw))?;
        ctx.keep(&p, &ci);
        ctx.keep(&p, &cb);
        done += 1;
    }
    Ok(format!(
        "100 draws ({tries} tried), min mu gap {min_mu:.3e}, min welfare gap {min_w:.3e}"
    ))
}

fn c9_public(ctx: &mut Ctx) -> Outcome {
    let mut worst_half: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    for _ in 0..100 {
        let p = ctx.params();
        let half = solve_p_star_public(&p, 0.5, &ctx.linear).map_err(err(&p))?;
        worst_half = worst_half.max((half - 0.5).abs());
        ensure((half - 0.5).abs() < 1e-10, || format!("{p:?}: p*(1/2) = {half}"))?;
        let mut prev = f64::NEG_INFINITY;
        for i in 0..1000 {
            let mu = i as f64 / 999.0;
            let v = solve_p_star_public(&p, mu, &ctx.linear).map_err(err(&p))?;
            ensure(v >= prev - 1e-12, || format!("{p:?}: p* falls at mu = {mu}"))?;
            prev = v;
        }
        let fp = solve_fully_public(&p, &ctx.linear).map_err(err(&p))?;
        ensure(fp.mu_dagger_a >= 0.5 && fp.mu_dagger_b == 0.0, || {
            format!("{p:?}: maximizer ({}, {})", fp.mu_dagger_a, fp.mu_dagger_b)
        })?;
        let private = solve_baseline(&p, &ctx.linear).map_err(err(&p))?;
        if !private.outcome.experiment_a.is_uninformative() {
            let gap = private.outcome.payoff_a - fp.lobbyist_payoff;
            min_gap = min_gap.min(gap);
            ensure(gap > 1e-9, || format!("{p:?}: public payoff gap {gap:e}"))?;
        }
        if ctx.public.len() < 8 {
            ctx.public.push((p, ctx.linear.clone(), fp));
        }
    }
    let p = Params::new(1.0 / 3.0, 0.5, 1.0, 0.5).unwrap();
    let mut distances = Vec::new();
    for curve in [ReputationCurve::linear(), ReputationCurve::power(0.5).unwrap()] {
        let sol = solve_experiment_public(&p, &curve, 100_000).map_err(err(&p))?;
        let private = solve_baseline(&p, &curve).map_err(err(&p))?;
        let d = (sol.experiment.p_a_given_b() - private.outcome.experiment_a.p_a_given_b()).abs();
        ensure(d < 1e-6, || {
            format!("{}: equivalence distance {d:e}", curve.label())
        })?;
        distances.push(d);
        ctx.public.push((p, curve, sol));
    }
    Ok(format!(
        "100 draws: max |p*(1/2) - 1/2| {worst_half:.1e}, min private-public gap {min_gap:.3e}; equivalence distances {:.1e} (linear), {:.1e} (sqrt)",
        distances[0], distances[1]
    ))
}

fn c10_oracle(ctx: &mut Ctx) -> Outcome {
    let opts = CertifyOptions::default();
    let mut worst_pol: f64 = 0.0;
    let mut worst_lob: f64 = 0.0;
    for (p, eq) in &ctx.equilibria {
        let r = certify(p, &ctx.linear, eq, &opts).map_err(err(p))?;
        worst_pol = worst_pol.max(r.max_politician_gain);
        worst_lob = worst_lob.max(r.max_lobbyist_gain);
        ensure(
            r.max_politician_gain <= GAIN_TOL && r.max_lobbyist_gain <= GAIN_TOL,
            || format!("{p:?} {}: {:?}", eq.regime, r.witnesses),
        )?;
    }
    for (p, curve, sol) in &ctx.public {
        let r = certify_public(p, curve, sol, &opts).map_err(err(p))?;
        worst_pol = worst_pol.max(r.max_politician_gain);
        worst_lob = worst_lob.max(r.max_lobbyist_gain);
        ensure(
            r.max_politician_gain <= GAIN_TOL && r.max_lobbyist_gain <= GAIN_TOL,
            || format!("{p:?} {:?}: {:?}", sol.mode, r.witnesses),
        )?;
    }

    // Simulated reputations at 10^6 samples.
    let mc = CertifyOptions {
        mc_samples: 1_000_000,
        seed: SEED,
        grid: LobbyistGrid { coarse: 2, zoom: 0 },
    };
    let mut cells = 0;
    let stride = (ctx.equilibria.len() / 12).max(1);
    for (p, eq) in ctx.equilibria.iter().step_by(stride) {
        let r = certify(p, &ctx.linear, eq, &mc).map_err(err(p))?;
        cells += r.mc_cells.len();
        ensure(r.mc_within(), || format!("{p:?} {}: {:?}", eq.regime, r.mc_cells))?;
    }
    let ex = Params::new(1.0 / 3.0, 0.5, f64::INFINITY, 8.0 / 9.0).unwrap();
    let e = Experiment::new(1.0, 3.0 / 7.0).unwrap();
    let revealed = [LobbyistPlay::sole(
        e,
        PoliticianStrategy::new(8.0 / 9.0, 0.0).unwrap(),
    )];
    let concealed = [
        LobbyistPlay::new(ex.gamma, e, PoliticianStrategy::obedient()),
        LobbyistPlay::new(
            1.0 - ex.gamma,
            Experiment::always_b(),
            PoliticianStrategy::obedient(),
        ),
    ];
    for (regime, pop) in [
        (Regime::baseline(), &revealed[..]),
        (Regime::concealed_intent(), &concealed[..]),
    ] {
        let reps = reputation(&ex, &regime, pop).map_err(err(&ex))?;
        let emp = monte_carlo_reputation(&ex, Observables::ActionAndState, pop, 1_000_000, SEED)
            .map_err(err(&ex))?;
        for c in compare_reputations(&emp, &reps, MC_STANDARD_ERRORS) {
            cells += 1;
            ensure(c.within, || format!("example {regime}: {c:?}"))?;
        }
    }

    // Planted deviations of the experiment by 1e-3 in either direction.
    let regime = Regime::baseline();
    let mut detected = 0;
    let mut trials = 0;
    while trials < 100 {
        let p = ctx.params();
        let o = solve_baseline(&p, &ctx.linear).map_err(err(&p))?.outcome;
        let eps = if trials % 2 == 0 { 1e-3 } else { -1e-3 };
        let y = o.experiment_a.p_a_given_b() + eps;
        if !(0.0..=1.0).contains(&y) {
            continue;
        }
        trials += 1;
        let e = Experiment::new(1.0, y).map_err(err(&p))?;
        let s = solve_indifference(&p, &e, &regime, &ctx.linear, &PublicBeliefs::consistent())
            .map_err(err(&p))?
            .strategy;
        let reps = reputation(&p, &regime, &[LobbyistPlay::sole(e, s)]).map_err(err(&p))?;
        let c = verify_lobbyist(&p, &regime, &ctx.linear, &e, &s, Action::A, &reps, &opts.grid);
        if c.gain > GAIN_TOL {
            detected += 1;
        }
    }
    ensure(detected == 100, || {
        format!("planted deviations detected {detected}/100")
    })?;
    Ok(format!(
        "{} private + {} public equilibria certified (max gains {worst_pol:.1e} / {worst_lob:.1e}); {cells} simulated cells within 3 s.e.; planted 100/100",
        ctx.equilibria.len(),
        ctx.public.len()
    ))
}

fn main() -> ExitCode {
    let suite = Instant::now();
    let mut ctx = Ctx {
        rng: ChaCha8Rng::seed_from_u64(SEED),
        linear: ReputationCurve::linear(),
        equilibria: Vec::new(),
        public: Vec::new(),
    };
    let criteria: [Criterion; 10] = [
        ("1 example reproduction", c1_example, Some(Duration::from_secs(1))),
        ("2 theta = 0 benchmark", c2_theta_zero, None),
        (
            "3 informative posterior above 1/2",
            c3_informative,
            Some(Duration::from_secs(10)),
        ),
        ("4 monotone in career concerns", c4_monotone_in_theta, None),
        ("5 concealed-intent trichotomy", c5_trichotomy, None),
        ("6 concealed intent hurts welfare", c6_concealed_intent, None),
        (
            "7 concealed consequence helps with revealed intent",
            c7_concealed_consequence,
            None,
        ),
        ("8 reversal with concealed intent", c8_reversal, None),
        ("9 public persuasion", c9_public, None),
        ("10 oracle soundness", c10_oracle, None),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let mut outcome = run(&mut ctx);
        let took = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, limit) {
            if took > limit {
                outcome = Err(format!("took {took:?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("PASS {name} ({:.2}s): {detail}", took.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} ({:.2}s): {detail}", took.as_secs_f64());
            }
        }
    }
    let total = suite.elapsed();
    if total > Duration::from_secs(300) {
        failed += 1;
        println!("FAIL total runtime {total:?} exceeds 5 minutes");
    } else {
        println!("suite finished in {:.1}s", total.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
