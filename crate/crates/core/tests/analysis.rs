use lobbycc::analysis::emit::{figure_rows, sweep_rows, write_csv, CSV_HEADER};
use lobbycc::analysis::{linspace, sweep, transparency_table, Axis, Sign, Trend};
use lobbycc::equilibrium::{find_gamma_bar, spade_holds};
use lobbycc::{Params, Regime, ReputationCurve};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn figure_signs_hold_on_random_draws() {
    let f = ReputationCurve::linear();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut done = 0;
    while done < 100 {
        let p = Params::new(
            rng.gen_range(0.02..0.48),
            rng.gen_range(0.02..0.98),
            rng.gen_range(0.05..20.0),
            0.5,
        )
        .unwrap();
        if !spade_holds(&p, &f) {
            continue;
        }
        let gb = find_gamma_bar(&p, &f).unwrap();
        let p = p.with_gamma(gb.min(0.5) * rng.gen_range(0.1..0.9));
        let t = transparency_table(&p, &f).unwrap();
        assert_eq!(t.intent_effect_consequence_revealed.sign, Sign::Positive, "{p:?}");
        assert_eq!(t.consequence_effect_intent_revealed.sign, Sign::Negative, "{p:?}");
        assert_eq!(
            t.consequence_effect_intent_concealed.sign,
            Sign::Positive,
            "{p:?}"
        );
        done += 1;
    }
}

#[test]
fn csv_reads_back_with_the_fixed_header() {
    let f = ReputationCurve::linear();
    let p = Params::new(0.3, 0.5, 0.5, 0.3).unwrap();
    let r = sweep(&p, &Regime::baseline(), Axis::Theta, &linspace(0.0, 4.0, 17), &f).unwrap();
    assert_eq!(r.mu_info_trend, Trend::Nondecreasing);
    let mut rows = sweep_rows(&r);
    rows.extend(figure_rows(&transparency_table(&p, &f).unwrap()));
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    let mut reader = csv::Reader::from_reader(buf.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, CSV_HEADER);
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 21);
    let mu: Vec<f64> = records[..17].iter().map(|r| r[6].parse().unwrap()).collect();
    assert!(mu.windows(2).all(|w| w[1] >= w[0]));
    assert_eq!(&records[17][4], "baseline");
    assert_eq!(&records[20][4], "concealed-both");
}
