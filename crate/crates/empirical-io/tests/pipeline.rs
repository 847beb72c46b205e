use empirical_io::{empirical_game, estimate_params, load_log, PayoffParams};
use market_core::{
    expected_utility, joint_distribution, Demand, Firm, MarketParams, StrategyProfile,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::io::Write as _;

#[test]
fn a_written_log_round_trips_to_the_model_quantities() {
    let p = MarketParams::new(0.55, 0.9, 0.8, 0.25, 0.6, 3.0, 1.0).unwrap();
    let jd = joint_distribution(&p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);

    let mut contents = String::from("# synthetic pricing log\np1,p2,tau\n");
    for _ in 0..50_000 {
        let (p1, p2, d) = jd.sample(&mut rng);
        writeln!(
            contents,
            "{},{},{}",
            p1 as u8,
            p2 as u8,
            matches!(d, Demand::High) as u8
        )
        .unwrap();
    }
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(contents.as_bytes()).unwrap();

    let log = load_log(file.path()).unwrap();
    assert_eq!(log.len(), 50_000);

    let est = estimate_params(&log).unwrap();
    assert!((est.a1_hat - 0.9).abs() <= 4.0 * est.a1_se);
    assert!((est.a2_hat - 0.8).abs() <= 4.0 * est.a2_se);
    assert!((est.theta_hat - 0.55).abs() <= 4.0 * est.theta_se);
    assert!((est.rho_raw - 0.6).abs() <= 4.0 * est.rho_se);

    let game = empirical_game(&log, PayoffParams::new(0.25, 3.0, 1.0).unwrap()).unwrap();
    let profile = StrategyProfile::DISCRIMINATING;
    let (m1, m2) = game.utility(profile.firm1, profile.firm2);
    let (se1, se2) = game.std_error(profile.firm1, profile.firm2);
    let u1 = expected_utility(Firm::One, profile, &p).unwrap();
    let u2 = expected_utility(Firm::Two, profile, &p).unwrap();
    assert!((m1 - u1).abs() <= 4.0 * se1);
    assert!((m2 - u2).abs() <= 4.0 * se2);
}
