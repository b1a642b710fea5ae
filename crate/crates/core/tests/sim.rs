mod common;

use common::*;
use proptest::prelude::*;
use zerocap::channel::{zero_pattern, Channel};
use zerocap::code::{code_to_file, Code};
use zerocap::decide::{instability_exponent, Interval, Plant};
use zerocap::rational::Rational;
use zerocap::search::construct_code;
use zerocap::sim::{boundedness_report, run_simulation, Classification, SimConfig, SimError};

fn config(plant: Plant, channel: Channel, code: &Code, horizon: u64, trials: u32) -> SimConfig {
    let n = plant.dimension();
    SimConfig {
        plant,
        code: code_to_file(code, channel.alphabets()),
        channel,
        noise_bound: r(1, 10),
        initial_box: vec![Interval { lo: r(-1, 5), hi: r(1, 5) }; n],
        horizon,
        seed: 3,
        trials,
        require_rate_certificate: true,
        record_steps: false,
    }
}

fn binary_code() -> Code {
    Code::new(2, 2, 1, vec![(vec![0], vec![0]), (vec![1], vec![1])]).unwrap()
}

/// Half-width fixed point of `h ↦ (|a|/M) h + d`, padded by `2^-30` for the
/// dyadic rounding of the box.
fn geometric_bound(a: &Rational, messages: i64, d: &Rational) -> Rational {
    let m = r(messages, 1);
    let fixed = d * &m / (&m - a);
    let pad = r(1, 1 << 30);
    if fixed > r(1, 5) { fixed + pad } else { r(1, 5) + pad }
}

#[test]
fn fixture_config_runs_bounded() {
    let text = std::fs::read_to_string(data("sim_3_2.json")).unwrap();
    let config: SimConfig = serde_json::from_str(&text).unwrap();
    let traces = run_simulation(&config).unwrap();
    assert_eq!(traces.len(), 4);
    let bound = geometric_bound(&r(3, 2), 2, &r(1, 10));
    let report = boundedness_report(&traces, &bound);
    assert_eq!(report.fraction_below, 1.0);
    assert_eq!(report.diverging, 0);
}

#[test]
fn pentagon_code_stabilizes_eleven_fifths() {
    let pentagon = load_channel("typewriter.json");
    let plant = Plant::scalar(r(11, 5));
    let exponent = instability_exponent(&plant, 30).unwrap();
    let found = construct_code(&zero_pattern(&pentagon), pentagon.alphabets(), &exponent, 2).unwrap();
    let traces = run_simulation(&config(plant, pentagon, &found.code, 4_000, 2)).unwrap();
    // Box half-width at block starts: h = a²h/5 + d(1 + a); mid-block the
    // error is at most a·h + d.
    let (a, d) = (r(11, 5), r(1, 10));
    let h = &d * (r(1, 1) + &a) / (r(1, 1) - &a * &a / r(5, 1));
    let bound = &a * &h + &d + r(1, 1 << 20);
    for t in &traces {
        assert_eq!(t.blocks_decoded, 2_000);
        assert!(t.sup_below(&bound), "sup {} bound {}", t.sup_error, bound);
        assert_eq!(zerocap::sim::classify_slope(t.slope), Classification::BoundedConsistent);
    }
}

#[test]
fn coupled_two_dimensional_plant_stays_bounded() {
    let plant = Plant::new(vec![vec![r(3, 2), r(1, 3)], vec![r(0, 1), r(5, 4)]]).unwrap();
    let ch = Channel::noiseless(2);
    let exponent = instability_exponent(&plant, 30).unwrap();
    assert_eq!(exponent.lo, r(15, 8));
    let found = construct_code(&zero_pattern(&ch), ch.alphabets(), &exponent, 3).unwrap();
    assert_eq!((found.code.block_length(), found.code.message_count()), (1, 2));
    let traces = run_simulation(&config(plant, ch, &found.code, 6_000, 2)).unwrap();
    for t in &traces {
        assert!(t.sup_error < 100.0, "sup {}", t.sup_error);
        assert_eq!(zerocap::sim::classify_slope(t.slope), Classification::BoundedConsistent);
    }
}

#[test]
fn mismatched_initial_box_is_rejected() {
    let mut c = config(Plant::scalar(r(3, 2)), Channel::noiseless(2), &binary_code(), 10, 1);
    c.initial_box.push(Interval { lo: r(0, 1), hi: r(1, 1) });
    assert!(matches!(run_simulation(&c), Err(SimError::ConfigInvalid(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn scalar_errors_stay_under_the_geometric_bound(num in 0i64..=19, seed in any::<u64>()) {
        let a = r(num, 10);
        let mut c = config(Plant::scalar(a.clone()), Channel::noiseless(2), &binary_code(), 3_000, 2);
        c.seed = seed;
        let bound = geometric_bound(&a, 2, &r(1, 10));
        for t in run_simulation(&c).unwrap() {
            prop_assert!(t.sup_below(&bound), "sup {} bound {}", t.sup_error, bound);
            for w in &t.half_widths {
                prop_assert!(w[0] <= bound);
            }
        }
    }

    #[test]
    fn trials_are_reproducible(seed in any::<u64>()) {
        let mut c = config(Plant::scalar(r(3, 2)), Channel::noiseless(2), &binary_code(), 500, 3);
        c.seed = seed;
        prop_assert_eq!(run_simulation(&c).unwrap(), run_simulation(&c).unwrap());
    }
}
