mod common;

use common::*;
use proptest::prelude::*;
use zerocap::bss::{
    evaluate, parse_program, program_c0, program_cl, program_exp_n, program_indicator_nat, program_pattern_indicator,
    EvalOutcome, Program,
};
use zerocap::capacity::{CapacityOptions, CapacityTable, Registry};
use zerocap::channel::{AlphabetPair, Channel, ZeroPattern};
use zerocap::graph::confusability_graph;
use zerocap::rational::Rational;

const BUDGET: u64 = 1_000_000;

fn value(p: &Program, args: &[Rational]) -> Rational {
    match evaluate(p, args, BUDGET).unwrap() {
        EvalOutcome::Value(v) => v,
        other => panic!("expected a value, got {other}"),
    }
}

fn stacked_with_pattern(pattern: &ZeroPattern, fill: &[u32]) -> Vec<Rational> {
    let (nx, ny) = pattern.sizes();
    let mut w = vec![r(0, 1); nx * ny];
    for x in 0..nx {
        for y in 0..ny {
            if !pattern.contains(x, y) {
                w[Channel::stacked_index(nx, x, y)] = r(i64::from(1 + fill[x * ny + y] % 5), 7);
            }
        }
    }
    w
}

#[test]
fn exp_program_file_matches_the_builtin() {
    let text = std::fs::read_to_string(data("exp_n.sexp")).unwrap();
    assert_eq!(parse_program(&text).unwrap(), program_exp_n());
}

#[test]
fn capacity_lookup_agrees_with_the_weighted_indicator_sum() {
    let ab = AlphabetPair::numbered(2, 2);
    let table = CapacityTable::build(&ab, &Registry::builtin(), CapacityOptions::default()).unwrap();
    let c0 = program_c0(&ab, &table).unwrap();
    let weight = |p: &ZeroPattern| {
        let g = confusability_graph(p, &ab);
        r(alpha_exhaustive(&g) as i64, 1)
    };
    for pattern in ZeroPattern::all(2, 2) {
        let w = stacked_with_pattern(&pattern, &[0, 1, 2, 3]);
        let expected = ZeroPattern::all(2, 2)
            .filter(|q| (0..2).all(|x| (0..2).all(|y| q.contains(x, y) == w[Channel::stacked_index(2, x, y)].eq(&r(0, 1)))))
            .map(|q| weight(&q))
            .fold(r(0, 1), |a, b| a + b);
        assert_eq!(value(&c0, &w), expected, "pattern {pattern}");
    }
}

#[test]
fn budget_exhaustion_is_reported() {
    let outcome = evaluate(&program_cl(), &[r(5_000_000, 1)], 1_000).unwrap();
    assert!(matches!(outcome, EvalOutcome::Diverged { .. }));
}

#[test]
fn arity_is_checked() {
    assert!(evaluate(&program_exp_n(), &[r(1, 1)], BUDGET).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ceiling_matches_the_direct_rule(x in rational_strategy(500, 12)) {
        prop_assert_eq!(value(&program_cl(), std::slice::from_ref(&x)), Rational::from_integer(least_natural_above(&x)));
    }

    #[test]
    fn naturals_indicator_matches_the_direct_rule(x in prop_oneof![rational_strategy(500, 6), (-20i64..500).prop_map(|n| r(n, 1))]) {
        let want = r(i64::from(is_natural(&x)), 1);
        prop_assert_eq!(value(&program_indicator_nat(), &[x]), want);
    }

    #[test]
    fn discretized_power_matches_repeated_multiplication(k in rational_strategy(40, 5), base in rational_strategy(4, 5)) {
        prop_assert_eq!(value(&program_exp_n(), &[k.clone(), base.clone()]), natural_power(&k, &base));
    }

    #[test]
    fn pattern_indicators_fire_exactly_on_their_pattern(bits in 0u64..16, other in 0u64..16, fill in prop::collection::vec(0u32..10, 4)) {
        let own = ZeroPattern::from_index(2, 2, bits);
        let probe = ZeroPattern::from_index(2, 2, other);
        let w = stacked_with_pattern(&probe, &fill);
        let fired = value(&program_pattern_indicator(&own, 0), &w);
        prop_assert_eq!(fired, r(i64::from(own == probe), 1));
    }

    #[test]
    fn printed_programs_parse_back(k in 0usize..4) {
        let p = [program_cl(), program_indicator_nat(), program_exp_n(), program_pattern_indicator(&ZeroPattern::from_index(2, 2, 9), 1)][k].clone();
        prop_assert_eq!(parse_program(&p.to_string()).unwrap(), p);
    }
}
