mod common;

use common::*;
use num_traits::One;
use proptest::prelude::*;
use zerocap::channel::{zero_pattern, Channel};
use zerocap::code::{
    code_from_file, code_to_file, delta, gamma, gamma_inverse, gamma_inverse_sized, is_zero_error, theta_m, theta_n,
    GammaIndex, NotACode,
};
use zerocap::decide::InstabilityExponent;
use zerocap::rational::Rational;
use zerocap::search::{construct_code, search_minimal_gamma, verify_code, SearchError};

#[test]
fn minimal_index_for_noiseless_binary_matches_a_full_scan() {
    let ch = Channel::noiseless(2);
    let p = zero_pattern(&ch);
    let exponent = InstabilityExponent::exact(r(3, 2));
    let found = search_minimal_gamma(&p, ch.alphabets(), &exponent, 1_000_000).unwrap();
    let bound = found.gamma.to_u64().unwrap();
    let first = (0..=bound).find(|&n| {
        gamma_inverse(&GammaIndex::from_u64(n), ch.alphabets()).is_ok_and(|c| {
            let s = s_min_full_summation(&ch, &c);
            s.is_one() && Rational::from_integer(c.message_count().into()) > r(3, 2).pow(c.block_length() as i32)
        })
    });
    assert_eq!(first, Some(bound));
    assert_eq!(bound, 566);
}

#[test]
fn small_budgets_report_exhaustion() {
    let ch = Channel::noiseless(2);
    let err = search_minimal_gamma(&zero_pattern(&ch), ch.alphabets(), &InstabilityExponent::exact(r(3, 2)), 500);
    assert_eq!(err.unwrap_err(), SearchError::Exhausted { examined: 500 });
}

#[test]
fn non_codes_are_classified() {
    let size = |n| gamma_inverse_sized(&GammaIndex::from_u64(n), 2, 2);
    assert_eq!(size(0), Err(NotACode::Zero));
    // Base 5: digit 0 never appears in a code expansion.
    assert_eq!(size(5), Err(NotACode::ZeroDigit));
    // A lone input symbol has no output block.
    assert_eq!(size(1), Err(NotACode::BlockStructure));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn gamma_round_trips(code in code_strategy(4, 4, 3)) {
        let (nx, ny) = code.alphabet_sizes();
        let n = gamma(&code);
        prop_assert_eq!(gamma_inverse_sized(&n, nx, ny).unwrap(), code.clone());
        let ab = zerocap::channel::AlphabetPair::numbered(nx, ny);
        prop_assert_eq!(theta_n(&n, &ab), code.block_length());
        prop_assert_eq!(theta_m(&n, &ab), code.message_count());
    }

    #[test]
    fn gamma_is_injective(a in code_over(3, 3, 2), b in code_over(3, 3, 2)) {
        prop_assert_eq!(a == b, gamma(&a) == gamma(&b));
    }

    #[test]
    fn inverse_then_gamma_is_identity_on_codes(n in 0u64..200_000, nx in 1usize..4, ny in 1usize..4) {
        if let Ok(code) = gamma_inverse_sized(&GammaIndex::from_u64(n), nx, ny) {
            prop_assert_eq!(gamma(&code), GammaIndex::from_u64(n));
        }
    }

    #[test]
    fn zero_error_means_certain_decoding((ch, code) in channel_and_code(3, 3)) {
        let p = zero_pattern(&ch);
        let by_index = delta(&gamma(&code), &p, ch.alphabets());
        prop_assert_eq!(by_index, s_min_full_summation(&ch, &code).is_one());
        prop_assert_eq!(by_index, is_zero_error(&code, &p));
    }

    #[test]
    fn constructed_codes_are_zero_error_and_fast_enough(ch in channel_strategy(4, 4), num in 1i64..8) {
        let p = zero_pattern(&ch);
        let exponent = InstabilityExponent::exact(r(num, 4));
        match construct_code(&p, ch.alphabets(), &exponent, 2) {
            Ok(found) => {
                prop_assert!(s_min_full_summation(&ch, &found.code).is_one());
                let n = found.code.block_length() as i32;
                prop_assert!(Rational::from_integer(found.code.message_count().into()) > r(num, 4).pow(n));
                prop_assert!(verify_code(&found.code, &p, &exponent).is_ok());
            }
            Err(SearchError::NotFound { .. }) => {
                let g = zerocap::graph::confusability_graph(&p, ch.alphabets());
                for n in 1..=2u32 {
                    let alpha = alpha_exhaustive(&zerocap::graph::strong_power(&g, n));
                    prop_assert!(Rational::from_integer(alpha.into()) <= r(num, 4).pow(n as i32));
                }
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn code_files_round_trip(code in code_strategy(4, 4, 2)) {
        let (nx, ny) = code.alphabet_sizes();
        let ab = zerocap::channel::AlphabetPair::numbered(nx, ny);
        prop_assert_eq!(code_from_file(&code_to_file(&code, &ab), &ab).unwrap(), code);
    }
}
