//! Zero-error codes whose rate beats an instability exponent.
//!
//! [`search_minimal_gamma`] scans the code numbering in order and returns the
//! least index that qualifies. [`construct_code`] builds codes from maximum
//! independent sets of strong powers of the confusability graph and is the
//! practical route.

use std::cmp::Ordering;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::channel::{AlphabetPair, ZeroPattern};
use crate::code::{gamma, gamma_inverse_sized, is_zero_error, reachable_words, Code, GammaIndex, Word};
use crate::decide::InstabilityExponent;
use crate::graph::{confusability_graph, independence_number, strong_power, GraphError, DEFAULT_VERTEX_LIMIT};
use crate::rational::{compare_count_power, format_rational, serde_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    FaithfulGamma,
    IndependentSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub code: Code,
    pub gamma: GammaIndex,
    /// Indices scanned, or block lengths tried.
    pub n_examined: u64,
    pub mode: SearchMode,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("no qualifying code among the first {examined} indices")]
    Exhausted { examined: u64 },
    #[error("no block length up to {max_block} gives a qualifying code")]
    NotFound { max_block: u32 },
    #[error("block length must be at least 1")]
    ZeroBlock,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `M > hi^N`, exactly.
fn rate_beats(code: &Code, exponent: &InstabilityExponent) -> bool {
    compare_count_power(&BigUint::from(code.message_count()), &exponent.hi, code.block_length() as u32)
        == Ordering::Greater
}

/// Least `n ≥ 0` numbering a zero-error code for `pattern` with
/// `M > hi^N`, scanning at most `budget` indices.
pub fn search_minimal_gamma(
    pattern: &ZeroPattern,
    alphabets: &AlphabetPair,
    exponent: &InstabilityExponent,
    budget: u64,
) -> Result<SearchResult, SearchError> {
    let (nx, ny) = alphabets.sizes();
    let mut n = BigUint::ZERO;
    for examined in 1..=budget {
        let index = GammaIndex(n.clone());
        if let Ok(code) = gamma_inverse_sized(&index, nx, ny) {
            if rate_beats(&code, exponent) && is_zero_error(&code, pattern) {
                return Ok(SearchResult {
                    code,
                    gamma: index,
                    n_examined: examined,
                    mode: SearchMode::FaithfulGamma,
                });
            }
        }
        n += 1u32;
    }
    Err(SearchError::Exhausted { examined: budget })
}

/// Decodes every output word reachable from a message to that message.
fn full_reachable_code(pattern: &ZeroPattern, messages: &[Word], block: usize) -> Code {
    let (nx, ny) = pattern.sizes();
    let pairs = messages.iter().flat_map(|x| {
        let choices: Vec<Vec<usize>> = x.iter().map(|&s| pattern.reachable_outputs(s as usize)).collect();
        reachable_words(&choices).map(|y| (x.clone(), y)).collect::<Vec<_>>()
    });
    Code::new(nx, ny, block, pairs).expect("independent messages have disjoint reachable sets")
}

fn vertex_word(mut v: usize, k: usize, n: usize) -> Word {
    let mut w = vec![0u32; n];
    for slot in w.iter_mut().rev() {
        *slot = (v % k) as u32;
        v /= k;
    }
    w
}

/// For `N = 1..=max_block`, takes a maximum independent set of `G^⊠N` and
/// returns the first code with more than `hi^N` messages. Every message is
/// paired with all output words it can produce.
pub fn construct_code(
    pattern: &ZeroPattern,
    alphabets: &AlphabetPair,
    exponent: &InstabilityExponent,
    max_block: u32,
) -> Result<SearchResult, SearchError> {
    construct_code_with_limit(pattern, alphabets, exponent, max_block, DEFAULT_VERTEX_LIMIT.max(256))
}

pub fn construct_code_with_limit(
    pattern: &ZeroPattern,
    alphabets: &AlphabetPair,
    exponent: &InstabilityExponent,
    max_block: u32,
    vertex_limit: usize,
) -> Result<SearchResult, SearchError> {
    if max_block == 0 {
        return Err(SearchError::ZeroBlock);
    }
    let g = confusability_graph(pattern, alphabets);
    let k = g.vertex_count();
    for n in 1..=max_block {
        let power = if n == 1 { g.clone() } else { strong_power(&g, n) };
        let set = independence_number(&power, vertex_limit)?;
        if compare_count_power(&BigUint::from(set.size), &exponent.hi, n) != Ordering::Greater {
            continue;
        }
        let messages: Vec<Word> = set.witness.iter().map(|&v| vertex_word(v, k, n as usize)).collect();
        let code = full_reachable_code(pattern, &messages, n as usize);
        return Ok(SearchResult {
            gamma: gamma(&code),
            code,
            n_examined: u64::from(n),
            mode: SearchMode::IndependentSet,
        });
    }
    Err(SearchError::NotFound { max_block })
}

/// Exact record of why a code qualifies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeCertificate {
    pub block_length: usize,
    pub messages: usize,
    pub zero_error: bool,
    /// `hi^N`, the bound the message count must strictly exceed.
    #[serde(with = "serde_rational")]
    pub rate_bound: Rational,
    pub rate_ok: bool,
    pub gamma: GammaIndex,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("the code is not zero-error for this pattern")]
    NotZeroError,
    #[error("{messages} messages do not exceed {bound}")]
    RateTooLow { messages: usize, bound: String },
}

/// Re-checks zero-error through the anti-code and the rate `M > hi^N`.
pub fn verify_code(
    code: &Code,
    pattern: &ZeroPattern,
    exponent: &InstabilityExponent,
) -> Result<CodeCertificate, VerifyError> {
    let zero_error = crate::code::anti_code(code).iter().all(|(x, y)| {
        x.iter().zip(y).any(|(&a, &b)| pattern.contains(a as usize, b as usize))
    });
    if !zero_error {
        return Err(VerifyError::NotZeroError);
    }
    let n = code.block_length() as u32;
    let bound = crate::rational::pow(&exponent.hi, n);
    let rate_ok = rate_beats(code, exponent);
    if !rate_ok {
        return Err(VerifyError::RateTooLow { messages: code.message_count(), bound: format_rational(&bound) });
    }
    Ok(CodeCertificate {
        block_length: code.block_length(),
        messages: code.message_count(),
        zero_error,
        rate_bound: bound,
        rate_ok,
        gamma: gamma(code),
    })
}
