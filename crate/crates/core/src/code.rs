//! Block codes `𝔠 ⊆ X^N × Y^N`, their numbering Γ, and the zero-error test.
//!
//! A code is a set of (input word, output word) pairs in which no output word
//! is claimed by two different input words. Words are stored as symbol
//! indices into the channel alphabets. The pairs are kept in lexicographic
//! order, which fixes the concatenated word `v(𝔠) = x₁y₁x₂y₂…` and therefore
//! the number
//!
//! ```text
//! Γ(𝔠) = Σ_j Σ(v_j) · (|X| + |Y| + 1)^(j-1)
//! ```
//!
//! with the first symbol of `v(𝔠)` as the least significant digit.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::channel::{AlphabetPair, ZeroPattern};

/// A word over one alphabet, as symbol indices.
pub type Word = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodeError {
    #[error("a code needs at least one pair")]
    Empty,
    #[error("block length must be at least 1")]
    ZeroBlockLength,
    #[error("word of length {len} in a code of block length {block_length}")]
    WordLength { len: usize, block_length: usize },
    #[error("symbol index {index} out of range for an alphabet of size {size}")]
    SymbolOutOfRange { index: u32, size: usize },
    #[error("output word {0:?} is paired with two different input words")]
    AmbiguousOutput(Word),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
}

/// An `(N, M)`-code.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Code {
    n_inputs: usize,
    n_outputs: usize,
    block_length: usize,
    pairs: BTreeSet<(Word, Word)>,
}

impl Code {
    pub fn new<I>(n_inputs: usize, n_outputs: usize, block_length: usize, pairs: I) -> Result<Self, CodeError>
    where
        I: IntoIterator<Item = (Word, Word)>,
    {
        if block_length == 0 {
            return Err(CodeError::ZeroBlockLength);
        }
        let pairs: BTreeSet<(Word, Word)> = pairs.into_iter().collect();
        if pairs.is_empty() {
            return Err(CodeError::Empty);
        }
        let mut owner: BTreeMap<&Word, &Word> = BTreeMap::new();
        for (x, y) in &pairs {
            for (word, size) in [(x, n_inputs), (y, n_outputs)] {
                if word.len() != block_length {
                    return Err(CodeError::WordLength { len: word.len(), block_length });
                }
                if let Some(&index) = word.iter().find(|&&s| s as usize >= size) {
                    return Err(CodeError::SymbolOutOfRange { index, size });
                }
            }
            if let Some(prev) = owner.insert(y, x) {
                if prev != x {
                    return Err(CodeError::AmbiguousOutput(y.clone()));
                }
            }
        }
        Ok(Self { n_inputs, n_outputs, block_length, pairs })
    }

    /// Builds a code from symbol names.
    pub fn from_symbols<'a, I>(alphabets: &AlphabetPair, block_length: usize, pairs: I) -> Result<Self, CodeError>
    where
        I: IntoIterator<Item = (Vec<&'a str>, Vec<&'a str>)>,
    {
        let lookup = |word: Vec<&str>, input: bool| -> Result<Word, CodeError> {
            word.into_iter()
                .map(|s| {
                    let idx = if input { alphabets.inputs().index_of(s) } else { alphabets.outputs().index_of(s) };
                    idx.map(|i| i as u32).ok_or_else(|| CodeError::UnknownSymbol(s.to_string()))
                })
                .collect()
        };
        let pairs = pairs
            .into_iter()
            .map(|(x, y)| Ok((lookup(x, true)?, lookup(y, false)?)))
            .collect::<Result<Vec<_>, CodeError>>()?;
        let (nx, ny) = alphabets.sizes();
        Self::new(nx, ny, block_length, pairs)
    }

    /// The zero-rate code `{(x, y) : y ∈ Y^N}` for a single message `x`.
    pub fn trivial(n_inputs: usize, n_outputs: usize, message: Word) -> Result<Self, CodeError> {
        let n = message.len();
        Self::new(n_inputs, n_outputs, n, words(n_outputs, n).map(|y| (message.clone(), y)))
    }

    pub fn alphabet_sizes(&self) -> (usize, usize) {
        (self.n_inputs, self.n_outputs)
    }

    /// `N`.
    pub fn block_length(&self) -> usize {
        self.block_length
    }

    /// Pairs in canonical (lexicographic) order.
    pub fn pairs(&self) -> impl Iterator<Item = (&Word, &Word)> + '_ {
        self.pairs.iter().map(|(x, y)| (x, y))
    }

    pub fn contains(&self, x: &[u32], y: &[u32]) -> bool {
        // BTreeSet<(Vec, Vec)> cannot be probed with borrowed slices.
        self.pairs.contains(&(x.to_vec(), y.to_vec()))
    }

    /// `L = |𝔠|`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The message set `𝔐(𝔠)`, sorted.
    pub fn messages(&self) -> Vec<&Word> {
        let mut out: Vec<&Word> = self.pairs.iter().map(|(x, _)| x).collect();
        out.dedup();
        out
    }

    /// `M = |𝔐(𝔠)|`.
    pub fn message_count(&self) -> usize {
        self.messages().len()
    }

    /// Maps each output word to the unique message it decodes to.
    pub fn decoder(&self) -> BTreeMap<&Word, &Word> {
        self.pairs.iter().map(|(x, y)| (y, x)).collect()
    }

    /// Σ-digits of `v(𝔠)` in order (first symbol first).
    pub fn sigma_word(&self) -> Vec<u32> {
        let nx = self.n_inputs as u32;
        self.pairs
            .iter()
            .flat_map(|(x, y)| x.iter().map(|&s| s + 1).chain(y.iter().map(move |&s| nx + s + 1)))
            .collect()
    }

    /// Symbol names for inputs and outputs of one pair.
    pub fn pair_symbols<'a>(&self, alphabets: &'a AlphabetPair, x: &[u32], y: &[u32]) -> (Vec<&'a str>, Vec<&'a str>) {
        (
            x.iter().map(|&s| alphabets.inputs().symbol(s as usize)).collect(),
            y.iter().map(|&s| alphabets.outputs().symbol(s as usize)).collect(),
        )
    }
}

/// All words of length `n` over `size` symbols, lexicographically.
pub fn words(size: usize, n: usize) -> impl Iterator<Item = Word> {
    let total = (size as u64).checked_pow(n as u32).expect("word space too large");
    (0..total).map(move |mut k| {
        let mut w = vec![0u32; n];
        for slot in w.iter_mut().rev() {
            *slot = (k % size as u64) as u32;
            k /= size as u64;
        }
        w
    })
}

/// The concatenated word `v(𝔠)` as symbol names.
pub fn code_word(code: &Code, alphabets: &AlphabetPair) -> Vec<String> {
    code.pairs()
        .flat_map(|(x, y)| {
            let (xs, ys) = code.pair_symbols(alphabets, x, y);
            xs.into_iter().chain(ys).map(str::to_string).collect::<Vec<_>>()
        })
        .collect()
}

/// A code number Γ(𝔠). Indices outgrow machine words quickly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaIndex(pub BigUint);

impl GammaIndex {
    pub fn from_u64(n: u64) -> Self {
        Self(BigUint::from(n))
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl fmt::Display for GammaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for GammaIndex {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigUint::from_str(s.trim()).map(Self)
    }
}

impl Serialize for GammaIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for GammaIndex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Γ(𝔠).
pub fn gamma(code: &Code) -> GammaIndex {
    let radix = BigUint::from((code.n_inputs + code.n_outputs + 1) as u32);
    let value = code.sigma_word().iter().rev().fold(BigUint::zero(), |acc, &d| acc * &radix + d);
    GammaIndex(value)
}

/// Why a number is not the index of any code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotACode {
    /// Zero has an empty expansion.
    Zero,
    /// The expansion contains the digit 0, which Σ never produces.
    ZeroDigit,
    /// The word does not split into equal-length `X^N Y^N` blocks.
    BlockStructure,
    /// Pairs are repeated or not in canonical order.
    NonCanonical,
    /// Two input words share an output word.
    Ambiguous,
}

impl fmt::Display for NotACode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NotACode::Zero => "zero has an empty expansion",
            NotACode::ZeroDigit => "expansion contains the digit 0",
            NotACode::BlockStructure => "word does not split into X^N Y^N blocks",
            NotACode::NonCanonical => "pairs are not in canonical order",
            NotACode::Ambiguous => "an output word belongs to two messages",
        };
        f.write_str(s)
    }
}

/// Digits of `n` in base `radix`, least significant first.
fn digits_le(n: &BigUint, radix: u32) -> Vec<u32> {
    if radix <= 256 {
        return n.to_radix_le(radix).into_iter().map(u32::from).collect();
    }
    let mut out = Vec::new();
    let mut rest = n.clone();
    let r = BigUint::from(radix);
    while !rest.is_zero() {
        out.push((&rest % &r).to_u32().unwrap());
        rest /= &r;
    }
    out
}

/// Γ⁻¹ for alphabets of the given sizes.
pub fn gamma_inverse_sized(n: &GammaIndex, n_inputs: usize, n_outputs: usize) -> Result<Code, NotACode> {
    if n.0.is_zero() {
        return Err(NotACode::Zero);
    }
    let nx = n_inputs as u32;
    let digits = digits_le(&n.0, (n_inputs + n_outputs + 1) as u32);
    if digits.contains(&0) {
        return Err(NotACode::ZeroDigit);
    }
    let is_input = |d: u32| d <= nx;
    let block = digits.iter().take_while(|&&d| is_input(d)).count();
    if block == 0 || !digits.len().is_multiple_of(2 * block) {
        return Err(NotACode::BlockStructure);
    }
    let mut pairs: Vec<(Word, Word)> = Vec::with_capacity(digits.len() / (2 * block));
    for chunk in digits.chunks(2 * block) {
        let (xs, ys) = chunk.split_at(block);
        if !xs.iter().all(|&d| is_input(d)) || ys.iter().any(|&d| is_input(d)) {
            return Err(NotACode::BlockStructure);
        }
        let pair = (xs.iter().map(|d| d - 1).collect(), ys.iter().map(|d| d - nx - 1).collect());
        if pairs.last().is_some_and(|prev| *prev >= pair) {
            return Err(NotACode::NonCanonical);
        }
        pairs.push(pair);
    }
    Code::new(n_inputs, n_outputs, block, pairs).map_err(|e| match e {
        CodeError::AmbiguousOutput(_) => NotACode::Ambiguous,
        _ => NotACode::BlockStructure,
    })
}

/// Γ⁻¹: the unique code numbered `n`, if any.
pub fn gamma_inverse(n: &GammaIndex, alphabets: &AlphabetPair) -> Result<Code, NotACode> {
    let (nx, ny) = alphabets.sizes();
    gamma_inverse_sized(n, nx, ny)
}

/// `Θ_N`: block length of the code numbered `n`, 0 for non-codes.
pub fn theta_n(n: &GammaIndex, alphabets: &AlphabetPair) -> usize {
    gamma_inverse(n, alphabets).map_or(0, |c| c.block_length())
}

/// `Θ_M`: message count of the code numbered `n`, 0 for non-codes.
pub fn theta_m(n: &GammaIndex, alphabets: &AlphabetPair) -> usize {
    gamma_inverse(n, alphabets).map_or(0, |c| c.message_count())
}

/// The anti-code `(𝔐(𝔠) × Y^N) \ 𝔠`: message/output pairs that decode wrongly.
pub fn anti_code(code: &Code) -> BTreeSet<(Word, Word)> {
    let mut out = BTreeSet::new();
    for x in code.messages() {
        for y in words(code.n_outputs, code.block_length) {
            let pair = (x.clone(), y);
            if !code.pairs.contains(&pair) {
                out.insert(pair);
            }
        }
    }
    out
}

/// True iff every anti-code pair has a coordinate `j` with `(x^j, y^j) ∈ Ω`.
///
/// Equivalently: every output word reachable from a message is decoded to
/// that message. Only reachable words are enumerated.
pub fn is_zero_error(code: &Code, pattern: &ZeroPattern) -> bool {
    assert_eq!(code.alphabet_sizes(), pattern.sizes(), "code and pattern alphabets differ");
    code.messages().into_iter().all(|x| {
        let choices: Vec<Vec<usize>> = x.iter().map(|&s| pattern.reachable_outputs(s as usize)).collect();
        let all_decoded = reachable_words(&choices).all(|y| code.contains(x, &y));
        all_decoded
    })
}

/// Cartesian product of per-coordinate symbol choices.
pub(crate) fn reachable_words(choices: &[Vec<usize>]) -> impl Iterator<Item = Word> + '_ {
    let total: usize = choices.iter().map(Vec::len).product();
    (0..total).map(move |mut k| {
        let mut w = vec![0u32; choices.len()];
        for (slot, opts) in w.iter_mut().zip(choices).rev() {
            *slot = opts[k % opts.len()] as u32;
            k /= opts.len();
        }
        w
    })
}

/// `Δ(n|Ω)`: whether `n` numbers a zero-error code for channels in `W₀(Ω)`.
pub fn delta(n: &GammaIndex, pattern: &ZeroPattern, alphabets: &AlphabetPair) -> bool {
    gamma_inverse(n, alphabets).is_ok_and(|c| is_zero_error(&c, pattern))
}

/// `R₀` in exponentiated form: the rate is `log2(M) / N` when `zero_error`,
/// and 0 otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroErrorRate {
    pub messages: usize,
    pub block_length: usize,
    pub zero_error: bool,
}

impl ZeroErrorRate {
    /// The rate as a float, for display only.
    pub fn bits_per_use(&self) -> f64 {
        if self.zero_error {
            (self.messages as f64).log2() / self.block_length as f64
        } else {
            0.0
        }
    }
}

pub fn rate_r0(code: &Code, pattern: &ZeroPattern) -> ZeroErrorRate {
    ZeroErrorRate {
        messages: code.message_count(),
        block_length: code.block_length(),
        zero_error: is_zero_error(code, pattern),
    }
}

/// JSON layout: a list of `[input word, output word]` pairs of symbol lists.
pub type CodeFile = Vec<(Vec<String>, Vec<String>)>;

pub fn code_to_file(code: &Code, alphabets: &AlphabetPair) -> CodeFile {
    code.pairs()
        .map(|(x, y)| {
            let (xs, ys) = code.pair_symbols(alphabets, x, y);
            (xs.into_iter().map(str::to_string).collect(), ys.into_iter().map(str::to_string).collect())
        })
        .collect()
}

pub fn code_from_file(file: &CodeFile, alphabets: &AlphabetPair) -> Result<Code, CodeError> {
    let n = file.first().map_or(0, |(x, _)| x.len());
    Code::from_symbols(
        alphabets,
        n,
        file.iter().map(|(x, y)| (x.iter().map(String::as_str).collect(), y.iter().map(String::as_str).collect())),
    )
}
