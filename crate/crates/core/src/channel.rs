//! Finite alphabets, discrete memoryless channels with exact rational
//! transition probabilities, and their zero patterns.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::code::Code;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChannelError {
    #[error("row {row} sums to {sum}, not 1")]
    NonStochastic { row: usize, sum: String },
    #[error("negative transition probability at ({input}, {output})")]
    NegativeEntry { input: String, output: String },
    #[error("symbol {0:?} appears in both the input and the output alphabet")]
    AlphabetOverlap(String),
    #[error("duplicate symbol {0:?} in alphabet")]
    DuplicateSymbol(String),
    #[error("alphabet must not be empty")]
    EmptyAlphabet,
    #[error("expected a {rows}x{cols} matrix")]
    Dimension { rows: usize, cols: usize },
    #[error("code has an empty message set")]
    EmptyMessageSet,
    #[error("alphabet sizes do not match: expected {expected:?}, got {actual:?}")]
    AlphabetMismatch { expected: (usize, usize), actual: (usize, usize) },
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error(transparent)]
    Parse(#[from] rational::ParseRationalError),
}

/// An ordered set of distinct symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, ChannelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(ChannelError::EmptyAlphabet);
        }
        let mut seen = BTreeSet::new();
        for s in &symbols {
            if !seen.insert(s.as_str()) {
                return Err(ChannelError::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Self { symbols })
    }

    /// Symbols `prefix0, prefix1, ...`.
    pub fn numbered(prefix: &str, len: usize) -> Self {
        Self { symbols: (0..len).map(|i| format!("{prefix}{i}")).collect() }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = ChannelError;

    fn try_from(symbols: Vec<String>) -> Result<Self, Self::Error> {
        Alphabet::new(symbols)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.symbols
    }
}

/// Disjoint input and output alphabets with the ordering map Σ.
///
/// Σ sends the i-th input (1-based) to `i` and the i-th output to
/// `|X| + i`, so every symbol of `X ∪ Y` gets a distinct digit in
/// `1..=|X|+|Y|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlphabetPair {
    inputs: Alphabet,
    outputs: Alphabet,
}

impl AlphabetPair {
    pub fn new(inputs: Alphabet, outputs: Alphabet) -> Result<Self, ChannelError> {
        for s in inputs.symbols() {
            if outputs.index_of(s).is_some() {
                return Err(ChannelError::AlphabetOverlap(s.clone()));
            }
        }
        Ok(Self { inputs, outputs })
    }

    /// Inputs `x0..` and outputs `y0..`.
    pub fn numbered(n_inputs: usize, n_outputs: usize) -> Self {
        Self { inputs: Alphabet::numbered("x", n_inputs), outputs: Alphabet::numbered("y", n_outputs) }
    }

    pub fn inputs(&self) -> &Alphabet {
        &self.inputs
    }

    pub fn outputs(&self) -> &Alphabet {
        &self.outputs
    }

    pub fn sizes(&self) -> (usize, usize) {
        (self.inputs.len(), self.outputs.len())
    }

    /// Σ(symbol), or `None` for a symbol outside `X ∪ Y`.
    pub fn sigma(&self, symbol: &str) -> Option<u32> {
        if let Some(i) = self.inputs.index_of(symbol) {
            return Some(i as u32 + 1);
        }
        self.outputs.index_of(symbol).map(|j| (self.inputs.len() + j) as u32 + 1)
    }

    /// Base `|X| + |Y| + 1` of the code numbering.
    pub fn radix(&self) -> u32 {
        (self.inputs.len() + self.outputs.len() + 1) as u32
    }

    pub fn input_index(&self, symbol: &str) -> Result<usize, ChannelError> {
        self.inputs.index_of(symbol).ok_or_else(|| ChannelError::UnknownSymbol(symbol.to_string()))
    }

    pub fn output_index(&self, symbol: &str) -> Result<usize, ChannelError> {
        self.outputs.index_of(symbol).ok_or_else(|| ChannelError::UnknownSymbol(symbol.to_string()))
    }
}

/// A channel `W(y|x)` over an [`AlphabetPair`]; rows are indexed by input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Channel {
    alphabets: AlphabetPair,
    rows: Vec<Vec<Rational>>,
}

impl Channel {
    /// Checks nonnegativity and exact unit row sums.
    pub fn new(rows: Vec<Vec<Rational>>, alphabets: AlphabetPair) -> Result<Self, ChannelError> {
        let (nx, ny) = alphabets.sizes();
        if rows.len() != nx || rows.iter().any(|r| r.len() != ny) {
            return Err(ChannelError::Dimension { rows: nx, cols: ny });
        }
        for (x, row) in rows.iter().enumerate() {
            if let Some(y) = row.iter().position(|p| p.is_negative()) {
                return Err(ChannelError::NegativeEntry {
                    input: alphabets.inputs.symbol(x).to_string(),
                    output: alphabets.outputs.symbol(y).to_string(),
                });
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(ChannelError::NonStochastic { row: x, sum: rational::format_rational(&sum) });
            }
        }
        Ok(Self { alphabets, rows })
    }

    /// The noiseless channel on `m` symbols (`x_i -> y_i` with probability 1).
    pub fn noiseless(m: usize) -> Self {
        let rows = (0..m)
            .map(|x| (0..m).map(|y| if x == y { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        Self { alphabets: AlphabetPair::numbered(m, m), rows }
    }

    /// The pentagon ("typewriter") channel: input i reaches outputs i and i+1 mod 5.
    pub fn pentagon() -> Self {
        let half = rational::rat(1, 2);
        let rows = (0..5)
            .map(|x| {
                (0..5)
                    .map(|y| if y == x || y == (x + 1) % 5 { half.clone() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        Self { alphabets: AlphabetPair::numbered(5, 5), rows }
    }

    pub fn alphabets(&self) -> &AlphabetPair {
        &self.alphabets
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// `W(y|x)` by symbol indices. `w(x, y)` and `w_{x,y}` denote the same value.
    pub fn transition(&self, x: usize, y: usize) -> &Rational {
        &self.rows[x][y]
    }

    /// The flat vector `w`: output-major, input-minor
    /// (`W(y1|x1), ..., W(y1|x_|X|), W(y2|x1), ...`).
    pub fn stacked(&self) -> Vec<Rational> {
        let (nx, ny) = self.alphabets.sizes();
        (0..ny).flat_map(|y| (0..nx).map(move |x| (x, y))).map(|(x, y)| self.rows[x][y].clone()).collect()
    }

    /// Position of `w_{x,y}` inside [`Channel::stacked`].
    pub fn stacked_index(n_inputs: usize, x: usize, y: usize) -> usize {
        y * n_inputs + x
    }

    /// Rebuilds a channel from its stacked vector.
    pub fn from_stacked(w: &[Rational], alphabets: AlphabetPair) -> Result<Self, ChannelError> {
        let (nx, ny) = alphabets.sizes();
        if w.len() != nx * ny {
            return Err(ChannelError::Dimension { rows: nx, cols: ny });
        }
        let rows = (0..nx).map(|x| (0..ny).map(|y| w[Self::stacked_index(nx, x, y)].clone()).collect()).collect();
        Self::new(rows, alphabets)
    }
}

/// The set Ω of exactly-zero transitions, stored as a row-major bit grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZeroPattern {
    n_inputs: usize,
    n_outputs: usize,
    zero: Vec<bool>,
}

impl ZeroPattern {
    pub fn empty(n_inputs: usize, n_outputs: usize) -> Self {
        Self { n_inputs, n_outputs, zero: vec![false; n_inputs * n_outputs] }
    }

    pub fn from_pairs<I>(n_inputs: usize, n_outputs: usize, pairs: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut p = Self::empty(n_inputs, n_outputs);
        for (x, y) in pairs {
            assert!(x < n_inputs && y < n_outputs, "pair ({x}, {y}) outside the alphabets");
            p.zero[x * n_outputs + y] = true;
        }
        p
    }

    /// Builds a pattern from symbol-name pairs.
    pub fn from_symbol_pairs<'a, I>(alphabets: &AlphabetPair, pairs: I) -> Result<Self, ChannelError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut p = Self::empty(alphabets.inputs.len(), alphabets.outputs.len());
        for (x, y) in pairs {
            let (x, y) = (alphabets.input_index(x)?, alphabets.output_index(y)?);
            p.zero[x * p.n_outputs + y] = true;
        }
        Ok(p)
    }

    /// Pattern number `bits` in the enumeration of all `2^{|X||Y|}` subsets;
    /// bit `x * |Y| + y` marks `(x, y)`.
    pub fn from_index(n_inputs: usize, n_outputs: usize, bits: u64) -> Self {
        let cells = n_inputs * n_outputs;
        assert!(cells < 64, "pattern enumeration needs |X||Y| < 64");
        Self { n_inputs, n_outputs, zero: (0..cells).map(|i| bits >> i & 1 == 1).collect() }
    }

    /// Every subset of `X × Y`, in index order.
    pub fn all(n_inputs: usize, n_outputs: usize) -> impl Iterator<Item = ZeroPattern> {
        let cells = n_inputs * n_outputs;
        assert!(cells < 32, "refusing to enumerate 2^{cells} patterns");
        (0..1u64 << cells).map(move |b| Self::from_index(n_inputs, n_outputs, b))
    }

    pub fn sizes(&self) -> (usize, usize) {
        (self.n_inputs, self.n_outputs)
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.zero[x * self.n_outputs + y]
    }

    /// `(x, y)` is reachable iff it is not in Ω.
    pub fn reachable(&self, x: usize, y: usize) -> bool {
        !self.contains(x, y)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_inputs)
            .flat_map(move |x| (0..self.n_outputs).map(move |y| (x, y)))
            .filter(|&(x, y)| self.contains(x, y))
    }

    pub fn len(&self) -> usize {
        self.zero.iter().filter(|&&z| z).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Outputs reachable from input `x`.
    pub fn reachable_outputs(&self, x: usize) -> Vec<usize> {
        (0..self.n_outputs).filter(|&y| self.reachable(x, y)).collect()
    }

    pub fn symbol_pairs(&self, alphabets: &AlphabetPair) -> Vec<(String, String)> {
        self.pairs()
            .map(|(x, y)| (alphabets.inputs.symbol(x).to_string(), alphabets.outputs.symbol(y).to_string()))
            .collect()
    }

    /// Compact `0`/`1` text form, row-major, `1` marking a zero transition.
    pub fn bit_string(&self) -> String {
        self.zero.iter().map(|&z| if z { '1' } else { '0' }).collect()
    }

    pub fn from_bit_string(n_inputs: usize, n_outputs: usize, bits: &str) -> Option<Self> {
        if bits.len() != n_inputs * n_outputs {
            return None;
        }
        let zero = bits
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<bool>>>()?;
        Some(Self { n_inputs, n_outputs, zero })
    }
}

impl fmt::Display for ZeroPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bit_string())
    }
}

/// The unique Ω with `channel ∈ W₀(Ω)`.
pub fn zero_pattern(channel: &Channel) -> ZeroPattern {
    let (nx, ny) = channel.alphabets.sizes();
    let mut p = ZeroPattern::empty(nx, ny);
    for (x, row) in channel.rows.iter().enumerate() {
        for (y, w) in row.iter().enumerate() {
            p.zero[x * ny + y] = w.is_zero();
        }
    }
    p
}

/// Indicator of `W₀(Ω)`: true iff the zero entries of `channel` are exactly Ω.
pub fn in_w0(channel: &Channel, pattern: &ZeroPattern) -> bool {
    pattern.sizes() == channel.alphabets.sizes() && zero_pattern(channel) == *pattern
}

/// Minimum over messages of the probability that the received word decodes
/// back to the sent message.
pub fn s_min(channel: &Channel, code: &Code) -> Result<Rational, ChannelError> {
    if code.alphabet_sizes() != channel.alphabets.sizes() {
        return Err(ChannelError::AlphabetMismatch {
            expected: channel.alphabets.sizes(),
            actual: code.alphabet_sizes(),
        });
    }
    let mut by_message: HashMap<&[u32], Rational> = HashMap::new();
    for (x, y) in code.pairs() {
        let p: Rational = x.iter().zip(y).map(|(&xi, &yi)| channel.rows[xi as usize][yi as usize].clone()).product();
        *by_message.entry(x.as_slice()).or_insert_with(Rational::zero) += p;
    }
    by_message.into_values().min().ok_or(ChannelError::EmptyMessageSet)
}

/// JSON layout: `{"inputs": [..], "outputs": [..], "rows": [["1/2", "1/2"], ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelFile {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    #[serde(with = "rational::serde_rational_matrix")]
    pub rows: Vec<Vec<Rational>>,
}

impl ChannelFile {
    pub fn into_channel(self) -> Result<Channel, ChannelError> {
        let alphabets = AlphabetPair::new(Alphabet::new(self.inputs)?, Alphabet::new(self.outputs)?)?;
        Channel::new(self.rows, alphabets)
    }
}

impl From<&Channel> for ChannelFile {
    fn from(c: &Channel) -> Self {
        Self {
            inputs: c.alphabets.inputs.symbols().to_vec(),
            outputs: c.alphabets.outputs.symbols().to_vec(),
            rows: c.rows.clone(),
        }
    }
}

impl Serialize for Channel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ChannelFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Channel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        ChannelFile::deserialize(d)?.into_channel().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn ab_cd() -> AlphabetPair {
        AlphabetPair::new(Alphabet::new(["a", "b"]).unwrap(), Alphabet::new(["c", "d"]).unwrap()).unwrap()
    }

    fn bsc(p: Rational) -> Channel {
        let q = Rational::one() - &p;
        Channel::new(vec![vec![q.clone(), p.clone()], vec![p, q]], ab_cd()).unwrap()
    }

    #[test]
    fn validates_identity() {
        let ch = Channel::new(vec![vec![int(1), int(0)], vec![int(0), int(1)]], ab_cd()).unwrap();
        assert_eq!(ch.transition(0, 0), &int(1));
    }

    #[test]
    fn rejects_non_stochastic_rows() {
        let err = Channel::new(vec![vec![rat(1, 2), rat(1, 3)], vec![int(0), int(1)]], ab_cd()).unwrap_err();
        assert!(matches!(err, ChannelError::NonStochastic { row: 0, ref sum } if sum == "5/6"));
    }

    #[test]
    fn rejects_negative_entries() {
        let err = Channel::new(vec![vec![int(2), int(-1)], vec![int(0), int(1)]], ab_cd()).unwrap_err();
        assert!(matches!(err, ChannelError::NegativeEntry { .. }));
    }

    #[test]
    fn rejects_overlapping_alphabets() {
        let err = AlphabetPair::new(Alphabet::new(["a"]).unwrap(), Alphabet::new(["a"]).unwrap()).unwrap_err();
        assert_eq!(err, ChannelError::AlphabetOverlap("a".into()));
    }

    #[test]
    fn rejects_wrong_dimensions() {
        let err = Channel::new(vec![vec![int(1)]], ab_cd()).unwrap_err();
        assert!(matches!(err, ChannelError::Dimension { .. }));
    }

    #[test]
    fn sigma_numbers_inputs_then_outputs() {
        let ab = ab_cd();
        assert_eq!(["a", "b", "c", "d"].map(|s| ab.sigma(s).unwrap()), [1, 2, 3, 4]);
        assert_eq!(ab.sigma("z"), None);
        assert_eq!(ab.radix(), 5);
    }

    #[test]
    fn stacking_is_output_major() {
        let ch = Channel::new(vec![vec![rat(1, 3), rat(2, 3)], vec![rat(1, 4), rat(3, 4)]], ab_cd()).unwrap();
        assert_eq!(ch.stacked(), vec![rat(1, 3), rat(1, 4), rat(2, 3), rat(3, 4)]);
        assert_eq!(Channel::from_stacked(&ch.stacked(), ab_cd()).unwrap(), ch);
    }

    #[test]
    fn zero_patterns() {
        let noiseless = Channel::new(vec![vec![int(1), int(0)], vec![int(0), int(1)]], ab_cd()).unwrap();
        let ab = ab_cd();
        let off_diag = ZeroPattern::from_symbol_pairs(&ab, [("a", "d"), ("b", "c")]).unwrap();
        assert_eq!(zero_pattern(&noiseless), off_diag);
        assert!(zero_pattern(&bsc(rat(1, 4))).is_empty());
        let one_zero = Channel::new(vec![vec![int(0), int(1)], vec![rat(1, 2), rat(1, 2)]], ab_cd()).unwrap();
        assert_eq!(zero_pattern(&one_zero), ZeroPattern::from_symbol_pairs(&ab, [("a", "c")]).unwrap());
    }

    #[test]
    fn in_w0_indicator() {
        let noiseless = Channel::new(vec![vec![int(1), int(0)], vec![int(0), int(1)]], ab_cd()).unwrap();
        let off_diag = ZeroPattern::from_pairs(2, 2, [(0, 1), (1, 0)]);
        assert!(in_w0(&noiseless, &off_diag));
        assert!(!in_w0(&noiseless, &ZeroPattern::empty(2, 2)));
        assert!(!in_w0(&noiseless, &ZeroPattern::empty(2, 3)));
    }

    #[test]
    fn exactly_one_pattern_fires() {
        for ch in [bsc(rat(1, 4)), bsc(int(0)), bsc(int(1)), Channel::new(vec![vec![int(0), int(1)], vec![rat(1, 2), rat(1, 2)]], ab_cd()).unwrap()] {
            assert_eq!(ZeroPattern::all(2, 2).filter(|p| in_w0(&ch, p)).count(), 1);
        }
    }

    #[test]
    fn s_min_examples() {
        let noiseless = bsc(int(0));
        let matching = Code::from_symbols(&ab_cd(), 1, [(vec!["a"], vec!["c"]), (vec!["b"], vec!["d"])]).unwrap();
        assert_eq!(s_min(&noiseless, &matching).unwrap(), int(1));
        assert_eq!(s_min(&bsc(rat(1, 4)), &matching).unwrap(), rat(3, 4));
        // message a paired with every output word of length 2
        let trivial = Code::from_symbols(
            &ab_cd(),
            2,
            [
                (vec!["a", "b"], vec!["c", "c"]),
                (vec!["a", "b"], vec!["c", "d"]),
                (vec!["a", "b"], vec!["d", "c"]),
                (vec!["a", "b"], vec!["d", "d"]),
            ],
        )
        .unwrap();
        assert_eq!(s_min(&bsc(rat(1, 3)), &trivial).unwrap(), int(1));
    }

    #[test]
    fn s_min_checks_alphabets() {
        let code = Code::from_symbols(&ab_cd(), 1, [(vec!["a"], vec!["c"])]).unwrap();
        assert!(matches!(s_min(&Channel::noiseless(3), &code), Err(ChannelError::AlphabetMismatch { .. })));
    }

    #[test]
    fn channel_json_round_trip() {
        let text = r#"{"inputs":["a","b"],"outputs":["c","d"],"rows":[["1/2","0.5"],["0","1"]]}"#;
        let ch: Channel = serde_json::from_str(text).unwrap();
        assert_eq!(ch.transition(0, 1), &rat(1, 2));
        let out = serde_json::to_string(&ch).unwrap();
        assert_eq!(out, r#"{"inputs":["a","b"],"outputs":["c","d"],"rows":[["1/2","1/2"],["0","1"]]}"#);
        let again: Channel = serde_json::from_str(&out).unwrap();
        assert_eq!(again, ch);
        assert_eq!(serde_json::to_string(&again).unwrap(), out);
    }

    #[test]
    fn bit_string_round_trip() {
        let p = ZeroPattern::from_pairs(2, 3, [(0, 2), (1, 0)]);
        assert_eq!(p.bit_string(), "001100");
        assert_eq!(ZeroPattern::from_bit_string(2, 3, "001100").unwrap(), p);
        assert!(ZeroPattern::from_bit_string(2, 3, "0011").is_none());
    }
}
