//! The instability exponent of a plant and the solvability verdict for a
//! plant/channel pair.
//!
//! Everything is compared in the exponentiated domain: the plant contributes
//! a certified interval `[lo, hi]` around `∏_{|λ|≥1} |λ|`, the channel
//! contributes bounds on `2^{C₀}`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::capacity::{capacity_bounds, CapacityBound, CapacityOptions, ExactBase, PowerBound, Provenance, Registry};
use crate::channel::{zero_pattern, Channel};
use crate::graph::{clique_cover_number, confusability_graph, independence_number, strong_power, Graph, GraphError};
use crate::poly::{charpoly, rational_roots, squarefree_decomposition, ModulusBounds, Poly, RootEnclosure};
use crate::rational::{compare_count_power, pow, serde_rational, serde_rational_matrix, Rational};

/// Default tolerance exponent `k`: enclosures satisfy `hi/lo ≤ 1 + 2^-k`.
pub const DEFAULT_PRECISION: u32 = 30;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecideError {
    #[error("plant matrix must be square and non-empty")]
    NotSquare,
    #[error("plant lists {got} eigenvalue moduli for dimension {expected}")]
    ModuliCount { expected: usize, got: usize },
    #[error("eigenvalue modulus interval [{lo}, {hi}] is empty or negative")]
    BadModulus { lo: String, hi: String },
    #[error("could not certify the instability exponent to 2^-{precision} within {max_bits} bits")]
    PrecisionExhausted { precision: u32, max_bits: u32 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A certified modulus interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "serde_rational")]
    pub lo: Rational,
    #[serde(with = "serde_rational")]
    pub hi: Rational,
}

impl From<(Rational, Rational)> for Interval {
    fn from((lo, hi): (Rational, Rational)) -> Self {
        Self { lo, hi }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plant {
    #[serde(with = "serde_rational_matrix")]
    pub matrix: Vec<Vec<Rational>>,
    /// Certified moduli of all eigenvalues, overriding the computed ones.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "optional_intervals")]
    pub eigen_moduli: Option<Vec<Interval>>,
}

mod optional_intervals {
    use super::Interval;
    use crate::rational::serde_rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Pair(#[serde(with = "serde_rational")] super::Rational, #[serde(with = "serde_rational")] super::Rational);

    pub fn serialize<S: Serializer>(v: &Option<Vec<Interval>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|items| items.iter().map(|i| Pair(i.lo.clone(), i.hi.clone())).collect::<Vec<_>>()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Interval>>, D::Error> {
        let raw = Option::<Vec<Pair>>::deserialize(d)?;
        Ok(raw.map(|items| items.into_iter().map(|Pair(lo, hi)| Interval { lo, hi }).collect()))
    }
}

impl Plant {
    pub fn new(matrix: Vec<Vec<Rational>>) -> Result<Self, DecideError> {
        let p = Self { matrix, eigen_moduli: None };
        p.validate()?;
        Ok(p)
    }

    /// The 1×1 plant `[a]`.
    pub fn scalar(a: Rational) -> Self {
        Self { matrix: vec![vec![a]], eigen_moduli: None }
    }

    pub fn dimension(&self) -> usize {
        self.matrix.len()
    }

    pub fn validate(&self) -> Result<(), DecideError> {
        let n = self.matrix.len();
        if n == 0 || self.matrix.iter().any(|r| r.len() != n) {
            return Err(DecideError::NotSquare);
        }
        if let Some(m) = &self.eigen_moduli {
            if m.len() != n {
                return Err(DecideError::ModuliCount { expected: n, got: m.len() });
            }
            if let Some(bad) = m.iter().find(|i| i.lo.is_negative() || i.lo > i.hi) {
                return Err(DecideError::BadModulus {
                    lo: crate::rational::format_rational(&bad.lo),
                    hi: crate::rational::format_rational(&bad.hi),
                });
            }
        }
        Ok(())
    }
}

/// Certified enclosure of `2^{η(A)} = ∏_{|λ|≥1} |λ|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstabilityExponent {
    #[serde(with = "serde_rational")]
    pub lo: Rational,
    #[serde(with = "serde_rational")]
    pub hi: Rational,
    /// Some eigenvalue modulus could not be separated from 1.
    pub boundary_flag: bool,
}

impl InstabilityExponent {
    pub fn exact(value: Rational) -> Self {
        Self { lo: value.clone(), hi: value, boundary_flag: false }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// `η(A)` in bits, for display.
    pub fn bits_estimate(&self) -> f64 {
        crate::rational::to_f64(&self.hi).log2()
    }
}

/// Running product of per-root contributions `max(1, |λ|)`.
struct Accumulator {
    lo: Rational,
    hi: Rational,
    boundary: bool,
}

impl Accumulator {
    fn new() -> Self {
        Self { lo: Rational::one(), hi: Rational::one(), boundary: false }
    }

    fn exact(&mut self, value: &Rational, times: u32) {
        let v = pow(value, times);
        self.lo *= &v;
        self.hi *= &v;
    }

    fn modulus(&mut self, m: &ModulusBounds, times: u32) {
        let one = Rational::one();
        if m.lo <= one && one <= m.hi {
            self.boundary = true;
        }
        let lo = if m.lo > one { m.lo.clone() } else { one.clone() };
        let hi = if m.hi > one { m.hi.clone() } else { one };
        self.lo *= pow(&lo, times);
        self.hi *= pow(&hi, times);
    }
}

struct Factor {
    enclosure: RootEnclosure,
    multiplicity: u32,
}

/// Encloses `∏_{|λ|≥1} |λ|` for the plant's eigenvalues so that
/// `hi ≤ lo·(1 + 2^-precision)`, unless some modulus sits at 1 (then the
/// boundary flag is set and the tolerance may be missed).
pub fn instability_exponent(plant: &Plant, precision: u32) -> Result<InstabilityExponent, DecideError> {
    plant.validate()?;
    if let Some(moduli) = &plant.eigen_moduli {
        let mut acc = Accumulator::new();
        for m in moduli {
            acc.modulus(&ModulusBounds { lo: m.lo.clone(), hi: m.hi.clone() }, 1);
        }
        return Ok(InstabilityExponent { lo: acc.lo, hi: acc.hi, boundary_flag: acc.boundary });
    }

    let mut fixed = Accumulator::new();
    let mut factors = Vec::new();
    for (part, multiplicity) in squarefree_decomposition(&charpoly(&plant.matrix)) {
        let mut rest = part;
        for r in rational_roots(&rest) {
            let m = r.abs();
            fixed.modulus(&ModulusBounds { lo: m.clone(), hi: m }, multiplicity);
            rest = rest.divrem(&Poly::linear(&r)).0;
        }
        if rest.degree() > 0 {
            factors.push(Factor { enclosure: RootEnclosure::new(&rest), multiplicity });
        }
    }

    let tolerance = Rational::one() + Rational::new(1.into(), num_bigint::BigInt::one() << precision);
    let max_bits = (4 * precision + 64).max(4096);
    let mut bits = (2 * precision + 16).max(64);
    loop {
        let mut acc = Accumulator { lo: fixed.lo.clone(), hi: fixed.hi.clone(), boundary: fixed.boundary };
        for f in &mut factors {
            f.enclosure.refine(bits);
            let moduli = f.enclosure.moduli(bits);
            let one = Rational::one();
            if moduli.iter().all(|m| m.lo > one) {
                // every root is unstable: the contribution is |q(0)| exactly
                acc.exact(&f.enclosure.modulus_product(), f.multiplicity);
            } else if moduli.iter().all(|m| m.hi < one) {
                // every root is stable: contributes 1
            } else {
                for m in &moduli {
                    acc.modulus(m, f.multiplicity);
                }
            }
        }
        if acc.hi <= &acc.lo * &tolerance {
            return Ok(InstabilityExponent { lo: acc.lo, hi: acc.hi, boundary_flag: acc.boundary });
        }
        if bits >= max_bits {
            if acc.boundary {
                return Ok(InstabilityExponent { lo: acc.lo, hi: acc.hi, boundary_flag: true });
            }
            return Err(DecideError::PrecisionExhausted { precision, max_bits });
        }
        bits = (bits * 2).min(max_bits);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Solvable,
    Unsolvable,
    Boundary,
    UndeterminedBounds,
}

/// The exact inequality behind a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// `alpha > hi^n`, with an independent set of `G^⊠n` of size `alpha`.
    IndependentSet {
        n: u32,
        #[serde(with = "crate::rational::serde_biguint")]
        alpha: BigUint,
        #[serde(with = "serde_rational")]
        exponent_hi: Rational,
        witness: Vec<Vec<String>>,
    },
    /// `exact > hi`.
    ExactAbove {
        exact: ExactBase,
        #[serde(with = "serde_rational")]
        exponent_hi: Rational,
    },
    /// `cover < lo`, with a partition of the inputs into `cover` cliques.
    CliqueCover {
        cover: usize,
        #[serde(with = "serde_rational")]
        exponent_lo: Rational,
        cliques: Vec<Vec<String>>,
    },
    /// `exact < lo`.
    ExactBelow {
        exact: ExactBase,
        #[serde(with = "serde_rational")]
        exponent_lo: Rational,
    },
    /// `lo ≤ exact ≤ hi`.
    ExactWithin {
        exact: ExactBase,
        #[serde(with = "serde_rational")]
        exponent_lo: Rational,
        #[serde(with = "serde_rational")]
        exponent_hi: Rational,
    },
    /// Neither bound separates: `lower^{1/n} ≤ hi` and `lo ≤ upper`.
    Gap {
        lower: PowerBound,
        upper: usize,
        #[serde(with = "serde_rational")]
        exponent_lo: Rational,
        #[serde(with = "serde_rational")]
        exponent_hi: Rational,
    },
}

impl Certificate {
    /// Re-checks the certificate's inequality (not the witness structure).
    pub fn inequality_holds(&self) -> bool {
        match self {
            Certificate::IndependentSet { n, alpha, exponent_hi, witness } => {
                witness.len() == alpha.to_usize_lossy()
                    && compare_count_power(alpha, exponent_hi, *n) == Ordering::Greater
            }
            Certificate::ExactAbove { exact, exponent_hi } => exact.cmp_rational(exponent_hi) == Ordering::Greater,
            Certificate::CliqueCover { cover, exponent_lo, cliques } => {
                cliques.len() == *cover && Rational::from_integer((*cover).into()) < *exponent_lo
            }
            Certificate::ExactBelow { exact, exponent_lo } => exact.cmp_rational(exponent_lo) == Ordering::Less,
            Certificate::ExactWithin { exact, exponent_lo, exponent_hi } => {
                exact.cmp_rational(exponent_lo) != Ordering::Less && exact.cmp_rational(exponent_hi) != Ordering::Greater
            }
            Certificate::Gap { lower, upper, exponent_lo, exponent_hi } => {
                compare_count_power(&lower.alpha, exponent_hi, lower.n) != Ordering::Greater
                    && Rational::from_integer((*upper).into()) >= *exponent_lo
            }
        }
    }
}

trait LossyUsize {
    fn to_usize_lossy(&self) -> usize;
}

impl LossyUsize for BigUint {
    fn to_usize_lossy(&self) -> usize {
        usize::try_from(self).unwrap_or(usize::MAX)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub exponent: InstabilityExponent,
    pub capacity: CapacityBound,
    /// Strong powers examined (the requested depth, capped by the vertex limit).
    pub depth: u32,
    pub certificate: Certificate,
}

impl Verdict {
    /// Re-checks the certificate against the channel: the inequality, the
    /// independence or clique structure of any witness, and that the
    /// outcome matches the certificate kind.
    pub fn verify(&self, channel: &Channel) -> bool {
        if !self.certificate.inequality_holds() {
            return false;
        }
        let kind_matches = matches!(
            (&self.outcome, &self.certificate),
            (Outcome::Solvable, Certificate::IndependentSet { .. } | Certificate::ExactAbove { .. })
                | (Outcome::Unsolvable, Certificate::CliqueCover { .. } | Certificate::ExactBelow { .. })
                | (Outcome::Boundary, Certificate::ExactWithin { .. })
                | (Outcome::UndeterminedBounds, Certificate::Gap { .. })
        );
        if !kind_matches {
            return false;
        }
        let g = confusability_graph(&zero_pattern(channel), channel.alphabets());
        let symbols = channel.alphabets().inputs();
        match &self.certificate {
            Certificate::IndependentSet { witness, .. } => {
                let words: Option<Vec<Vec<usize>>> =
                    witness.iter().map(|w| w.iter().map(|s| symbols.index_of(s)).collect()).collect();
                words.is_some_and(|words| words_independent(&g, &words))
            }
            Certificate::CliqueCover { cliques, .. } => {
                let sets: Option<Vec<Vec<usize>>> =
                    cliques.iter().map(|c| c.iter().map(|s| symbols.index_of(s)).collect()).collect();
                sets.is_some_and(|sets| {
                    let mut seen: Vec<usize> = sets.iter().flatten().copied().collect();
                    seen.sort_unstable();
                    seen == (0..g.vertex_count()).collect::<Vec<_>>() && sets.iter().all(|c| g.is_clique(c))
                })
            }
            _ => true,
        }
    }
}

/// Pairwise distinct words, no two adjacent-or-equal in every coordinate.
fn words_independent(g: &Graph, words: &[Vec<usize>]) -> bool {
    let n = words.first().map_or(0, Vec::len);
    words.iter().all(|w| w.len() == n)
        && words.iter().enumerate().all(|(i, a)| {
            words[i + 1..].iter().all(|b| a.iter().zip(b).any(|(&u, &v)| u != v && !g.has_edge(u, v)))
        })
}

/// Options for [`decide_solvability`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideOptions {
    pub depth: u32,
    pub precision: u32,
    pub vertex_limit: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        Self {
            depth: crate::capacity::DEFAULT_DEPTH,
            precision: DEFAULT_PRECISION,
            vertex_limit: crate::graph::DEFAULT_VERTEX_LIMIT,
        }
    }
}

/// Largest `n ≤ depth` with `|V|^n` within the vertex limit (at least 1).
fn feasible_depth(vertices: usize, depth: u32, limit: usize) -> u32 {
    let mut n = 1;
    while n < depth && (vertices as u128).checked_pow(n + 1).is_some_and(|v| v <= limit as u128) {
        n += 1;
    }
    n
}

fn word_symbols(channel: &Channel, index: usize, n: u32) -> Vec<String> {
    let k = channel.alphabets().sizes().0;
    let mut digits = vec![0; n as usize];
    let mut rest = index;
    for slot in digits.iter_mut().rev() {
        *slot = rest % k;
        rest /= k;
    }
    digits.into_iter().map(|d| channel.alphabets().inputs().symbol(d).to_string()).collect()
}

/// Compares the capacity of `channel` with the plant's instability exponent.
pub fn decide_solvability(
    plant: &Plant,
    channel: &Channel,
    registry: &Registry,
    options: DecideOptions,
) -> Result<Verdict, DecideError> {
    let exponent = instability_exponent(plant, options.precision)?;
    decide_with_exponent(exponent, channel, registry, options)
}

/// [`decide_solvability`] for a precomputed exponent.
pub fn decide_with_exponent(
    exponent: InstabilityExponent,
    channel: &Channel,
    registry: &Registry,
    options: DecideOptions,
) -> Result<Verdict, DecideError> {
    let pattern = zero_pattern(channel);
    let g = confusability_graph(&pattern, channel.alphabets());
    let depth = feasible_depth(g.vertex_count(), options.depth.max(1), options.vertex_limit);
    let capacity = capacity_bounds(
        &pattern,
        channel.alphabets(),
        registry,
        CapacityOptions { depth, vertex_limit: options.vertex_limit },
    )?;

    let winning = capacity.powers.iter().find(|p| compare_count_power(&p.alpha, &exponent.hi, p.n) == Ordering::Greater);
    let (outcome, certificate) = if let Some(p) = winning {
        let power = if p.n == 1 { g.clone() } else { strong_power(&g, p.n) };
        let set = if capacity.provenance == Provenance::PerfectMatch && p.n > 1 {
            // alpha = cover: products of a maximum independent set of G
            perfect_power_witness(&g, p.n, options.vertex_limit)?
        } else {
            independence_number(&power, options.vertex_limit)?.witness
        };
        let witness = set.iter().map(|&v| word_symbols(channel, v, p.n)).collect();
        (
            Outcome::Solvable,
            Certificate::IndependentSet { n: p.n, alpha: p.alpha.clone(), exponent_hi: exponent.hi.clone(), witness },
        )
    } else if let Some(exact) = capacity.exact.as_ref().filter(|e| e.cmp_rational(&exponent.hi) == Ordering::Greater) {
        (Outcome::Solvable, Certificate::ExactAbove { exact: exact.clone(), exponent_hi: exponent.hi.clone() })
    } else if Rational::from_integer(capacity.upper.into()) < exponent.lo {
        let cover = clique_cover_number(&g, options.vertex_limit)?;
        let cliques = cover
            .cliques
            .iter()
            .map(|c| c.iter().map(|&v| channel.alphabets().inputs().symbol(v).to_string()).collect())
            .collect();
        (Outcome::Unsolvable, Certificate::CliqueCover { cover: cover.count, exponent_lo: exponent.lo.clone(), cliques })
    } else if let Some(exact) = capacity.exact.as_ref().filter(|e| e.cmp_rational(&exponent.lo) == Ordering::Less) {
        (Outcome::Unsolvable, Certificate::ExactBelow { exact: exact.clone(), exponent_lo: exponent.lo.clone() })
    } else if let Some(exact) = &capacity.exact {
        (
            Outcome::Boundary,
            Certificate::ExactWithin {
                exact: exact.clone(),
                exponent_lo: exponent.lo.clone(),
                exponent_hi: exponent.hi.clone(),
            },
        )
    } else {
        (
            Outcome::UndeterminedBounds,
            Certificate::Gap {
                lower: capacity.lower.clone(),
                upper: capacity.upper,
                exponent_lo: exponent.lo.clone(),
                exponent_hi: exponent.hi.clone(),
            },
        )
    };
    Ok(Verdict { outcome, exponent, capacity, depth, certificate })
}

fn perfect_power_witness(g: &Graph, n: u32, limit: usize) -> Result<Vec<usize>, GraphError> {
    let base = independence_number(g, limit)?.witness;
    let k = g.vertex_count();
    let mut words: Vec<usize> = vec![0];
    for _ in 0..n {
        words = words.iter().flat_map(|&w| base.iter().map(move |&v| w * k + v)).collect();
    }
    Ok(words)
}

/// `1` if the channel is certified to beat the plant, `0` if certified not
/// to (including an exact tie), `None` when the bounds do not decide.
pub fn indicator_s(verdict: &Verdict) -> Option<u8> {
    match verdict.outcome {
        Outcome::Solvable => Some(1),
        Outcome::Unsolvable => Some(0),
        Outcome::Boundary if verdict.exponent.is_exact() => Some(0),
        _ => None,
    }
}

/// `1` if the plant is certified to beat the channel, `0` if certified not
/// to (including an exact tie), `None` when the bounds do not decide.
pub fn indicator_u(verdict: &Verdict) -> Option<u8> {
    match verdict.outcome {
        Outcome::Unsolvable => Some(1),
        Outcome::Solvable => Some(0),
        Outcome::Boundary if verdict.exponent.is_exact() => Some(0),
        _ => None,
    }
}

/// Whether an `(N, M)`-code has rate above the exponent: `M > hi^N`.
pub fn rate_exceeds(messages: usize, block_length: usize, exponent: &InstabilityExponent) -> bool {
    compare_count_power(&BigUint::from(messages), &exponent.hi, block_length as u32) == Ordering::Greater
}

/// Zero when every eigenvalue is strictly stable.
pub fn is_stable(exponent: &InstabilityExponent) -> bool {
    exponent.hi.is_one() && !exponent.boundary_flag && !exponent.lo.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{AlphabetPair, Channel};
    use crate::rational::{int, rat};

    fn exponent(matrix: Vec<Vec<Rational>>) -> InstabilityExponent {
        instability_exponent(&Plant::new(matrix).unwrap(), DEFAULT_PRECISION).unwrap()
    }

    #[test]
    fn exponents_of_textbook_plants() {
        assert_eq!(exponent(vec![vec![int(2)]]), InstabilityExponent::exact(int(2)));
        assert_eq!(exponent(vec![vec![int(2), int(0)], vec![int(0), rat(1, 2)]]), InstabilityExponent::exact(int(2)));
        assert_eq!(exponent(vec![vec![int(0), int(-2)], vec![int(1), int(0)]]), InstabilityExponent::exact(int(2)));
        assert_eq!(exponent(vec![vec![int(0), int(0)], vec![int(0), int(0)]]), InstabilityExponent::exact(int(1)));
        // Jordan block for 3: multiplicity counts
        assert_eq!(exponent(vec![vec![int(3), int(1)], vec![int(0), int(3)]]), InstabilityExponent::exact(int(9)));
    }

    #[test]
    fn moduli_on_the_unit_circle_set_the_flag() {
        let e = exponent(vec![vec![int(1)]]);
        assert!(e.boundary_flag);
        assert_eq!(e.lo, int(1));
        // rotation by a non-rational angle: x^2 - x + 1 has roots on the unit circle
        let rot = exponent(vec![vec![int(0), int(-1)], vec![int(1), int(1)]]);
        assert!(rot.boundary_flag);
        assert_eq!(rot.lo, int(1));
        assert!(rot.hi <= int(1) + Rational::new(1.into(), num_bigint::BigInt::one() << 30));
    }

    #[test]
    fn irrational_moduli_are_enclosed() {
        // eigenvalues 1 ± sqrt(2): only 1 + sqrt(2) is unstable
        let e = exponent(vec![vec![int(1), int(2)], vec![int(1), int(1)]]);
        assert!(!e.boundary_flag);
        let target = 1.0 + 2f64.sqrt();
        assert!((crate::rational::to_f64(&e.lo) - target).abs() < 1e-8);
        assert!(e.hi <= &e.lo * (int(1) + Rational::new(1.into(), num_bigint::BigInt::one() << 30)));
        // (lo - 1)^2 <= 2 <= (hi - 1)^2
        let (l, h) = (&e.lo - int(1), &e.hi - int(1));
        assert!(&l * &l <= int(2) && int(2) <= &h * &h);
    }

    #[test]
    fn user_supplied_moduli() {
        let mut p = Plant::scalar(int(5));
        p.eigen_moduli = Some(vec![Interval { lo: rat(3, 2), hi: rat(8, 5) }]);
        let e = instability_exponent(&p, 30).unwrap();
        assert_eq!((e.lo, e.hi), (rat(3, 2), rat(8, 5)));
        p.eigen_moduli = Some(vec![]);
        assert!(matches!(instability_exponent(&p, 30), Err(DecideError::ModuliCount { .. })));
    }

    fn decide(a: Rational, channel: &Channel) -> Verdict {
        decide_solvability(&Plant::scalar(a), channel, &Registry::builtin(), DecideOptions::default()).unwrap()
    }

    #[test]
    fn verdicts() {
        let noiseless = Channel::noiseless(2);
        let v = decide(rat(3, 2), &noiseless);
        assert_eq!(v.outcome, Outcome::Solvable);
        assert!(v.verify(&noiseless));
        assert_eq!((indicator_s(&v), indicator_u(&v)), (Some(1), Some(0)));

        let v = decide(int(3), &noiseless);
        assert_eq!(v.outcome, Outcome::Unsolvable);
        assert!(v.verify(&noiseless));

        let v = decide(int(2), &noiseless);
        assert_eq!(v.outcome, Outcome::Boundary);
        assert!(v.verify(&noiseless));
        assert_eq!((indicator_s(&v), indicator_u(&v)), (Some(0), Some(0)));

        let bsc = Channel::new(
            vec![vec![rat(3, 4), rat(1, 4)], vec![rat(1, 4), rat(3, 4)]],
            AlphabetPair::numbered(2, 2),
        )
        .unwrap();
        let v = decide(int(3), &bsc);
        assert_eq!(v.outcome, Outcome::Unsolvable);
        assert_eq!(indicator_u(&v), Some(1));
    }

    #[test]
    fn pentagon_verdicts() {
        let pentagon = Channel::pentagon();
        let v = decide_with_exponent(
            InstabilityExponent::exact(rat(11, 5)),
            &pentagon,
            &Registry::builtin(),
            DecideOptions::default(),
        )
        .unwrap();
        assert_eq!(v.outcome, Outcome::Solvable);
        match &v.certificate {
            Certificate::IndependentSet { n, alpha, witness, .. } => {
                assert_eq!((*n, alpha.clone()), (2, BigUint::from(5u32)));
                assert_eq!(witness.len(), 5);
            }
            other => panic!("unexpected certificate {other:?}"),
        }
        assert!(v.verify(&pentagon));
        let json = serde_json::to_string(&v).unwrap();
        let back: Verdict = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);

        // 2.3 > sqrt(5): the table value decides
        let v = decide_with_exponent(
            InstabilityExponent::exact(rat(23, 10)),
            &pentagon,
            &Registry::builtin(),
            DecideOptions::default(),
        )
        .unwrap();
        assert_eq!(v.outcome, Outcome::Unsolvable);
        assert!(matches!(v.certificate, Certificate::ExactBelow { .. }));

        // without the table, 2.3 sits in the gap between sqrt(5) and 3
        let v = decide_with_exponent(
            InstabilityExponent::exact(rat(23, 10)),
            &pentagon,
            &Registry::default(),
            DecideOptions::default(),
        )
        .unwrap();
        assert_eq!(v.outcome, Outcome::UndeterminedBounds);
        assert_eq!(indicator_s(&v), None);
        assert!(v.verify(&pentagon));
    }

    #[test]
    fn tampered_certificates_fail() {
        let pentagon = Channel::pentagon();
        let mut v = decide_with_exponent(
            InstabilityExponent::exact(rat(11, 5)),
            &pentagon,
            &Registry::builtin(),
            DecideOptions::default(),
        )
        .unwrap();
        if let Certificate::IndependentSet { witness, .. } = &mut v.certificate {
            witness[1] = witness[0].clone();
        }
        assert!(!v.verify(&pentagon));
    }
}
