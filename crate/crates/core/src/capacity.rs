//! Certified zero-error capacity bounds and the known-values registry.
//!
//! Capacities are handled in the exponentiated domain: `2^{C₀}` is bounded
//! below by `α(G^⊠n)^{1/n}` (kept as the unevaluated pair `(α, n)`) and above
//! by the clique-cover number of `G`. Exact values come from perfect graphs
//! (`α = θ`) or from a registry keyed by canonical graph form.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{Pow, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::channel::{AlphabetPair, ZeroPattern};
use crate::graph::{
    canonical_form, clique_cover_number, confusability_graph, independence_number, strong_power, CanonicalForm, Graph,
    GraphError, CANONICAL_LIMIT,
};
use crate::rational::{format_rational, parse_rational, pow, Rational};

/// Default number of strong powers examined for the lower bound.
pub const DEFAULT_DEPTH: u32 = 2;

/// An exact value of `2^{C₀}`: a rational or the square root of one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactBase {
    Rational(Rational),
    SqrtOf(Rational),
}

impl ExactBase {
    pub fn integer(n: usize) -> Self {
        ExactBase::Rational(Rational::from_integer(n.into()))
    }

    /// The value squared, always rational.
    pub fn squared(&self) -> Rational {
        match self {
            ExactBase::Rational(r) => r * r,
            ExactBase::SqrtOf(q) => q.clone(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            ExactBase::Rational(r) => Some(r),
            ExactBase::SqrtOf(_) => None,
        }
    }

    /// Compares the (nonnegative) value against a rational.
    pub fn cmp_rational(&self, other: &Rational) -> Ordering {
        match self {
            ExactBase::Rational(r) => r.cmp(other),
            ExactBase::SqrtOf(_) if other.is_negative() => Ordering::Greater,
            ExactBase::SqrtOf(q) => q.cmp(&(other * other)),
        }
    }

    /// Compares `count` against the value raised to `n`.
    pub fn cmp_count_power(&self, count: &BigUint, n: u32) -> Ordering {
        let count = Rational::from_integer(count.clone().into());
        match self {
            ExactBase::Rational(r) => count.cmp(&pow(r, n)),
            ExactBase::SqrtOf(q) => (&count * &count).cmp(&pow(q, n)),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactBase::Rational(r) => crate::rational::to_f64(r),
            ExactBase::SqrtOf(q) => crate::rational::to_f64(q).sqrt(),
        }
    }
}

impl fmt::Display for ExactBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactBase::Rational(r) => f.write_str(&format_rational(r)),
            ExactBase::SqrtOf(q) => write!(f, "sqrt({})", format_rational(q)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid exact value {0:?}")]
pub struct ParseExactError(pub String);

impl FromStr for ExactBase {
    type Err = ParseExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseExactError(s.to_string());
        let t = s.trim();
        if let Some(inner) = t.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            let q = parse_rational(inner).map_err(|_| err())?;
            if q.is_negative() {
                return Err(err());
            }
            return Ok(ExactBase::SqrtOf(q));
        }
        let r = parse_rational(t).map_err(|_| err())?;
        if r.is_negative() {
            return Err(err());
        }
        Ok(ExactBase::Rational(r))
    }
}

impl Serialize for ExactBase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactBase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `α(G^⊠n)` for one power `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerBound {
    pub n: u32,
    #[serde(with = "crate::rational::serde_biguint")]
    pub alpha: BigUint,
}

impl PowerBound {
    /// Whether `alpha^{1/n}` strictly exceeds `other.alpha^{1/other.n}`.
    pub fn beats(&self, other: &PowerBound) -> bool {
        Pow::pow(&self.alpha, other.n) > Pow::pow(&other.alpha, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    PerfectMatch,
    Table,
    BoundsOnly,
}

/// Certified bounds on `2^{C₀}` for one zero pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapacityBound {
    /// `α(G^⊠n)` for every examined `n`, in increasing `n`.
    pub powers: Vec<PowerBound>,
    /// The strongest entry of `powers`.
    pub lower: PowerBound,
    /// Clique-cover number of `G`.
    pub upper: usize,
    pub exact: Option<ExactBase>,
    pub provenance: Provenance,
}

impl CapacityBound {
    /// Checks `α(G^⊠n) ≤ upper^n` for every power and that `exact` (if any)
    /// lies between the bounds.
    pub fn is_consistent(&self) -> bool {
        let upper = BigUint::from(self.upper);
        let powers_ok = self.powers.iter().all(|p| p.alpha <= Pow::pow(&upper, p.n));
        let exact_ok = self.exact.as_ref().is_none_or(|e| {
            self.powers.iter().all(|p| e.cmp_count_power(&p.alpha, p.n) != Ordering::Greater)
                && e.cmp_rational(&Rational::from_integer(self.upper.into())) != Ordering::Greater
        });
        powers_ok && exact_ok
    }
}

/// One registry record: a graph and its exact `2^{C₀}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub value: ExactBase,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error("registry JSON: {0}")]
    Json(String),
    #[error("registry record {index}: {source}")]
    Graph { index: usize, source: GraphError },
    #[error("registry records {first} and {second} describe isomorphic graphs with different values")]
    Conflict { first: usize, second: usize },
}

/// Known exact capacities keyed by canonical graph form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Registry {
    entries: BTreeMap<CanonicalForm, (usize, ExactBase)>,
}

const BUILTIN_REGISTRY: &str = include_str!("../data/registry.json");

impl Registry {
    /// Edgeless and complete graphs up to the canonical-form limit, plus the
    /// records shipped in `data/registry.json`.
    pub fn builtin() -> Self {
        let mut records = Vec::new();
        for n in 1..=CANONICAL_LIMIT {
            records.push(RegistryRecord { name: Some(format!("E{n}")), vertices: n, edges: Vec::new(), value: ExactBase::integer(n) });
            if n > 1 {
                records.push(RegistryRecord {
                    name: Some(format!("K{n}")),
                    vertices: n,
                    edges: Graph::complete(n).edges(),
                    value: ExactBase::integer(1),
                });
            }
        }
        let shipped: Vec<RegistryRecord> = serde_json::from_str(BUILTIN_REGISTRY).expect("shipped registry parses");
        records.extend(shipped);
        Self::from_records(&records).expect("shipped registry is consistent")
    }

    pub fn from_records(records: &[RegistryRecord]) -> Result<Self, RegistryError> {
        let mut reg = Registry::default();
        for (index, rec) in records.iter().enumerate() {
            reg.insert(index, rec)?;
        }
        Ok(reg)
    }

    pub fn from_json(text: &str) -> Result<Self, RegistryError> {
        let records: Vec<RegistryRecord> = serde_json::from_str(text).map_err(|e| RegistryError::Json(e.to_string()))?;
        Self::from_records(&records)
    }

    /// Adds the records of a JSON registry file on top of this one.
    pub fn extend_from_json(&mut self, text: &str) -> Result<(), RegistryError> {
        let records: Vec<RegistryRecord> = serde_json::from_str(text).map_err(|e| RegistryError::Json(e.to_string()))?;
        let offset = self.entries.len();
        for (i, rec) in records.iter().enumerate() {
            self.insert(offset + i, rec)?;
        }
        Ok(())
    }

    fn insert(&mut self, index: usize, rec: &RegistryRecord) -> Result<(), RegistryError> {
        let graph = Graph::from_edges(rec.vertices, &rec.edges).map_err(|source| RegistryError::Graph { index, source })?;
        let form = canonical_form(&graph).map_err(|source| RegistryError::Graph { index, source })?;
        match self.entries.get(&form) {
            Some((first, value)) if *value != rec.value => Err(RegistryError::Conflict { first: *first, second: index }),
            Some(_) => Ok(()),
            None => {
                self.entries.insert(form, (index, rec.value.clone()));
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Exact value for a graph isomorphic to `g`, if registered.
    pub fn lookup(&self, g: &Graph) -> Option<&ExactBase> {
        if g.vertex_count() > CANONICAL_LIMIT {
            return None;
        }
        let form = canonical_form(g).ok()?;
        self.entries.get(&form).map(|(_, v)| v)
    }
}

/// Options for [`capacity_bounds`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CapacityOptions {
    pub depth: u32,
    pub vertex_limit: usize,
}

impl Default for CapacityOptions {
    fn default() -> Self {
        Self { depth: DEFAULT_DEPTH, vertex_limit: crate::graph::DEFAULT_VERTEX_LIMIT }
    }
}

/// Bounds on `2^{C₀}` for every channel with zero pattern `pattern`.
pub fn capacity_bounds(
    pattern: &ZeroPattern,
    alphabets: &AlphabetPair,
    registry: &Registry,
    options: CapacityOptions,
) -> Result<CapacityBound, GraphError> {
    graph_capacity_bounds(&confusability_graph(pattern, alphabets), registry, options)
}

/// [`capacity_bounds`] for an explicit confusability graph.
pub fn graph_capacity_bounds(g: &Graph, registry: &Registry, options: CapacityOptions) -> Result<CapacityBound, GraphError> {
    assert!(options.depth >= 1, "depth must be at least 1");
    let alpha = independence_number(g, options.vertex_limit)?.size;
    let upper = clique_cover_number(g, options.vertex_limit)?.count;
    let mut powers = vec![PowerBound { n: 1, alpha: BigUint::from(alpha) }];
    let (exact, provenance) = if alpha == upper {
        // α^n ≤ α(G^⊠n) ≤ θ^n, so every power is known.
        for n in 2..=options.depth {
            powers.push(PowerBound { n, alpha: Pow::pow(BigUint::from(alpha), n) });
        }
        (Some(ExactBase::integer(alpha)), Provenance::PerfectMatch)
    } else {
        for n in 2..=options.depth {
            let vertices = (g.vertex_count() as u128).checked_pow(n).unwrap_or(u128::MAX);
            if vertices > options.vertex_limit as u128 {
                return Err(GraphError::TooLarge { vertices: vertices.min(usize::MAX as u128) as usize, limit: options.vertex_limit });
            }
            let power = strong_power(g, n);
            powers.push(PowerBound { n, alpha: BigUint::from(independence_number(&power, options.vertex_limit)?.size) });
        }
        match registry.lookup(g) {
            Some(v) => (Some(v.clone()), Provenance::Table),
            None => (None, Provenance::BoundsOnly),
        }
    };
    let lower = powers.iter().fold(powers[0].clone(), |best, p| if p.beats(&best) { p.clone() } else { best });
    Ok(CapacityBound { powers, lower, upper, exact, provenance })
}

/// Exact `2^{C₀}` per zero pattern over a fixed pair of alphabets, as used by
/// the capacity lookup program. Patterns with an irrational or unknown value
/// map to `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacityTable {
    pub n_inputs: usize,
    pub n_outputs: usize,
    entries: BTreeMap<ZeroPattern, Option<ExactBase>>,
}

impl CapacityTable {
    /// Fills the table for every pattern over `alphabets` (at most 2^20 patterns).
    pub fn build(alphabets: &AlphabetPair, registry: &Registry, options: CapacityOptions) -> Result<Self, GraphError> {
        let (nx, ny) = alphabets.sizes();
        assert!(nx * ny <= 20, "capacity table over {nx}x{ny} alphabets is too large");
        let mut entries = BTreeMap::new();
        let mut by_graph: BTreeMap<Vec<(usize, usize)>, Option<ExactBase>> = BTreeMap::new();
        for pattern in ZeroPattern::all(nx, ny) {
            let g = confusability_graph(&pattern, alphabets);
            let value = match by_graph.get(&g.edges()) {
                Some(v) => v.clone(),
                None => {
                    let v = graph_capacity_bounds(&g, registry, CapacityOptions { depth: 1, ..options })?.exact;
                    by_graph.insert(g.edges(), v.clone());
                    v
                }
            };
            entries.insert(pattern, value);
        }
        Ok(Self { n_inputs: nx, n_outputs: ny, entries })
    }

    pub fn get(&self, pattern: &ZeroPattern) -> Option<&ExactBase> {
        self.entries.get(pattern).and_then(Option::as_ref)
    }

    pub fn set(&mut self, pattern: ZeroPattern, value: Option<ExactBase>) {
        assert_eq!(pattern.sizes(), (self.n_inputs, self.n_outputs), "pattern over other alphabets");
        self.entries.insert(pattern, value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ZeroPattern, Option<&ExactBase>)> {
        self.entries.iter().map(|(p, v)| (p, v.as_ref()))
    }
}
