//! Independent reference implementations shared by the integration tests.
//! Nothing here calls the library routine it is compared against.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use zerocap::channel::{AlphabetPair, Channel, ChannelFile, ZeroPattern};
use zerocap::code::{Code, Word};
use zerocap::graph::Graph;
use zerocap::rational::Rational;

pub fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn load_channel(name: &str) -> Channel {
    let text = std::fs::read_to_string(data(name)).unwrap();
    serde_json::from_str::<ChannelFile>(&text).unwrap().into_channel().unwrap()
}

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// All words of length `n` over `size` symbols, in lexicographic order.
pub fn all_words(size: usize, n: usize) -> Vec<Word> {
    let total = size.pow(n as u32);
    (0..total)
        .map(|mut k| {
            let mut w = vec![0u32; n];
            for slot in w.iter_mut().rev() {
                *slot = (k % size) as u32;
                k /= size;
            }
            w
        })
        .collect()
}

/// Strong power built straight from the definition on tuples.
pub fn strong_power_by_definition(g: &Graph, n: usize) -> Graph {
    let k = g.vertex_count();
    let tuples = all_words(k, n);
    let close = |a: u32, b: u32| a == b || g.has_edge(a as usize, b as usize);
    let mut edges = Vec::new();
    for (i, a) in tuples.iter().enumerate() {
        for (j, b) in tuples.iter().enumerate().skip(i + 1) {
            if a.iter().zip(b).all(|(&p, &q)| close(p, q)) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(tuples.len(), &edges).unwrap()
}

/// α(G) by enumerating every independent set, with no pruning. Up to 64 vertices.
pub fn alpha_exhaustive(g: &Graph) -> usize {
    let n = g.vertex_count();
    assert!(n <= 64);
    let closed: Vec<u64> = (0..n)
        .map(|v| (0..n).filter(|&u| u == v || g.has_edge(u, v)).fold(0u64, |m, u| m | 1 << u))
        .collect();
    fn go(candidates: u64, closed: &[u64]) -> usize {
        if candidates == 0 {
            return 0;
        }
        let v = candidates.trailing_zeros() as usize;
        let take = 1 + go(candidates & !closed[v], closed);
        let skip = go(candidates & !(1 << v), closed);
        take.max(skip)
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    go(all, &closed)
}

/// Least number of cliques partitioning the vertices, by trying every
/// assignment of vertices to `k` labels. Small graphs only.
pub fn clique_cover_exhaustive(g: &Graph) -> usize {
    let n = g.vertex_count();
    if n == 0 {
        return 0;
    }
    (1..=n)
        .find(|&k| {
            let total = k.pow(n as u32);
            (0..total).any(|mut code| {
                let labels: Vec<usize> = (0..n)
                    .map(|_| {
                        let l = code % k;
                        code /= k;
                        l
                    })
                    .collect();
                (0..n).all(|u| (u + 1..n).all(|v| labels[u] != labels[v] || g.has_edge(u, v)))
            })
        })
        .unwrap()
}

/// Confusability by definition: distinct inputs sharing a reachable output.
pub fn confusable(channel: &Channel, a: usize, b: usize) -> bool {
    let rows = channel.rows();
    a != b && rows[a].iter().zip(&rows[b]).any(|(p, q)| p.is_positive() && q.is_positive())
}

/// Minimum success probability, summing `W^N(y|x)` over all of `Y^N`.
pub fn s_min_full_summation(channel: &Channel, code: &Code) -> Rational {
    let (_, ny) = channel.alphabets().sizes();
    let outputs = all_words(ny, code.block_length());
    code.messages()
        .into_iter()
        .map(|x| {
            outputs
                .iter()
                .filter(|y| code.contains(x, y))
                .map(|y| {
                    x.iter()
                        .zip(y.iter())
                        .map(|(&a, &b)| channel.transition(a as usize, b as usize).clone())
                        .fold(Rational::one(), |acc, p| acc * p)
                })
                .fold(Rational::zero(), |acc, p| acc + p)
        })
        .min()
        .unwrap()
}

/// `min{n ∈ ℕ : x ≤ n}`.
pub fn least_natural_above(x: &Rational) -> BigInt {
    let c = x.numer().div_ceil(x.denom());
    if c.is_negative() {
        BigInt::zero()
    } else {
        c
    }
}

pub fn is_natural(x: &Rational) -> bool {
    x.is_integer() && !x.is_negative()
}

/// `base^{floor(k)}` for `k ≥ 0`, and 1 for negative `k`.
pub fn natural_power(k: &Rational, base: &Rational) -> Rational {
    if k.is_negative() {
        return Rational::one();
    }
    let e = k.numer().div_floor(k.denom());
    let mut out = Rational::one();
    let mut i = BigInt::zero();
    while i < e {
        out *= base;
        i += 1;
    }
    out
}

/// Channel whose zero entries are exactly `pattern`, when one exists.
pub fn channel_with_pattern(pattern: &ZeroPattern, weights: &[u32]) -> Option<Channel> {
    let (nx, ny) = pattern.sizes();
    let mut rows = Vec::with_capacity(nx);
    for x in 0..nx {
        let raw: Vec<u32> = (0..ny).map(|y| if pattern.contains(x, y) { 0 } else { 1 + weights[x * ny + y] % 4 }).collect();
        let total: u32 = raw.iter().sum();
        if total == 0 {
            return None;
        }
        rows.push(raw.iter().map(|&w| r(i64::from(w), i64::from(total))).collect());
    }
    Some(Channel::new(rows, AlphabetPair::numbered(nx, ny)).unwrap())
}

pub fn rational_strategy(max_abs: i64, max_den: i64) -> impl Strategy<Value = Rational> {
    (-max_abs * max_den..=max_abs * max_den, 1..=max_den).prop_map(|(n, d)| r(n, d))
}

/// A channel over alphabets of at most the given sizes, with random zeros.
pub fn channel_strategy(max_inputs: usize, max_outputs: usize) -> impl Strategy<Value = Channel> {
    (1..=max_inputs, 1..=max_outputs).prop_flat_map(|(nx, ny)| {
        prop::collection::vec(0u32..4, nx * ny).prop_map(move |w| {
            let rows: Vec<Vec<Rational>> = w
                .chunks(ny)
                .map(|row| {
                    let mut row = row.to_vec();
                    if row.iter().all(|&v| v == 0) {
                        row[0] = 1;
                    }
                    let total: u32 = row.iter().sum();
                    row.iter().map(|&v| r(i64::from(v), i64::from(total))).collect()
                })
                .collect();
            Channel::new(rows, AlphabetPair::numbered(nx, ny)).unwrap()
        })
    })
}

/// A code over alphabets of exactly the given sizes with block length at most
/// `max_block`: a few distinct messages, each output word owned by at most one.
pub fn code_over(nx: usize, ny: usize, max_block: usize) -> impl Strategy<Value = Code> {
    (1..=max_block).prop_flat_map(move |n| {
        let inputs = nx.pow(n as u32);
        let outputs = ny.pow(n as u32);
        (
            prop::collection::vec(0..inputs, 1..=4),
            prop::collection::vec(prop::option::of(0usize..4), outputs),
        )
            .prop_map(move |(mut picks, owners)| {
                picks.sort_unstable();
                picks.dedup();
                let messages: Vec<Word> = picks.iter().map(|&k| all_words(nx, n)[k].clone()).collect();
                let ys = all_words(ny, n);
                let mut pairs: Vec<(Word, Word)> = owners
                    .iter()
                    .zip(&ys)
                    .filter_map(|(o, y)| o.map(|k| (messages[k % messages.len()].clone(), y.clone())))
                    .collect();
                if pairs.is_empty() {
                    pairs.push((messages[0].clone(), ys[0].clone()));
                }
                Code::new(nx, ny, n, pairs).unwrap()
            })
    })
}

pub fn code_strategy(max_inputs: usize, max_outputs: usize, max_block: usize) -> impl Strategy<Value = Code> {
    (1..=max_inputs, 1..=max_outputs).prop_flat_map(move |(nx, ny)| code_over(nx, ny, max_block))
}

/// A channel together with a code over the same alphabets.
pub fn channel_and_code(max_size: usize, max_block: usize) -> impl Strategy<Value = (Channel, Code)> {
    channel_strategy(max_size, max_size).prop_flat_map(move |ch| {
        let (nx, ny) = ch.alphabets().sizes();
        (Just(ch), code_over(nx, ny, max_block))
    })
}
