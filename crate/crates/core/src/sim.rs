//! Closed-loop remote state estimation over a zero-error block code.
//!
//! Encoder and decoder share an uncertainty box around the estimate. At the
//! start of every block the encoder splits the box into at most `M` cells,
//! sends the index of the cell holding the true state as one codeword, and
//! after the block both sides move the box forward by `A^N` and inflate it
//! by the accumulated noise bound.
//!
//! The state is tracked exactly as the error `e = s - ŝ` in scaled integers:
//! `e = E / (den^t · 2^(GRID_BITS+1))` where `den` is the common denominator
//! of the plant matrix. Noise samples, box half-widths and cell bounds all
//! live on dyadic grids, so no rational ever needs reducing.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::io::{self, Write};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{zero_pattern, Channel};
use crate::code::{code_from_file, is_zero_error, Code, CodeFile, Word};
use crate::decide::{instability_exponent, rate_exceeds, Interval, Plant, DEFAULT_PRECISION};
use crate::rational::{format_rational, log2_abs, serde_rational, to_f64, Rational};

/// Box half-widths live on the grid `2^-GRID_BITS`.
pub const GRID_BITS: u32 = 40;

/// Log-error slopes above this (bits per step) count as diverging.
pub const DIVERGENCE_SLOPE: f64 = 1e-3;

fn default_trials() -> u32 {
    1
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub plant: Plant,
    pub channel: Channel,
    pub code: CodeFile,
    /// Noise is uniform on `[-d, d]^n`.
    #[serde(with = "serde_rational")]
    pub noise_bound: Rational,
    /// Support of the initial state, one interval per coordinate.
    pub initial_box: Vec<Interval>,
    pub horizon: u64,
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: u32,
    /// Refuse codes whose rate does not beat the plant.
    #[serde(default = "default_true")]
    pub require_rate_certificate: bool,
    /// Keep per-step records (memory grows with the horizon).
    #[serde(default)]
    pub record_steps: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    ConfigInvalid(String),
    #[error("trial {trial}: block ending at step {t} was not decoded to the sent message")]
    DecodingAmbiguity { trial: u32, t: u64 },
    #[error("trial {trial}: state left the uncertainty box at step {t}")]
    BoxEscaped { trial: u32, t: u64 },
}

fn invalid(message: impl Into<String>) -> SimError {
    SimError::ConfigInvalid(message.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: u64,
    pub error: f64,
    pub state: Vec<f64>,
    pub estimate: Vec<f64>,
    pub input: String,
    pub output: String,
}

/// One trial. Per-step data is only kept when `record_steps` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub trial: u32,
    pub horizon: u64,
    /// `sup_t ‖s_t - ŝ_t‖∞`, for display (infinite once past the `f64` range).
    pub sup_error: f64,
    pub sup_log2: f64,
    pub sup_time: u64,
    /// Least-squares slope of `log2 ‖e_t‖∞` over the second half.
    pub slope: f64,
    pub blocks_decoded: u64,
    pub steps: Vec<StepRecord>,
    /// Box half-widths at every block start.
    pub half_widths: Vec<Vec<Rational>>,
    sup_numer: BigInt,
    sup_denom: BigInt,
}

impl Trace {
    pub fn sup_error_exact(&self) -> Rational {
        Rational::new(self.sup_numer.clone(), self.sup_denom.clone())
    }

    /// `sup error < threshold`, compared exactly.
    pub fn sup_below(&self, threshold: &Rational) -> bool {
        &self.sup_numer * threshold.denom() < threshold.numer() * &self.sup_denom
    }
}

/// Exact sampler for one row of the channel.
enum RowSampler {
    Exact(WeightedIndex<u64>),
    Approximate(WeightedIndex<f64>),
}

impl RowSampler {
    fn new(row: &[Rational]) -> Self {
        let lcm = row.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
        let weights: Option<Vec<u64>> = row.iter().map(|p| (p.numer() * (&lcm / p.denom())).to_u64()).collect();
        match weights {
            Some(w) => RowSampler::Exact(WeightedIndex::new(w).expect("rows sum to one")),
            // zero entries keep weight zero either way
            None => RowSampler::Approximate(WeightedIndex::new(row.iter().map(to_f64)).expect("rows sum to one")),
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        match self {
            RowSampler::Exact(w) => w.sample(rng),
            RowSampler::Approximate(w) => w.sample(rng),
        }
    }
}

/// Everything shared by the trials of one config.
struct Setup {
    dim: usize,
    block: usize,
    messages: Vec<Word>,
    decoder: HashMap<Word, usize>,
    samplers: Vec<RowSampler>,
    den: BigInt,
    den_block: BigInt,
    /// `A · den`.
    a_num: Vec<Vec<BigInt>>,
    /// `A^N · den^N`.
    a_block_num: Vec<Vec<BigInt>>,
    /// `den^N · Σ_{j<N} |A^j| 1`.
    noise_spread: Vec<BigInt>,
    noise_numer: BigInt,
    noise_denom: BigInt,
    /// `2 · den^N · noise denominator`.
    width_denom: BigInt,
    noise_max: i128,
    initial_max: Vec<i128>,
    initial_half_width: Vec<BigInt>,
    center: Vec<f64>,
    a_f64: Vec<Vec<f64>>,
    a_block_f64: Vec<Vec<f64>>,
    /// `|A^N|`.
    growth_f64: Vec<Vec<f64>>,
    /// Noise spread per block in units of `2^-GRID_BITS`.
    spread_f64: Vec<f64>,
    input_symbols: Vec<String>,
    output_symbols: Vec<String>,
    record: bool,
}

fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
}

fn scaled_integers(m: &[Vec<Rational>], scale: &BigInt) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|row| row.iter().map(|x| (x * Rational::from_integer(scale.clone())).to_integer()).collect())
        .collect()
}

fn to_f64_matrix(m: &[Vec<Rational>]) -> Vec<Vec<f64>> {
    m.iter().map(|row| row.iter().map(to_f64).collect()).collect()
}

fn fits_i128(x: &Rational) -> Result<i128, SimError> {
    x.floor().to_integer().to_i128().ok_or_else(|| invalid("noise bound or initial box too large"))
}

impl Setup {
    fn new(config: &SimConfig) -> Result<Self, SimError> {
        config.plant.validate().map_err(|e| invalid(e.to_string()))?;
        let a = &config.plant.matrix;
        let dim = a.len();
        let alphabets = config.channel.alphabets();
        let code: Code = code_from_file(&config.code, alphabets).map_err(|e| invalid(e.to_string()))?;
        let block = code.block_length();
        if !is_zero_error(&code, &zero_pattern(&config.channel)) {
            return Err(invalid("the code is not zero-error for this channel"));
        }
        if config.require_rate_certificate {
            let exponent = instability_exponent(&config.plant, DEFAULT_PRECISION).map_err(|e| invalid(e.to_string()))?;
            if !rate_exceeds(code.message_count(), block, &exponent) {
                return Err(invalid(format!(
                    "{} messages per {block} uses do not beat the plant's growth {}^{block}",
                    code.message_count(),
                    format_rational(&exponent.hi)
                )));
            }
        }
        if !config.noise_bound.is_positive() {
            return Err(invalid("noise bound must be positive"));
        }
        if config.horizon < block as u64 {
            return Err(invalid("horizon is shorter than one block"));
        }
        if config.initial_box.len() != dim || config.initial_box.iter().any(|i| i.lo > i.hi) {
            return Err(invalid("initial box must give one non-empty interval per state coordinate"));
        }
        if config.trials == 0 {
            return Err(invalid("at least one trial is needed"));
        }

        let den = a.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let den_block = num_traits::pow(den.clone(), block);
        let mut powers = vec![identity(dim)];
        while powers.len() <= block {
            powers.push(mat_mul(powers.last().unwrap(), a));
        }
        let a_block = &powers[block];
        let spread_scale = Rational::from_integer(den_block.clone());
        let noise_spread: Vec<BigInt> = (0..dim)
            .map(|i| {
                let s: Rational = powers[..block].iter().flat_map(|p| p[i].iter().map(Rational::abs)).sum();
                (s * &spread_scale).to_integer()
            })
            .collect();
        let d = &config.noise_bound;
        let grid = Rational::from_integer(BigInt::one() << (GRID_BITS + 1));
        let initial_max = config
            .initial_box
            .iter()
            .map(|i| fits_i128(&((&i.hi - &i.lo) / Rational::from_integer(2.into()) * &grid)))
            .collect::<Result<Vec<_>, _>>()?;
        let initial_half_width = config
            .initial_box
            .iter()
            .map(|i| ((&i.hi - &i.lo) / Rational::from_integer(2.into()) * Rational::from_integer(BigInt::one() << GRID_BITS)).ceil().to_integer())
            .collect();
        let spread_f64 = noise_spread
            .iter()
            .map(|s: &BigInt| to_f64(&(Rational::new(s.clone(), den_block.clone()) * d)) * (GRID_BITS as f64).exp2())
            .collect();
        let pattern_decoder = code.decoder().into_iter().map(|(y, x)| (y.clone(), x.clone())).collect::<HashMap<_, _>>();
        let messages: Vec<Word> = code.messages().into_iter().cloned().collect();
        let decoder = pattern_decoder
            .into_iter()
            .map(|(y, x)| (y, messages.binary_search(&x).expect("decoded words are messages")))
            .collect();
        Ok(Self {
            dim,
            block,
            messages,
            decoder,
            samplers: config.channel.rows().iter().map(|r| RowSampler::new(r)).collect(),
            den: den.clone(),
            a_num: scaled_integers(a, &den),
            a_block_num: scaled_integers(a_block, &den_block),
            width_denom: BigInt::from(2) * &den_block * d.denom(),
            den_block,
            noise_spread,
            noise_numer: d.numer().clone(),
            noise_denom: d.denom().clone(),
            noise_max: fits_i128(&(d * &grid))?,
            initial_max,
            initial_half_width,
            center: config.initial_box.iter().map(|i| to_f64(&((&i.lo + &i.hi) / Rational::from_integer(2.into())))).collect(),
            a_f64: to_f64_matrix(a),
            a_block_f64: to_f64_matrix(a_block),
            growth_f64: a_block.iter().map(|row| row.iter().map(|x| to_f64(x).abs()).collect()).collect(),
            spread_f64,
            input_symbols: alphabets.inputs().symbols().to_vec(),
            output_symbols: alphabets.outputs().symbols().to_vec(),
            record: config.record_steps,
        })
    }
}

fn identity(n: usize) -> Vec<Vec<Rational>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}

/// Cells per coordinate with product at most `messages`: repeatedly split the
/// coordinate whose cells are widest, lowest index first on ties.
pub fn widest_first_counts(half_widths: &[BigInt], messages: usize) -> Vec<usize> {
    let mut counts = vec![1usize; half_widths.len()];
    let mut product = 1usize;
    loop {
        let mut best: Option<usize> = None;
        for i in 0..counts.len() {
            if product / counts[i] * (counts[i] + 1) > messages {
                continue;
            }
            let wider = best.is_none_or(|b| {
                &half_widths[i] * BigInt::from(counts[b]) > &half_widths[b] * BigInt::from(counts[i])
            });
            if wider {
                best = Some(i);
            }
        }
        match best {
            Some(i) => {
                product = product / counts[i] * (counts[i] + 1);
                counts[i] += 1;
            }
            None => return counts,
        }
    }
}

/// Allocations examined by [`cell_counts`] before it falls back to
/// [`widest_first_counts`].
pub const ALLOCATION_LIMIT: usize = 50_000;

/// Cells per coordinate with product at most `messages`, chosen to minimize
/// the volume of the next box `Σ_j growth[i][j]·h_j/c_j + spread[i]`.
/// `growth` is `|A^N|` and `spread` the noise spread in the units of
/// `half_widths`. Near-ties go to the smaller widest next side, then to
/// splitting lower coordinates more.
pub fn cell_counts(half_widths: &[BigInt], messages: usize, growth: &[Vec<f64>], spread: &[f64]) -> Vec<usize> {
    let dim = half_widths.len();
    if dim == 1 {
        return vec![messages.max(1)];
    }
    let top = half_widths.iter().map(log2_abs).fold(f64::NEG_INFINITY, f64::max);
    let shift = (top - 500.0).max(0.0);
    let h: Vec<f64> = half_widths.iter().map(|x| if x.is_zero() { 0.0 } else { (log2_abs(x) - shift).exp2() }).collect();
    let s: Vec<f64> = spread.iter().map(|v| v * (-shift).exp2()).collect();
    let volume = |c: &[usize]| -> (f64, f64) {
        let next: Vec<f64> = (0..dim)
            .map(|i| (0..dim).map(|j| growth[i][j] * h[j] / c[j] as f64).sum::<f64>() + s[i])
            .collect();
        let log_volume = next.iter().map(|v| v.max(f64::MIN_POSITIVE).log2()).sum();
        (log_volume, next.iter().copied().fold(0.0, f64::max))
    };
    let better = |a: (f64, f64), b: (f64, f64)| a.0 < b.0 - 1e-9 || (a.0 <= b.0 + 1e-9 && a.1 < b.1 * (1.0 - 1e-12));

    let mut best: Option<((f64, f64), Vec<usize>)> = None;
    let mut examined = 0usize;
    let complete = for_each_allocation(&mut vec![1; dim], 0, messages.max(1), &mut |c| {
        examined += 1;
        if examined > ALLOCATION_LIMIT {
            return false;
        }
        let v = volume(c);
        if best.as_ref().is_none_or(|(b, _)| better(v, *b)) {
            best = Some((v, c.to_vec()));
        }
        true
    });
    match best {
        Some((_, counts)) if complete => counts,
        _ => widest_first_counts(half_widths, messages),
    }
}

/// Calls `visit` on every allocation whose last coordinate takes all the
/// remaining cells, with larger counts on lower coordinates first. Stops when
/// `visit` returns false, and then returns false.
fn for_each_allocation(counts: &mut [usize], i: usize, budget: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if i + 1 == counts.len() {
        counts[i] = budget;
        return visit(counts);
    }
    for c in (1..=budget).rev() {
        counts[i] = c;
        if !for_each_allocation(counts, i + 1, budget / c, visit) {
            return false;
        }
    }
    true
}

/// Bounds of cell `j` of `k` over `[-h, h]`, on the grid `2^-GRID_BITS`.
fn cell_bound(h: &BigInt, j: usize, k: usize) -> BigInt {
    match j {
        0 => -h,
        _ if j == k => h.clone(),
        _ => (BigInt::from(2 * j) * h).div_floor(&BigInt::from(k)) - h,
    }
}

/// Sign of `e - 2·b·scale`, deciding from leading bits when they are far
/// apart and exactly otherwise.
fn compare_scaled(e: &BigInt, b: &BigInt, scale: &BigInt, scale_log2: f64) -> Ordering {
    let (se, sb) = (e.signum(), b.signum());
    if se != sb {
        return se.cmp(&sb);
    }
    if se.is_zero() {
        return Ordering::Equal;
    }
    let gap = log2_abs(e) - (1.0 + log2_abs(b) + scale_log2);
    if gap.abs() > 1e-9 {
        let magnitude = if gap > 0.0 { Ordering::Greater } else { Ordering::Less };
        return if se.is_positive() { magnitude } else { magnitude.reverse() };
    }
    e.cmp(&((b * scale) << 1u32))
}

/// Streaming least-squares fit of `y` against `t`.
#[derive(Default)]
struct SlopeFit {
    n: f64,
    sx: f64,
    sy: f64,
    sxx: f64,
    sxy: f64,
}

impl SlopeFit {
    fn add(&mut self, x: f64, y: f64) {
        self.n += 1.0;
        self.sx += x;
        self.sy += y;
        self.sxx += x * x;
        self.sxy += x * y;
    }

    fn slope(&self) -> f64 {
        let denom = self.n * self.sxx - self.sx * self.sx;
        if denom == 0.0 {
            0.0
        } else {
            (self.n * self.sxy - self.sx * self.sy) / denom
        }
    }
}

fn run_trial(setup: &Setup, config: &SimConfig, trial: u32) -> Result<Trace, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(u64::from(trial));
    let dim = setup.dim;
    let grid_shift = GRID_BITS + 1;
    let grid_log2 = f64::from(grid_shift);

    let mut error: Vec<BigInt> = setup.initial_max.iter().map(|&m| BigInt::from(rng.gen_range(-m..=m))).collect();
    let mut half_width = setup.initial_half_width.clone();
    // den^t
    let mut scale = BigInt::one();
    let mut estimate = setup.center.clone();

    let mut sent = 0usize;
    let mut offset: Vec<BigInt> = vec![BigInt::zero(); dim];
    let mut cell_half: Vec<BigInt> = vec![BigInt::zero(); dim];
    let mut received: Word = Vec::with_capacity(setup.block);

    let mut sup: Option<(BigInt, u64, f64)> = None;
    let mut fit = SlopeFit::default();
    let fit_from = config.horizon / 2;
    let mut steps = Vec::new();
    let mut half_widths = Vec::new();
    let mut blocks_decoded = 0;

    for t in 0..config.horizon {
        let phase = (t % setup.block as u64) as usize;
        let scale_log2 = log2_abs(&scale);
        if phase == 0 {
            if setup.record {
                let unit = Rational::from_integer(BigInt::one() << GRID_BITS);
                half_widths.push(half_width.iter().map(|h| Rational::from_integer(h.clone()) / &unit).collect());
            }
            let counts = cell_counts(&half_width, setup.messages.len(), &setup.growth_f64, &setup.spread_f64);
            let mut index = 0usize;
            let mut radix = 1usize;
            for i in 0..dim {
                // e_i ≥ b  ⇔  E_i ≥ 2·B·den^t  (b = B / 2^GRID_BITS)
                let bounds: Vec<BigInt> = (0..=counts[i]).map(|j| cell_bound(&half_width[i], j, counts[i])).collect();
                let at_least = |b: &BigInt| compare_scaled(&error[i], b, &scale, scale_log2) != Ordering::Less;
                if !at_least(&bounds[0]) || compare_scaled(&error[i], &bounds[counts[i]], &scale, scale_log2) == Ordering::Greater {
                    return Err(SimError::BoxEscaped { trial, t });
                }
                let a = bounds[1..counts[i]].partition_point(at_least);
                offset[i] = &bounds[a] + &bounds[a + 1];
                cell_half[i] = &bounds[a + 1] - &bounds[a];
                index += a * radix;
                radix *= counts[i];
            }
            sent = index;
            received.clear();
        }

        let x = setup.messages[sent][phase];
        let y = setup.samplers[x as usize].sample(&mut rng) as u32;
        received.push(y);

        let exponent = scale_log2 + grid_log2;
        let log_err = error.iter().map(log2_abs).fold(f64::NEG_INFINITY, f64::max) - exponent;
        let better = match &sup {
            None => true,
            Some((_, _, best)) if log_err > best + 1e-9 => true,
            Some((num, at, best)) if log_err > best - 1e-9 => {
                // |E_t| / den^t  >  num / den^at
                let norm = error.iter().map(BigInt::magnitude).max().expect("at least one coordinate");
                let lift = num_traits::pow(setup.den.clone(), (t - at) as usize);
                BigInt::from(norm.clone()) > num * lift
            }
            _ => false,
        };
        if t >= fit_from {
            fit.add((t - fit_from) as f64, log_err.max(-1100.0));
        }
        if setup.record {
            let err_f64: Vec<f64> =
                error.iter().map(|e| (log2_abs(e) - exponent).exp2() * if e.is_negative() { -1.0 } else { 1.0 }).collect();
            steps.push(StepRecord {
                t,
                error: log_err.exp2(),
                state: estimate.iter().zip(&err_f64).map(|(c, e)| c + e).collect(),
                estimate: estimate.clone(),
                input: setup.input_symbols[x as usize].clone(),
                output: setup.output_symbols[y as usize].clone(),
            });
        }

        // e_{t+1} = A e_t + z_t, and at a block end also - A^N δ:
        //   E_{t+1} = (A·den) E_t + Z·den^(t+1) - (A^N·den^N) Δ · den^(t+1-N)
        let block_end = phase + 1 == setup.block;
        let next_scale = &scale * &setup.den;
        let lag = if !block_end {
            None
        } else if setup.block == 1 {
            Some(scale)
        } else {
            Some(&next_scale / &setup.den_block)
        };
        let mut next: Vec<BigInt> = Vec::with_capacity(dim);
        for i in 0..dim {
            let z = BigInt::from(rng.gen_range(-setup.noise_max..=setup.noise_max));
            let mut value: BigInt = setup.a_num[i].iter().zip(&error).map(|(a, e)| a * e).sum();
            match &lag {
                None => value += z * &next_scale,
                Some(lag) => {
                    let shift: BigInt = setup.a_block_num[i].iter().zip(&offset).map(|(a, o)| a * o).sum();
                    value += (z * &setup.den_block - shift) * lag;
                }
            }
            next.push(value);
        }
        let mut next_estimate: Vec<f64> =
            (0..dim).map(|i| setup.a_f64[i].iter().zip(&estimate).map(|(a, c)| a * c).sum()).collect();

        if block_end {
            if setup.decoder.get(&received) != Some(&sent) {
                return Err(SimError::DecodingAmbiguity { trial, t });
            }
            blocks_decoded += 1;
            let unit = (1u64 << grid_shift) as f64;
            for (next, row) in next_estimate.iter_mut().zip(&setup.a_block_f64) {
                *next +=
                    row.iter().zip(&offset).map(|(a, o)| a * o.to_f64().unwrap_or(f64::NAN) / unit).sum::<f64>();
            }
            // h' = |A^N| (cell half-width) + noise spread, rounded up onto the grid
            half_width = (0..dim)
                .map(|i| {
                    let spread: BigInt = setup.a_block_num[i].iter().zip(&cell_half).map(|(a, w)| a.abs() * w).sum();
                    let numer = spread * &setup.noise_denom + ((&setup.noise_numer * &setup.noise_spread[i]) << grid_shift);
                    numer.div_ceil(&setup.width_denom)
                })
                .collect();
        }
        let previous = std::mem::replace(&mut error, next);
        if better {
            let norm = previous.into_iter().max_by(|a, b| a.magnitude().cmp(b.magnitude())).expect("at least one coordinate");
            sup = Some((BigInt::from(norm.into_parts().1), t, log_err));
        }
        estimate = next_estimate;
        scale = next_scale;
    }

    let (sup_numer, sup_time, sup_log) = sup.expect("horizon is at least one block");
    let sup_denom = num_traits::pow(setup.den.clone(), sup_time as usize) << grid_shift;
    Ok(Trace {
        trial,
        horizon: config.horizon,
        sup_error: sup_log.exp2(),
        sup_log2: sup_log,
        sup_time,
        slope: fit.slope(),
        blocks_decoded,
        steps,
        half_widths,
        sup_numer,
        sup_denom,
    })
}

/// Runs a single trial, e.g. to record its steps after a batch run.
pub fn run_one_trial(config: &SimConfig, trial: u32) -> Result<Trace, SimError> {
    run_trial(&Setup::new(config)?, config, trial)
}

/// Runs every trial of `config` (in parallel), ordered by trial index.
pub fn run_simulation(config: &SimConfig) -> Result<Vec<Trace>, SimError> {
    let setup = Setup::new(config)?;
    (0..config.trials).into_par_iter().map(|trial| run_trial(&setup, config, trial)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    BoundedConsistent,
    Diverging,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trial: u32,
    pub sup_error: f64,
    pub sup_log2: f64,
    pub sup_time: u64,
    pub below_threshold: bool,
    pub slope: f64,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessReport {
    #[serde(with = "serde_rational")]
    pub threshold: Rational,
    pub trials: Vec<TrialSummary>,
    pub fraction_below: f64,
    pub bounded_consistent: usize,
    pub diverging: usize,
}

pub fn classify_slope(slope: f64) -> Classification {
    if slope > DIVERGENCE_SLOPE {
        Classification::Diverging
    } else {
        Classification::BoundedConsistent
    }
}

pub fn boundedness_report(traces: &[Trace], threshold: &Rational) -> BoundednessReport {
    let trials: Vec<TrialSummary> = traces
        .iter()
        .map(|t| TrialSummary {
            trial: t.trial,
            sup_error: t.sup_error,
            sup_log2: t.sup_log2,
            sup_time: t.sup_time,
            below_threshold: t.sup_below(threshold),
            slope: t.slope,
            classification: classify_slope(t.slope),
        })
        .collect();
    let below = trials.iter().filter(|t| t.below_threshold).count();
    let diverging = trials.iter().filter(|t| t.classification == Classification::Diverging).count();
    BoundednessReport {
        threshold: threshold.clone(),
        fraction_below: if trials.is_empty() { 0.0 } else { below as f64 / trials.len() as f64 },
        bounded_consistent: trials.len() - diverging,
        diverging,
        trials,
    }
}

/// `t,error,state_0..,estimate_0..,input,output`.
pub fn write_trace_csv<W: Write>(trace: &Trace, out: &mut W) -> io::Result<()> {
    let dim = trace.steps.first().map_or(0, |s| s.state.len());
    let mut header = vec!["t".to_string(), "error".to_string()];
    header.extend((0..dim).map(|i| format!("state_{i}")));
    header.extend((0..dim).map(|i| format!("estimate_{i}")));
    header.extend(["input".to_string(), "output".to_string()]);
    writeln!(out, "{}", header.join(","))?;
    for s in &trace.steps {
        let mut row = vec![s.t.to_string(), s.error.to_string()];
        row.extend(s.state.iter().map(f64::to_string));
        row.extend(s.estimate.iter().map(f64::to_string));
        row.extend([s.input.clone(), s.output.clone()]);
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Scalar upper bound on the box half-width: the fixed point of
/// `h ↦ (a/M) h + d`, inflated by the grid rounding, or the initial width.
pub fn scalar_width_bound(a: &Rational, messages: usize, noise: &Rational, initial: &Rational) -> Option<Rational> {
    let m = Rational::from_integer(messages.into());
    if a.abs() >= m {
        return None;
    }
    let rounding = (a.abs() / Rational::from_integer(2.into()) + Rational::one())
        / Rational::from_integer(BigInt::one() << GRID_BITS);
    let fixed = (noise + rounding) * &m / (&m - a.abs());
    Some(if *initial > fixed { initial.clone() } else { fixed })
}

/// `(a/M) h + d` plus the grid allowance: the contraction law for one block
/// of a scalar plant with block length 1.
pub fn scalar_width_step(a: &Rational, messages: usize, noise: &Rational, h: &Rational) -> Rational {
    let m = Rational::from_integer(messages.into());
    let rounding = (a.abs() / Rational::from_integer(2.into()) + Rational::one())
        / Rational::from_integer(BigInt::one() << GRID_BITS);
    a.abs() / m * h + noise + rounding
}
