//! Concrete programs: ceiling, the naturals indicator, the discretized
//! exponential, zero-pattern indicators, the capacity lookup, and the
//! minimal zero-error code search.

use crate::bss::{BssError, Oracle, Program};
use crate::capacity::CapacityTable;
use crate::channel::{AlphabetPair, Channel, ZeroPattern};
use crate::rational::Rational;

/// `(x, y) ↦ max(x - y, 0)`.
pub fn program_saturated_sub() -> Program {
    let diff = Program::sub(Program::proj(2, 0), Program::proj(2, 1));
    Program::if_positive(diff.clone(), diff, Program::int(2, 0))
}

/// `x ↦ min{n ∈ ℕ : x ≤ n}`, by search on the saturated subtraction.
pub fn program_cl() -> Program {
    Program::search(program_saturated_sub())
}

/// `x ↦ 1` if `x ∈ ℕ`, else 0.
pub fn program_indicator_nat() -> Program {
    let gap = Program::sub(Program::proj(1, 0), program_cl());
    Program::if_zero(gap, Program::int(1, 1), Program::int(1, 0))
}

/// `(x1, x2) ↦ x2^{floor(x1)}` for `x1 ≥ 0`, and 1 otherwise.
pub fn program_exp_n() -> Program {
    Program::primrec(Program::int(1, 1), Program::mul(Program::proj(3, 1), Program::proj(3, 2)))
}

/// Indicator of `W₀(Ω)` over the stacked channel vector (arity `|X||Y|`,
/// plus `extra` trailing arguments that are ignored).
pub fn program_pattern_indicator(pattern: &ZeroPattern, extra: usize) -> Program {
    let (nx, ny) = pattern.sizes();
    let arity = nx * ny + extra;
    let mut acc = Program::int(arity, 1);
    for y in (0..ny).rev() {
        for x in (0..nx).rev() {
            let coord = Program::proj(arity, Channel::stacked_index(nx, x, y));
            let zero = Program::int(arity, 0);
            acc = if pattern.contains(x, y) {
                Program::if_zero(coord, acc, zero)
            } else {
                Program::if_positive(coord, acc, zero)
            };
        }
    }
    acc
}

fn sum_all(arity: usize, terms: impl IntoIterator<Item = Program>) -> Program {
    terms.into_iter().reduce(Program::add).unwrap_or_else(|| Program::int(arity, 0))
}

/// `w ↦ Σ_Ω c(Ω)·𝟙(w|W₀(Ω))` with `c(Ω) = 2^{C₀}` taken from `table`.
/// Every pattern needs a rational table entry.
pub fn program_c0(alphabets: &AlphabetPair, table: &CapacityTable) -> Result<Program, BssError> {
    let (nx, ny) = alphabets.sizes();
    let arity = nx * ny;
    let terms = ZeroPattern::all(nx, ny)
        .map(|pattern| {
            let value = table.get(&pattern).and_then(|v| v.as_rational()).cloned();
            match value {
                Some(v) => Ok(Program::mul(Program::constant(arity, v), program_pattern_indicator(&pattern, 0))),
                None => Err(BssError::TableIncomplete(pattern.to_string())),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(sum_all(arity, terms))
}

/// Shared shape of `N₀` and `M₀`: guarded by `𝟙(x|ℕ)`, sums
/// `Θ(x)·Δ(x|Ω)·𝟙(w|W₀(Ω))` over all patterns. Arguments are `(w..., x)`.
fn code_component(alphabets: &AlphabetPair, theta: Oracle) -> Program {
    let (nx, ny) = alphabets.sizes();
    let arity = nx * ny + 1;
    let index = Program::proj(arity, nx * ny);
    let apply = |oracle: Oracle| Program::compose(Program::Oracle(oracle), vec![index.clone()]);
    let terms = ZeroPattern::all(nx, ny).map(|pattern| {
        Program::mul(
            apply(theta.clone()),
            Program::mul(apply(Oracle::Delta(pattern.clone())), program_pattern_indicator(&pattern, 1)),
        )
    });
    let guard = Program::compose(program_indicator_nat(), vec![index.clone()]);
    Program::if_positive(guard, sum_all(arity, terms), Program::int(arity, 0))
}

/// `(w, x) ↦ N` if `x` numbers a zero-error `(N, M)`-code for `w`, else 0.
pub fn program_n0(alphabets: &AlphabetPair) -> Program {
    let (nx, ny) = alphabets.sizes();
    code_component(alphabets, Oracle::ThetaN { n_inputs: nx, n_outputs: ny })
}

/// `(w, x) ↦ M` if `x` numbers a zero-error `(N, M)`-code for `w`, else 0.
pub fn program_m0(alphabets: &AlphabetPair) -> Program {
    let (nx, ny) = alphabets.sizes();
    code_component(alphabets, Oracle::ThetaM { n_inputs: nx, n_outputs: ny })
}

/// `(w, x) ↦ M₀(w, x) - exp_ℕ(N₀(w, x), base)`.
pub fn program_b0(alphabets: &AlphabetPair, base: &Rational) -> Program {
    let arity = alphabets.sizes().0 * alphabets.sizes().1 + 1;
    let power = Program::compose(program_exp_n(), vec![program_n0(alphabets), Program::constant(arity, base.clone())]);
    Program::sub(program_m0(alphabets), power)
}

/// `(w, x) ↦ 0` if `B₀(w, x) > 0`, else 1.
pub fn program_b00(alphabets: &AlphabetPair, base: &Rational) -> Program {
    let arity = alphabets.sizes().0 * alphabets.sizes().1 + 1;
    Program::if_positive(program_b0(alphabets, base), Program::int(arity, 0), Program::int(arity, 1))
}

/// `w ↦ min{n ∈ ℕ : n numbers a zero-error (N, M)-code with M > base^N}`.
pub fn program_min_code_search(alphabets: &AlphabetPair, base: &Rational) -> Program {
    Program::search(program_b00(alphabets, base))
}
