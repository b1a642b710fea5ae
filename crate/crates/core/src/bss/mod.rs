//! Programs over exact rationals built from constants, projections, field
//! operations, sign/zero branching, composition, primitive recursion and
//! unbounded search, with a step-budgeted interpreter.

mod constructions;
mod sexpr;

pub use constructions::*;
pub use sexpr::{parse_program, ParseError};

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::channel::{AlphabetPair, ZeroPattern};
use crate::code::{delta, theta_m, theta_n, GammaIndex};
use crate::rational::{floor, Rational};

/// Opaque code-index functions usable as arity-1 program nodes. Each is
/// defined only on naturals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Oracle {
    /// Block length of the code numbered by the argument (0 for non-codes).
    ThetaN { n_inputs: usize, n_outputs: usize },
    /// Message count of the code numbered by the argument (0 for non-codes).
    ThetaM { n_inputs: usize, n_outputs: usize },
    /// 1 iff the argument numbers a zero-error code for the pattern.
    Delta(ZeroPattern),
}

impl Oracle {
    fn apply(&self, n: &GammaIndex) -> Rational {
        let value = match self {
            Oracle::ThetaN { n_inputs, n_outputs } => theta_n(n, &AlphabetPair::numbered(*n_inputs, *n_outputs)),
            Oracle::ThetaM { n_inputs, n_outputs } => theta_m(n, &AlphabetPair::numbered(*n_inputs, *n_outputs)),
            Oracle::Delta(pattern) => {
                let (nx, ny) = pattern.sizes();
                usize::from(delta(n, pattern, &AlphabetPair::numbered(nx, ny)))
            }
        };
        Rational::from_integer(value.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Program {
    Const { arity: usize, value: Rational },
    /// The `index`-th argument (0-based).
    Proj { arity: usize, index: usize },
    Add(Box<Program>, Box<Program>),
    Mul(Box<Program>, Box<Program>),
    /// `then` if `test > 0`, else `otherwise`.
    IfPositive { test: Box<Program>, then: Box<Program>, otherwise: Box<Program> },
    /// `then` if `test = 0`, else `otherwise`.
    IfZero { test: Box<Program>, then: Box<Program>, otherwise: Box<Program> },
    /// `outer(inner_1(x), ..., inner_k(x))`.
    Compose { outer: Box<Program>, inner: Vec<Program> },
    /// `h(x1, rest) = base(rest)` if `x1 < 1`, else
    /// `step(x1 - 1, rest, h(x1 - 1, rest))`.
    PrimRec { base: Box<Program>, step: Box<Program> },
    /// Least `y ∈ {0, 1, ...}` with `body(x, y) = 0`.
    Search(Box<Program>),
    Oracle(Oracle),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BssError {
    #[error("program expects {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("ill-formed program: {0}")]
    IllFormed(String),
    #[error("no rational capacity value for zero pattern {0}")]
    TableIncomplete(String),
}

/// Result of running a program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalOutcome {
    Value(Rational),
    /// The step budget ran out after `steps` node evaluations.
    Diverged { steps: u64 },
    /// A sub-computation was evaluated outside its domain.
    DomainError(String),
}

impl EvalOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            EvalOutcome::Value(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for EvalOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalOutcome::Value(v) => f.write_str(&crate::rational::format_rational(v)),
            EvalOutcome::Diverged { steps } => write!(f, "diverged after {steps} steps"),
            EvalOutcome::DomainError(reason) => write!(f, "domain error: {reason}"),
        }
    }
}

fn boxed(p: Program) -> Box<Program> {
    Box::new(p)
}

impl Program {
    pub fn constant(arity: usize, value: Rational) -> Self {
        Program::Const { arity, value }
    }

    pub fn int(arity: usize, value: i64) -> Self {
        Program::Const { arity, value: Rational::from_integer(value.into()) }
    }

    pub fn proj(arity: usize, index: usize) -> Self {
        Program::Proj { arity, index }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Program, b: Program) -> Self {
        Program::Add(boxed(a), boxed(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Program, b: Program) -> Self {
        Program::Mul(boxed(a), boxed(b))
    }

    /// `a - b`, as `a + (-1)·b`.
    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Program, b: Program) -> Self {
        let arity = b.arity().unwrap_or(0);
        Program::add(a, Program::mul(Program::int(arity, -1), b))
    }

    pub fn if_positive(test: Program, then: Program, otherwise: Program) -> Self {
        Program::IfPositive { test: boxed(test), then: boxed(then), otherwise: boxed(otherwise) }
    }

    pub fn if_zero(test: Program, then: Program, otherwise: Program) -> Self {
        Program::IfZero { test: boxed(test), then: boxed(then), otherwise: boxed(otherwise) }
    }

    /// `then` if `test ≥ 0`, expressed with the two primitive branches.
    pub fn if_nonnegative(test: Program, then: Program, otherwise: Program) -> Self {
        Program::if_positive(test.clone(), then.clone(), Program::if_zero(test, then, otherwise))
    }

    pub fn compose(outer: Program, inner: Vec<Program>) -> Self {
        Program::Compose { outer: boxed(outer), inner }
    }

    pub fn primrec(base: Program, step: Program) -> Self {
        Program::PrimRec { base: boxed(base), step: boxed(step) }
    }

    pub fn search(body: Program) -> Self {
        Program::Search(boxed(body))
    }

    /// Number of arguments, after checking that every node agrees.
    pub fn arity(&self) -> Result<usize, BssError> {
        let ill = |msg: String| Err(BssError::IllFormed(msg));
        let same = |parts: &[&Program], what: &str| -> Result<usize, BssError> {
            let arities = parts.iter().map(|p| p.arity()).collect::<Result<Vec<_>, _>>()?;
            if arities.windows(2).any(|w| w[0] != w[1]) {
                return Err(BssError::IllFormed(format!("{what} children have arities {arities:?}")));
            }
            Ok(arities[0])
        };
        match self {
            Program::Const { arity, .. } => Ok(*arity),
            Program::Proj { arity, index } if index < arity => Ok(*arity),
            Program::Proj { arity, index } => ill(format!("projection {index} out of range for arity {arity}")),
            Program::Add(a, b) => same(&[a, b], "add"),
            Program::Mul(a, b) => same(&[a, b], "mul"),
            Program::IfPositive { test, then, otherwise } => same(&[test, then, otherwise], "if-pos"),
            Program::IfZero { test, then, otherwise } => same(&[test, then, otherwise], "if-zero"),
            Program::Compose { outer, inner } => {
                if inner.is_empty() {
                    return ill("compose needs at least one inner program".into());
                }
                let outer_arity = outer.arity()?;
                if outer_arity != inner.len() {
                    return ill(format!("compose outer arity {outer_arity} with {} inner programs", inner.len()));
                }
                same(&inner.iter().collect::<Vec<_>>(), "compose")
            }
            Program::PrimRec { base, step } => {
                let (b, s) = (base.arity()?, step.arity()?);
                if s != b + 2 {
                    return ill(format!("primrec base arity {b} needs step arity {}, got {s}", b + 2));
                }
                Ok(b + 1)
            }
            Program::Search(body) => match body.arity()? {
                0 => ill("search body needs arity at least 1".into()),
                n => Ok(n - 1),
            },
            Program::Oracle(_) => Ok(1),
        }
    }

    /// Total number of nodes.
    pub fn size(&self) -> usize {
        1 + match self {
            Program::Const { .. } | Program::Proj { .. } | Program::Oracle(_) => 0,
            Program::Add(a, b) | Program::Mul(a, b) => a.size() + b.size(),
            Program::IfPositive { test, then, otherwise } | Program::IfZero { test, then, otherwise } => {
                test.size() + then.size() + otherwise.size()
            }
            Program::Compose { outer, inner } => outer.size() + inner.iter().map(Program::size).sum::<usize>(),
            Program::PrimRec { base, step } => base.size() + step.size(),
            Program::Search(body) => body.size(),
        }
    }
}

enum Halt {
    Budget,
    Domain(String),
}

struct Interpreter {
    steps: u64,
    budget: u64,
}

impl Interpreter {
    fn tick(&mut self) -> Result<(), Halt> {
        if self.steps >= self.budget {
            return Err(Halt::Budget);
        }
        self.steps += 1;
        Ok(())
    }

    fn eval(&mut self, p: &Program, args: &[Rational]) -> Result<Rational, Halt> {
        self.tick()?;
        match p {
            Program::Const { value, .. } => Ok(value.clone()),
            Program::Proj { index, .. } => Ok(args[*index].clone()),
            Program::Add(a, b) => Ok(self.eval(a, args)? + self.eval(b, args)?),
            Program::Mul(a, b) => Ok(self.eval(a, args)? * self.eval(b, args)?),
            Program::IfPositive { test, then, otherwise } => {
                if self.eval(test, args)?.is_positive() {
                    self.eval(then, args)
                } else {
                    self.eval(otherwise, args)
                }
            }
            Program::IfZero { test, then, otherwise } => {
                if self.eval(test, args)?.is_zero() {
                    self.eval(then, args)
                } else {
                    self.eval(otherwise, args)
                }
            }
            Program::Compose { outer, inner } => {
                let values = inner.iter().map(|q| self.eval(q, args)).collect::<Result<Vec<_>, _>>()?;
                self.eval(outer, &values)
            }
            Program::PrimRec { base, step } => self.primrec(base, step, args),
            Program::Search(body) => {
                let mut extended = args.to_vec();
                extended.push(Rational::zero());
                loop {
                    if self.eval(body, &extended)?.is_zero() {
                        return Ok(extended.pop().unwrap());
                    }
                    *extended.last_mut().unwrap() += Rational::one();
                }
            }
            Program::Oracle(oracle) => {
                let x = &args[0];
                if !x.is_integer() || x.is_negative() {
                    return Err(Halt::Domain(format!(
                        "{oracle:?} needs a natural argument, got {}",
                        crate::rational::format_rational(x)
                    )));
                }
                Ok(oracle.apply(&GammaIndex(x.to_integer().to_biguint().unwrap())))
            }
        }
    }

    /// Unrolls the recursion bottom-up: with `k = floor(x1)` (0 when
    /// `x1 < 1`), the base case is reached at `x1 - k`.
    fn primrec(&mut self, base: &Program, step: &Program, args: &[Rational]) -> Result<Rational, Halt> {
        let x1 = &args[0];
        let rest = &args[1..];
        let k = if *x1 < Rational::one() { num_bigint::BigInt::zero() } else { floor(x1) };
        let bottom = x1 - Rational::from_integer(k.clone());
        let mut acc = self.eval(base, rest)?;
        let mut step_args = Vec::with_capacity(args.len() + 1);
        step_args.push(bottom);
        step_args.extend_from_slice(rest);
        step_args.push(Rational::zero());
        let mut remaining = k;
        while remaining.is_positive() {
            *step_args.last_mut().unwrap() = acc;
            acc = self.eval(step, &step_args)?;
            step_args[0] += Rational::one();
            remaining -= 1;
        }
        Ok(acc)
    }
}

/// Runs `program` on `args`, spending at most `budget` node evaluations.
pub fn evaluate(program: &Program, args: &[Rational], budget: u64) -> Result<EvalOutcome, BssError> {
    let arity = program.arity()?;
    if arity != args.len() {
        return Err(BssError::ArityMismatch { expected: arity, got: args.len() });
    }
    let mut interp = Interpreter { steps: 0, budget };
    Ok(match interp.eval(program, args) {
        Ok(v) => EvalOutcome::Value(v),
        Err(Halt::Budget) => EvalOutcome::Diverged { steps: interp.steps },
        Err(Halt::Domain(reason)) => EvalOutcome::DomainError(reason),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn run(p: &Program, args: &[Rational]) -> Rational {
        evaluate(p, args, 1_000_000).unwrap().value().cloned().expect("value")
    }

    #[test]
    fn primitives() {
        assert_eq!(run(&Program::constant(0, rat(3, 2)), &[]), rat(3, 2));
        let p = Program::add(Program::proj(2, 0), Program::mul(Program::proj(2, 1), Program::int(2, 3)));
        assert_eq!(run(&p, &[int(1), rat(1, 3)]), int(2));
        let sign = Program::if_positive(Program::proj(1, 0), Program::int(1, 1), Program::if_zero(Program::proj(1, 0), Program::int(1, 0), Program::int(1, -1)));
        assert_eq!(run(&sign, &[rat(-1, 7)]), int(-1));
        assert_eq!(run(&sign, &[int(0)]), int(0));
        assert_eq!(run(&sign, &[rat(1, 7)]), int(1));
        let nonneg = Program::if_nonnegative(Program::proj(1, 0), Program::int(1, 1), Program::int(1, 0));
        assert_eq!(run(&nonneg, &[int(0)]), int(1));
        assert_eq!(run(&nonneg, &[rat(-1, 2)]), int(0));
    }

    #[test]
    fn arity_checks() {
        let bad = Program::add(Program::proj(1, 0), Program::proj(2, 0));
        assert!(matches!(bad.arity(), Err(BssError::IllFormed(_))));
        assert!(matches!(Program::proj(1, 1).arity(), Err(BssError::IllFormed(_))));
        assert_eq!(evaluate(&Program::proj(2, 0), &[int(1)], 10), Err(BssError::ArityMismatch { expected: 2, got: 1 }));
        assert!(Program::primrec(Program::int(1, 1), Program::proj(2, 0)).arity().is_err());
    }

    #[test]
    fn primrec_unrolls_floor_plus_one_times() {
        // counts its own applications: base 0, step adds 1
        let counter = Program::primrec(Program::int(0, 0), Program::add(Program::proj(2, 1), Program::int(2, 1)));
        for k in 0..6 {
            assert_eq!(run(&counter, &[int(k)]), int(k));
            assert_eq!(run(&counter, &[int(k) + rat(1, 2)]), int(k));
        }
        assert_eq!(run(&counter, &[int(-3)]), int(0));
        // the first step argument is the bottom value x1 - k
        let first = Program::primrec(Program::int(0, -1), Program::proj(2, 0));
        assert_eq!(run(&first, &[rat(7, 2)]), rat(5, 2));
    }

    #[test]
    fn budget_and_domain() {
        let never = Program::search(Program::int(1, 1));
        assert_eq!(evaluate(&never, &[], 50).unwrap(), EvalOutcome::Diverged { steps: 50 });
        let oracle = Program::Oracle(Oracle::ThetaN { n_inputs: 2, n_outputs: 2 });
        assert!(matches!(evaluate(&oracle, &[rat(1, 2)], 10).unwrap(), EvalOutcome::DomainError(_)));
        assert_eq!(run(&oracle, &[int(16)]), int(1));
        assert_eq!(run(&oracle, &[int(0)]), int(0));
        // a domain error inside the search body propagates
        let body = Program::compose(oracle.clone(), vec![Program::add(Program::proj(1, 0), Program::constant(1, rat(1, 2)))]);
        assert!(matches!(evaluate(&Program::search(body), &[], 100).unwrap(), EvalOutcome::DomainError(_)));
    }
}
