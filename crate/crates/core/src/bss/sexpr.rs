//! S-expression text form of programs.
//!
//! ```text
//! (const ARITY VALUE)     (proj ARITY INDEX)
//! (add P Q)               (mul P Q)
//! (if-pos T P Q)          (if-zero T P Q)
//! (compose OUTER INNER...)
//! (primrec BASE STEP)     (search BODY)
//! (theta-n NX NY)         (theta-m NX NY)         (delta NX NY BITS)
//! ```
//!
//! Projection indices are 0-based. The parser also accepts the shorthands
//! `(sub P Q)`, `(if-nonneg T P Q)`, `(cl)`, `(ind-nat)` and `(exp-n)`, which
//! expand to primitives. `;` starts a comment.

use std::fmt;

use crate::bss::{program_cl, program_exp_n, program_indicator_nat, Oracle, Program};
use crate::channel::ZeroPattern;
use crate::rational::{format_rational, parse_rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("program text, line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Token<'a> {
    Open(usize),
    Close(usize),
    Atom(&'a str, usize),
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let code = line.split(';').next().unwrap_or("");
        let mut start = None;
        for (i, c) in code.char_indices() {
            let delimiter = c == '(' || c == ')' || c.is_whitespace();
            if delimiter {
                if let Some(s) = start.take() {
                    tokens.push(Token::Atom(&code[s..i], line_no));
                }
                match c {
                    '(' => tokens.push(Token::Open(line_no)),
                    ')' => tokens.push(Token::Close(line_no)),
                    _ => {}
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            tokens.push(Token::Atom(&code[s..], line_no));
        }
    }
    tokens
}

enum Sexp<'a> {
    Atom(&'a str, usize),
    List(Vec<Sexp<'a>>, usize),
}

impl Sexp<'_> {
    fn line(&self) -> usize {
        match self {
            Sexp::Atom(_, l) | Sexp::List(_, l) => *l,
        }
    }
}

fn read<'a>(tokens: &[Token<'a>], pos: &mut usize) -> Result<Sexp<'a>, ParseError> {
    let err = |line, message: &str| ParseError { line, message: message.to_string() };
    match tokens.get(*pos) {
        None => Err(err(0, "unexpected end of input")),
        Some(Token::Close(l)) => Err(err(*l, "unexpected ')'")),
        Some(Token::Atom(a, l)) => {
            *pos += 1;
            Ok(Sexp::Atom(a, *l))
        }
        Some(Token::Open(l)) => {
            *pos += 1;
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => return Err(err(*l, "unclosed '('")),
                    Some(Token::Close(_)) => {
                        *pos += 1;
                        return Ok(Sexp::List(items, *l));
                    }
                    Some(_) => items.push(read(tokens, pos)?),
                }
            }
        }
    }
}

fn build(s: &Sexp<'_>) -> Result<Program, ParseError> {
    let line = s.line();
    let err = |message: String| ParseError { line, message };
    let Sexp::List(items, _) = s else {
        return Err(err("expected a parenthesised form".into()));
    };
    let Some(Sexp::Atom(head, _)) = items.first() else {
        return Err(err("form must start with a name".into()));
    };
    let args = &items[1..];
    let expect = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(err(format!("'{head}' takes {n} arguments, got {}", args.len())))
        }
    };
    let atom = |i: usize| match &args[i] {
        Sexp::Atom(a, _) => Ok(*a),
        Sexp::List(..) => Err(err(format!("'{head}' argument {} must be an atom", i + 1))),
    };
    let natural = |i: usize| atom(i)?.parse::<usize>().map_err(|_| err(format!("'{head}' argument {} must be a natural", i + 1)));
    let sub = |i: usize| build(&args[i]);
    let program = match *head {
        "const" => {
            expect(2)?;
            let value = parse_rational(atom(1)?).map_err(|e| err(e.to_string()))?;
            Program::constant(natural(0)?, value)
        }
        "proj" => {
            expect(2)?;
            Program::proj(natural(0)?, natural(1)?)
        }
        "add" | "mul" | "sub" => {
            expect(2)?;
            let (a, b) = (sub(0)?, sub(1)?);
            match *head {
                "add" => Program::add(a, b),
                "mul" => Program::mul(a, b),
                _ => Program::sub(a, b),
            }
        }
        "if-pos" | "if-zero" | "if-nonneg" => {
            expect(3)?;
            let (t, a, b) = (sub(0)?, sub(1)?, sub(2)?);
            match *head {
                "if-pos" => Program::if_positive(t, a, b),
                "if-zero" => Program::if_zero(t, a, b),
                _ => Program::if_nonnegative(t, a, b),
            }
        }
        "compose" => {
            if args.len() < 2 {
                return Err(err("'compose' needs an outer and at least one inner program".into()));
            }
            Program::compose(sub(0)?, (1..args.len()).map(sub).collect::<Result<_, _>>()?)
        }
        "primrec" => {
            expect(2)?;
            Program::primrec(sub(0)?, sub(1)?)
        }
        "search" => {
            expect(1)?;
            Program::search(sub(0)?)
        }
        "theta-n" | "theta-m" => {
            expect(2)?;
            let (n_inputs, n_outputs) = (natural(0)?, natural(1)?);
            Program::Oracle(if *head == "theta-n" {
                Oracle::ThetaN { n_inputs, n_outputs }
            } else {
                Oracle::ThetaM { n_inputs, n_outputs }
            })
        }
        "delta" => {
            expect(3)?;
            let (nx, ny) = (natural(0)?, natural(1)?);
            let pattern = ZeroPattern::from_bit_string(nx, ny, atom(2)?)
                .ok_or_else(|| err(format!("pattern bits must be {} characters of 0/1", nx * ny)))?;
            Program::Oracle(Oracle::Delta(pattern))
        }
        "cl" | "ind-nat" | "exp-n" => {
            expect(0)?;
            match *head {
                "cl" => program_cl(),
                "ind-nat" => program_indicator_nat(),
                _ => program_exp_n(),
            }
        }
        other => return Err(err(format!("unknown form '{other}'"))),
    };
    program.arity().map_err(|e| err(e.to_string()))?;
    Ok(program)
}

/// Parses one program.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let tokens = tokenize(text);
    let mut pos = 0;
    let sexp = read(&tokens, &mut pos)?;
    if let Some(t) = tokens.get(pos) {
        let line = match t {
            Token::Open(l) | Token::Close(l) | Token::Atom(_, l) => *l,
        };
        return Err(ParseError { line, message: "trailing input after the program".into() });
    }
    build(&sexp)
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Program::Const { arity, value } => write!(f, "(const {arity} {})", format_rational(value)),
            Program::Proj { arity, index } => write!(f, "(proj {arity} {index})"),
            Program::Add(a, b) => write!(f, "(add {a} {b})"),
            Program::Mul(a, b) => write!(f, "(mul {a} {b})"),
            Program::IfPositive { test, then, otherwise } => write!(f, "(if-pos {test} {then} {otherwise})"),
            Program::IfZero { test, then, otherwise } => write!(f, "(if-zero {test} {then} {otherwise})"),
            Program::Compose { outer, inner } => {
                write!(f, "(compose {outer}")?;
                for p in inner {
                    write!(f, " {p}")?;
                }
                f.write_str(")")
            }
            Program::PrimRec { base, step } => write!(f, "(primrec {base} {step})"),
            Program::Search(body) => write!(f, "(search {body})"),
            Program::Oracle(Oracle::ThetaN { n_inputs, n_outputs }) => write!(f, "(theta-n {n_inputs} {n_outputs})"),
            Program::Oracle(Oracle::ThetaM { n_inputs, n_outputs }) => write!(f, "(theta-m {n_inputs} {n_outputs})"),
            Program::Oracle(Oracle::Delta(p)) => {
                let (nx, ny) = p.sizes();
                write!(f, "(delta {nx} {ny} {})", p.bit_string())
            }
        }
    }
}
