//! Exact rational numbers and their textual forms.
//!
//! Every probability, matrix entry and threshold in this crate is a
//! [`Rational`]. Text forms accepted on input are `p/q`, plain integers and
//! decimals with an optional exponent (`0.25`, `-1.5e-3`); output is always the
//! canonical `p/q` (or `p` when the denominator is one).

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `p/q`, an integer, or a decimal literal exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], i64::from_str(&s[i + 1..]).map_err(|_| err())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(&all_digits).map_err(|_| err())?);
    let shift = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= Rational::from_integer(scale);
    } else {
        value /= Rational::from_integer(scale);
    }
    Ok(if negative { -value } else { value })
}

/// Canonical text form: `p/q`, or `p` for integers.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `base^exp` for a non-negative integer exponent.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

/// Decides `count > bound^exp` exactly by cross-multiplying integers.
pub fn count_exceeds_power(count: &BigUint, bound: &Rational, exp: u32) -> bool {
    compare_count_power(count, bound, exp) == std::cmp::Ordering::Greater
}

/// Orders `count` against `bound^exp` as `count * denom^exp` vs `numer^exp`.
pub fn compare_count_power(count: &BigUint, bound: &Rational, exp: u32) -> std::cmp::Ordering {
    let lhs = BigInt::from(count.clone()) * num_traits::pow(bound.denom().clone(), exp as usize);
    let rhs = num_traits::pow(bound.numer().clone(), exp as usize);
    lhs.cmp(&rhs)
}

/// Largest `k` with `k <= x`.
pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Smallest `k` with `x <= k`.
pub fn ceil(x: &Rational) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

/// A rational `r >= sqrt(q)` with `r - sqrt(q) <= 2^-bits` (for `q >= 0`).
pub fn sqrt_upper(q: &Rational, bits: u32) -> Rational {
    let (root, exact) = scaled_isqrt(q, bits);
    let scale = BigInt::one() << bits;
    if exact {
        Rational::new(root, scale)
    } else {
        Rational::new(root + 1, scale)
    }
}

/// A rational `r <= sqrt(q)` with `sqrt(q) - r <= 2^-bits` (for `q >= 0`).
pub fn sqrt_lower(q: &Rational, bits: u32) -> Rational {
    let (root, _) = scaled_isqrt(q, bits);
    Rational::new(root, BigInt::one() << bits)
}

/// floor(sqrt(q) * 2^bits) and whether it is exact.
fn scaled_isqrt(q: &Rational, bits: u32) -> (BigInt, bool) {
    assert!(!q.is_negative(), "square root of a negative rational");
    // floor(sqrt(n/d) * 2^b) = floor(sqrt(n * d * 4^b) / d)
    let n = q.numer();
    let d = q.denom();
    let radicand: BigInt = (n * d) << (2 * bits);
    let root = radicand.sqrt();
    let exact = &root * &root == radicand && root.is_multiple_of(d);
    (root.div_floor(d), exact)
}

/// Rounds `x` down onto the grid `2^-bits`.
pub fn round_down(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    Rational::new(floor(&(x * Rational::from_integer(scale.clone()))), scale)
}

/// Rounds `x` up onto the grid `2^-bits`.
pub fn round_up(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    Rational::new(ceil(&(x * Rational::from_integer(scale.clone()))), scale)
}

/// Best-effort `f64` view of a rational of any size.
pub fn to_f64(x: &Rational) -> f64 {
    ratio_to_f64(x.numer(), x.denom())
}

/// `n / d` as `f64`, accurate for operands far beyond the `f64` range.
pub fn ratio_to_f64(n: &BigInt, d: &BigInt) -> f64 {
    if n.is_zero() {
        return 0.0;
    }
    let sign = if (n.sign() == Sign::Minus) != (d.sign() == Sign::Minus) { -1.0 } else { 1.0 };
    let l2 = log2_abs_ratio(n, d);
    sign * l2.exp2()
}

/// `log2(|n / d|)` computed from the leading bits, valid for huge operands.
pub fn log2_abs_ratio(n: &BigInt, d: &BigInt) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    log2_abs(n) - log2_abs(d)
}

/// `|n| ≈ m · 2^e` from the two leading 64-bit digits, without allocating.
pub fn mantissa_exponent(n: &BigInt) -> (f64, i64) {
    let digits = n.magnitude().iter_u64_digits();
    let len = digits.len() as i64;
    let mut top = digits.rev().take(2);
    let hi = top.next().unwrap_or(0) as f64;
    let lo = top.next().unwrap_or(0) as f64;
    if len <= 1 {
        (hi, 0)
    } else {
        (hi * 18_446_744_073_709_551_616.0 + lo, 64 * (len - 2))
    }
}

/// `log2(|n|)` from the leading bits.
pub fn log2_abs(n: &BigInt) -> f64 {
    let (m, e) = mantissa_exponent(n);
    m.log2() + e as f64
}

/// Serde adapter storing a [`Rational`] as its canonical string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = RationalText::deserialize(d)?;
        text.into_rational().map_err(serde::de::Error::custom)
    }

    /// Accepts JSON strings as well as bare JSON numbers.
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum RationalText {
        Text(String),
        Int(i64),
        Float(serde_json::Number),
    }

    impl RationalText {
        fn into_rational(self) -> Result<Rational, ParseRationalError> {
            match self {
                RationalText::Text(s) => parse_rational(&s),
                RationalText::Int(i) => Ok(int(i)),
                RationalText::Float(n) => parse_rational(&n.to_string()),
            }
        }
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_rational_vec {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct Wrap(#[serde(with = "serde_rational")] Rational);

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let wrapped: Vec<Wrap> = values.iter().cloned().map(Wrap).collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let wrapped = Vec::<Wrap>::deserialize(d)?;
        Ok(wrapped.into_iter().map(|w| w.0).collect())
    }
}

/// Serde adapter for row-major rational matrices.
pub mod serde_rational_matrix {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct Row(#[serde(with = "serde_rational_vec")] Vec<Rational>);

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let wrapped: Vec<Row> = rows.iter().cloned().map(Row).collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let wrapped = Vec::<Row>::deserialize(d)?;
        Ok(wrapped.into_iter().map(|r| r.0).collect())
    }
}

/// Serde adapter storing arbitrary-precision naturals as decimal strings.
pub mod serde_biguint {
    use super::*;

    pub fn serialize<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        BigUint::from_str(text.trim()).map_err(serde::de::Error::custom)
    }
}

/// Displays a rational in canonical form.
pub struct Show<'a>(pub &'a Rational);

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(self.0))
    }
}
