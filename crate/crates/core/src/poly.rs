//! Exact univariate polynomials over the rationals, characteristic
//! polynomials, and certified enclosures of complex roots.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::rational::{format_rational, round_down, sqrt_lower, sqrt_upper, to_f64, Rational};

/// Coefficients lowest degree first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![Rational::one()] }
    }

    /// `x - r`.
    pub fn linear(r: &Rational) -> Self {
        Self::new(vec![-r.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has degree 0 here.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.lead();
        Self::new(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let at = |p: &Poly, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
        Poly::new((0..len).map(|i| at(self, i) - at(other, i)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder of division by a nonzero polynomial.
    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        if self.is_zero() || self.degree() < dd {
            return (Poly::zero(), self.clone());
        }
        let lead = divisor.lead();
        let mut quot = vec![Rational::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let factor = &rem[k + dd] / &lead;
            if !factor.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &factor * d;
                }
            }
            quot[k] = factor;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    fn to_f64_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| Complex64::new(to_f64(c), 0.0)).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_rational(c),
                1 => format!("({})x", format_rational(c)),
                _ => format!("({})x^{i}", format_rational(c)),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// `det(xI - A)` by the Faddeev–LeVerrier recursion, exactly.
pub fn charpoly(a: &[Vec<Rational>]) -> Poly {
    let n = a.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Rational::zero();
                for (l, row) in m.iter().enumerate() {
                    if !a[i][l].is_zero() && !row[j].is_zero() {
                        s += &a[i][l] * &row[j];
                    }
                }
                if i == j {
                    s += &coeffs[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        m = next;
        let mut trace = Rational::zero();
        for i in 0..n {
            for l in 0..n {
                trace += &a[i][l] * &m[l][i];
            }
        }
        coeffs[n - k] = -trace / Rational::from_integer(k.into());
    }
    Poly::new(coeffs)
}

/// Square-free factors with multiplicities (Yun's algorithm); the product
/// of `f^k` equals the monic input.
pub fn squarefree_decomposition(p: &Poly) -> Vec<(Poly, u32)> {
    assert!(!p.is_zero(), "decomposition of the zero polynomial");
    let p = p.monic();
    if p.degree() == 0 {
        return Vec::new();
    }
    let dp = p.derivative();
    let a = p.gcd(&dp);
    let mut b = p.divrem(&a).0;
    let mut d = dp.divrem(&a).0.sub(&b.derivative());
    let mut out = Vec::new();
    let mut k = 1;
    while b.degree() > 0 {
        let a = b.gcd(&d);
        if a.degree() > 0 {
            out.push((a.clone(), k));
        }
        b = b.divrem(&a).0;
        d = d.divrem(&a).0.sub(&b.derivative());
        k += 1;
    }
    out
}

/// Floating-point approximations of all roots (Aberth iteration).
pub fn approximate_roots(p: &Poly) -> Vec<Complex64> {
    let d = p.degree();
    if d == 0 {
        return Vec::new();
    }
    let c = p.monic().to_f64_coeffs();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            dv = dv * z + v;
            v = v * z + a;
        }
        (v, dv)
    };
    let radius = c[..d].iter().map(|a| a.norm()).fold(0.0f64, f64::max).max(1e-3).powf(1.0 / d as f64);
    let mut z: Vec<Complex64> =
        (0..d).map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4)).collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..d {
            let (v, dv) = eval(z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let sum: Complex64 = (0..d).filter(|&j| j != k).map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if w.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm() / z[k].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Rational roots of `p` found from its floating-point roots by
/// continued-fraction reconstruction, each confirmed exactly.
pub fn rational_roots(p: &Poly) -> Vec<Rational> {
    let mut found: Vec<Rational> = Vec::new();
    if p.degree() == 0 {
        return found;
    }
    if p.coeffs[0].is_zero() {
        found.push(Rational::zero());
    }
    for z in approximate_roots(p) {
        if z.im.abs() > 1e-6 * z.re.abs().max(1.0) {
            continue;
        }
        for r in convergents(z.re, 1 << 26) {
            if !found.contains(&r) && p.eval(&r).is_zero() {
                found.push(r);
                break;
            }
        }
    }
    found.sort();
    found
}

fn convergents(x: f64, max_denominator: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    if !x.is_finite() || x.abs() > 1e15 {
        return out;
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = x;
    for _ in 0..40 {
        let a = rest.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_denominator) {
            break;
        }
        out.push(Rational::new(h2.clone(), k2.clone()));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rest - a;
        if frac.abs() < 1e-12 {
            break;
        }
        rest = 1.0 / frac;
    }
    out
}

/// Exact complex rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexRational {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    fn from_f64(z: Complex64, bits: u32) -> Self {
        let conv = |v: f64| {
            let v = if v.is_finite() { v } else { 0.0 };
            round_down(&Rational::from_float(v).unwrap_or_else(Rational::zero), bits)
        };
        Self::new(conv(z.re), conv(z.im))
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn add(&self, o: &Self) -> Self {
        Self::new(&self.re + &o.re, &self.im + &o.im)
    }

    fn sub(&self, o: &Self) -> Self {
        Self::new(&self.re - &o.re, &self.im - &o.im)
    }

    fn mul(&self, o: &Self) -> Self {
        Self::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    fn div(&self, o: &Self) -> Self {
        let n = o.norm_sqr();
        Self::new((&self.re * &o.re + &self.im * &o.im) / &n, (&self.im * &o.re - &self.re * &o.im) / &n)
    }

    fn round(&self, bits: u32) -> Self {
        Self::new(round_down(&self.re, bits), round_down(&self.im, bits))
    }
}

/// Certified bounds on the modulus of one root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulusBounds {
    pub lo: Rational,
    pub hi: Rational,
}

/// Refines approximations to the roots of a square-free polynomial and
/// encloses them with Gershgorin disks of the Weierstrass matrix
/// `diag(z) - W·1ᵀ`, whose eigenvalues are exactly the roots.
#[derive(Debug, Clone)]
pub struct RootEnclosure {
    monic: Poly,
    approx: Vec<ComplexRational>,
}

impl RootEnclosure {
    /// `p` must be square-free with degree at least 1.
    pub fn new(p: &Poly) -> Self {
        let monic = p.monic();
        let approx = approximate_roots(&monic).into_iter().map(|z| ComplexRational::from_f64(z, 60)).collect();
        Self { monic, approx }
    }

    fn eval(&self, z: &ComplexRational) -> ComplexRational {
        self.monic.coeffs.iter().rev().fold(ComplexRational::new(Rational::zero(), Rational::zero()), |acc, c| {
            let prod = acc.mul(z);
            ComplexRational::new(prod.re + c, prod.im)
        })
    }

    /// Weierstrass corrections `p(z_i) / Π_{j≠i} (z_i - z_j)`.
    fn corrections(&mut self, bits: u32) -> Vec<ComplexRational> {
        let d = self.approx.len();
        // keep approximations pairwise distinct
        for i in 0..d {
            while (0..i).any(|j| self.approx[j] == self.approx[i]) {
                let nudge = Rational::new(BigInt::one(), BigInt::one() << (bits / 2).max(8));
                self.approx[i] = self.approx[i].add(&ComplexRational::new(nudge.clone(), nudge));
            }
        }
        (0..d)
            .map(|i| {
                let mut denom = ComplexRational::new(Rational::one(), Rational::zero());
                for j in 0..d {
                    if j != i {
                        denom = denom.mul(&self.approx[i].sub(&self.approx[j]));
                    }
                }
                self.eval(&self.approx[i]).div(&denom)
            })
            .collect()
    }

    /// Runs Weierstrass iterations at working precision `bits`.
    pub fn refine(&mut self, bits: u32) {
        let target = Rational::new(BigInt::one(), BigInt::one() << (2 * bits));
        let mut previous: Option<Rational> = None;
        for _ in 0..200 {
            let w = self.corrections(bits);
            let size = w.iter().map(ComplexRational::norm_sqr).max().unwrap_or_else(Rational::zero);
            if size <= target || previous.as_ref().is_some_and(|p| size >= *p && size < Rational::one()) {
                break;
            }
            for (z, wi) in self.approx.iter_mut().zip(&w) {
                *z = z.sub(wi).round(bits);
            }
            previous = Some(size);
        }
    }

    /// Modulus bounds for every root, from the Gershgorin components at the
    /// current approximations. `bits` sets the accuracy of the square roots.
    pub fn moduli(&mut self, bits: u32) -> Vec<ModulusBounds> {
        let d = self.approx.len();
        let w = self.corrections(bits);
        let spread = Rational::from_integer((d as i64 - 1).into());
        let centers: Vec<ComplexRational> = self.approx.iter().zip(&w).map(|(z, wi)| z.sub(wi)).collect();
        let radii: Vec<Rational> = w.iter().map(|wi| sqrt_upper(&(&spread * &spread * wi.norm_sqr()), bits + 8)).collect();
        // union-find over overlapping disks
        let mut parent: Vec<usize> = (0..d).collect();
        fn root(parent: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while parent[r] != r {
                r = parent[r];
            }
            parent[i] = r;
            r
        }
        for i in 0..d {
            for j in i + 1..d {
                let gap = centers[i].sub(&centers[j]).norm_sqr();
                let reach = &radii[i] + &radii[j];
                if gap <= &reach * &reach {
                    let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
        let disk: Vec<ModulusBounds> = (0..d)
            .map(|i| {
                let n2 = centers[i].norm_sqr();
                let lo = sqrt_lower(&n2, bits + 8) - &radii[i];
                ModulusBounds {
                    lo: if lo.is_negative() { Rational::zero() } else { lo },
                    hi: sqrt_upper(&n2, bits + 8) + &radii[i],
                }
            })
            .collect();
        (0..d)
            .map(|i| {
                let r = root(&mut parent, i);
                let members: Vec<usize> = (0..d).filter(|&j| root(&mut parent, j) == r).collect();
                ModulusBounds {
                    lo: members.iter().map(|&j| disk[j].lo.clone()).min().unwrap(),
                    hi: members.iter().map(|&j| disk[j].hi.clone()).max().unwrap(),
                }
            })
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.approx.len()
    }

    /// `|p(0)|` for the monic polynomial: the product of all root moduli.
    pub fn modulus_product(&self) -> Rational {
        self.monic.coeffs[0].abs()
    }

    pub fn approximations(&self) -> Vec<Complex64> {
        self.approx.iter().map(|z| Complex64::new(to_f64(&z.re), to_f64(&z.im))).collect()
    }
}
