//! Truncated Laurent series in `q` with exact rational coefficients.
//!
//! A [`LaurentSeries`] stores the coefficients of `q^min_deg, q^(min_deg+1), ...`
//! together with `valid_to`, the highest exponent at which the stored data is
//! known to be correct. `valid_to == None` marks an exact Laurent polynomial.
//! Arithmetic propagates windows conservatively and never reports a
//! coefficient past the window of its inputs.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Number of stored coefficients used when nothing else is requested.
pub const DEFAULT_PRECISION: usize = 64;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse {
        line: 0,
        column: 0,
        message: format!("invalid rational `{s}`"),
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[derive(Clone, Debug)]
pub struct LaurentSeries {
    min_deg: i64,
    coeffs: Vec<Rational>,
    valid_to: Option<i64>,
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl LaurentSeries {
    /// Builds a series from raw parts, dropping coefficients beyond `valid_to`
    /// and normalizing leading/trailing zeros.
    pub fn from_parts(min_deg: i64, coeffs: Vec<Rational>, valid_to: Option<i64>) -> Self {
        let mut s = LaurentSeries {
            min_deg,
            coeffs,
            valid_to,
        };
        s.normalize();
        s
    }

    pub fn exact(min_deg: i64, coeffs: Vec<Rational>) -> Self {
        Self::from_parts(min_deg, coeffs, None)
    }

    pub fn from_ints(min_deg: i64, coeffs: &[i64]) -> Self {
        Self::exact(min_deg, coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        LaurentSeries {
            min_deg: 0,
            coeffs: Vec::new(),
            valid_to: None,
        }
    }

    /// The zero series known only up to `valid_to`, i.e. `O(q^(valid_to+1))`.
    pub fn zero_upto(valid_to: i64) -> Self {
        LaurentSeries {
            min_deg: 0,
            coeffs: Vec::new(),
            valid_to: Some(valid_to),
        }
    }

    pub fn one() -> Self {
        Self::monomial(0, rat(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(deg: i64, c: Rational) -> Self {
        Self::exact(deg, vec![c])
    }

    /// `q^deg`
    pub fn q_pow(deg: i64) -> Self {
        Self::monomial(deg, rat(1))
    }

    fn normalize(&mut self) {
        if let Some(v) = self.valid_to {
            let keep = (v - self.min_deg + 1).max(0) as usize;
            if self.coeffs.len() > keep {
                self.coeffs.truncate(keep);
            }
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.min_deg = 0;
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_deg += lead as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.valid_to.is_none()
    }

    /// Lowest exponent with a nonzero coefficient; `None` for the zero series.
    pub fn min_deg(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.min_deg)
    }

    /// Highest stored exponent.
    pub fn max_deg(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.min_deg + self.coeffs.len() as i64 - 1)
    }

    pub fn valid_to(&self) -> Option<i64> {
        self.valid_to
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Exponent from which the series may be nonzero. For a truncated zero
    /// series this is the first exponent beyond its window.
    fn order(&self) -> Option<i64> {
        if self.is_zero() {
            self.valid_to.map(|v| v + 1)
        } else {
            Some(self.min_deg)
        }
    }

    pub fn coeff(&self, deg: i64) -> Rational {
        if self.is_zero() || deg < self.min_deg {
            return Rational::zero();
        }
        self.coeffs
            .get((deg - self.min_deg) as usize)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.min_deg + i as i64, c))
    }

    /// Number of coefficients that are known beyond the lowest nonzero one,
    /// counting that one; `None` when exact or zero.
    pub fn relative_precision(&self) -> Option<i64> {
        match (self.valid_to, self.min_deg()) {
            (Some(v), Some(m)) => Some(v - m + 1),
            _ => None,
        }
    }

    /// Drops every coefficient above `deg` and caps the window there.
    pub fn truncate(&self, deg: i64) -> Self {
        Self::from_parts(
            self.min_deg,
            self.coeffs.clone(),
            min_opt(self.valid_to, Some(deg)),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return match self.order() {
                Some(o) if self.valid_to.is_some() => Self::zero_upto(o - 1),
                _ => Self::zero(),
            };
        }
        LaurentSeries {
            min_deg: self.min_deg,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            valid_to: self.valid_to,
        }
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            min_deg: if self.is_zero() { 0 } else { self.min_deg + k },
            coeffs: self.coeffs.clone(),
            valid_to: self.valid_to.map(|v| v + k),
        }
    }

    /// Equality tested only up to the smaller of the two windows.
    pub fn eq_upto(&self, other: &Self) -> bool {
        let window = min_opt(self.valid_to, other.valid_to);
        let lo = match (self.min_deg(), other.min_deg()) {
            (None, None) => return true,
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.min(b),
        };
        let hi = [self.max_deg(), other.max_deg()]
            .into_iter()
            .flatten()
            .max()
            .unwrap_or(lo);
        let hi = match window {
            Some(w) => hi.min(w),
            None => hi,
        };
        (lo..=hi).all(|d| self.coeff(d) == other.coeff(d))
    }

    /// Highest exponent where both series are known.
    pub fn common_window(&self, other: &Self) -> Option<i64> {
        min_opt(self.valid_to, other.valid_to)
    }

    /// Inverse in the Laurent series ring. For exact input the result keeps
    /// `precision` coefficients; for truncated input the relative precision of
    /// the input bounds the result as well.
    pub fn invert(&self, precision: usize) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = self.min_deg;
        let mut n = precision.max(1) as i64;
        if let Some(v) = self.valid_to {
            n = n.min(v - m + 1);
        }
        let n = n as usize;
        let a0_inv = self.coeffs[0].recip();
        let mut b: Vec<Rational> = Vec::with_capacity(n);
        b.push(a0_inv.clone());
        for i in 1..n {
            let mut acc = Rational::zero();
            for j in 1..=i.min(self.coeffs.len() - 1) {
                acc += &self.coeffs[j] * &b[i - j];
            }
            b.push(-(acc * &a0_inv));
        }
        Ok(Self::from_parts(-m, b, Some(-m + n as i64 - 1)))
    }

    /// Exact division of Laurent polynomials. Fails when the divisor does not
    /// divide or when either side is truncated.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !self.is_exact() || !divisor.is_exact() {
            return Err(Error::Inexact("exact division of truncated series".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let dlen = divisor.coeffs.len();
        let mut rem = self.coeffs.clone();
        if rem.len() < dlen {
            return Err(Error::Inexact("divisor has larger span".into()));
        }
        let qlen = rem.len() - dlen + 1;
        let mut quot = vec![Rational::zero(); qlen];
        let lead_inv = divisor.coeffs[0].recip();
        for i in 0..qlen {
            if rem[i].is_zero() {
                continue;
            }
            let c = &rem[i] * &lead_inv;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            quot[i] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::Inexact("nonzero remainder in exact division".into()));
        }
        Ok(Self::exact(self.min_deg - divisor.min_deg, quot))
    }

    /// `q ↦ q^{-1}` on an exact Laurent polynomial.
    pub fn bar(&self) -> Result<Self> {
        if !self.is_exact() {
            return Err(Error::Inexact("q -> 1/q on a truncated series".into()));
        }
        match self.max_deg() {
            None => Ok(Self::zero()),
            Some(top) => {
                let mut c = self.coeffs.clone();
                c.reverse();
                Ok(Self::exact(-top, c))
            }
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Coefficients as machine integers when every stored coefficient is one.
    pub fn integer_coeffs(&self) -> Option<Vec<(i64, i64)>> {
        self.terms()
            .map(|(d, c)| {
                c.is_integer()
                    .then(|| c.to_integer().to_i64())
                    .flatten()
                    .map(|c| (d, c))
            })
            .collect()
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            min_deg: self.min_deg,
            valid_to: self.valid_to,
            coeffs: self.coeffs.iter().map(format_rational).collect(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts(j.min_deg, coeffs, j.valid_to))
    }
}

/// Wire form of a series: `{"min_deg": int, "valid_to": int|null, "coeffs": ["p/q", ...]}`.
/// `valid_to` is `null` for exact Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub min_deg: i64,
    pub valid_to: Option<i64>,
    pub coeffs: Vec<String>,
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        self.valid_to == other.valid_to
            && self.coeffs == other.coeffs
            && (self.is_zero() || self.min_deg == other.min_deg)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.terms() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = abs.is_one();
            match (d, unit) {
                (0, _) => write!(f, "{}", format_rational(&abs))?,
                (_, true) => write!(f, "q^{d}")?,
                (_, false) => write!(f, "{}*q^{d}", format_rational(&abs))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(v) = self.valid_to {
            write!(f, " + O(q^{})", v + 1)?;
        }
        Ok(())
    }
}

fn add_impl(a: &LaurentSeries, b: &LaurentSeries, negate_b: bool) -> LaurentSeries {
    let valid_to = min_opt(a.valid_to, b.valid_to);
    if a.is_zero() && b.is_zero() {
        return match valid_to {
            Some(v) => LaurentSeries::zero_upto(v),
            None => LaurentSeries::zero(),
        };
    }
    let lo = match (a.min_deg(), b.min_deg()) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => unreachable!(),
    };
    let hi = [a.max_deg(), b.max_deg()]
        .into_iter()
        .flatten()
        .max()
        .unwrap();
    let hi = match valid_to {
        Some(v) => hi.min(v),
        None => hi,
    };
    if hi < lo {
        return LaurentSeries::zero_upto(valid_to.unwrap());
    }
    let mut coeffs = vec![Rational::zero(); (hi - lo + 1) as usize];
    for (d, c) in a.terms() {
        if d <= hi {
            coeffs[(d - lo) as usize] += c;
        }
    }
    for (d, c) in b.terms() {
        if d <= hi {
            if negate_b {
                coeffs[(d - lo) as usize] -= c;
            } else {
                coeffs[(d - lo) as usize] += c;
            }
        }
    }
    LaurentSeries::from_parts(lo, coeffs, valid_to)
}

fn mul_impl(a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
    let valid_to = match (a.valid_to, b.valid_to, a.order(), b.order()) {
        (None, None, _, _) => None,
        (Some(va), None, _, Some(ob)) => Some(va + ob),
        (None, Some(vb), Some(oa), _) => Some(vb + oa),
        (Some(va), Some(vb), Some(oa), Some(ob)) => Some((va + ob).min(vb + oa)),
        // exact zero times anything is exactly zero
        _ => return LaurentSeries::zero(),
    };
    if a.is_zero() || b.is_zero() {
        return match valid_to {
            Some(v) => LaurentSeries::zero_upto(v),
            None => LaurentSeries::zero(),
        };
    }
    let lo = a.min_deg + b.min_deg;
    let mut len = a.coeffs.len() + b.coeffs.len() - 1;
    if let Some(v) = valid_to {
        len = len.min((v - lo + 1).max(0) as usize);
    }
    let mut coeffs = vec![Rational::zero(); len];
    for (i, x) in a.coeffs.iter().enumerate() {
        if i >= len || x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            if i + j >= len {
                break;
            }
            if !y.is_zero() {
                coeffs[i + j] += x * y;
            }
        }
    }
    LaurentSeries::from_parts(lo, coeffs, valid_to)
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        add_impl(self, rhs, false)
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        add_impl(self, rhs, true)
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        mul_impl(self, rhs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries {
            min_deg: self.min_deg,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            valid_to: self.valid_to,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: LaurentSeries) -> LaurentSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentSeries> for LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: &LaurentSeries) -> LaurentSeries {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        -&self
    }
}

/// `[k] = q^{k-1} + q^{k-3} + ... + q^{1-k}`
pub fn quantum_integer(k: u32) -> LaurentSeries {
    if k == 0 {
        return LaurentSeries::zero();
    }
    let k = k as i64;
    let mut coeffs = vec![Rational::zero(); (2 * k - 1) as usize];
    for i in (0..coeffs.len()).step_by(2) {
        coeffs[i] = rat(1);
    }
    LaurentSeries::exact(1 - k, coeffs)
}

pub fn quantum_factorial(k: u32) -> LaurentSeries {
    (1..=k).fold(LaurentSeries::one(), |acc, i| &acc * &quantum_integer(i))
}

/// Gaussian binomial `[n k] = [n]! / ([k]! [n-k]!)`, by exact division.
pub fn quantum_binomial(n: u32, k: u32) -> Result<LaurentSeries> {
    if k > n {
        return Err(Error::Domain(format!(
            "quantum binomial with k = {k} > n = {n}"
        )));
    }
    let denom = &quantum_factorial(k) * &quantum_factorial(n - k);
    quantum_factorial(n).div_exact(&denom)
}

/// Finitely supported polynomial in a homological variable `t` and `q`,
/// keyed by `(t exponent, q exponent)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BigradedPolynomial {
    terms: BTreeMap<(i64, i64), Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedTermJson {
    pub h: i64,
    pub q: i64,
    pub c: String,
}

impl BigradedPolynomial {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((i64, i64), Rational)>) -> Self {
        let mut p = Self::new();
        for ((h, q), c) in terms {
            p.add_term(h, q, c);
        }
        p
    }

    pub fn add_term(&mut self, h: i64, q: i64, c: Rational) {
        let e = self.terms.entry((h, q)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(h, q));
        }
    }

    pub fn coeff(&self, h: i64, q: i64) -> Rational {
        self.terms
            .get(&(h, q))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplication by `t^h q^d`.
    pub fn shift(&self, h: i64, d: i64) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(&(a, b), c)| ((a + h, b + d), c.clone())),
        )
    }

    /// Keeps the terms of homological degree at least `h_min`.
    pub fn restrict_h(&self, h_min: i64) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((h, _), _)| *h >= h_min)
                .map(|(k, c)| (*k, c.clone())),
        )
    }

    /// Substitutes a value for `t`, leaving a Laurent polynomial in `q`.
    pub fn eval_t(&self, t: i64) -> LaurentSeries {
        let t = rat(t);
        self.terms
            .iter()
            .fold(LaurentSeries::zero(), |acc, (&(h, q), c)| {
                let tp = if h >= 0 {
                    num_traits::pow(t.clone(), h as usize)
                } else {
                    num_traits::pow(t.recip(), (-h) as usize)
                };
                &acc + &LaurentSeries::monomial(q, c * tp)
            })
    }

    pub fn to_json(&self) -> Vec<BigradedTermJson> {
        self.terms
            .iter()
            .map(|(&(h, q), c)| BigradedTermJson {
                h,
                q,
                c: format_rational(c),
            })
            .collect()
    }

    pub fn from_json(terms: &[BigradedTermJson]) -> Result<Self> {
        let mut p = Self::new();
        for t in terms {
            p.add_term(t.h, t.q, parse_rational(&t.c)?);
        }
        Ok(p)
    }
}

impl Add for &BigradedPolynomial {
    type Output = BigradedPolynomial;
    fn add(self, rhs: &BigradedPolynomial) -> BigradedPolynomial {
        let mut out = self.clone();
        for (&(h, q), c) in &rhs.terms {
            out.add_term(h, q, c.clone());
        }
        out
    }
}

impl Mul for &BigradedPolynomial {
    type Output = BigradedPolynomial;
    fn mul(self, rhs: &BigradedPolynomial) -> BigradedPolynomial {
        let mut out = BigradedPolynomial::new();
        for (&(h1, q1), c1) in &self.terms {
            for (&(h2, q2), c2) in &rhs.terms {
                out.add_term(h1 + h2, q1 + q2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for BigradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(h, q), c)| format!("{}*t^{h}*q^{q}", format_rational(c)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Expansion of the bigraded Poincaré series
/// `q^2 t^2 + (1 + q^-2) + q^-6 t^-2 (1 + t^-1) / (1 - t^-2 q^-4)`
/// over all homological degrees `>= h_min`.
pub fn bigraded_expand_homofunknot(h_min: i64) -> BigradedPolynomial {
    let mut p = BigradedPolynomial::new();
    p.add_term(2, 2, rat(1));
    p.add_term(0, 0, rat(1));
    p.add_term(0, -2, rat(1));
    let mut j = 0;
    while -2 - 2 * j >= h_min {
        p.add_term(-2 - 2 * j, -6 - 4 * j, rat(1));
        if -3 - 2 * j >= h_min {
            p.add_term(-3 - 2 * j, -6 - 4 * j, rat(1));
        }
        j += 1;
    }
    p.restrict_h(h_min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(min: i64, c: &[i64]) -> LaurentSeries {
        LaurentSeries::from_ints(min, c)
    }

    #[test]
    fn quantum_integers() {
        assert_eq!(quantum_integer(2), s(-1, &[1, 0, 1]));
        assert_eq!(quantum_integer(1), LaurentSeries::one());
        assert_eq!(quantum_integer(3), s(-2, &[1, 0, 1, 0, 1]));
        assert!(quantum_integer(0).is_zero());
    }

    #[test]
    fn additions() {
        let two = quantum_integer(2);
        assert_eq!(&two + &LaurentSeries::zero(), two);
        assert!((&two + &(-&two)).is_zero());
        // [1] + [3] by hand
        assert_eq!(
            &quantum_integer(1) + &quantum_integer(3),
            s(-2, &[1, 0, 2, 0, 1])
        );
    }

    #[test]
    fn products() {
        let two = quantum_integer(2);
        assert_eq!(&two * &two, s(-2, &[1, 0, 2, 0, 1]));
        assert_eq!(&two * &LaurentSeries::one(), two);
        let p = &two * &quantum_integer(3);
        assert_eq!(p, s(-3, &[1, 0, 2, 0, 2, 0, 1]));
        assert_eq!(p, &quantum_integer(4) + &quantum_integer(2));
    }

    #[test]
    fn inverses() {
        let one_minus_q = s(0, &[1, -1]);
        let inv = one_minus_q.invert(10).unwrap();
        assert_eq!(inv, LaurentSeries::from_parts(0, vec![rat(1); 10], Some(9)));

        // 1/[2] = q - q^3 + q^5 - ...
        let inv2 = quantum_integer(2).invert(8).unwrap();
        assert_eq!(inv2.min_deg(), Some(1));
        assert_eq!(inv2.coeff(1), rat(1));
        assert_eq!(inv2.coeff(3), rat(-1));
        assert_eq!(inv2.coeff(5), rat(1));
        assert_eq!(inv2.coeff(2), rat(0));
        let prod = &inv2 * &quantum_integer(2);
        assert!(prod.eq_upto(&LaurentSeries::one()));
        assert_eq!(prod.valid_to(), Some(7));

        let q3 = LaurentSeries::q_pow(3).invert(5).unwrap();
        assert!(q3.eq_upto(&LaurentSeries::q_pow(-3)));
        assert_eq!(q3.min_deg(), Some(-3));

        assert!(matches!(
            LaurentSeries::zero().invert(4),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn shifted_expansion_of_inverse_two_is_off_by_q_squared() {
        // q^{-1}(1 - q^2 + q^4 - ...) times [2] gives q^{-2}, not 1.
        let shifted = LaurentSeries::from_parts(
            -1,
            (0..12)
                .map(|i| {
                    if i % 2 == 1 {
                        rat(0)
                    } else if i % 4 == 0 {
                        rat(1)
                    } else {
                        rat(-1)
                    }
                })
                .collect(),
            Some(10),
        );
        let prod = &shifted * &quantum_integer(2);
        assert!(prod.eq_upto(&LaurentSeries::q_pow(-2)));
        assert!(!prod.eq_upto(&LaurentSeries::one()));
    }

    #[test]
    fn binomials() {
        assert_eq!(
            quantum_binomial(4, 2).unwrap(),
            s(-4, &[1, 0, 1, 0, 2, 0, 1, 0, 1])
        );
        assert_eq!(quantum_binomial(5, 0).unwrap(), LaurentSeries::one());
        assert!(quantum_binomial(2, 3).is_err());
    }

    #[test]
    fn pascal_and_symmetry() {
        for n in 1..=8u32 {
            for k in 0..=n {
                let direct = quantum_binomial(n, k).unwrap();
                assert_eq!(direct, quantum_binomial(n, n - k).unwrap());
                if k >= 1 && k < n {
                    let a = &LaurentSeries::q_pow(k as i64) * &quantum_binomial(n - 1, k).unwrap();
                    let b = &LaurentSeries::q_pow(k as i64 - n as i64)
                        * &quantum_binomial(n - 1, k - 1).unwrap();
                    assert_eq!(&a + &b, direct, "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn truncated_zero_products() {
        let z = LaurentSeries::zero_upto(5);
        let p = &z * &LaurentSeries::q_pow(-2);
        assert!(p.is_zero());
        assert_eq!(p.valid_to(), Some(3));
        let sum = &LaurentSeries::q_pow(7) + &z;
        assert!(sum.is_zero());
        assert_eq!(sum.valid_to(), Some(5));
    }

    #[test]
    fn div_exact_rejects_remainders() {
        assert!(s(0, &[1, 1]).div_exact(&s(0, &[1, 0, 1])).is_err());
        assert_eq!(
            s(0, &[1, 0, -1]).div_exact(&s(0, &[1, 1])).unwrap(),
            s(0, &[1, -1])
        );
    }

    #[test]
    fn bar_inverts_q() {
        assert_eq!(s(-1, &[2, 0, 0, 5]).bar().unwrap(), s(-2, &[5, 0, 0, 2]));
    }

    #[test]
    fn json_round_trip() {
        let x = LaurentSeries::from_parts(-2, vec![rat(1), rat_frac(-1, 2), rat(3)], Some(4));
        let j = x.to_json();
        assert_eq!(j.coeffs, vec!["1", "-1/2", "3"]);
        let text = serde_json::to_string(&j).unwrap();
        let back: SeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(LaurentSeries::from_json(&back).unwrap(), x);
    }

    #[test]
    fn homofunknot_expansion() {
        let p0 = bigraded_expand_homofunknot(0);
        assert_eq!(
            p0,
            BigradedPolynomial::from_terms([((2, 2), rat(1)), ((0, 0), rat(1)), ((0, -2), rat(1))])
        );
        let p3 = bigraded_expand_homofunknot(-3);
        assert_eq!(p3.len(), 5);
        assert_eq!(p3.coeff(-2, -6), rat(1));
        assert_eq!(p3.coeff(-3, -6), rat(1));
        // t = -1: the tail telescopes away
        let at = bigraded_expand_homofunknot(-21).eval_t(-1);
        assert_eq!(at, s(-2, &[1, 0, 1, 0, 1]));
    }

    #[test]
    fn bigraded_json_round_trip() {
        let p = bigraded_expand_homofunknot(-5);
        let back = BigradedPolynomial::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }
}
