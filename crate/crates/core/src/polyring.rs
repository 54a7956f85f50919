//! Exact sparse multivariate polynomials in the line parameters `t1..tL`,
//! the scale `s` and the oscillator frequency `W` (printed for Ω).
//!
//! Monomials are stored sparsely and ordered graded-lexicographically with
//! `t1 < t2 < ... < tL < s < W`. Coefficients are exact rationals: the
//! `(1 + t^2)/2` weights of the subset expansion make half-integers appear
//! in genuine results (the non-planar sunshine carries an overall `1/2`).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::json;
use thiserror::Error;

/// Exact rational number used for coefficients and evaluation points.
pub type Rat = BigRational;

/// Builds the rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("no value assigned to variable {0}")]
    MissingAssignment(Var),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("division by a non-constant or zero expression")]
    BadDivision,
}

/// A polynomial variable. The derived order is the ring's variable order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Line parameter `t_ℓ`, 1-based.
    T(u32),
    S,
    Omega,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::T(i) => write!(f, "t{i}"),
            Var::S => f.write_str("s"),
            Var::Omega => f.write_str("W"),
        }
    }
}

/// A power product, kept sorted by variable with no zero exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, exp)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i]
                        .1
                        .checked_add(b[j].1)
                        .unwrap_or_else(|| panic!("exponent overflow in {}", a[i].0));
                    out.push((a[i].0, e));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Drops the factor in `v`, returning the reduced monomial and the exponent.
    fn split_off(&self, v: Var) -> (Monomial, u32) {
        let mut rest = Vec::with_capacity(self.0.len());
        let mut e = 0;
        for &(w, k) in &self.0 {
            if w == v {
                e = k;
            } else {
                rest.push((w, k));
            }
        }
        (Monomial(rest), e)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order: total degree first, then exponents compared
    /// from the largest variable down.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (a.len(), b.len());
        while i > 0 && j > 0 {
            let (va, ea) = a[i - 1];
            let (vb, eb) = b[j - 1];
            match va.cmp(&vb) {
                Ordering::Greater => return Ordering::Greater,
                Ordering::Less => return Ordering::Less,
                Ordering::Equal => match ea.cmp(&eb) {
                    Ordering::Equal => {
                        i -= 1;
                        j -= 1;
                    }
                    o => return o,
                },
            }
        }
        (i > 0).cmp(&(j > 0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, &(v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial with exact rational coefficients. Zero coefficients are
/// never stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

/// Assignment of rational values to variables.
pub type Point = BTreeMap<Var, Rat>;

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(int(n))
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Rat::one(), Monomial::var(v, 1))
    }

    pub fn t(line: u32) -> Self {
        Poly::var(Var::T(line))
    }

    pub fn s() -> Self {
        Poly::var(Var::S)
    }

    pub fn omega() -> Self {
        Poly::var(Var::Omega)
    }

    pub fn term(c: Rat, m: Monomial) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_one() && c.is_one())
                .unwrap_or(false)
    }

    /// The value if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent(v)).max()
    }

    /// Variables occurring in the polynomial.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|&(v, _)| v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Coefficients of `v^0, v^1, ...` as polynomials in the other variables.
    pub fn coefficients_in(&self, v: Var) -> Vec<Poly> {
        let deg = self.degree_in(v).unwrap_or(0) as usize;
        let mut out = vec![Poly::zero(); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Exact evaluation. Every variable occurring in the polynomial must be
    /// assigned.
    pub fn eval(&self, point: &Point) -> Result<Rat, PolyError> {
        // Clears every denominator up front so the sum runs over integers;
        // reducing a rational per term dominates otherwise.
        let mut maxdeg: BTreeMap<Var, u32> = BTreeMap::new();
        let mut den = BigInt::one();
        for (m, c) in &self.terms {
            for &(x, e) in &m.0 {
                let d = maxdeg.entry(x).or_insert(0);
                *d = (*d).max(e);
            }
            den = num_integer::Integer::lcm(&den, c.denom());
        }
        let mut weights: BTreeMap<Var, Vec<BigInt>> = BTreeMap::new();
        let mut scale = den.clone();
        for (&x, &d) in &maxdeg {
            let v = point.get(&x).ok_or(PolyError::MissingAssignment(x))?;
            let w = (0..=d)
                .map(|e| num_traits::pow(v.numer().clone(), e as usize) * num_traits::pow(v.denom().clone(), (d - e) as usize))
                .collect();
            weights.insert(x, w);
            scale *= num_traits::pow(v.denom().clone(), d as usize);
        }
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut v = c.numer() * (&den / c.denom());
            let mut it = m.0.iter().peekable();
            for (x, w) in &weights {
                let e = match it.peek() {
                    Some(&&(y, e)) if y == *x => {
                        it.next();
                        e
                    }
                    _ => 0,
                };
                v *= &w[e as usize];
            }
            total += v;
        }
        Ok(Rat::new(total, scale))
    }

    /// Substitutes values for the assigned variables and keeps the others.
    pub fn eval_partial(&self, point: &Point) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(x, e) in &m.0 {
                match point.get(&x) {
                    Some(val) => coeff *= num_traits::pow::pow(val.clone(), e as usize),
                    None => rest.push((x, e)),
                }
            }
            out.add_term(Monomial(rest), coeff);
        }
        out
    }

    /// Renames line variables `t_i -> t_{perm(i)}`.
    pub fn rename_lines(&self, perm: impl Fn(u32) -> u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut fs: Vec<(Var, u32)> =
                m.0.iter()
                    .map(|&(v, e)| match v {
                        Var::T(i) => (Var::T(perm(i)), e),
                        other => (other, e),
                    })
                    .collect();
            fs.sort();
            out.add_term(Monomial(fs), c.clone());
        }
        out
    }

    /// Canonical text: terms in descending graded-lex order, variables printed
    /// `t1..tL, s, W`.
    pub fn canonical_string(&self) -> String {
        self.to_string()
    }

    /// JSON term list with dense exponent vectors over `(t1..tL, s, W)`.
    pub fn to_json(&self, num_lines: u32) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mut exps = vec![0u32; num_lines as usize + 2];
                for &(v, e) in &m.0 {
                    let idx = match v {
                        Var::T(i) => (i as usize).saturating_sub(1),
                        Var::S => num_lines as usize,
                        Var::Omega => num_lines as usize + 1,
                    };
                    if idx < exps.len() {
                        exps[idx] = e;
                    }
                }
                json!({ "exponents": exps, "coeff": c.to_string() })
            })
            .collect();
        serde_json::Value::Array(terms)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign<Poly> for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += rhs;
        self
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        let mut acc = Poly::zero();
        for p in iter {
            acc += p;
        }
        acc
    }
}

impl<'a> std::iter::Sum<&'a Poly> for Poly {
    fn sum<I: Iterator<Item = &'a Poly>>(iter: I) -> Poly {
        let mut acc = Poly::zero();
        for p in iter {
            acc += p;
        }
        acc
    }
}

impl std::iter::Product for Poly {
    fn product<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        let mut acc = Poly::one();
        for p in iter {
            acc = &acc * &p;
        }
        acc
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Poly {
        Poly::from_int(n)
    }
}

impl FromStr for Poly {
    type Err = PolyError;

    /// Parses canonical strings and general expressions built from rational
    /// literals, `t<k>`, `s`, `W` (or `Ω`), `+ - * / ^` and parentheses.
    /// Division is allowed by non-zero constants only.
    fn from_str(src: &str) -> Result<Poly, PolyError> {
        let mut p = Parser { src, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc += self.term()?;
            } else if self.eat('-') {
                let rhs = self.term()?;
                acc = &acc - &rhs;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = &acc * &rhs;
            } else if self.eat('/') {
                let rhs = self.unary()?;
                let c = rhs.as_constant().ok_or(PolyError::BadDivision)?;
                if c.is_zero() {
                    return Err(PolyError::BadDivision);
                }
                acc = acc.scale(&c.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, PolyError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, PolyError> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let n = self.integer()?;
            let e = n
                .to_u32()
                .ok_or_else(|| self.err("exponent out of range"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        self.src[start..self.pos]
            .parse::<BigInt>()
            .map_err(|_| self.err("bad integer"))
    }

    fn atom(&mut self) -> Result<Poly, PolyError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Poly::constant(Rat::from_integer(n)))
            }
            Some('t') => {
                self.bump();
                let n = self.integer()?;
                let i = n
                    .to_u32()
                    .filter(|&i| i > 0)
                    .ok_or_else(|| self.err("line index must be positive"))?;
                Ok(Poly::t(i))
            }
            Some('s') => {
                self.bump();
                Ok(Poly::s())
            }
            Some('W') | Some('Ω') => {
                self.bump();
                Ok(Poly::omega())
            }
            _ => Err(self.err("unexpected character")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = &(Poly::omega() - Poly::one()) * &(Poly::omega() + Poly::one());
        assert_eq!(a, p("W^2 - 1"));
        assert_eq!(a.to_string(), "W^2 - 1");
    }

    #[test]
    fn binomial_square() {
        let a = (Poly::t(1) + Poly::t(2)).pow(2);
        assert_eq!(a, p("t1^2 + 2*t1*t2 + t2^2"));
    }

    #[test]
    fn zero_renders_as_zero() {
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(p("t1 - t1"), Poly::zero());
        assert_eq!(p("t1 - t1").num_terms(), 0);
    }

    #[test]
    fn grlex_order_puts_w_above_s_above_lines() {
        let q = p("t1^2 + t2 + s + W + 1");
        assert_eq!(q.to_string(), "t1^2 + W + s + t2 + 1");
        let r = p("t1*W + t2^2");
        assert_eq!(r.to_string(), "t1*W + t2^2");
    }

    #[test]
    fn rational_coefficients_round_trip() {
        let q = p("1/2*s^2 - 3/4*t1*t3 + 2");
        assert_eq!(q.to_string(), "1/2*s^2 - 3/4*t1*t3 + 2");
        assert_eq!(p(&q.to_string()), q);
    }

    #[test]
    fn unicode_omega_accepted() {
        assert_eq!(p("Ω^2-1"), p("W^2 - 1"));
    }

    #[test]
    fn eval_examples() {
        let mut pt = Point::new();
        pt.insert(Var::Omega, int(1));
        assert_eq!(p("W^2 - 1").eval(&pt).unwrap(), int(0));
        let mut pt = Point::new();
        pt.insert(Var::T(1), rat(1, 2));
        pt.insert(Var::T(2), rat(1, 3));
        assert_eq!(p("t1*t2").eval(&pt).unwrap(), rat(1, 6));
    }

    #[test]
    fn eval_missing_variable_is_error() {
        let pt = Point::new();
        assert_eq!(
            p("t1 + 1").eval(&pt),
            Err(PolyError::MissingAssignment(Var::T(1)))
        );
    }

    #[test]
    fn bubble_factored_form_expands() {
        let f = p("2*s^2*(t1+t2+t1^2*t2+t1*t2^2)*(W-1)^2");
        let g = p("2*s^2*(t1 + t2)*(1 + t1*t2)*(W^2 - 2*W + 1)");
        assert_eq!(f, g);
        assert_eq!(f.num_terms(), 12);
    }

    #[test]
    fn coefficients_in_omega() {
        let q = p("8*(W+1)*(W-1)^2");
        let cs = q.coefficients_in(Var::Omega);
        let cs: Vec<Rat> = cs.iter().map(|c| c.as_constant().unwrap()).collect();
        assert_eq!(cs, vec![int(8), int(-8), int(-8), int(8)]);
    }

    #[test]
    fn division_by_variable_rejected() {
        assert_eq!("t1/t2".parse::<Poly>(), Err(PolyError::BadDivision));
        assert_eq!("t1/0".parse::<Poly>(), Err(PolyError::BadDivision));
    }

    #[test]
    fn json_export_uses_dense_exponents() {
        let q = p("3*t2*s^2*W");
        let j = q.to_json(2);
        assert_eq!(j[0]["exponents"], json!([0, 1, 2, 1]));
        assert_eq!(j[0]["coeff"], "3");
    }
}
