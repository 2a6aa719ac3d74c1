//! Canonical multivariate polynomials over the rationals.
//!
//! Polynomials live in the variables `k1, ..., km, x` where `m` is the
//! polynomial's *arity* (the number of `k`-variables). Terms are kept in a
//! canonical sparse form: a map from monomials to nonzero rational
//! coefficients, ordered graded-lexicographically with `x` taking priority
//! over `k1`, which takes priority over `k2`, and so on. Two polynomials are
//! equal exactly when their term maps are equal.
//!
//! The text form is a sum of terms `c * k1^a * k2^b * x^d` with `c` printed
//! as `num/den`, terms in descending canonical order. [`parse_poly`] accepts
//! that form plus parenthesized products, so factored expressions round-trip
//! through the same canonical representation.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int_binomial, rat_int, Rational};

/// A variable: `x` or one of the 1-based `k`-variables.
///
/// The derived order (`X < K(1) < K(2) < ...`) is the lexicographic priority
/// used by the canonical term order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarId {
    X,
    K(u32),
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::X => write!(f, "x"),
            VarId::K(i) => write!(f, "k{i}"),
        }
    }
}

/// A power product of variables. Zero exponents are never stored, so the
/// empty monomial is the constant `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    entries: Vec<(VarId, u32)>, // sorted by VarId, exponents > 0
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: VarId, exp: u32) -> Self {
        let mut m = Monomial::one();
        m.set_exponent(v, exp);
        m
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.entries
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    fn set_exponent(&mut self, v: VarId, exp: u32) {
        match self.entries.binary_search_by_key(&v, |(w, _)| *w) {
            Ok(pos) => {
                if exp == 0 {
                    self.entries.remove(pos);
                } else {
                    self.entries[pos].1 = exp;
                }
            }
            Err(pos) => {
                if exp != 0 {
                    self.entries.insert(pos, (v, exp));
                }
            }
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.entries.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (v, e) in &other.entries {
            let cur = out.exponent(*v);
            out.set_exponent(*v, cur + e);
        }
        out
    }

    /// Splits off the power of `v`: returns (exponent, monomial without `v`).
    pub fn split_var(&self, v: VarId) -> (u32, Monomial) {
        let e = self.exponent(v);
        let mut rest = self.clone();
        rest.set_exponent(v, 0);
        (e, rest)
    }

    pub fn vars(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        self.entries.iter().copied()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Lexicographic tie-break: walk both entry lists in variable order;
        // a higher exponent on an earlier variable wins.
        let mut a = self.entries.iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => {
                    if va == vb {
                        match ea.cmp(eb) {
                            Ordering::Equal => {
                                a.next();
                                b.next();
                            }
                            ord => return ord,
                        }
                    } else if va < vb {
                        // `self` has a positive exponent on an earlier
                        // variable than `other` does.
                        return Ordering::Greater;
                    } else {
                        return Ordering::Less;
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical multivariate polynomial over [`Rational`] in `k1..km, x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    arity: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(arity: u32) -> Self {
        MultiPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: u32) -> Self {
        Self::constant(arity, Rational::one())
    }

    pub fn constant(arity: u32, c: Rational) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn variable(arity: u32, v: VarId) -> Result<Self> {
        Self::check_var(arity, v)?;
        let mut p = Self::zero(arity);
        p.add_term(Monomial::var(v, 1), Rational::one());
        Ok(p)
    }

    /// Builds a polynomial from raw terms, merging duplicates and dropping
    /// zero coefficients.
    pub fn from_terms(arity: u32, terms: Vec<(Monomial, Rational)>) -> Result<Self> {
        let mut p = Self::zero(arity);
        for (m, c) in terms {
            for (v, _) in m.vars() {
                Self::check_var(arity, v)?;
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn check_var(arity: u32, v: VarId) -> Result<()> {
        match v {
            VarId::X => Ok(()),
            VarId::K(i) if i >= 1 && i <= arity => Ok(()),
            VarId::K(i) => Err(Error::InvalidInput(format!(
                "variable k{i} out of range for arity {arity}"
            ))),
        }
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &MultiPoly) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                left: self.arity as usize,
                right: other.arity as usize,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(&rat_int(-1))
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        let mut out = MultiPoly::zero(self.arity);
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            out.terms.insert(m.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_arity(other)?;
        let mut out = MultiPoly::zero(self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = MultiPoly::one(self.arity);
        for _ in 0..e {
            out = out.mul(self).expect("same arity");
        }
        out
    }

    /// Exact evaluation. The point must assign every variable that occurs.
    pub fn eval(&self, point: &BTreeMap<VarId, Rational>) -> Result<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m.vars() {
                let val = point.get(&v).ok_or_else(|| {
                    Error::InvalidInput(format!("missing assignment for variable {v}"))
                })?;
                term *= rational_pow(val, e);
            }
            total += term;
        }
        Ok(total)
    }

    /// Evaluation at integer `x` and integer `k`-values (all `k1..km` must
    /// be supplied).
    pub fn eval_ints(&self, x: i64, ks: &[i64]) -> Result<Rational> {
        if ks.len() != self.arity as usize {
            return Err(Error::InvalidInput(format!(
                "expected {} k-values, got {}",
                self.arity,
                ks.len()
            )));
        }
        let mut point = BTreeMap::new();
        point.insert(VarId::X, rat_int(x));
        for (i, k) in ks.iter().enumerate() {
            point.insert(VarId::K(i as u32 + 1), rat_int(*k));
        }
        self.eval(&point)
    }

    /// Replaces `v` by `v + t` (`t` may be negative).
    pub fn shift(&self, v: VarId, t: i64) -> Result<MultiPoly> {
        Self::check_var(self.arity, v)?;
        if t == 0 {
            return Ok(self.clone());
        }
        let tq = rat_int(t);
        let mut out = MultiPoly::zero(self.arity);
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            // (v + t)^e = sum_u C(e, u) t^(e-u) v^u
            let mut tpow = Rational::one();
            for u in (0..=e).rev() {
                let coeff = Rational::from_integer(int_binomial(e as i64, u)) * &tpow * c;
                out.add_term(rest.mul(&Monomial::var(v, u)), coeff);
                tpow *= &tq;
            }
        }
        Ok(out)
    }

    /// Simultaneously replaces `k_i` by `k_i + offsets[i-1]` for all `i`.
    pub fn shift_ks(&self, offsets: &[i64]) -> Result<MultiPoly> {
        if offsets.len() != self.arity as usize {
            return Err(Error::InvalidInput(format!(
                "expected {} offsets, got {}",
                self.arity,
                offsets.len()
            )));
        }
        let mut out = self.clone();
        for (i, t) in offsets.iter().enumerate() {
            if *t != 0 {
                out = out.shift(VarId::K(i as u32 + 1), *t)?;
            }
        }
        Ok(out)
    }

    /// Replaces every occurrence of `v` by the affine form `form`
    /// (a polynomial of total degree at most one, same arity).
    pub fn substitute_linear(&self, v: VarId, form: &MultiPoly) -> Result<MultiPoly> {
        Self::check_var(self.arity, v)?;
        self.check_arity(form)?;
        if form.total_degree() > 1 {
            return Err(Error::InvalidInput(
                "substitution form must be affine (total degree <= 1)".into(),
            ));
        }
        let max_e = self
            .terms
            .keys()
            .map(|m| m.exponent(v))
            .max()
            .unwrap_or(0);
        let mut powers = Vec::with_capacity(max_e as usize + 1);
        powers.push(MultiPoly::one(self.arity));
        for e in 1..=max_e {
            let prev = &powers[e as usize - 1];
            powers.push(prev.mul(form)?);
        }
        let mut out = MultiPoly::zero(self.arity);
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            for (pm, pc) in &powers[e as usize].terms {
                out.add_term(rest.mul(pm), pc * c);
            }
        }
        Ok(out)
    }

    /// Exchanges the variables `k_i` and `k_j`.
    pub fn swap_k(&self, i: u32, j: u32) -> Result<MultiPoly> {
        Self::check_var(self.arity, VarId::K(i))?;
        Self::check_var(self.arity, VarId::K(j))?;
        if i == j {
            return Err(Error::InvalidInput("swap indices must differ".into()));
        }
        let mut out = MultiPoly::zero(self.arity);
        for (m, c) in &self.terms {
            let ei = m.exponent(VarId::K(i));
            let ej = m.exponent(VarId::K(j));
            let mut nm = m.clone();
            nm.set_exponent(VarId::K(i), ej);
            nm.set_exponent(VarId::K(j), ei);
            out.add_term(nm, c.clone());
        }
        Ok(out)
    }

    /// Maximum exponent of `v`; `-1` for the zero polynomial.
    pub fn degree_in(&self, v: VarId) -> i64 {
        self.terms
            .keys()
            .map(|m| m.exponent(v) as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Maximum total degree; `-1` for the zero polynomial.
    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| m.total_degree() as i64)
            .max()
            .unwrap_or(-1)
    }

    /// The coefficient of `v^e`, as a polynomial in the remaining variables.
    pub fn coefficient_of(&self, v: VarId, e: u32) -> MultiPoly {
        let mut out = MultiPoly::zero(self.arity);
        for (m, c) in &self.terms {
            if m.exponent(v) == e {
                let (_, rest) = m.split_var(v);
                out.add_term(rest, c.clone());
            }
        }
        out
    }
}

fn rational_pow(r: &Rational, e: u32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..e {
        out *= r;
    }
    out
}

// Operator sugar for internal code where equal arity is structural; these
// panic on arity mismatch, unlike the checked methods.
impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        MultiPoly::add(self, rhs).expect("arity mismatch in +")
    }
}

impl std::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        MultiPoly::sub(self, rhs).expect("arity mismatch in -")
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        MultiPoly::mul(self, rhs).expect("arity mismatch in *")
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly::neg(self)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.numer().is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.total_degree() == 0 {
                factors.push(abs.to_string());
            }
            // k-variables in ascending index, then x.
            let mut x_part = None;
            for (v, e) in m.vars() {
                let s = if e == 1 {
                    v.to_string()
                } else {
                    format!("{v}^{e}")
                };
                match v {
                    VarId::X => x_part = Some(s),
                    VarId::K(_) => factors.push(s),
                }
            }
            if let Some(s) = x_part {
                factors.push(s);
            }
            write!(f, "{}", factors.join(" * "))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(num_bigint::BigInt),
    Var(VarId),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: num_bigint::BigInt = s[start..i]
                    .parse()
                    .map_err(|_| Error::InvalidInput("bad integer literal".into()))?;
                out.push(Token::Num(n));
            }
            'x' => {
                out.push(Token::Var(VarId::X));
                i += 1;
            }
            'k' => {
                i += 1;
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(Error::InvalidInput("'k' must be followed by an index".into()));
                }
                let idx: u32 = s[start..i]
                    .parse()
                    .map_err(|_| Error::InvalidInput("bad k-variable index".into()))?;
                if idx == 0 {
                    return Err(Error::InvalidInput("k-variable indices are 1-based".into()));
                }
                out.push(Token::Var(VarId::K(idx)));
            }
            _ => {
                return Err(Error::InvalidInput(format!(
                    "unexpected character '{c}' in polynomial text"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    arity: u32,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse_expr(&mut self) -> Result<MultiPoly> {
        let mut sign = 1i64;
        while let Some(t) = self.peek() {
            match t {
                Token::Plus => {
                    self.pos += 1;
                }
                Token::Minus => {
                    sign = -sign;
                    self.pos += 1;
                }
                _ => break,
            }
        }
        let mut acc = self.parse_term()?.scale(&rat_int(sign));
        while let Some(t) = self.peek() {
            let sign = match t {
                Token::Plus => 1,
                Token::Minus => -1,
                _ => break,
            };
            self.pos += 1;
            let term = self.parse_term()?;
            acc = acc.add(&term.scale(&rat_int(sign)))?;
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.parse_factor()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            let f = self.parse_factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<MultiPoly> {
        let base = self.parse_atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Token::Num(e)) => {
                    let e: u32 = e
                        .try_into()
                        .map_err(|_| Error::InvalidInput("exponent out of range".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(Error::InvalidInput("expected exponent after '^'".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn parse_atom(&mut self) -> Result<MultiPoly> {
        match self.next() {
            Some(Token::Num(n)) => {
                // Optional `/ den` makes a rational constant.
                if self.peek() == Some(&Token::Slash) {
                    self.pos += 1;
                    match self.next() {
                        Some(Token::Num(d)) if !d.is_zero() => Ok(MultiPoly::constant(
                            self.arity,
                            Rational::new(n, d),
                        )),
                        _ => Err(Error::InvalidInput("expected nonzero denominator".into())),
                    }
                } else {
                    Ok(MultiPoly::constant(self.arity, Rational::from_integer(n)))
                }
            }
            Some(Token::Var(v)) => MultiPoly::variable(self.arity, v),
            Some(Token::LParen) => {
                let inner = self.parse_expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::InvalidInput("expected ')'".into())),
                }
            }
            other => Err(Error::InvalidInput(format!(
                "unexpected token {other:?} in polynomial text"
            ))),
        }
    }
}

/// Parses the text form produced by [`MultiPoly`]'s `Display`, plus
/// parenthesized sums and products of them.
pub fn parse_poly(s: &str, arity: u32) -> Result<MultiPoly> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(Error::InvalidInput("empty polynomial text".into()));
    }
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        arity,
    };
    let p = parser.parse_expr()?;
    if parser.pos != tokens.len() {
        return Err(Error::InvalidInput("trailing tokens in polynomial text".into()));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn kvar(arity: u32, i: u32) -> MultiPoly {
        MultiPoly::variable(arity, VarId::K(i)).unwrap()
    }

    fn xvar(arity: u32) -> MultiPoly {
        MultiPoly::variable(arity, VarId::X).unwrap()
    }

    #[test]
    fn add_cancels() {
        // (k1 + x) + (x - k1) = 2x
        let a = &kvar(1, 1) + &xvar(1);
        let b = &xvar(1) - &kvar(1, 1);
        let sum = &a + &b;
        assert_eq!(sum, xvar(1).scale(&rat_int(2)));
    }

    #[test]
    fn add_identity_and_inverse() {
        let p = &kvar(2, 2) - &kvar(2, 1);
        assert_eq!(p.add(&MultiPoly::zero(2)).unwrap(), p);
        let q = &kvar(2, 1) - &kvar(2, 2);
        assert!(p.add(&q).unwrap().is_zero());
    }

    #[test]
    fn mul_difference_of_squares() {
        let d = &kvar(2, 2) - &kvar(2, 1);
        let s = &kvar(2, 2) + &kvar(2, 1);
        let expect = &kvar(2, 2).pow(2) - &kvar(2, 1).pow(2);
        assert_eq!(&d * &s, expect);
    }

    #[test]
    fn mul_identity_and_annihilator() {
        let p = &(&kvar(2, 1) * &kvar(2, 2)) + &xvar(2);
        assert_eq!(p.mul(&MultiPoly::one(2)).unwrap(), p);
        assert!(p.mul(&MultiPoly::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let p = kvar(1, 1);
        let q = kvar(2, 1);
        assert!(matches!(p.add(&q), Err(Error::ArityMismatch { .. })));
        assert!(matches!(p.mul(&q), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn eval_gamma3_point() {
        // 1/2 (2x+2-k1-k2)(k2-k1+1) at (x,k1,k2)=(3,1,2) is 5
        let two_x = xvar(2).scale(&rat_int(2));
        let f1 = &(&two_x + &MultiPoly::constant(2, rat_int(2))) - &(&kvar(2, 1) + &kvar(2, 2));
        let f2 = &(&kvar(2, 2) - &kvar(2, 1)) + &MultiPoly::one(2);
        let p = (&f1 * &f2).scale(&rat(1, 2));
        assert_eq!(p.eval_ints(3, &[1, 2]).unwrap(), rat_int(5));
    }

    #[test]
    fn eval_linear_and_zero() {
        let p = &(&xvar(1) - &kvar(1, 1)) + &MultiPoly::one(1);
        assert_eq!(p.eval_ints(5, &[3]).unwrap(), rat_int(3));
        assert_eq!(MultiPoly::zero(1).eval_ints(9, &[4]).unwrap(), rat_int(0));
    }

    #[test]
    fn eval_missing_variable_errors() {
        let p = &xvar(1) + &kvar(1, 1);
        let mut point = BTreeMap::new();
        point.insert(VarId::X, rat_int(1));
        assert!(matches!(p.eval(&point), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn shift_binomial_expansion() {
        // shift(k1^2, k1, +1) = k1^2 + 2 k1 + 1
        let p = kvar(1, 1).pow(2);
        let shifted = p.shift(VarId::K(1), 1).unwrap();
        let expect = &(&p + &kvar(1, 1).scale(&rat_int(2))) + &MultiPoly::one(1);
        assert_eq!(shifted, expect);
    }

    #[test]
    fn shift_zero_and_negative() {
        let p = &(&xvar(1) - &kvar(1, 1)) + &MultiPoly::one(1);
        assert_eq!(p.shift(VarId::K(1), 0).unwrap(), p);
        // shift(x-k1+1, k1, -1) = x - k1 + 2
        let expect = &(&xvar(1) - &kvar(1, 1)) + &MultiPoly::constant(1, rat_int(2));
        assert_eq!(p.shift(VarId::K(1), -1).unwrap(), expect);
    }

    #[test]
    fn substitute_reflection() {
        // k2 -> 2x+2-k2 in (x+1-k2) gives (k2-x-1)
        let p = &(&xvar(2) + &MultiPoly::one(2)) - &kvar(2, 2);
        let form = &(&xvar(2).scale(&rat_int(2)) + &MultiPoly::constant(2, rat_int(2))) - &kvar(2, 2);
        let got = p.substitute_linear(VarId::K(2), &form).unwrap();
        let expect = &(&kvar(2, 2) - &xvar(2)) - &MultiPoly::one(2);
        assert_eq!(got, expect);
    }

    #[test]
    fn substitute_identity_form() {
        let p = &(&kvar(2, 1) * &kvar(2, 2)) + &xvar(2);
        let got = p.substitute_linear(VarId::K(1), &kvar(2, 1)).unwrap();
        assert_eq!(got, p);
    }

    #[test]
    fn substitute_rejects_nonlinear_form() {
        let p = kvar(1, 1);
        let form = kvar(1, 1).pow(2);
        assert!(matches!(
            p.substitute_linear(VarId::K(1), &form),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn degree_in_examples() {
        let p = &(&kvar(2, 1).pow(2) * &kvar(2, 2)) + &xvar(2);
        assert_eq!(p.degree_in(VarId::K(1)), 2);
        assert_eq!(MultiPoly::constant(1, rat_int(7)).degree_in(VarId::K(1)), 0);
        assert_eq!(MultiPoly::zero(1).degree_in(VarId::X), -1);
    }

    #[test]
    fn display_canonical_order() {
        let p = &(&xvar(1) - &kvar(1, 1)) + &MultiPoly::one(1);
        assert_eq!(p.to_string(), "x - k1 + 1");
        let q = &kvar(2, 1).scale(&rat(3, 2)) - &(&kvar(2, 2) * &xvar(2));
        assert_eq!(q.to_string(), "-k2 * x + 3/2 * k1");
    }

    #[test]
    fn parse_factored_expression() {
        let p = parse_poly("1/2 * (2*x + 2 - k1 - k2) * (k2 - k1 + 1)", 2).unwrap();
        assert_eq!(p.eval_ints(3, &[1, 2]).unwrap(), rat_int(5));
        assert_eq!(p.eval_ints(5, &[3, 4]).unwrap(), rat_int(5));
    }

    #[test]
    fn parse_rejects_out_of_range_variable() {
        assert!(parse_poly("k3 + 1", 2).is_err());
        assert!(parse_poly("", 2).is_err());
        assert!(parse_poly("x +", 1).is_err());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
    }

    fn small_poly(arity: u32) -> impl Strategy<Value = MultiPoly> {
        let var_count = arity as usize + 1;
        proptest::collection::vec(
            (
                proptest::collection::vec(0u32..=2, var_count),
                small_rational(),
            ),
            0..5,
        )
        .prop_map(move |terms| {
            let mut p = MultiPoly::zero(arity);
            for (exps, c) in terms {
                let mut m = Monomial::one();
                for (i, e) in exps.iter().enumerate() {
                    let v = if i == 0 { VarId::X } else { VarId::K(i as u32) };
                    m.set_exponent(v, *e);
                }
                p.add_term(m, c);
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(2), b in small_poly(2), c in small_poly(2)) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn shift_round_trip(p in small_poly(2), t in -4i64..=4) {
            let there = p.shift(VarId::K(1), t).unwrap();
            let back = there.shift(VarId::K(1), -t).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn shift_commutes_with_eval(p in small_poly(2), t in -3i64..=3,
                                    x in -4i64..=4, k1 in -4i64..=4, k2 in -4i64..=4) {
            let shifted = p.shift(VarId::K(2), t).unwrap();
            prop_assert_eq!(
                shifted.eval_ints(x, &[k1, k2]).unwrap(),
                p.eval_ints(x, &[k1, k2 + t]).unwrap()
            );
        }

        #[test]
        fn reflection_substitution_is_involutive(p in small_poly(2)) {
            // v -> 2x+2-v applied twice is the identity
            let form = &(&MultiPoly::variable(2, VarId::X).unwrap().scale(&rat_int(2))
                + &MultiPoly::constant(2, rat_int(2)))
                - &MultiPoly::variable(2, VarId::K(2)).unwrap();
            let once = p.substitute_linear(VarId::K(2), &form).unwrap();
            let twice = once.substitute_linear(VarId::K(2), &form).unwrap();
            prop_assert_eq!(twice, p);
        }

        #[test]
        fn display_parse_round_trip(p in small_poly(2)) {
            let text = p.to_string();
            let q = parse_poly(&text, 2).unwrap();
            prop_assert_eq!(q, p);
        }
    }
}
