//! Shift-operator algebra.
//!
//! `E_i` shifts the variable `k_i` of a polynomial by one; `E_i^-1` shifts it
//! back; the difference operator is `D_i = E_i - id`. Since shifts in
//! distinct (and identical) variables commute, finite rational combinations
//! of shifts form a commutative Laurent-polynomial algebra with one symbol
//! per `k`-variable. [`ShiftOpExpr`] stores an element of that algebra as a
//! map from integer exponent vectors to nonzero rational coefficients; `x`
//! is never shifted.
//!
//! An operator whose expansion in the `D`-basis has nonzero constant term is
//! invertible over polynomials: the inverse power series can be truncated at
//! the degree of the target polynomial because `D_i^(d+1)` kills every
//! polynomial of degree at most `d` in `k_i`. [`ShiftOpExpr::invert_truncated`]
//! computes that truncated inverse.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::rational::{int_binomial, Rational};

/// An element of the commutative shift-operator algebra over `k1..km`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftOpExpr {
    arity: u32,
    terms: BTreeMap<Vec<i64>, Rational>,
}

impl ShiftOpExpr {
    pub fn zero(arity: u32) -> Self {
        ShiftOpExpr {
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// The identity operator.
    pub fn identity(arity: u32) -> Self {
        let mut op = Self::zero(arity);
        op.add_term(vec![0; arity as usize], Rational::one());
        op
    }

    /// The single shift `E_i^t` (1-based `i`; `t` may be negative).
    pub fn shift(arity: u32, i: u32, t: i64) -> Result<Self> {
        if i == 0 || i > arity {
            return Err(Error::InvalidInput(format!(
                "shift variable k{i} out of range for arity {arity}"
            )));
        }
        let mut exps = vec![0i64; arity as usize];
        exps[i as usize - 1] = t;
        let mut op = Self::zero(arity);
        op.add_term(exps, Rational::one());
        Ok(op)
    }

    /// `E_i`.
    pub fn e(arity: u32, i: u32) -> Result<Self> {
        Self::shift(arity, i, 1)
    }

    /// `E_i^-1`.
    pub fn e_inv(arity: u32, i: u32) -> Result<Self> {
        Self::shift(arity, i, -1)
    }

    /// Builds an operator from raw `(exponent vector, coefficient)` terms,
    /// merging duplicates and dropping zero coefficients.
    pub fn from_terms(arity: u32, terms: Vec<(Vec<i64>, Rational)>) -> Result<Self> {
        let mut op = Self::zero(arity);
        for (e, c) in terms {
            if e.len() != arity as usize {
                return Err(Error::InvalidInput(
                    "exponent vector length must equal arity".into(),
                ));
            }
            op.add_term(e, c);
        }
        Ok(op)
    }

    /// The difference operator `D_i = E_i - id`.
    pub fn delta(arity: u32, i: u32) -> Result<Self> {
        Self::e(arity, i)?.sub(&Self::identity(arity))
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_identity(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&vec![0; self.arity as usize])
                .is_some_and(|c| c.is_one())
    }

    fn add_term(&mut self, exps: Vec<i64>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
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

    fn check_arity(&self, other: &ShiftOpExpr) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                left: self.arity as usize,
                right: other.arity as usize,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ShiftOpExpr) -> Result<ShiftOpExpr> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ShiftOpExpr) -> Result<ShiftOpExpr> {
        self.add(&other.scale(&crate::rational::rat_int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> ShiftOpExpr {
        let mut out = ShiftOpExpr::zero(self.arity);
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            out.terms.insert(e.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &ShiftOpExpr) -> Result<ShiftOpExpr> {
        self.check_arity(other)?;
        let mut out = ShiftOpExpr::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let sum: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(sum, ca * cb);
            }
        }
        Ok(out)
    }

    /// Applies the operator to a polynomial: each term `c * E^j` contributes
    /// `c * p(k + j)`. The `x` variable is untouched.
    pub fn apply(&self, p: &MultiPoly) -> Result<MultiPoly> {
        if self.arity != p.arity() {
            return Err(Error::ArityMismatch {
                left: self.arity as usize,
                right: p.arity() as usize,
            });
        }
        let mut out = MultiPoly::zero(self.arity);
        for (exps, c) in &self.terms {
            let shifted = p.shift_ks(exps)?;
            out = out.add(&shifted.scale(c))?;
        }
        Ok(out)
    }

    /// Sum of all coefficients; this is the constant term of the operator's
    /// expansion in the difference-operator basis (set every `E_i = id + D_i`
    /// and read off the `D^0` coefficient).
    pub fn delta_constant_term(&self) -> Rational {
        let mut sum = Rational::zero();
        for c in self.terms.values() {
            sum += c;
        }
        sum
    }

    /// Negates the exponent of variable `i` in every term (the substitution
    /// `E_i -> E_i^-1`).
    pub fn mirror_var(&self, i: u32) -> Result<ShiftOpExpr> {
        if i == 0 || i > self.arity {
            return Err(Error::InvalidInput(format!(
                "variable k{i} out of range for arity {}",
                self.arity
            )));
        }
        let mut out = ShiftOpExpr::zero(self.arity);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[i as usize - 1] = -ne[i as usize - 1];
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Permutes the exponent-vector coordinates: coordinate `i` of the result
    /// is coordinate `perm[i]` of the input.
    pub fn permute_vars(&self, perm: &[usize]) -> Result<ShiftOpExpr> {
        if perm.len() != self.arity as usize {
            return Err(Error::InvalidInput("permutation length must equal arity".into()));
        }
        let mut out = ShiftOpExpr::zero(self.arity);
        for (e, c) in &self.terms {
            let ne: Vec<i64> = perm.iter().map(|&j| e[j]).collect();
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Truncated power-series inverse in the difference-operator basis.
    ///
    /// Writes the operator as a series in `D_1..D_m` truncated at degree `d`
    /// per variable, inverts it (the constant term must be nonzero) and
    /// converts the inverse back to shifts. The result `B` satisfies
    /// `A(B(p)) = B(A(p)) = p` exactly for every polynomial `p` of degree at
    /// most `d` in each `k_i`.
    pub fn invert_truncated(&self, d: u32) -> Result<ShiftOpExpr> {
        let m = self.arity as usize;
        // Variables actually shifted; the inverse stays inside their span.
        let active: Vec<usize> = (0..m)
            .filter(|i| self.terms.keys().any(|e| e[*i] != 0))
            .collect();
        let a = active.len();
        let width = d as usize + 1;
        let size = width.pow(a as u32);

        let decode = |mut idx: usize| -> Vec<usize> {
            let mut digits = vec![0usize; a];
            for slot in digits.iter_mut() {
                *slot = idx % width;
                idx /= width;
            }
            digits
        };
        let encode = |digits: &[usize]| -> usize {
            let mut idx = 0usize;
            for (pos, t) in digits.iter().enumerate().rev() {
                idx = idx * width + t;
                let _ = pos;
            }
            idx
        };

        // Expansion of self in the D-basis, truncated per-variable at d:
        // E_i^j = sum_t C(j, t) D_i^t.
        let mut acoef = vec![Rational::zero(); size];
        for (exps, c) in &self.terms {
            let rows: Vec<Vec<Rational>> = active
                .iter()
                .map(|&i| {
                    (0..width)
                        .map(|t| Rational::from_integer(int_binomial(exps[i], t as u32)))
                        .collect()
                })
                .collect();
            for (idx, slot) in acoef.iter_mut().enumerate() {
                let digits = decode(idx);
                let mut prod = c.clone();
                for (pos, t) in digits.iter().enumerate() {
                    prod *= &rows[pos][*t];
                    if prod.is_zero() {
                        break;
                    }
                }
                *slot += prod;
            }
        }

        if acoef[0].is_zero() {
            return Err(Error::NotInvertible(
                "zero constant term in the difference-operator basis".into(),
            ));
        }

        // Power-series inversion: b_0 = 1/a_0 and, for R != 0,
        // b_R = -(1/a_0) * sum_{0 < S <= R} a_S b_{R-S}.
        let a0_inv = Rational::one() / acoef[0].clone();
        let mut bcoef = vec![Rational::zero(); size];
        bcoef[0] = a0_inv.clone();
        for idx in 1..size {
            let digits = decode(idx);
            let mut acc = Rational::zero();
            // Iterate all S <= R componentwise, S != 0.
            let mut s = vec![0usize; a];
            loop {
                // advance mixed-radix counter s within bounds digits
                let mut pos = 0;
                loop {
                    if pos == a {
                        break;
                    }
                    if s[pos] < digits[pos] {
                        s[pos] += 1;
                        for slot in s.iter_mut().take(pos) {
                            *slot = 0;
                        }
                        break;
                    }
                    pos += 1;
                }
                if pos == a {
                    break; // counter wrapped: done
                }
                let s_idx = encode(&s);
                if !acoef[s_idx].is_zero() {
                    let rem: Vec<usize> = digits.iter().zip(&s).map(|(r, t)| r - t).collect();
                    let r_idx = encode(&rem);
                    if !bcoef[r_idx].is_zero() {
                        acc += &acoef[s_idx] * &bcoef[r_idx];
                    }
                }
            }
            if !acc.is_zero() {
                bcoef[idx] = -&a0_inv * acc;
            }
        }

        // Back to the shift basis: D_i^t = sum_u C(t, u) (-1)^(t-u) E_i^u.
        let mut out = ShiftOpExpr::zero(self.arity);
        for (idx, c) in bcoef.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let digits = decode(idx);
            let mut partial: Vec<(Vec<i64>, Rational)> =
                vec![(vec![0i64; m], c.clone())];
            for (pos, &t) in digits.iter().enumerate() {
                let var = active[pos];
                let mut next = Vec::with_capacity(partial.len() * (t + 1));
                for u in 0..=t {
                    let mut binom = Rational::from_integer(int_binomial(t as i64, u as u32));
                    if (t - u) % 2 == 1 {
                        binom = -binom;
                    }
                    for (e, pc) in &partial {
                        let mut ne = e.clone();
                        ne[var] = u as i64;
                        next.push((ne, pc * &binom));
                    }
                }
                partial = next;
            }
            for (e, pc) in partial {
                out.add_term(e, pc);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ShiftOpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, c) in self.terms.iter().rev() {
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
            let trivial = exps.iter().all(|e| *e == 0);
            if !abs.is_one() || trivial {
                factors.push(abs.to_string());
            }
            for (i, e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("E{}", i + 1)),
                    _ => factors.push(format!("E{}^{e}", i + 1)),
                }
            }
            write!(f, "{}", factors.join(" * "))?;
        }
        Ok(())
    }
}

/// Exchanges `k_i` and `k_j` in a polynomial (an involution).
pub fn swap_vars(p: &MultiPoly, i: u32, j: u32) -> Result<MultiPoly> {
    p.swap_k(i, j)
}

/// The named operator families, each a product over variable pairs
/// `1 <= p < q <= m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    /// `E_p (E_p^-1 + E_q^-1 - id)(E_p^-1 + E_q - id)`: maps the reflective
    /// base product to the strict-row count polynomial gamma.
    GammaFromBase,
    /// `(id + E_q D_p)^-1 E_p (id + E_q^-1 D_p)^-1`: the same map written
    /// with truncated operator inverses; requires a degree bound.
    GammaFromBaseInverse,
    /// `(E_p + E_q - E_p E_q)(E_p + E_q^-1 - E_p E_q^-1)`: maps the weak-row
    /// count beta to gamma.
    GammaFromBeta,
    /// `(E_p^-1 + E_q^-1 - id)(E_p^-1 E_q^-1 + id - E_q^-1)`: maps the
    /// shifted base polynomial gamma-bar to gamma.
    GammaFromGammaBar,
    /// `id + E_q D_p`: the pairwise V operators whose product antisymmetrizes
    /// gamma into gamma-star.
    VProduct,
    /// `id + E_p E_q - E_p`: maps the Vandermonde product to the full
    /// monotone-triangle count alpha.
    AlphaFromVandermonde,
}

/// `V_{k_p, k_q} = id + E_q D_p` as an operator of the given arity.
pub fn v_pair(arity: u32, p: u32, q: u32) -> Result<ShiftOpExpr> {
    let id = ShiftOpExpr::identity(arity);
    let eq = ShiftOpExpr::e(arity, q)?;
    let dp = ShiftOpExpr::delta(arity, p)?;
    id.add(&eq.mul(&dp)?)
}

/// The per-pair factors of [`build_operator`], in `(p, q)` order.
pub fn operator_factors(
    kind: OperatorKind,
    m: u32,
    degree_bound: Option<u32>,
) -> Result<Vec<ShiftOpExpr>> {
    if m < 1 {
        return Err(Error::InvalidInput("operator arity must be at least 1".into()));
    }
    if kind == OperatorKind::GammaFromBaseInverse && degree_bound.is_none() {
        return Err(Error::InvalidInput(
            "the inverse-factor operator requires a degree bound".into(),
        ));
    }
    let id = ShiftOpExpr::identity(m);
    let mut factors = Vec::new();
    for p in 1..=m {
        for q in (p + 1)..=m {
            let ep = ShiftOpExpr::e(m, p)?;
            let eq = ShiftOpExpr::e(m, q)?;
            let ep_inv = ShiftOpExpr::e_inv(m, p)?;
            let eq_inv = ShiftOpExpr::e_inv(m, q)?;
            let dp = ShiftOpExpr::delta(m, p)?;
            let factor = match kind {
                OperatorKind::GammaFromBase => {
                    let f1 = ep_inv.add(&eq_inv)?.sub(&id)?;
                    let f2 = ep_inv.add(&eq)?.sub(&id)?;
                    ep.mul(&f1)?.mul(&f2)?
                }
                OperatorKind::GammaFromBaseInverse => {
                    let d = degree_bound.expect("checked above");
                    let up = id.add(&eq.mul(&dp)?)?.invert_truncated(d)?;
                    let down = id.add(&eq_inv.mul(&dp)?)?.invert_truncated(d)?;
                    up.mul(&ep)?.mul(&down)?
                }
                OperatorKind::GammaFromBeta => {
                    let f1 = ep.add(&eq)?.sub(&ep.mul(&eq)?)?;
                    let f2 = ep.add(&eq_inv)?.sub(&ep.mul(&eq_inv)?)?;
                    f1.mul(&f2)?
                }
                OperatorKind::GammaFromGammaBar => {
                    let f1 = ep_inv.add(&eq_inv)?.sub(&id)?;
                    let f2 = ep_inv.mul(&eq_inv)?.add(&id)?.sub(&eq_inv)?;
                    f1.mul(&f2)?
                }
                OperatorKind::VProduct => v_pair(m, p, q)?,
                OperatorKind::AlphaFromVandermonde => id.add(&ep.mul(&eq)?)?.sub(&ep)?,
            };
            factors.push(factor);
        }
    }
    Ok(factors)
}

/// Builds the fully expanded operator: the product of all pair factors.
/// For `m = 1` every product is empty and the result is the identity.
pub fn build_operator(
    kind: OperatorKind,
    m: u32,
    degree_bound: Option<u32>,
) -> Result<ShiftOpExpr> {
    let mut op = ShiftOpExpr::identity(m);
    for f in operator_factors(kind, m, degree_bound)? {
        op = op.mul(&f)?;
    }
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{MultiPoly, VarId};
    use crate::rational::{rat_int, Rational};
    use num_traits::One;

    fn kvar(arity: u32, i: u32) -> MultiPoly {
        MultiPoly::variable(arity, VarId::K(i)).unwrap()
    }

    fn xvar(arity: u32) -> MultiPoly {
        MultiPoly::variable(arity, VarId::X).unwrap()
    }

    #[test]
    fn inverse_shifts_cancel() {
        let e1 = ShiftOpExpr::e(2, 1).unwrap();
        let e1_inv = ShiftOpExpr::e_inv(2, 1).unwrap();
        assert!(e1.mul(&e1_inv).unwrap().is_identity());
    }

    #[test]
    fn identity_is_neutral() {
        let a = build_operator(OperatorKind::GammaFromBeta, 2, None).unwrap();
        assert_eq!(a.mul(&ShiftOpExpr::identity(2)).unwrap(), a);
    }

    #[test]
    fn no_cancellation_term_count() {
        // E1 + E2 - E1 E2 has three terms
        let e1 = ShiftOpExpr::e(2, 1).unwrap();
        let e2 = ShiftOpExpr::e(2, 2).unwrap();
        let op = e1.add(&e2).unwrap().sub(&e1.mul(&e2).unwrap()).unwrap();
        assert_eq!(op.num_terms(), 3);
    }

    #[test]
    fn apply_v_pair_to_k1k2() {
        // (id + E2 D1)(k1 k2) = k1 k2 + k2 + 1
        let v = v_pair(2, 1, 2).unwrap();
        let p = &kvar(2, 1) * &kvar(2, 2);
        let expect = &(&p + &kvar(2, 2)) + &MultiPoly::one(2);
        assert_eq!(v.apply(&p).unwrap(), expect);
    }

    #[test]
    fn apply_identity_and_single_shift() {
        let p = &(&xvar(1) - &kvar(1, 1)) + &MultiPoly::one(1);
        assert_eq!(ShiftOpExpr::identity(1).apply(&p).unwrap(), p);
        let shifted = ShiftOpExpr::e(1, 1).unwrap().apply(&p).unwrap();
        assert_eq!(shifted, &xvar(1) - &kvar(1, 1));
    }

    #[test]
    fn apply_is_multiplicative() {
        let a = build_operator(OperatorKind::GammaFromBeta, 2, None).unwrap();
        let b = build_operator(OperatorKind::VProduct, 2, None).unwrap();
        let p = &(&kvar(2, 1).pow(2) * &kvar(2, 2)) + &(&xvar(2) * &kvar(2, 2));
        let ab = a.mul(&b).unwrap().apply(&p).unwrap();
        let nested = a.apply(&b.apply(&p).unwrap()).unwrap();
        assert_eq!(ab, nested);
    }

    #[test]
    fn swap_examples() {
        let d = &kvar(2, 1) - &kvar(2, 2);
        assert_eq!(swap_vars(&d, 1, 2).unwrap(), d.neg());
        let sym = &kvar(2, 1) + &kvar(2, 2);
        assert_eq!(swap_vars(&sym, 1, 2).unwrap(), sym);
        assert_eq!(
            swap_vars(&swap_vars(&d, 1, 2).unwrap(), 1, 2).unwrap(),
            d
        );
        assert!(swap_vars(&d, 1, 3).is_err());
    }

    #[test]
    fn empty_product_is_identity() {
        for kind in [
            OperatorKind::GammaFromBase,
            OperatorKind::GammaFromBeta,
            OperatorKind::GammaFromGammaBar,
            OperatorKind::VProduct,
            OperatorKind::AlphaFromVandermonde,
        ] {
            assert!(build_operator(kind, 1, None).unwrap().is_identity());
        }
        assert!(
            build_operator(OperatorKind::GammaFromBaseInverse, 1, Some(3))
                .unwrap()
                .is_identity()
        );
    }

    #[test]
    fn v_product_m2_is_single_v() {
        let op = build_operator(OperatorKind::VProduct, 2, None).unwrap();
        assert_eq!(op, v_pair(2, 1, 2).unwrap());
    }

    #[test]
    fn inverse_form_requires_bound() {
        assert!(matches!(
            build_operator(OperatorKind::GammaFromBaseInverse, 2, None),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn invert_identity() {
        let id = ShiftOpExpr::identity(3);
        assert!(id.invert_truncated(5).unwrap().is_identity());
    }

    #[test]
    fn invert_round_trip_on_bounded_degree() {
        let a = v_pair(2, 1, 2).unwrap();
        let b = a.invert_truncated(2).unwrap();
        let p = &kvar(2, 1).pow(2) * &kvar(2, 2).pow(2);
        assert_eq!(a.apply(&b.apply(&p).unwrap()).unwrap(), p);
        assert_eq!(b.apply(&a.apply(&p).unwrap()).unwrap(), p);
    }

    #[test]
    fn invert_rejects_delta() {
        let d = ShiftOpExpr::delta(2, 1).unwrap();
        assert!(matches!(
            d.invert_truncated(4),
            Err(Error::NotInvertible(_))
        ));
    }

    #[test]
    fn delta_constant_term_is_coefficient_sum() {
        let v = v_pair(2, 1, 2).unwrap();
        assert_eq!(v.delta_constant_term(), Rational::one());
        let d = ShiftOpExpr::delta(2, 1).unwrap();
        assert_eq!(d.delta_constant_term(), rat_int(0));
    }

    #[test]
    fn display_uses_shift_symbols() {
        let e1 = ShiftOpExpr::e(2, 1).unwrap();
        let e2_inv = ShiftOpExpr::e_inv(2, 2).unwrap();
        let op = e1
            .scale(&rat_int(2))
            .sub(&e2_inv)
            .unwrap()
            .add(&ShiftOpExpr::identity(2))
            .unwrap();
        assert_eq!(op.to_string(), "2 * E1 + 1 - E2^-1");
    }
}
