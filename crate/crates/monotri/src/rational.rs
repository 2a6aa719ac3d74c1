//! Exact rational scalars.
//!
//! Every coefficient in this crate is an arbitrary-precision rational in
//! lowest terms with positive denominator; `num_rational::BigRational`
//! maintains exactly that normal form, so it is used directly.

use num_bigint::BigInt;
use num_traits::{One, Signed};

pub type Rational = num_rational::BigRational;

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` as a rational in lowest terms. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact factorial.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Binomial coefficient with arbitrary integer top argument:
/// `n (n-1) ... (n-k+1) / k!`. Zero when `0 <= n < k`.
pub fn int_binomial(n: i64, k: u32) -> BigInt {
    let mut num = BigInt::one();
    for t in 0..k as i64 {
        num *= n - t;
    }
    num / factorial(k as u64)
}

/// Binomial coefficient with an arbitrary rational top argument:
/// `a (a-1) ... (a-m+1) / m!`, and `1` for `m = 0`.
pub fn generalized_binomial(a: &Rational, m: u32) -> Rational {
    let mut num = Rational::one();
    for t in 0..m as i64 {
        num *= a - rat_int(t);
    }
    num / Rational::from_integer(factorial(m as u64))
}

/// Extracts the integer value of a rational, or `None` if it has a
/// non-trivial denominator.
pub fn rational_to_integer(r: &Rational) -> Option<BigInt> {
    if r.denom().is_one() {
        Some(r.numer().clone())
    } else {
        None
    }
}

/// True when the rational is a negative number.
pub fn is_negative(r: &Rational) -> bool {
    r.numer().is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn generalized_binomial_integer_top() {
        assert_eq!(generalized_binomial(&rat_int(5), 2), rat_int(10));
    }

    #[test]
    fn generalized_binomial_half_integer_top() {
        // (1/2)(-1/2)/2 = -1/8
        assert_eq!(generalized_binomial(&rat(1, 2), 2), rat(-1, 8));
    }

    #[test]
    fn generalized_binomial_negative_top() {
        // (-1)(-2)(-3)/6 = -1
        assert_eq!(generalized_binomial(&rat_int(-1), 3), rat_int(-1));
    }

    #[test]
    fn generalized_binomial_m_zero() {
        assert_eq!(generalized_binomial(&rat(7, 3), 0), rat_int(1));
    }

    #[test]
    fn int_binomial_negative_top() {
        assert_eq!(int_binomial(-1, 3), BigInt::from(-1));
        assert_eq!(int_binomial(-2, 2), BigInt::from(3));
        assert_eq!(int_binomial(3, 5), BigInt::zero());
    }
}
