//! Generating functions and coefficient extraction.
//!
//! The monotone-triangle generating function is
//! `prod_i X_i^-(n-1) (1-X_i)^-n  prod_(i<j) (X_j-X_i)(1-X_j+X_i X_j)`,
//! read as a power series in the `X_i`; its coefficient at `X^k` counts
//! monotone triangles with bottom row `k` when `0 <= k_1 < ... < k_n`. The
//! ASM total is the constant term of the same numerator against
//! `prod_i X_i^-(n+i-2) (1-X_i)^-n`.
//!
//! The halved-triangle analogue uses the numerator
//! `prod_(i<j) (X_j-X_i)(X_i+X_j-1)(X_i X_j-1)(1-X_j+X_i X_j)` against
//! `prod_i X_i^(e_i) (X_i-1)^-n`, expanded as a Laurent series in `1/X_i`.
//!
//! Coefficients are extracted by expanding the (finite) numerator and
//! convolving against the closed-form coefficients of the geometric
//! factors; no infinite series is ever materialized. A secondary oracle
//! (`*_by_series`) multiplies truncated series directly and is used by the
//! test suites to cross-check the convolution on small windows.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::formulas::ceil_half;
use crate::poly::{MultiPoly, VarId};
use crate::rational::{generalized_binomial, int_binomial, rat, rat_int, Rational};

// ---------------------------------------------------------------------------
// Integer Laurent polynomials (internal workhorse)
// ---------------------------------------------------------------------------

/// Sparse Laurent polynomial with integer coefficients; exponents may be
/// negative.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct IntLaurent {
    vars: usize,
    terms: HashMap<Vec<i32>, BigInt>,
}

impl IntLaurent {
    fn one(vars: usize) -> Self {
        let mut terms = HashMap::new();
        terms.insert(vec![0; vars], BigInt::one());
        IntLaurent { vars, terms }
    }

    fn zero(vars: usize) -> Self {
        IntLaurent {
            vars,
            terms: HashMap::new(),
        }
    }

    fn add_term(&mut self, exps: Vec<i32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// A single term `c * X^exps` where `exps` addresses `(var, exponent)`
    /// pairs; unlisted variables get exponent zero.
    fn term(vars: usize, pairs: &[(usize, i32)], c: i64) -> Self {
        let mut exps = vec![0; vars];
        for (v, e) in pairs {
            exps[*v] += e;
        }
        let mut p = Self::zero(vars);
        p.add_term(exps, BigInt::from(c));
        p
    }

    fn add(&self, other: &IntLaurent) -> IntLaurent {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    fn mul(&self, other: &IntLaurent) -> IntLaurent {
        self.mul_pruned(other, None)
    }

    /// Product, dropping any term whose exponents leave the window.
    fn mul_pruned(&self, other: &IntLaurent, window: Option<(&[i32], &[i32])>) -> IntLaurent {
        let mut out = IntLaurent::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let sum: Vec<i32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if let Some((lo, hi)) = window {
                    if sum.iter().zip(lo).any(|(s, l)| s < l)
                        || sum.iter().zip(hi).any(|(s, h)| s > h)
                    {
                        continue;
                    }
                }
                out.add_term(sum, ca * cb);
            }
        }
        out
    }

    fn coeff(&self, exps: &[i32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &BigInt)> {
        self.terms.iter()
    }
}

/// `prod_(i<j) (X_j - X_i)(1 - X_j + X_i X_j)` over `n` variables.
/// Memoized: the expansion at `n = 6` is large and several checks need it.
fn mt_numerator(n: usize) -> IntLaurent {
    use std::sync::{Mutex, OnceLock};
    static MEMO: OnceLock<Mutex<HashMap<usize, IntLaurent>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = memo.lock().expect("memo lock").get(&n) {
        return p.clone();
    }
    let mut acc = IntLaurent::one(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let diff = IntLaurent::term(n, &[(j, 1)], 1).add(&IntLaurent::term(n, &[(i, 1)], -1));
            let mixed = IntLaurent::term(n, &[], 1)
                .add(&IntLaurent::term(n, &[(j, 1)], -1))
                .add(&IntLaurent::term(n, &[(i, 1), (j, 1)], 1));
            acc = acc.mul(&diff).mul(&mixed);
        }
    }
    memo.lock().expect("memo lock").insert(n, acc.clone());
    acc
}

/// `prod_(i<j) (X_j-X_i)(X_i+X_j-1)(X_i X_j-1)(1-X_j+X_i X_j)` over `m`
/// variables.
fn hmt_numerator(m: usize) -> IntLaurent {
    let mut acc = IntLaurent::one(m);
    for i in 0..m {
        for j in (i + 1)..m {
            let diff = IntLaurent::term(m, &[(j, 1)], 1).add(&IntLaurent::term(m, &[(i, 1)], -1));
            let sum1 = IntLaurent::term(m, &[(i, 1)], 1)
                .add(&IntLaurent::term(m, &[(j, 1)], 1))
                .add(&IntLaurent::term(m, &[], -1));
            let prod1 = IntLaurent::term(m, &[(i, 1), (j, 1)], 1).add(&IntLaurent::term(m, &[], -1));
            let mixed = IntLaurent::term(m, &[], 1)
                .add(&IntLaurent::term(m, &[(j, 1)], -1))
                .add(&IntLaurent::term(m, &[(i, 1), (j, 1)], 1));
            acc = acc.mul(&diff).mul(&sum1).mul(&prod1).mul(&mixed);
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Coefficient extraction
// ---------------------------------------------------------------------------

/// `[X^s] (1-X)^-n = C(n-1+s, n-1)` for `s >= 0`, else zero.
fn geometric_coeff(s: i64, n: u32) -> BigInt {
    if s < 0 {
        BigInt::zero()
    } else {
        int_binomial(s + n as i64 - 1, n - 1)
    }
}

/// `[X^u] (X-1)^-n` as a series in `1/X`: `C(-u-1, n-1)` for `u <= -n`,
/// else zero.
fn inverse_geometric_coeff(u: i64, n: u32) -> BigInt {
    if u <= -(n as i64) {
        int_binomial(-u - 1, n - 1)
    } else {
        BigInt::zero()
    }
}

/// Coefficient of `X_1^(k_1) ... X_n^(k_n)` in the monotone-triangle
/// generating function. Equals the number of monotone triangles with bottom
/// row `k` when `0 <= k_1 < ... < k_n`; for other exponents it is the formal
/// coefficient (which need not match the count polynomial once exponents go
/// negative).
pub fn mt_gf_coeff(n: u32, k: &[i64]) -> Result<BigInt> {
    if n == 0 || k.len() != n as usize {
        return Err(Error::InvalidInput(format!(
            "expected {} exponents, got {}",
            n,
            k.len()
        )));
    }
    let numer = mt_numerator(n as usize);
    let shift = n as i64 - 1;
    let mut acc = BigInt::zero();
    for (t, c) in numer.terms() {
        let mut prod = c.clone();
        for i in 0..n as usize {
            if prod.is_zero() {
                break;
            }
            let s = k[i] - t[i] as i64 + shift;
            prod *= geometric_coeff(s, n);
        }
        acc += prod;
    }
    Ok(acc)
}

/// The ASM total as the constant term of the monotone-triangle numerator
/// against `prod_i X_i^-(n+i-2) (1-X_i)^-n`.
pub fn asm_constant_term(n: u32) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::InvalidInput("matrix size must be at least 1".into()));
    }
    let numer = mt_numerator(n as usize);
    let mut acc = BigInt::zero();
    for (t, c) in numer.terms() {
        let mut prod = c.clone();
        for i in 0..n as usize {
            if prod.is_zero() {
                break;
            }
            let s = n as i64 + i as i64 - 1 - t[i] as i64; // n + (i+1) - 2 - t_i
            prod *= geometric_coeff(s, n);
        }
        acc += prod;
    }
    Ok(acc)
}

/// A halved-triangle coefficient together with its validity flag: outside
/// the region `k_l <= c` the formal coefficient is still returned but is not
/// guaranteed to be the triangle count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HmtCoeff {
    pub value: BigInt,
    pub in_region: bool,
    pub region_bound: i64,
}

/// Exponent of the single-variable factor `X_i^(e)` in the halved-triangle
/// generating function; integral for every `n` and `x`.
fn hmt_monomial_shift(n: u32, x: i64) -> i64 {
    if n % 2 == 1 {
        // x + 3/2 - n/2 with odd n
        x + (3 - n as i64) / 2
    } else {
        x + 3 - n as i64 / 2
    }
}

/// Largest `c` such that coefficients with all `k_l <= c` are guaranteed to
/// equal the halved-triangle count.
pub fn hmt_region_bound(n: u32, x: i64) -> i64 {
    if n % 2 == 1 {
        // x + 1/2 - n/2 with odd n
        x + (1 - n as i64) / 2
    } else {
        x + 2 - n as i64 / 2
    }
}

/// Coefficient of `X_1^(k_1) ... X_m^(k_m)` in the halved-triangle
/// generating function with entry bound `x`, taken as a Laurent series in
/// `1/X_i`.
pub fn hmt_gf_coeff(n: u32, x: i64, k: &[i64]) -> Result<HmtCoeff> {
    let m = ceil_half(n);
    if n == 0 || k.len() != m as usize {
        return Err(Error::InvalidInput(format!(
            "expected {} exponents for {} rows, got {}",
            m,
            n,
            k.len()
        )));
    }
    let numer = hmt_numerator(m as usize);
    let e = hmt_monomial_shift(n, x);
    let mut acc = BigInt::zero();
    for (t, c) in numer.terms() {
        let mut prod = c.clone();
        for i in 0..m as usize {
            if prod.is_zero() {
                break;
            }
            let u = k[i] - t[i] as i64 - e;
            prod *= inverse_geometric_coeff(u, n);
        }
        acc += prod;
    }
    let bound = hmt_region_bound(n, x);
    Ok(HmtCoeff {
        value: acc,
        in_region: k.iter().all(|&v| v <= bound),
        region_bound: bound,
    })
}

// ---------------------------------------------------------------------------
// Truncated-series oracle
// ---------------------------------------------------------------------------

/// Orientation of a formal Laurent series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOrientation {
    /// Geometric factors expand into nonnegative powers of `X`.
    PowersOfX,
    /// Geometric factors expand into powers of `1/X`.
    PowersOfXInverse,
}

/// A finite per-variable exponent window with a fixed series orientation;
/// the truncated-series oracle materializes coefficients inside it.
#[derive(Clone, Debug)]
pub struct LaurentWindow {
    pub lower: Vec<i64>,
    pub upper: Vec<i64>,
    pub orientation: SeriesOrientation,
}

/// Monotone-triangle coefficient by direct multiplication of truncated
/// series. Independent of [`mt_gf_coeff`]'s convolution; exponential in the
/// window size, intended for small cross-checks.
pub fn mt_gf_coeff_by_series(n: u32, k: &[i64], window: &LaurentWindow) -> Result<BigInt> {
    if n == 0 || k.len() != n as usize || window.lower.len() != n as usize {
        return Err(Error::InvalidInput("window/exponent shape mismatch".into()));
    }
    if window.orientation != SeriesOrientation::PowersOfX {
        return Err(Error::InvalidInput(
            "the monotone-triangle series expands in positive powers".into(),
        ));
    }
    let nv = n as usize;
    let shift = n as i64 - 1;
    // Geometric factor per variable, truncated to the window.
    let mut acc = IntLaurent::one(nv);
    for i in 0..nv {
        let mut g = IntLaurent::zero(nv);
        for s in 0..=(window.upper[i] + shift).max(-1) {
            let exp = s - shift;
            if exp > window.upper[i] {
                break;
            }
            let mut exps = vec![0i32; nv];
            exps[i] = i32::try_from(exp).expect("window fits i32");
            g.add_term(exps, geometric_coeff(s, n));
        }
        acc = acc.mul(&g);
    }
    // Numerator factors only raise exponents, so pruning above k is sound.
    let hi: Vec<i32> = k.iter().map(|&v| v as i32).collect();
    let lo: Vec<i32> = window.lower.iter().map(|&v| v as i32).collect();
    let numer = mt_numerator(nv);
    acc = acc.mul_pruned(&numer, Some((&lo, &hi)));
    let target: Vec<i32> = k.iter().map(|&v| v as i32).collect();
    Ok(acc.coeff(&target))
}

/// Halved-triangle coefficient by direct multiplication of truncated series
/// in `1/X`; cross-checks [`hmt_gf_coeff`].
pub fn hmt_gf_coeff_by_series(n: u32, x: i64, k: &[i64], window: &LaurentWindow) -> Result<BigInt> {
    let m = ceil_half(n) as usize;
    if n == 0 || k.len() != m || window.lower.len() != m {
        return Err(Error::InvalidInput("window/exponent shape mismatch".into()));
    }
    if window.orientation != SeriesOrientation::PowersOfXInverse {
        return Err(Error::InvalidInput(
            "the halved-triangle series expands in powers of 1/X".into(),
        ));
    }
    let e = hmt_monomial_shift(n, x);
    let mut acc = IntLaurent::one(m);
    for i in 0..m {
        let mut g = IntLaurent::zero(m);
        // X^e (X-1)^-n truncated from below by the window.
        let mut u = -(n as i64);
        loop {
            let exp = e + u;
            if exp < window.lower[i] {
                break;
            }
            if exp <= window.upper[i] {
                let mut exps = vec![0i32; m];
                exps[i] = i32::try_from(exp).expect("window fits i32");
                g.add_term(exps, inverse_geometric_coeff(u, n));
            }
            u -= 1;
        }
        acc = acc.mul(&g);
    }
    let hi: Vec<i32> = k.iter().map(|&v| v as i32).collect();
    let lo: Vec<i32> = window.lower.iter().map(|&v| v as i32).collect();
    let numer = hmt_numerator(m);
    acc = acc.mul_pruned(&numer, Some((&lo, &hi)));
    let target: Vec<i32> = k.iter().map(|&v| v as i32).collect();
    Ok(acc.coeff(&target))
}

// ---------------------------------------------------------------------------
// Binomial determinants
// ---------------------------------------------------------------------------

/// The two binomial determinant families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetKind {
    /// Entries `C(k_i + j - 1, 2j - 1)`.
    IntegerShift,
    /// Entries `C(k_i + j - 3/2, 2j - 2)`.
    HalfShift,
}

fn det_entry(kind: DetKind, k: &Rational, j: u32) -> Rational {
    match kind {
        DetKind::IntegerShift => generalized_binomial(&(k + rat_int(j as i64 - 1)), 2 * j - 1),
        DetKind::HalfShift => {
            generalized_binomial(&(k + rat_int(j as i64) - rat(3, 2)), 2 * j - 2)
        }
    }
}

/// Exact determinant of the binomial matrix by rational Gaussian
/// elimination.
pub fn binom_determinant(kind: DetKind, k: &[Rational]) -> Rational {
    let m = k.len();
    let mut mat: Vec<Vec<Rational>> = (0..m)
        .map(|i| (1..=m as u32).map(|j| det_entry(kind, &k[i], j)).collect())
        .collect();
    let mut det = Rational::one();
    for col in 0..m {
        let pivot = (col..m).find(|&r| !mat[r][col].is_zero());
        let Some(pivot) = pivot else {
            return Rational::zero();
        };
        if pivot != col {
            mat.swap(pivot, col);
            det = -det;
        }
        let p = mat[col][col].clone();
        det *= &p;
        for r in (col + 1)..m {
            if mat[r][col].is_zero() {
                continue;
            }
            let factor = &mat[r][col] / &p;
            for c in col..m {
                let sub = &factor * &mat[col][c];
                mat[r][c] -= sub;
            }
        }
    }
    det
}

/// The closed-form product each determinant family evaluates to.
pub fn binom_determinant_product_side(kind: DetKind, k: &[Rational]) -> Rational {
    let m = k.len();
    let mut acc = Rational::one();
    for i in 0..m {
        for j in (i + 1)..m {
            let den = match kind {
                DetKind::IntegerShift => (j - i) as i64 * (j + i + 2) as i64,
                DetKind::HalfShift => (j - i) as i64 * (j + i + 1) as i64,
            };
            acc *= (&k[j] - &k[i]) * (&k[i] + &k[j]) / rat_int(den);
        }
    }
    if kind == DetKind::IntegerShift {
        for (i, ki) in k.iter().enumerate() {
            acc *= ki / rat_int(i as i64 + 1);
        }
    }
    acc
}

/// Symbolic determinant and product side over the polynomial ring in
/// `k_1..k_m`; Laplace expansion, intended for small `m`.
pub fn binom_det_symbolic(kind: DetKind, m: u32) -> (MultiPoly, MultiPoly) {
    let entries: Vec<Vec<MultiPoly>> = (1..=m)
        .map(|i| {
            (1..=m)
                .map(|j| {
                    let kvar = MultiPoly::variable(m, VarId::K(i)).expect("in range");
                    let (shift, picks) = match kind {
                        DetKind::IntegerShift => (rat_int(j as i64 - 1), 2 * j - 1),
                        DetKind::HalfShift => (rat_int(j as i64) - rat(3, 2), 2 * j - 2),
                    };
                    let base = kvar.add(&MultiPoly::constant(m, shift)).expect("same arity");
                    falling_binomial_poly(&base, picks)
                })
                .collect()
        })
        .collect();
    let det = poly_determinant(&entries, m);
    let mut product = MultiPoly::one(m);
    for i in 1..=m {
        for j in (i + 1)..=m {
            let ki = MultiPoly::variable(m, VarId::K(i)).expect("in range");
            let kj = MultiPoly::variable(m, VarId::K(j)).expect("in range");
            let den = match kind {
                DetKind::IntegerShift => (j - i) as i64 * (j + i) as i64,
                DetKind::HalfShift => (j - i) as i64 * (j + i - 1) as i64,
            };
            product = (&product * &(&(&kj - &ki) * &(&ki + &kj))).scale(&rat(1, den));
        }
    }
    if kind == DetKind::IntegerShift {
        for i in 1..=m {
            let ki = MultiPoly::variable(m, VarId::K(i)).expect("in range");
            product = (&product * &ki).scale(&rat(1, i as i64));
        }
    }
    (det, product)
}

/// `C(p, picks)` for a polynomial argument: `p (p-1) ... (p-picks+1)/picks!`.
pub fn falling_binomial_poly(p: &MultiPoly, picks: u32) -> MultiPoly {
    let mut acc = MultiPoly::one(p.arity());
    for t in 0..picks {
        let shifted = p
            .sub(&MultiPoly::constant(p.arity(), rat_int(t as i64)))
            .expect("same arity");
        acc = &acc * &shifted;
    }
    acc.scale(&rat(
        1,
        crate::rational::factorial(picks as u64)
            .try_into()
            .expect("small factorial"),
    ))
}

/// Determinant of a polynomial matrix by Laplace expansion along the first
/// column.
pub fn poly_determinant(entries: &[Vec<MultiPoly>], arity: u32) -> MultiPoly {
    let m = entries.len();
    if m == 0 {
        return MultiPoly::one(arity);
    }
    if m == 1 {
        return entries[0][0].clone();
    }
    let mut acc = MultiPoly::zero(arity);
    for r in 0..m {
        if entries[r][0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> = (0..m)
            .filter(|&rr| rr != r)
            .map(|rr| entries[rr][1..].to_vec())
            .collect();
        let sub = poly_determinant(&minor, arity);
        let signed = if r % 2 == 0 {
            &entries[r][0] * &sub
        } else {
            (&entries[r][0] * &sub).neg()
        };
        acc = &acc + &signed;
    }
    acc
}

// ---------------------------------------------------------------------------
// Series identities
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// Checks the closed forms of the one-variable summation identities used to
/// collapse the halved-triangle determinant columns:
///
/// * odd:  `sum_(l<=c) C(l+j-c+z, 2j-2) X^l = X^(j+c-z-2)/(X-1)^(2j-1)` for
///   `z` in `-j-1 ..= j-3`;
/// * even: `sum_(l<=c) C(l+j-c+z, 2j-1) X^l = -X^(j+c-z-1)/(X-1)^(2j)` for
///   `z` in `-j-1 ..= j-2`;
///
/// with the right side read as a series in `1/X`. Compares all coefficients
/// for `l` in `(c - window, c]` plus a margin above `c` where both sides
/// must vanish.
pub fn series_identity_check(parity: Parity, j: u32, z: i64, c: i64, window: u32) -> Result<bool> {
    if j == 0 {
        return Err(Error::InvalidInput("column index must be positive".into()));
    }
    let (lo, hi) = match parity {
        Parity::Odd => (-(j as i64) - 1, j as i64 - 3),
        Parity::Even => (-(j as i64) - 1, j as i64 - 2),
    };
    if z < lo || z > hi {
        return Err(Error::InvalidInput(format!(
            "z = {z} outside the stated range {lo}..={hi} for this parity and j = {j}"
        )));
    }
    for l in (c - window as i64 + 1)..=c {
        let (lhs, rhs) = match parity {
            Parity::Odd => {
                let lhs = int_binomial(l + j as i64 - c + z, 2 * j - 2);
                let u = l - (j as i64 + c - z - 2);
                let rhs = inverse_geometric_coeff(u, 2 * j - 1);
                (lhs, rhs)
            }
            Parity::Even => {
                let lhs = int_binomial(l + j as i64 - c + z, 2 * j - 1);
                let u = l - (j as i64 + c - z - 1);
                let rhs = -inverse_geometric_coeff(u, 2 * j);
                (lhs, rhs)
            }
        };
        if lhs != rhs {
            return Ok(false);
        }
    }
    // Above c the left side has no terms; the right side must vanish too.
    for l in (c + 1)..=(c + 4) {
        let rhs = match parity {
            Parity::Odd => inverse_geometric_coeff(l - (j as i64 + c - z - 2), 2 * j - 1),
            Parity::Even => -inverse_geometric_coeff(l - (j as i64 + c - z - 1), 2 * j),
        };
        if !rhs.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Query plumbing
// ---------------------------------------------------------------------------

/// A generating-function coefficient request.
#[derive(Clone, Debug)]
pub enum GfQuery {
    Mt { n: u32, exponents: Vec<i64> },
    Hmt { n: u32, x: i64, exponents: Vec<i64> },
    AsmConstantTerm { n: u32 },
}

/// Result of a [`GfQuery`].
#[derive(Clone, Debug)]
pub struct GfAnswer {
    pub value: BigInt,
    pub warnings: Vec<String>,
}

impl GfQuery {
    pub fn evaluate(&self) -> Result<GfAnswer> {
        match self {
            GfQuery::Mt { n, exponents } => {
                let value = mt_gf_coeff(*n, exponents)?;
                let mut warnings = Vec::new();
                let sorted = exponents.windows(2).all(|w| w[0] < w[1]);
                if !(sorted && exponents.first().copied().unwrap_or(0) >= 0) {
                    warnings.push(
                        "exponents are not a nonnegative increasing bottom row; the coefficient \
                         need not equal a triangle count"
                            .to_string(),
                    );
                }
                Ok(GfAnswer { value, warnings })
            }
            GfQuery::Hmt { n, x, exponents } => {
                let coeff = hmt_gf_coeff(*n, *x, exponents)?;
                let mut warnings = Vec::new();
                if !coeff.in_region {
                    warnings.push(format!(
                        "exponents exceed the validity bound {}; the coefficient is formal",
                        coeff.region_bound
                    ));
                }
                Ok(GfAnswer {
                    value: coeff.value,
                    warnings,
                })
            }
            GfQuery::AsmConstantTerm { n } => Ok(GfAnswer {
                value: asm_constant_term(*n)?,
                warnings: Vec::new(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{asm_count, gamma_value};

    #[test]
    fn mt_coefficients_from_worked_values() {
        assert_eq!(mt_gf_coeff(3, &[3, 2, 1]).unwrap(), BigInt::from(-1));
        assert_eq!(mt_gf_coeff(3, &[-1, 2, 3]).unwrap(), BigInt::from(7));
        assert_eq!(mt_gf_coeff(3, &[0, 1, 2]).unwrap(), BigInt::from(7));
    }

    #[test]
    fn constant_term_matches_totals() {
        for n in 1..=4u32 {
            assert_eq!(
                asm_constant_term(n).unwrap(),
                BigInt::from(asm_count(n)),
                "n = {n}"
            );
        }
    }

    #[test]
    fn hmt_coefficients_match_gamma() {
        let c = hmt_gf_coeff(2, 5, &[3]).unwrap();
        assert_eq!(c.region_bound, 6);
        assert!(c.in_region);
        assert_eq!(c.value, BigInt::from(3));

        let c = hmt_gf_coeff(3, 4, &[1, 2]).unwrap();
        assert_eq!(c.region_bound, 3);
        assert!(c.in_region);
        assert_eq!(c.value, gamma_value(3, 4, &[1, 2]).unwrap());
    }

    #[test]
    fn hmt_single_variable_series() {
        for k in -3..=6i64 {
            let c = hmt_gf_coeff(1, 3, &[k]).unwrap();
            let expect = if k <= 3 { 1 } else { 0 };
            assert_eq!(c.value, BigInt::from(expect), "k = {k}");
        }
    }

    #[test]
    fn hmt_out_of_region_is_flagged() {
        let c = hmt_gf_coeff(2, 5, &[7]).unwrap();
        assert!(!c.in_region);
    }

    #[test]
    fn truncated_series_oracle_agrees_mt() {
        let n = 2u32;
        for k1 in 0..=3i64 {
            for k2 in 0..=3i64 {
                let k = [k1, k2];
                let window = LaurentWindow {
                    lower: vec![-(n as i64 - 1); 2],
                    upper: k.to_vec(),
                    orientation: SeriesOrientation::PowersOfX,
                };
                assert_eq!(
                    mt_gf_coeff_by_series(n, &k, &window).unwrap(),
                    mt_gf_coeff(n, &k).unwrap(),
                    "k = {k:?}"
                );
            }
        }
    }

    #[test]
    fn truncated_series_oracle_agrees_hmt() {
        let (n, x) = (3u32, 4i64);
        for k1 in 0..=2i64 {
            for k2 in (k1 + 1)..=3i64 {
                let k = [k1, k2];
                let window = LaurentWindow {
                    lower: k.iter().map(|v| v - 10).collect(),
                    upper: k.to_vec(),
                    orientation: SeriesOrientation::PowersOfXInverse,
                };
                assert_eq!(
                    hmt_gf_coeff_by_series(n, x, &k, &window).unwrap(),
                    hmt_gf_coeff(n, x, &k).unwrap().value,
                    "k = {k:?}"
                );
            }
        }
    }

    #[test]
    fn determinant_one_by_one() {
        let det = binom_determinant(DetKind::IntegerShift, &[rat_int(5)]);
        assert_eq!(det, rat_int(5));
        let det = binom_determinant(DetKind::HalfShift, &[rat_int(9)]);
        assert_eq!(det, rat_int(1));
    }

    #[test]
    fn determinant_two_by_two() {
        let k = [rat_int(1), rat_int(2)];
        let det = binom_determinant(DetKind::IntegerShift, &k);
        assert_eq!(det, rat_int(1));
        assert_eq!(binom_determinant_product_side(DetKind::IntegerShift, &k), rat_int(1));
    }

    #[test]
    fn determinant_matches_product_numerically() {
        let k = [rat(3, 2), rat_int(4), rat(-7, 3)];
        for kind in [DetKind::IntegerShift, DetKind::HalfShift] {
            assert_eq!(
                binom_determinant(kind, &k),
                binom_determinant_product_side(kind, &k),
                "{kind:?}"
            );
        }
    }

    #[test]
    fn determinant_matches_product_symbolically() {
        for m in 1..=3u32 {
            for kind in [DetKind::IntegerShift, DetKind::HalfShift] {
                let (det, product) = binom_det_symbolic(kind, m);
                assert_eq!(det, product, "{kind:?} m = {m}");
            }
        }
    }

    #[test]
    fn series_identities() {
        assert!(series_identity_check(Parity::Odd, 1, -2, 5, 10).unwrap());
        assert!(series_identity_check(Parity::Even, 1, -1, 0, 10).unwrap());
        assert!(series_identity_check(Parity::Even, 1, -2, -3, 10).unwrap());
        assert!(matches!(
            series_identity_check(Parity::Odd, 2, 5, 0, 10),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn gf_query_warnings() {
        let q = GfQuery::Mt {
            n: 3,
            exponents: vec![3, 2, 1],
        };
        assert!(!q.evaluate().unwrap().warnings.is_empty());
        let q = GfQuery::Hmt {
            n: 2,
            x: 5,
            exponents: vec![7],
        };
        assert!(!q.evaluate().unwrap().warnings.is_empty());
    }
}
