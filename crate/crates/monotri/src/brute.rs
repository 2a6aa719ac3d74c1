//! Ground-truth enumeration.
//!
//! Direct backtracking enumeration of monotone triangles, halved monotone
//! triangles (strict and weak row variants), alternating sign matrices and
//! their bijections, plus the summation recursion for the halved-triangle
//! count and its extension to arbitrary integer arguments. Everything here
//! is deliberately simple and independent of the operator formulas; the
//! formula modules are tested against these counts.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Row sizes of a halved monotone triangle: row `i` has `ceil(i/2)` entries.
fn hmt_row_len(i: u32) -> usize {
    (i as usize).div_ceil(2)
}

/// Default size guard for exhaustive ASM enumeration; larger sizes work but
/// take noticeably longer, so front ends should warn before exceeding it.
pub const ASM_ENUMERATION_GUARD: usize = 6;

// ---------------------------------------------------------------------------
// Validated combinatorial records
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowMode {
    Strict,
    Extended,
}

/// A prescribed bottom row. Strict mode requires strictly increasing
/// entries; extended mode admits arbitrary integers (for the polynomial
/// extension of the counting functions).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottomRow {
    entries: Vec<i64>,
    mode: RowMode,
}

impl BottomRow {
    pub fn strict(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("bottom row must be nonempty".into()));
        }
        if !entries.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(
                "strict bottom row must be strictly increasing".into(),
            ));
        }
        Ok(BottomRow {
            entries,
            mode: RowMode::Strict,
        })
    }

    pub fn extended(entries: Vec<i64>) -> Self {
        BottomRow {
            entries,
            mode: RowMode::Extended,
        }
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn mode(&self) -> RowMode {
        self.mode
    }
}

/// A monotone triangle: `n` strictly increasing rows, the `i`-th of length
/// `i`, weakly increasing along both diagonal directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneTriangle {
    rows: Vec<Vec<i64>>,
}

impl MonotoneTriangle {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidInput("triangle must have at least one row".into()));
        }
        for (idx, row) in rows.iter().enumerate() {
            if row.len() != idx + 1 {
                return Err(Error::InvalidInput(format!(
                    "row {} must have {} entries, got {}",
                    idx + 1,
                    idx + 1,
                    row.len()
                )));
            }
            if !row.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidInput(format!(
                    "row {} is not strictly increasing",
                    idx + 1
                )));
            }
        }
        for i in 1..rows.len() {
            let upper = &rows[i - 1];
            let lower = &rows[i];
            for j in 0..upper.len() {
                if !(lower[j] <= upper[j] && upper[j] <= lower[j + 1]) {
                    return Err(Error::InvalidInput(format!(
                        "rows {} and {} violate the interleaving condition",
                        i,
                        i + 1
                    )));
                }
            }
        }
        Ok(MonotoneTriangle { rows })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn bottom_row(&self) -> &[i64] {
        self.rows.last().expect("nonempty")
    }
}

/// A halved monotone triangle: rows `1..=n`, row `i` of length `ceil(i/2)`,
/// weakly increasing to the northeast and southeast; `strict_rows` requires
/// strict increase within each row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalvedMonotoneTriangle {
    rows: Vec<Vec<i64>>,
    strict_rows: bool,
}

impl HalvedMonotoneTriangle {
    pub fn new(rows: Vec<Vec<i64>>, strict_rows: bool) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidInput("triangle must have at least one row".into()));
        }
        for (idx, row) in rows.iter().enumerate() {
            let want = hmt_row_len(idx as u32 + 1);
            if row.len() != want {
                return Err(Error::InvalidInput(format!(
                    "row {} must have {} entries, got {}",
                    idx + 1,
                    want,
                    row.len()
                )));
            }
            let ok = if strict_rows {
                row.windows(2).all(|w| w[0] < w[1])
            } else {
                row.windows(2).all(|w| w[0] <= w[1])
            };
            if !ok {
                return Err(Error::InvalidInput(format!(
                    "row {} violates the row monotonicity condition",
                    idx + 1
                )));
            }
        }
        for i in 1..rows.len() {
            let upper = &rows[i - 1];
            let lower = &rows[i];
            for j in 0..upper.len() {
                // lower[j] <= upper[j], and upper[j] <= lower[j+1] when that
                // position exists.
                if lower[j] > upper[j] {
                    return Err(Error::InvalidInput(format!(
                        "rows {} and {} violate the northeast condition",
                        i,
                        i + 1
                    )));
                }
                if j + 1 < lower.len() && upper[j] > lower[j + 1] {
                    return Err(Error::InvalidInput(format!(
                        "rows {} and {} violate the southeast condition",
                        i,
                        i + 1
                    )));
                }
            }
        }
        Ok(HalvedMonotoneTriangle { rows, strict_rows })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn strict_rows(&self) -> bool {
        self.strict_rows
    }

    pub fn bottom_row(&self) -> &[i64] {
        self.rows.last().expect("nonempty")
    }
}

/// An alternating sign matrix: entries in `{-1, 0, 1}`, every row and column
/// sums to one with nonzero entries alternating in sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AsmMatrix {
    n: usize,
    entries: Vec<i8>, // row-major
}

impl AsmMatrix {
    pub fn new(rows: Vec<Vec<i8>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidInput("matrix must be nonempty".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::InvalidInput("matrix must be square".into()));
            }
            entries.extend_from_slice(row);
        }
        let m = AsmMatrix { n, entries };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            let mut partial = 0i32;
            for j in 0..n {
                let v = self.get(i, j);
                if !(-1..=1).contains(&v) {
                    return Err(Error::InvalidInput("entries must be -1, 0 or 1".into()));
                }
                partial += v as i32;
                if !(0..=1).contains(&partial) {
                    return Err(Error::InvalidInput(format!(
                        "row {} violates the alternating condition",
                        i + 1
                    )));
                }
            }
            if partial != 1 {
                return Err(Error::InvalidInput(format!("row {} does not sum to 1", i + 1)));
            }
        }
        for j in 0..n {
            let mut partial = 0i32;
            for i in 0..n {
                partial += self.get(i, j) as i32;
                if !(0..=1).contains(&partial) {
                    return Err(Error::InvalidInput(format!(
                        "column {} violates the alternating condition",
                        j + 1
                    )));
                }
            }
            if partial != 1 {
                return Err(Error::InvalidInput(format!(
                    "column {} does not sum to 1",
                    j + 1
                )));
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.n + j]
    }
}

// Line-based text form shared by the record types: one row per line,
// whitespace-separated integers.
fn fmt_rows(f: &mut fmt::Formatter<'_>, rows: impl Iterator<Item = Vec<i64>>) -> fmt::Result {
    let mut first = true;
    for row in rows {
        if !first {
            writeln!(f)?;
        }
        first = false;
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", line.join(" "))?;
    }
    Ok(())
}

fn parse_rows(s: &str) -> Result<Vec<Vec<i64>>> {
    s.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split_whitespace()
                .map(|tok| {
                    tok.parse::<i64>()
                        .map_err(|_| Error::InvalidInput(format!("bad integer '{tok}'")))
                })
                .collect()
        })
        .collect()
}

impl fmt::Display for MonotoneTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rows(f, self.rows.iter().cloned())
    }
}

impl FromStr for MonotoneTriangle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MonotoneTriangle::new(parse_rows(s)?)
    }
}

impl fmt::Display for HalvedMonotoneTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rows(f, self.rows.iter().cloned())
    }
}

impl fmt::Display for AsmMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rows(
            f,
            (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) as i64).collect()),
        )
    }
}

impl FromStr for AsmMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let rows = parse_rows(s)?;
        let rows8: Vec<Vec<i8>> = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|v| {
                        i8::try_from(v)
                            .map_err(|_| Error::InvalidInput("entry out of range".into()))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        AsmMatrix::new(rows8)
    }
}

// ---------------------------------------------------------------------------
// Halved monotone triangle enumeration
// ---------------------------------------------------------------------------

/// Generates all rows `a` above row `b`, where `a` has `target_len` entries
/// (equal to `b.len()` or one less), every entry is at most `x`, and rows
/// must strictly increase when `strict` is set.
fn extend_row(
    b: &[i64],
    target_len: usize,
    x: i64,
    strict: bool,
    a: &mut Vec<i64>,
    emit: &mut dyn FnMut(&[i64]),
) {
    if a.len() == target_len {
        emit(a);
        return;
    }
    let pos = a.len();
    let mut lo = b[pos];
    if pos > 0 {
        let prev = a[pos - 1];
        lo = lo.max(if strict { prev + 1 } else { prev });
    }
    let hi = if pos + 1 < b.len() { b[pos + 1].min(x) } else { x };
    for v in lo..=hi {
        a.push(v);
        extend_row(b, target_len, x, strict, a, emit);
        a.pop();
    }
}

fn walk_hmt(
    n: u32,
    x: i64,
    bottom: &[i64],
    strict_rows: bool,
    visit: &mut dyn FnMut(&[Vec<i64>]),
) {
    // rows_up[t] is row n - t; recursion adds rows until row 1 is placed.
    fn recurse(
        rows_up: &mut Vec<Vec<i64>>,
        n: u32,
        x: i64,
        strict: bool,
        visit: &mut dyn FnMut(&[Vec<i64>]),
    ) {
        let built = rows_up.len() as u32;
        if built == n {
            visit(rows_up);
            return;
        }
        let next_row_index = n - built; // the row being generated, 1-based
        let target_len = hmt_row_len(next_row_index);
        let below = rows_up.last().expect("bottom present").clone();
        let mut a = Vec::with_capacity(target_len);
        extend_row(&below, target_len, x, strict, &mut a, &mut |row| {
            rows_up.push(row.to_vec());
            recurse(rows_up, n, x, strict, visit);
            rows_up.pop();
        });
    }
    let mut rows_up = vec![bottom.to_vec()];
    recurse(&mut rows_up, n, x, strict_rows, visit);
}

fn check_hmt_input(n: u32, x: i64, bottom: &BottomRow) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("triangle must have at least one row".into()));
    }
    if bottom.mode() != RowMode::Strict {
        return Err(Error::InvalidInput("bottom row must be in strict mode".into()));
    }
    if bottom.entries().len() != hmt_row_len(n) {
        return Err(Error::InvalidInput(format!(
            "bottom row must have {} entries for {} rows, got {}",
            hmt_row_len(n),
            n,
            bottom.entries().len()
        )));
    }
    if bottom.entries().iter().any(|&k| k > x) {
        return Err(Error::InvalidInput(format!(
            "bottom row entries must not exceed the bound {x}"
        )));
    }
    Ok(())
}

/// Number of halved monotone triangles with `n` rows, prescribed strictly
/// increasing bottom row, and no entry exceeding `x`. `strict_rows` selects
/// the strict (row-increasing) objects; without it the weak variant is
/// counted.
pub fn count_hmt_brute(n: u32, x: i64, bottom: &BottomRow, strict_rows: bool) -> Result<BigUint> {
    check_hmt_input(n, x, bottom)?;
    let mut count = BigUint::zero();
    walk_hmt(n, x, bottom.entries(), strict_rows, &mut |_| {
        count += BigUint::one();
    });
    Ok(count)
}

/// The weak-row variant of [`count_hmt_brute`].
pub fn count_weak_hmt_brute(n: u32, x: i64, bottom: &BottomRow) -> Result<BigUint> {
    count_hmt_brute(n, x, bottom, false)
}

/// Materializes the triangles counted by [`count_hmt_brute`].
pub fn enumerate_hmt(
    n: u32,
    x: i64,
    bottom: &BottomRow,
    strict_rows: bool,
) -> Result<Vec<HalvedMonotoneTriangle>> {
    check_hmt_input(n, x, bottom)?;
    let mut out = Vec::new();
    walk_hmt(n, x, bottom.entries(), strict_rows, &mut |rows_up| {
        let rows: Vec<Vec<i64>> = rows_up.iter().rev().cloned().collect();
        out.push(HalvedMonotoneTriangle::new(rows, strict_rows).expect("enumerated rows are valid"));
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// Monotone triangle enumeration
// ---------------------------------------------------------------------------

fn walk_mt(bottom: &[i64], visit: &mut dyn FnMut(&[Vec<i64>])) {
    fn recurse(rows_up: &mut Vec<Vec<i64>>, visit: &mut dyn FnMut(&[Vec<i64>])) {
        let below = rows_up.last().expect("bottom present");
        if below.len() == 1 {
            visit(rows_up);
            return;
        }
        let target_len = below.len() - 1;
        let below = below.clone();
        // No global cap: entries are confined to the bottom row's range.
        let x = *below.last().expect("nonempty");
        let mut a = Vec::with_capacity(target_len);
        extend_row(&below, target_len, x, true, &mut a, &mut |row| {
            rows_up.push(row.to_vec());
            recurse(rows_up, visit);
            rows_up.pop();
        });
    }
    let mut rows_up = vec![bottom.to_vec()];
    recurse(&mut rows_up, visit);
}

/// Number of monotone triangles with the prescribed strictly increasing
/// bottom row.
pub fn count_mt_brute(bottom: &BottomRow) -> Result<BigUint> {
    if bottom.mode() != RowMode::Strict {
        return Err(Error::InvalidInput("bottom row must be in strict mode".into()));
    }
    let mut count = BigUint::zero();
    walk_mt(bottom.entries(), &mut |_| {
        count += BigUint::one();
    });
    Ok(count)
}

/// Materializes the triangles counted by [`count_mt_brute`].
pub fn enumerate_mt(bottom: &BottomRow) -> Result<Vec<MonotoneTriangle>> {
    if bottom.mode() != RowMode::Strict {
        return Err(Error::InvalidInput("bottom row must be in strict mode".into()));
    }
    let mut out = Vec::new();
    walk_mt(bottom.entries(), &mut |rows_up| {
        let rows: Vec<Vec<i64>> = rows_up.iter().rev().cloned().collect();
        out.push(MonotoneTriangle::new(rows).expect("enumerated rows are valid"));
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// Alternating sign matrices
// ---------------------------------------------------------------------------

/// Calls `visit` once for every `n x n` alternating sign matrix. The search
/// fills the matrix row by row, keeping every row and column partial sum in
/// `{0, 1}`, which is exactly the alternation condition.
pub fn for_each_asm(n: usize, visit: &mut dyn FnMut(&AsmMatrix)) {
    if n == 0 {
        return;
    }
    let mut entries = vec![0i8; n * n];
    let mut col_partial = vec![0i8; n];

    fn place(
        n: usize,
        i: usize,
        j: usize,
        row_partial: i8,
        entries: &mut Vec<i8>,
        col_partial: &mut Vec<i8>,
        visit: &mut dyn FnMut(&AsmMatrix),
    ) {
        if j == n {
            if row_partial != 1 {
                return;
            }
            if i + 1 == n {
                if col_partial.iter().all(|&c| c == 1) {
                    let m = AsmMatrix {
                        n,
                        entries: entries.clone(),
                    };
                    visit(&m);
                }
            } else {
                place(n, i + 1, 0, 0, entries, col_partial, visit);
            }
            return;
        }
        for v in [-1i8, 0, 1] {
            let rp = row_partial + v;
            if !(0..=1).contains(&rp) {
                continue;
            }
            let cp = col_partial[j] + v;
            if !(0..=1).contains(&cp) {
                continue;
            }
            entries[i * n + j] = v;
            col_partial[j] = cp;
            place(n, i, j + 1, rp, entries, col_partial, visit);
            col_partial[j] = cp - v;
            entries[i * n + j] = 0;
        }
    }

    place(n, 0, 0, 0, &mut entries, &mut col_partial, visit);
}

/// All `n x n` alternating sign matrices. Exhaustive and duplicate-free;
/// sizes beyond [`ASM_ENUMERATION_GUARD`] get slow.
pub fn enumerate_asm(n: usize) -> Vec<AsmMatrix> {
    let mut out = Vec::new();
    for_each_asm(n, &mut |m| out.push(m.clone()));
    out
}

/// Exhaustive ASM count by enumeration.
pub fn count_asm_brute(n: usize) -> BigUint {
    let mut count = BigUint::zero();
    for_each_asm(n, &mut |_| count += BigUint::one());
    count
}

/// The monotone triangle with bottom row `(1..n)` corresponding to an ASM:
/// replace every entry by the sum of the entries above it in the same column
/// (inclusive), then record the columns of the ones row by row.
pub fn asm_to_mt(a: &AsmMatrix) -> MonotoneTriangle {
    let n = a.size();
    let mut col_sums = vec![0i32; n];
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(i + 1);
        for j in 0..n {
            col_sums[j] += a.get(i, j) as i32;
            if col_sums[j] == 1 {
                row.push(j as i64 + 1);
            }
        }
        rows.push(row);
    }
    MonotoneTriangle::new(rows).expect("column sums of an ASM form a monotone triangle")
}

/// Inverse of [`asm_to_mt`]; requires the triangle's bottom row to be
/// `(1, 2, ..., n)`.
pub fn mt_to_asm(t: &MonotoneTriangle) -> Result<AsmMatrix> {
    let n = t.size();
    let expect: Vec<i64> = (1..=n as i64).collect();
    if t.bottom_row() != expect.as_slice() {
        return Err(Error::InvalidInput(
            "bottom row must be (1..n) to correspond to an ASM".into(),
        ));
    }
    let mut rows = vec![vec![0i8; n]; n];
    let mut prev = vec![false; n];
    for (i, row) in t.rows().iter().enumerate() {
        let mut cur = vec![false; n];
        for &c in row {
            cur[c as usize - 1] = true;
        }
        for j in 0..n {
            rows[i][j] = (cur[j] as i8) - (prev[j] as i8);
        }
        prev = cur;
    }
    AsmMatrix::new(rows)
}

/// True when the matrix equals its reflection about the vertical axis.
pub fn is_vertically_symmetric(a: &AsmMatrix) -> bool {
    let n = a.size();
    (0..n).all(|i| (0..n).all(|j| a.get(i, j) == a.get(i, n - 1 - j)))
}

/// The halved monotone triangle encoding of a vertically symmetric ASM of
/// odd size `2n+1`: rows `2..=2n+1` of the corresponding monotone triangle,
/// keeping only the entries strictly left of the middle column (which is
/// constantly `n+1`). The result has `2n` rows, bottom row `(1..n)` and no
/// entry exceeding `n`.
pub fn vsasm_to_hmt(a: &AsmMatrix) -> Result<HalvedMonotoneTriangle> {
    let size = a.size();
    if size.is_multiple_of(2) {
        return Err(Error::InvalidInput(
            "vertically symmetric ASMs only exist in odd sizes".into(),
        ));
    }
    if !is_vertically_symmetric(a) {
        return Err(Error::InvalidInput("matrix is not vertically symmetric".into()));
    }
    let mt = asm_to_mt(a);
    let rows: Vec<Vec<i64>> = (1..size)
        .map(|i| mt.rows()[i][..hmt_row_len(i as u32)].to_vec())
        .collect();
    HalvedMonotoneTriangle::new(rows, true)
}

// ---------------------------------------------------------------------------
// Extended summation and the counting recursion
// ---------------------------------------------------------------------------

/// Sum of `f(l)` for `l = a..=b`, extended to arbitrary endpoints by the
/// convention `sum_{a}^{b} = -sum_{b+1}^{a-1}` when `a > b` (so the range
/// `a..=a-1` is empty and sums to zero).
pub fn signed_sum(a: i64, b: i64, f: &mut dyn FnMut(i64) -> Rational) -> Rational {
    let mut acc = Rational::zero();
    if a <= b {
        for l in a..=b {
            acc += f(l);
        }
        acc
    } else {
        for l in (b + 1)..=(a - 1) {
            acc += f(l);
        }
        -acc
    }
}

fn extended_sum_inner(f: &dyn Fn(&[i64]) -> Rational, k: &[i64]) -> Rational {
    let m = k.len();
    debug_assert!(m >= 2);
    if m == 2 {
        return signed_sum(k[0], k[1], &mut |l| f(&[l]));
    }
    let hi = k[m - 1];
    let mid = k[m - 2];
    // Split off the last summation variable: either it moves strictly above
    // `mid`, or it sticks at `mid` and the remaining bracket shrinks.
    let roaming = |ls: &[i64]| -> Rational {
        signed_sum(mid + 1, hi, &mut |l| {
            let mut args = ls.to_vec();
            args.push(l);
            f(&args)
        })
    };
    let t1 = extended_sum_inner(&roaming, &k[..m - 1]);
    let mut shrunk = k[..m - 1].to_vec();
    shrunk[m - 2] = mid - 1;
    let stuck = |ls: &[i64]| -> Rational {
        let mut args = ls.to_vec();
        args.push(mid);
        f(&args)
    };
    let t2 = extended_sum_inner(&stuck, &shrunk);
    t1 + t2
}

/// The extended summation operator with bracket `k` of length `m >= 2`,
/// applied to a function of `m - 1` integer arguments. On strictly
/// increasing brackets it sums over all strictly increasing interleavings
/// `k_i <= l_i <= k_(i+1)`; on arbitrary brackets it is the recursive
/// extension built from [`signed_sum`].
pub fn extended_sum(f: &dyn Fn(&[i64]) -> Rational, k: &[i64]) -> Result<Rational> {
    if k.len() < 2 {
        return Err(Error::InvalidInput(
            "extended summation needs a bracket of at least two entries".into(),
        ));
    }
    Ok(extended_sum_inner(f, k))
}

/// Direct sum over strictly increasing interleavings of a strictly
/// increasing bracket; used as an independent check of [`extended_sum`].
pub fn strict_interleaving_sum(f: &dyn Fn(&[i64]) -> Rational, k: &[i64]) -> Result<Rational> {
    if k.len() < 2 {
        return Err(Error::InvalidInput(
            "interleaving sum needs a bracket of at least two entries".into(),
        ));
    }
    if !k.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput("bracket must be strictly increasing".into()));
    }
    let m = k.len();
    let mut acc = Rational::zero();
    let mut ls = Vec::with_capacity(m - 1);
    fn rec(
        f: &dyn Fn(&[i64]) -> Rational,
        k: &[i64],
        ls: &mut Vec<i64>,
        acc: &mut Rational,
    ) {
        let pos = ls.len();
        if pos == k.len() - 1 {
            *acc += f(ls);
            return;
        }
        let mut lo = k[pos];
        if pos > 0 {
            lo = lo.max(ls[pos - 1] + 1);
        }
        for l in lo..=k[pos + 1] {
            ls.push(l);
            rec(f, k, ls, acc);
            ls.pop();
        }
    }
    rec(f, k, &mut ls, &mut acc);
    Ok(acc)
}

type GammaMemo = RefCell<HashMap<(u32, Vec<i64>), Rational>>;

fn gamma_rec(n: u32, x: i64, args: &[i64], memo: &GammaMemo) -> Rational {
    if n <= 1 {
        return Rational::one();
    }
    let key = (n, args.to_vec());
    if let Some(v) = memo.borrow().get(&key) {
        return v.clone();
    }
    let inner = |ls: &[i64]| gamma_rec(n - 1, x, ls, memo);
    let val = if n.is_multiple_of(2) {
        let mut bracket = args.to_vec();
        bracket.push(x);
        extended_sum_inner(&inner, &bracket)
    } else {
        extended_sum_inner(&inner, args)
    };
    memo.borrow_mut().insert(key, val.clone());
    val
}

/// The halved-triangle counting recursion. With `extended` unset the
/// arguments must be strictly increasing and bounded by `x`, and the result
/// is the triangle count; with `extended` set arbitrary integer arguments
/// are admitted and the result is the value of the polynomial extension.
pub fn gamma_recursive(n: u32, x: i64, k: &[i64], extended: bool) -> Result<Rational> {
    let want = if n == 0 { 0 } else { hmt_row_len(n) };
    if k.len() != want {
        return Err(Error::InvalidInput(format!(
            "expected {} bottom entries for {} rows, got {}",
            want,
            n,
            k.len()
        )));
    }
    if !extended {
        if !k.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(
                "bottom row must be strictly increasing (or pass extended)".into(),
            ));
        }
        if k.iter().any(|&v| v > x) {
            return Err(Error::InvalidInput(
                "bottom row entries must not exceed the bound (or pass extended)".into(),
            ));
        }
    }
    let memo: GammaMemo = RefCell::new(HashMap::new());
    Ok(gamma_rec(n, x, k, &memo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn strict(entries: &[i64]) -> BottomRow {
        BottomRow::strict(entries.to_vec()).unwrap()
    }

    #[test]
    fn hmt_counts_small() {
        assert_eq!(count_hmt_brute(1, 4, &strict(&[2]), true).unwrap(), 1u32.into());
        assert_eq!(count_hmt_brute(2, 5, &strict(&[3]), true).unwrap(), 3u32.into());
        assert_eq!(count_hmt_brute(3, 3, &strict(&[1, 2]), true).unwrap(), 5u32.into());
        assert_eq!(count_hmt_brute(4, 2, &strict(&[1, 2]), true).unwrap(), 3u32.into());
    }

    #[test]
    fn hmt_input_errors() {
        assert!(count_hmt_brute(3, 3, &strict(&[1]), true).is_err());
        assert!(count_hmt_brute(2, 2, &strict(&[3]), true).is_err());
        assert!(BottomRow::strict(vec![2, 2]).is_err());
        let ext = BottomRow::extended(vec![1, 2]);
        assert!(count_hmt_brute(3, 3, &ext, true).is_err());
    }

    #[test]
    fn weak_hmt_counts() {
        assert_eq!(count_weak_hmt_brute(2, 5, &strict(&[3])).unwrap(), 3u32.into());
        // n = 3 has no free multi-entry row, so weak equals strict here.
        assert_eq!(count_weak_hmt_brute(3, 3, &strict(&[1, 2])).unwrap(), 5u32.into());
        assert!(count_weak_hmt_brute(2, 2, &strict(&[3])).is_err());
        // First shape with a free two-entry row: weak exceeds strict.
        let weak = count_weak_hmt_brute(4, 3, &strict(&[1, 2])).unwrap();
        let strict_count = count_hmt_brute(4, 3, &strict(&[1, 2]), true).unwrap();
        assert!(weak > strict_count);
    }

    #[test]
    fn mt_counts_small() {
        assert_eq!(count_mt_brute(&strict(&[5])).unwrap(), 1u32.into());
        assert_eq!(count_mt_brute(&strict(&[1, 2])).unwrap(), 2u32.into());
        assert_eq!(count_mt_brute(&strict(&[1, 2, 3])).unwrap(), 7u32.into());
    }

    #[test]
    fn asm_enumeration_small() {
        assert_eq!(count_asm_brute(1), 1u32.into());
        assert_eq!(count_asm_brute(2), 2u32.into());
        assert_eq!(count_asm_brute(3), 7u32.into());
        assert_eq!(count_asm_brute(4), 42u32.into());
    }

    #[test]
    fn asm_validation() {
        assert!(AsmMatrix::new(vec![vec![0, 1], vec![1, 0]]).is_ok());
        assert!(AsmMatrix::new(vec![vec![1, 1], vec![0, -1]]).is_err());
        assert!(AsmMatrix::new(vec![vec![0, 1], vec![1, 0], vec![0, 0]]).is_err());
        assert!(AsmMatrix::new(vec![vec![-1, 1], vec![1, 0]]).is_err());
    }

    #[test]
    fn identity_matrix_triangle() {
        let id3 = AsmMatrix::new(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let t = asm_to_mt(&id3);
        assert_eq!(t.rows(), &[vec![1], vec![1, 2], vec![1, 2, 3]]);
    }

    #[test]
    fn bijection_round_trip_n3() {
        let asms = enumerate_asm(3);
        assert_eq!(asms.len(), 7);
        for a in &asms {
            let t = asm_to_mt(a);
            assert_eq!(t.bottom_row(), &[1, 2, 3]);
            assert_eq!(&mt_to_asm(&t).unwrap(), a);
        }
    }

    #[test]
    fn mt_to_asm_requires_unit_bottom() {
        let t = MonotoneTriangle::new(vec![vec![2], vec![2, 3]]).unwrap();
        assert!(mt_to_asm(&t).is_err());
    }

    const WORKED_ASM_7X7: &str = "\
0 0 0 1 0 0 0
0 1 0 -1 0 1 0
1 -1 0 1 0 -1 1
0 0 1 -1 1 0 0
0 1 -1 1 -1 1 0
0 0 1 -1 1 0 0
0 0 0 1 0 0 0";

    #[test]
    fn worked_example_7x7() {
        let a: AsmMatrix = WORKED_ASM_7X7.parse().unwrap();
        let t = asm_to_mt(&a);
        assert_eq!(
            t.rows(),
            &[
                vec![4],
                vec![2, 6],
                vec![1, 4, 7],
                vec![1, 3, 5, 7],
                vec![1, 2, 4, 6, 7],
                vec![1, 2, 3, 5, 6, 7],
                vec![1, 2, 3, 4, 5, 6, 7],
            ]
        );
        assert_eq!(mt_to_asm(&t).unwrap(), a);

        assert!(is_vertically_symmetric(&a));
        let h = vsasm_to_hmt(&a).unwrap();
        assert_eq!(
            h.rows(),
            &[
                vec![2],
                vec![1],
                vec![1, 3],
                vec![1, 2],
                vec![1, 2, 3],
                vec![1, 2, 3],
            ]
        );
        assert_eq!(h.bottom_row(), &[1, 2, 3]);
        assert!(h.rows().iter().flatten().all(|&e| e <= 3));
    }

    #[test]
    fn vsasm_size_one() {
        let vs: Vec<AsmMatrix> = enumerate_asm(3)
            .into_iter()
            .filter(is_vertically_symmetric_ref)
            .collect();
        assert_eq!(vs.len(), 1);
        let h = vsasm_to_hmt(&vs[0]).unwrap();
        // The unique two-row halved triangle with bottom (1) and entries <= 1.
        assert_eq!(h.rows(), &[vec![1], vec![1]]);
        let all = enumerate_hmt(2, 1, &strict(&[1]), true).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].rows(), h.rows());
    }

    fn is_vertically_symmetric_ref(a: &AsmMatrix) -> bool {
        is_vertically_symmetric(a)
    }

    #[test]
    fn vsasm_rejects_bad_input() {
        let id3 = AsmMatrix::new(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert!(vsasm_to_hmt(&id3).is_err());
        let id2 = AsmMatrix::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert!(vsasm_to_hmt(&id2).is_err());
    }

    #[test]
    fn signed_sum_conventions() {
        let mut f = |l: i64| rat_int(l);
        assert_eq!(signed_sum(1, 3, &mut f), rat_int(6));
        assert_eq!(signed_sum(4, 3, &mut f), rat_int(0));
        // sum_{l=5}^{3} f(l) = -f(4)
        assert_eq!(signed_sum(5, 3, &mut f), rat_int(-4));
    }

    #[test]
    fn extended_sum_small_brackets() {
        let f = |ls: &[i64]| rat_int(ls[0]);
        assert_eq!(extended_sum(&f, &[1, 3]).unwrap(), rat_int(6));
        assert_eq!(extended_sum(&f, &[5, 3]).unwrap(), rat_int(-4));
        assert!(extended_sum(&f, &[5]).is_err());
    }

    #[test]
    fn extended_sum_matches_interleavings() {
        let f = |ls: &[i64]| rat_int(ls.iter().map(|l| l * l + 1).product::<i64>());
        for bracket in [vec![0, 2, 5], vec![-1, 1, 2, 4], vec![1, 2, 3, 4, 6]] {
            let direct = strict_interleaving_sum(&f, &bracket).unwrap();
            let ext = extended_sum(&f, &bracket).unwrap();
            assert_eq!(direct, ext, "bracket {bracket:?}");
        }
    }

    #[test]
    fn gamma_recursive_small() {
        assert_eq!(gamma_recursive(0, 7, &[], false).unwrap(), rat_int(1));
        assert_eq!(gamma_recursive(2, 5, &[3], false).unwrap(), rat_int(3));
        // Value of 1/2 (2x+2-k1-k2)(k2-k1+1) at (10, 4, 2).
        assert_eq!(gamma_recursive(3, 10, &[4, 2], true).unwrap(), rat_int(-8));
        assert!(gamma_recursive(3, 10, &[4, 2], false).is_err());
    }

    #[test]
    fn gamma_recursive_matches_brute() {
        for n in 1..=5u32 {
            let m = hmt_row_len(n);
            for x in 1..=4i64 {
                for bottom in increasing_tuples(m, 1, x) {
                    let row = strict(&bottom);
                    let brute = count_hmt_brute(n, x, &row, true).unwrap();
                    let rec = gamma_recursive(n, x, &bottom, false).unwrap();
                    assert_eq!(rec, Rational::from_integer(brute.into()));
                }
            }
        }
    }

    fn increasing_tuples(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(len);
        fn rec(len: usize, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if cur.len() == len {
                out.push(cur.clone());
                return;
            }
            let start = cur.last().map_or(lo, |&v| v + 1);
            for v in start..=hi {
                cur.push(v);
                rec(len, lo, hi, cur, out);
                cur.pop();
            }
        }
        rec(len, lo, hi, &mut cur, &mut out);
        out
    }
}
