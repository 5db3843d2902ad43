//! Exact rational scalars and dense rational matrices.
//!
//! All linear algebra in this crate runs over arbitrary-precision rationals;
//! there is no floating point anywhere in this module. Rank uses fraction-free
//! (Bareiss) elimination on denominator-cleared integer rows, with an `i128`
//! fast path for the small matrices that dominate subset searches.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;

/// Exact rational scalar. Always stored reduced, denominator positive.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational n/d. Panics on d = 0; intended for literals in code and tests.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRatError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer `{0}`")]
    BadInt(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("denominator must be positive in `{0}`")]
    NonPositiveDenominator(String),
}

/// Parse the interchange form: an optional sign, an integer, or `p/q` with
/// `q > 0` (for example `-3/4`).
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRatError::Empty);
    }
    match s.split_once('/') {
        None => {
            let n = BigInt::from_str(s).map_err(|_| ParseRatError::BadInt(s.to_string()))?;
            Ok(Rat::from_integer(n))
        }
        Some((ns, ds)) => {
            let n = BigInt::from_str(ns).map_err(|_| ParseRatError::BadInt(s.to_string()))?;
            let d = BigInt::from_str(ds).map_err(|_| ParseRatError::BadInt(s.to_string()))?;
            if d.is_zero() {
                Err(ParseRatError::ZeroDenominator(s.to_string()))
            } else if d.is_negative() {
                Err(ParseRatError::NonPositiveDenominator(s.to_string()))
            } else {
                Ok(Rat::new(n, d))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index out of bounds: {0}")]
    Index(String),
}

/// Dense row-major matrix of exact rationals.
///
/// Zero-row or zero-column matrices are permitted internally (they show up as
/// empty constraint systems); interchange formats enforce at least 1x1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(LinalgError::Dimension(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    c
                )));
            }
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Build from integer literals, row major. Test and generator helper.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat_int(x)).collect())
                .collect(),
        )
        .expect("ragged literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<Rat> {
        self.row(r).to_vec()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Mat) -> Result<Mat, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::Dimension(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Mat::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let mut acc = Rat::zero();
                for k in 0..self.cols {
                    acc += self.get(r, k) * rhs.get(k, c);
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    pub fn mat_vec(&self, x: &[Rat]) -> Result<Vec<Rat>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::Dimension(format!(
                "matrix has {} cols, vector has {} entries",
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), x)).collect())
    }

    /// Keep only the listed columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let mut out = Mat::zero(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        let mut out = Mat::zero(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..self.cols {
                out.set(i, c, self.get(r, c).clone());
            }
        }
        out
    }

    /// The minor obtained by deleting row `j` and column `k` (0-based).
    pub fn delete_row_col(&self, j: usize, k: usize) -> Result<Mat, LinalgError> {
        if j >= self.rows || k >= self.cols {
            return Err(LinalgError::Index(format!(
                "delete row {} col {} from {}x{}",
                j + 1,
                k + 1,
                self.rows,
                self.cols
            )));
        }
        let rows: Vec<usize> = (0..self.rows).filter(|&r| r != j).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&c| c != k).collect();
        Ok(self.select_rows(&rows).select_cols(&cols))
    }

    pub fn kron(&self, rhs: &Mat) -> Mat {
        let mut out = Mat::zero(self.rows * rhs.rows, self.cols * rhs.cols);
        for ar in 0..self.rows {
            for ac in 0..self.cols {
                let a = self.get(ar, ac);
                if a.is_zero() {
                    continue;
                }
                for br in 0..rhs.rows {
                    for bc in 0..rhs.cols {
                        out.set(ar * rhs.rows + br, ac * rhs.cols + bc, a * rhs.get(br, bc));
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(blocks: &[Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zero(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.get(r, c).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let int_rows = self.scaled_integer_rows();
        rank_integer_rows(&int_rows, self.cols)
    }

    /// Each row scaled by the lcm of its denominators; scaling rows does not
    /// change the rank or the row span.
    fn scaled_integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| scale_row_to_integers(self.row(r)))
            .collect()
    }

    /// A basis of the right nullspace {x : self * x = 0}, each basis vector
    /// scaled so its first nonzero entry is 1. Basis size is cols - rank.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = rref_in_place(&mut m);
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; self.cols];
            for &c in &pivots {
                s[c] = true;
            }
            s
        };
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if pivot_set[f] {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.get(i, f).clone();
            }
            normalize_first_nonzero(&mut v);
            basis.push(v);
        }
        basis
    }

    /// One exact solution of self * x = b, free variables set to zero, or
    /// None when the system is inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Result<Option<Vec<Rat>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Dimension(format!(
                "matrix has {} rows, rhs has {} entries",
                self.rows,
                b.len()
            )));
        }
        let mut aug = Mat::zero(self.rows, self.cols + 1);
        for (r, rhs) in b.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, rhs.clone());
        }
        let pivots = rref_in_place(&mut aug);
        // A pivot in the rhs column means 0 = 1 somewhere.
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }
}

/// Coefficients alpha with alpha^T * rows = v, or None when v is outside the
/// row span. The returned alpha reproduces v exactly.
pub fn in_row_span(v: &[Rat], rows: &Mat) -> Result<Option<Vec<Rat>>, LinalgError> {
    if v.len() != rows.cols() {
        return Err(LinalgError::Dimension(format!(
            "vector has {} entries, rows have {} columns",
            v.len(),
            rows.cols()
        )));
    }
    rows.transpose().solve(v)
}

/// Fast span-membership test without extracting coefficients: v is in the
/// row span of `rows` iff appending it does not raise the rank.
pub fn in_row_span_fast(v: &[Rat], rows: &Mat) -> bool {
    debug_assert_eq!(v.len(), rows.cols());
    if v.iter().all(Rat::is_zero) {
        return true;
    }
    let mut int_rows: Vec<Vec<BigInt>> = rows.scaled_integer_rows();
    let base = rank_integer_rows(&int_rows, rows.cols());
    int_rows.push(scale_row_to_integers(v));
    rank_integer_rows(&int_rows, rows.cols()) == base
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Scale so the first nonzero entry becomes 1. No-op on the zero vector.
pub fn normalize_first_nonzero(v: &mut [Rat]) {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x /= &lead;
            }
        }
    }
}

fn scale_row_to_integers(row: &[Rat]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in row {
        l = l.lcm(x.denom());
    }
    row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

fn rank_integer_rows(rows: &[Vec<BigInt>], cols: usize) -> usize {
    if rows.is_empty() || cols == 0 {
        return 0;
    }
    if let Some(small) = to_i128_matrix(rows, cols) {
        if let Some(rank) = bareiss_rank_i128(small, rows.len(), cols) {
            return rank;
        }
    }
    bareiss_rank_bigint(rows.to_vec(), cols)
}

fn to_i128_matrix(rows: &[Vec<BigInt>], cols: usize) -> Option<Vec<i128>> {
    let mut out = Vec::with_capacity(rows.len() * cols);
    for row in rows {
        for x in row {
            out.push(x.to_i128()?);
        }
    }
    Some(out)
}

/// Fraction-free elimination; every intermediate entry is a minor of the
/// input, so checked i128 arithmetic either finishes exactly or reports
/// overflow for the BigInt path to handle.
fn bareiss_rank_i128(mut m: Vec<i128>, rows: usize, cols: usize) -> Option<usize> {
    let mut prev: i128 = 1;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.swap(r * cols + j, p * cols + j);
            }
        }
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                let t1 = m[r * cols + c].checked_mul(m[i * cols + j])?;
                let t2 = m[i * cols + c].checked_mul(m[r * cols + j])?;
                m[i * cols + j] = t1.checked_sub(t2)? / prev;
            }
            m[i * cols + c] = 0;
        }
        prev = m[r * cols + c];
        r += 1;
    }
    Some(r)
}

fn bareiss_rank_bigint(mut m: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = m.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                let num = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                debug_assert!((&num % &prev).is_zero());
                m[i][j] = num / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref_in_place(m: &mut Mat) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = m.get(r, j).clone();
                m.set(r, j, m.get(p, j).clone());
                m.set(p, j, tmp);
            }
        }
        let inv = m.get(r, c).clone();
        for j in c..cols {
            let v = m.get(r, j) / &inv;
            m.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || m.get(i, c).is_zero() {
                continue;
            }
            let f = m.get(i, c).clone();
            for j in c..cols {
                let v = m.get(i, j) - &f * m.get(r, j);
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.to_string()).collect())
            .collect();
        let mut widths = vec![0usize; self.cols];
        for row in &cells {
            for (c, s) in row.iter().enumerate() {
                widths[c] = widths[c].max(s.len());
            }
        }
        for row in &cells {
            write!(f, "[")?;
            for (c, s) in row.iter().enumerate() {
                if c > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:>w$}", s, w = widths[c])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h1() -> Mat {
        Mat::from_rows(vec![
            vec![rat_int(1), rat(1, 2), rat(1, 4)],
            vec![rat(1, 2), rat_int(1), rat(1, 2)],
            vec![rat_int(0), rat(1, 2), rat_int(1)],
        ])
        .unwrap()
    }

    fn h2() -> Mat {
        Mat::from_rows(vec![
            vec![rat_int(1), rat(1, 2), rat_int(0)],
            vec![rat(1, 2), rat_int(1), rat(1, 2)],
            vec![rat_int(0), rat(1, 2), rat_int(1)],
        ])
        .unwrap()
    }

    /// Determinant by cofactor expansion, used as an independent route for
    /// the rank checks below.
    fn det_cofactor(m: &Mat) -> Rat {
        assert_eq!(m.rows(), m.cols());
        let n = m.rows();
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut acc = Rat::zero();
        for c in 0..n {
            let a = m.get(0, c);
            if a.is_zero() {
                continue;
            }
            let minor = m.delete_row_col(0, c).unwrap();
            let term = a * det_cofactor(&minor);
            if c % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "-3/4", "7", "1/2", "-12"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!(parse_rat(" 2/4 ").unwrap(), rat(1, 2));
        assert!(matches!(
            parse_rat("1/0"),
            Err(ParseRatError::ZeroDenominator(_))
        ));
        assert!(matches!(
            parse_rat("3/-4"),
            Err(ParseRatError::NonPositiveDenominator(_))
        ));
        assert!(matches!(parse_rat("x"), Err(ParseRatError::BadInt(_))));
        assert!(matches!(parse_rat(""), Err(ParseRatError::Empty)));
    }

    #[test]
    fn rank_zero_matrix() {
        assert_eq!(Mat::zero(2, 2).rank(), 0);
    }

    #[test]
    fn rank_h1_minor_is_one() {
        // rows {1,2} x cols {2,3} of H1 (0-based rows {0,1}, cols {1,2})
        let m = h1().select_rows(&[0, 1]).select_cols(&[1, 2]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rank_h1_full_via_determinant_oracle() {
        let d = det_cofactor(&h1());
        assert_eq!(d, rat(9, 16));
        assert!(!d.is_zero());
        assert_eq!(h1().rank(), 3);
    }

    #[test]
    fn rank_equals_transpose_rank() {
        for m in [h1(), h2(), Mat::identity(4), Mat::zero(3, 5)] {
            assert_eq!(m.rank(), m.transpose().rank());
            assert!(m.rank() <= m.rows().min(m.cols()));
        }
    }

    #[test]
    fn nullspace_full_rank_is_empty() {
        assert!(Mat::identity(3).nullspace().is_empty());
    }

    #[test]
    fn nullspace_single_row() {
        let m = Mat::from_rows(vec![vec![rat_int(1), rat(1, 2)]]).unwrap();
        let basis = m.nullspace();
        assert_eq!(basis.len(), 1);
        // Spanned by (1, -2); check m * x = 0 directly.
        assert_eq!(basis[0], vec![rat_int(1), rat_int(-2)]);
        assert!(dot(m.row(0), &basis[0]).is_zero());
    }

    #[test]
    fn nullspace_proportional_rows() {
        let m = Mat::from_rows(vec![
            vec![rat(1, 2), rat(1, 4)],
            vec![rat_int(1), rat(1, 2)],
        ])
        .unwrap();
        let basis = m.nullspace();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], vec![rat_int(1), rat_int(-2)]);
        for r in 0..2 {
            assert!(dot(m.row(r), &basis[0]).is_zero());
        }
    }

    #[test]
    fn nullspace_dimension_counts() {
        for m in [h1(), h2(), Mat::zero(2, 4), Mat::identity(5)] {
            assert_eq!(m.cols(), m.rank() + m.nullspace().len());
            for v in m.nullspace() {
                assert!(m.mat_vec(&v).unwrap().iter().all(Rat::is_zero));
            }
        }
    }

    #[test]
    fn span_membership_scalar() {
        let rows = Mat::from_rows(vec![vec![rat(1, 2)]]).unwrap();
        let alpha = in_row_span(&[rat_int(1)], &rows).unwrap().unwrap();
        assert_eq!(alpha, vec![rat_int(2)]);
    }

    #[test]
    fn span_membership_negative() {
        let rows = Mat::from_rows(vec![vec![rat(1, 2), rat(1, 2)]]).unwrap();
        assert!(in_row_span(&[rat_int(0), rat_int(1)], &rows)
            .unwrap()
            .is_none());
        assert!(!in_row_span_fast(&[rat_int(0), rat_int(1)], &rows));
    }

    #[test]
    fn span_membership_zero_vector() {
        let rows = h1();
        let alpha = in_row_span(&vec![Rat::zero(); 3], &rows).unwrap().unwrap();
        assert!(alpha.iter().all(Rat::is_zero));
    }

    #[test]
    fn span_alpha_reproduces_vector() {
        let rows = h2().select_rows(&[0, 1]);
        let v = vec![rat_int(2), rat_int(3), rat_int(1)];
        if let Some(alpha) = in_row_span(&v, &rows).unwrap() {
            let rebuilt = rows.transpose().mat_vec(&alpha).unwrap();
            assert_eq!(rebuilt, v);
        }
        // Not-in-span must match the rank characterization.
        let outside = vec![rat_int(1), rat_int(0), rat_int(0)];
        let member = in_row_span(&outside, &rows).unwrap().is_some();
        let mut stacked = rows.clone();
        stacked = Mat::from_rows(
            (0..stacked.rows())
                .map(|r| stacked.row_vec(r))
                .chain(std::iter::once(outside.clone()))
                .collect(),
        )
        .unwrap();
        assert_eq!(member, stacked.rank() == rows.rank());
        assert_eq!(member, in_row_span_fast(&outside, &rows));
    }

    #[test]
    fn delete_row_col_examples() {
        let m = h1().delete_row_col(2, 0).unwrap();
        assert_eq!(
            m,
            Mat::from_rows(vec![
                vec![rat(1, 2), rat(1, 4)],
                vec![rat_int(1), rat(1, 2)],
            ])
            .unwrap()
        );
        assert_eq!(
            Mat::identity(2).delete_row_col(0, 0).unwrap(),
            Mat::identity(1)
        );
        let m = h2().delete_row_col(0, 2).unwrap();
        assert_eq!(
            m,
            Mat::from_rows(vec![
                vec![rat(1, 2), rat_int(1)],
                vec![rat_int(0), rat(1, 2)],
            ])
            .unwrap()
        );
        assert!(h2().delete_row_col(3, 0).is_err());
    }

    #[test]
    fn kron_identity_sizes() {
        let k = h2().kron(&Mat::identity(2));
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert_eq!(k.get(0, 0), &rat_int(1));
        assert_eq!(k.get(0, 1), &rat_int(0));
        assert_eq!(k.get(1, 3), &rat(1, 2));
        assert_eq!(k.rank(), 6);
    }

    #[test]
    fn block_diag_layout() {
        let b = Mat::block_diag(&[Mat::identity(2), Mat::from_i64(&[&[5]])]);
        assert_eq!((b.rows(), b.cols()), (3, 3));
        assert_eq!(b.get(2, 2), &rat_int(5));
        assert_eq!(b.get(2, 0), &rat_int(0));
    }

    #[test]
    fn bareiss_matches_rref_rank_on_fractions() {
        // Exercise the BigInt fallback alongside the i128 path.
        let m = Mat::from_rows(vec![
            vec![rat(1, 3), rat(2, 7), rat(5, 11)],
            vec![rat(2, 3), rat(4, 7), rat(10, 11)],
            vec![rat_int(1), rat_int(0), rat_int(1)],
        ])
        .unwrap();
        assert_eq!(m.rank(), 2);
    }
}
