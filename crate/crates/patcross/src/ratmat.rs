//! Dense exact-rational matrices and the linear algebra the rest of the
//! crate is built on: Moore–Penrose inverses via rank factorization,
//! nonnegative-definiteness by pivoted LDL^t elimination, exact rank, and
//! Schur complements.
//!
//! Everything here is exact. There is no floating point anywhere in this
//! crate; matrix entries are arbitrary-precision rationals.
//!
//! ```
//! use patcross::ratmat::RatMat;
//!
//! let h = RatMat::h_matrix(3);
//! assert_eq!(h.mp_inverse(), h); // the centering matrix is its own pseudoinverse
//! assert!(h.is_nnd().unwrap());
//! ```

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use thiserror::Error;

/// Scalar type used throughout: an always-reduced arbitrary-precision rational.
pub type Q = BigRational;

/// Shorthand for an integer rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Shorthand for the rational n/d.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not nonnegative definite")]
    NotNnd,
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("matrix must have order at least {0}")]
    TooSmall(usize),
    #[error("bad matrix literal: {0}")]
    Parse(String),
}

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMat { rows, cols, data }
    }

    /// Build from integer entries, row major.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged literal");
        RatMat::from_fn(r, c, |i, j| qi(rows[i][j]))
    }

    pub fn identity(k: usize) -> Self {
        RatMat::from_fn(k, k, |i, j| if i == j { Q::one() } else { Q::zero() })
    }

    /// The a×b all-ones matrix J.
    pub fn ones(rows: usize, cols: usize) -> Self {
        RatMat::from_fn(rows, cols, |_, _| Q::one())
    }

    /// The centering projector H = I_v - J_v/v.
    pub fn h_matrix(v: usize) -> Self {
        let inv = Q::new(BigInt::one(), BigInt::from(v as i64));
        RatMat::from_fn(v, v, |i, j| {
            if i == j {
                Q::one() - inv.clone()
            } else {
                -inv.clone()
            }
        })
    }

    /// k×k matrix with `a` on the diagonal and `b` off it.
    pub fn complete_symmetric(k: usize, a: Q, b: Q) -> Result<Self, MatError> {
        if k < 1 {
            return Err(MatError::TooSmall(1));
        }
        Ok(RatMat::from_fn(k, k, |i, j| {
            if i == j {
                a.clone()
            } else {
                b.clone()
            }
        }))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Q) {
        self.data[i * self.cols + j] = value;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> RatMat {
        RatMat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn scale(&self, s: &Q) -> RatMat {
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn trace(&self) -> Q {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.at(i, i)).sum()
    }

    /// Sum of all entries.
    pub fn grand_sum(&self) -> Q {
        self.data.iter().sum()
    }

    pub fn row_sums(&self) -> Vec<Q> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j)).sum())
            .collect()
    }

    /// Submatrix with the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> RatMat {
        RatMat::from_fn(rows.len(), cols.len(), |i, j| {
            self.at(rows[i], cols[j]).clone()
        })
    }

    /// Paste `block` at offset (r0, c0).
    pub fn paste(&mut self, r0: usize, c0: usize, block: &RatMat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.at(i, j).clone());
            }
        }
    }

    /// Assemble a symmetric 2×2 block matrix [[a, b], [b^t, c]].
    pub fn block2_sym(a: &RatMat, b: &RatMat, c: &RatMat) -> RatMat {
        assert_eq!(a.rows, b.rows);
        assert_eq!(b.cols, c.cols);
        let mut m = RatMat::zeros(a.rows + c.rows, a.cols + c.cols);
        m.paste(0, 0, a);
        m.paste(0, a.cols, b);
        m.paste(a.rows, 0, &b.transpose());
        m.paste(a.rows, a.cols, c);
        m
    }

    pub fn matmul(&self, rhs: &RatMat) -> RatMat {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul dims {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = RatMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn matvec(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &x[j]).sum())
            .collect()
    }

    /// Exact rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..a.cols {
            // find a pivot at or below `row`
            let pivot = (row..a.rows).find(|&r| !a.at(r, col).is_zero());
            let Some(p) = pivot else { continue };
            if p != row {
                for j in 0..a.cols {
                    let t = a.at(p, j).clone();
                    a.set(p, j, a.at(row, j).clone());
                    a.set(row, j, t);
                }
            }
            let pv = a.at(row, col).clone();
            for r in (row + 1)..a.rows {
                if a.at(r, col).is_zero() {
                    continue;
                }
                let f = a.at(r, col) / &pv;
                for j in col..a.cols {
                    let nv = a.at(r, j) - &f * a.at(row, j);
                    a.set(r, j, nv);
                }
            }
            rank += 1;
            row += 1;
            if row == a.rows {
                break;
            }
        }
        rank
    }

    /// Inverse of a nonsingular square matrix by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Option<RatMat> {
        assert!(self.is_square());
        let k = self.rows;
        let mut a = self.clone();
        let mut inv = RatMat::identity(k);
        for col in 0..k {
            let pivot = (col..k).find(|&r| !a.at(r, col).is_zero())?;
            if pivot != col {
                for j in 0..k {
                    let t = a.at(pivot, j).clone();
                    a.set(pivot, j, a.at(col, j).clone());
                    a.set(col, j, t);
                    let t = inv.at(pivot, j).clone();
                    inv.set(pivot, j, inv.at(col, j).clone());
                    inv.set(col, j, t);
                }
            }
            let pv = a.at(col, col).clone();
            for j in 0..k {
                a.set(col, j, a.at(col, j) / &pv);
                inv.set(col, j, inv.at(col, j) / &pv);
            }
            for r in 0..k {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let f = a.at(r, col).clone();
                for j in 0..k {
                    let na = a.at(r, j) - &f * a.at(col, j);
                    a.set(r, j, na);
                    let ni = inv.at(r, j) - &f * inv.at(col, j);
                    inv.set(r, j, ni);
                }
            }
        }
        Some(inv)
    }

    /// Moore–Penrose inverse by rank factorization M = B C with B of full
    /// column rank and C of full row rank; then M+ = C^t (C C^t)^-1 (B^t B)^-1 B^t.
    /// Exact; the zero matrix maps to the (transposed-shape) zero matrix.
    pub fn mp_inverse(&self) -> RatMat {
        // Reduced row echelon form; record pivot columns.
        let mut a = self.clone();
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            let Some(p) = (row..a.rows).find(|&r| !a.at(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..a.cols {
                    let t = a.at(p, j).clone();
                    a.set(p, j, a.at(row, j).clone());
                    a.set(row, j, t);
                }
            }
            let pv = a.at(row, col).clone();
            for j in 0..a.cols {
                a.set(row, j, a.at(row, j) / &pv);
            }
            for r in 0..a.rows {
                if r == row || a.at(r, col).is_zero() {
                    continue;
                }
                let f = a.at(r, col).clone();
                for j in 0..a.cols {
                    let nv = a.at(r, j) - &f * a.at(row, j);
                    a.set(r, j, nv);
                }
            }
            pivot_cols.push(col);
            row += 1;
            if row == a.rows {
                break;
            }
        }
        let r = pivot_cols.len();
        if r == 0 {
            return RatMat::zeros(self.cols, self.rows);
        }
        let all_rows: Vec<usize> = (0..self.rows).collect();
        let all_cols: Vec<usize> = (0..self.cols).collect();
        let b = self.select(&all_rows, &pivot_cols); // m×r, full column rank
        let c = a.select(&(0..r).collect::<Vec<_>>(), &all_cols); // r×n, full row rank
        let cct_inv = c
            .matmul(&c.transpose())
            .inverse()
            .expect("C C^t is nonsingular by construction");
        let btb_inv = b
            .transpose()
            .matmul(&b)
            .inverse()
            .expect("B^t B is nonsingular by construction");
        c.transpose()
            .matmul(&cct_inv)
            .matmul(&btb_inv)
            .matmul(&b.transpose())
    }

    /// Diagonal pivots of a symmetrically pivoted LDL^t elimination, or `None`
    /// when the matrix is not nonnegative definite. The pivot list certifies
    /// n.n.d.-ness; its minimum is a useful slack proxy.
    ///
    /// At each step a strictly positive diagonal pivot is chosen. If every
    /// remaining diagonal entry is zero the matrix is n.n.d. iff the whole
    /// remaining block is zero; any negative diagonal entry means indefinite.
    pub fn ldl_pivots(&self) -> Result<Option<Vec<Q>>, MatError> {
        if !self.is_symmetric() {
            return Err(MatError::NotSymmetric);
        }
        let k = self.rows;
        let mut a = self.clone();
        let mut active: Vec<usize> = (0..k).collect();
        let mut pivots = Vec::new();
        loop {
            if active.iter().any(|&i| a.at(i, i).is_negative()) {
                return Ok(None);
            }
            let Some(pos) = active.iter().position(|&i| a.at(i, i).is_positive()) else {
                // All remaining diagonals are zero: n.n.d. iff the block is zero.
                let block_zero = active
                    .iter()
                    .all(|&i| active.iter().all(|&j| a.at(i, j).is_zero()));
                return Ok(block_zero.then_some(pivots));
            };
            let piv = active.remove(pos);
            let d = a.at(piv, piv).clone();
            for &i in &active {
                if a.at(i, piv).is_zero() {
                    continue;
                }
                let f = a.at(i, piv) / &d;
                for &j in &active {
                    let nv = a.at(i, j) - &f * a.at(piv, j);
                    a.set(i, j, nv);
                }
            }
            pivots.push(d);
            if active.is_empty() {
                return Ok(Some(pivots));
            }
        }
    }

    /// Exact test for x^t M x >= 0 for all x. Errors if M is not symmetric.
    pub fn is_nnd(&self) -> Result<bool, MatError> {
        Ok(self.ldl_pivots()?.is_some())
    }

    /// Schur complement onto the `keep` rows/columns, eliminating the rest
    /// with a Moore–Penrose inverse: M_kk - M_ke (M_ee)+ M_ek.
    ///
    /// Requires M symmetric and the eliminated block n.n.d. (automatic when
    /// M itself is n.n.d.).
    pub fn schur(&self, keep: &[usize]) -> Result<RatMat, MatError> {
        if !self.is_symmetric() {
            return Err(MatError::NotSymmetric);
        }
        let elim: Vec<usize> = (0..self.rows).filter(|i| !keep.contains(i)).collect();
        if elim.is_empty() {
            return Ok(self.select(keep, keep));
        }
        let m_ee = self.select(&elim, &elim);
        if !m_ee.is_nnd()? {
            return Err(MatError::NotNnd);
        }
        let m_kk = self.select(keep, keep);
        let m_ke = self.select(keep, &elim);
        Ok(&m_kk - &m_ke.matmul(&m_ee.mp_inverse()).matmul(&m_ke.transpose()))
    }

    /// Entries as "num/den" strings (den omitted when 1), row by row.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).to_string()).collect())
            .collect()
    }

    pub fn to_csv(&self) -> String {
        self.to_string_rows()
            .iter()
            .map(|row| row.join(","))
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn from_string_rows(rows: &[Vec<String>]) -> Result<RatMat, MatError> {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatError::Parse("ragged rows".into()));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            for tok in row {
                data.push(
                    Q::from_str(tok).map_err(|e| MatError::Parse(format!("{tok:?}: {e}")))?,
                );
            }
        }
        Ok(RatMat { rows: r, cols: c, data })
    }
}

/// Serde adapters writing rationals as "num/den" strings. Use with
/// `#[serde(with = "qstr")]` (or the `opt` / `pair` variants) on `Q` fields.
pub mod qstr {
    use super::Q;
    use serde::{Deserialize, Serialize};
    use std::str::FromStr;

    pub fn serialize<S: serde::Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        q.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        Q::from_str(&String::deserialize(d)?).map_err(serde::de::Error::custom)
    }

    pub mod opt {
        use super::Q;
        use serde::Serialize;

        pub fn serialize<S: serde::Serializer>(q: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
            q.as_ref().map(|q| q.to_string()).serialize(s)
        }
    }

    pub mod pair {
        use super::Q;
        use serde::Serialize;

        pub fn serialize<S: serde::Serializer>(q: &(Q, Q), s: S) -> Result<S::Ok, S::Error> {
            (q.0.to_string(), q.1.to_string()).serialize(s)
        }
    }
}

impl Serialize for RatMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_string_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        RatMat::from_string_rows(&rows).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for RatMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Add for &RatMat {
    type Output = RatMat;
    fn add(self, rhs: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &RatMat {
    type Output = RatMat;
    fn sub(self, rhs: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &RatMat {
    type Output = RatMat;
    fn neg(self) -> RatMat {
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &RatMat {
    type Output = RatMat;
    fn mul(self, rhs: &RatMat) -> RatMat {
        self.matmul(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn penrose_holds(m: &RatMat, plus: &RatMat) -> bool {
        let mpm = m.matmul(plus).matmul(m);
        let pmp = plus.matmul(m).matmul(plus);
        let mp = m.matmul(plus);
        let pm = plus.matmul(m);
        mpm == *m && pmp == *plus && mp == mp.transpose() && pm == pm.transpose()
    }

    #[test]
    fn mp_inverse_identity_and_h() {
        let i4 = RatMat::identity(4);
        assert_eq!(i4.mp_inverse(), i4);
        let h4 = RatMat::h_matrix(4);
        // H is symmetric idempotent, so H+ = H.
        assert_eq!(h4.mp_inverse(), h4);
    }

    #[test]
    fn mp_inverse_j3() {
        let j3 = RatMat::ones(3, 3);
        let plus = j3.mp_inverse();
        assert_eq!(plus, j3.scale(&qr(1, 9)));
        assert!(penrose_holds(&j3, &plus));
    }

    #[test]
    fn mp_inverse_zero_and_rectangular() {
        let z = RatMat::zeros(2, 3);
        assert_eq!(z.mp_inverse(), RatMat::zeros(3, 2));
        let m = RatMat::from_i64(&[&[1, 0, 2], &[0, 1, 1]]);
        assert!(penrose_holds(&m, &m.mp_inverse()));
    }

    #[test]
    fn is_nnd_examples() {
        assert!(RatMat::h_matrix(5).is_nnd().unwrap());
        let indef = RatMat::from_i64(&[&[1, 0], &[0, -1]]);
        assert!(!indef.is_nnd().unwrap());
        assert!(RatMat::zeros(3, 3).is_nnd().unwrap());
        let asym = RatMat::from_i64(&[&[1, 2], &[0, 1]]);
        assert_eq!(asym.is_nnd(), Err(MatError::NotSymmetric));
        // zero diagonal with nonzero off-diagonal is indefinite
        let hollow = RatMat::from_i64(&[&[0, 1], &[1, 0]]);
        assert!(!hollow.is_nnd().unwrap());
    }

    #[test]
    fn h_quadratic_form_oracle() {
        // x^t H x = sum (x_i - xbar)^2, so H is n.n.d.; spot-check the
        // identity on a few integer vectors.
        let v = 5usize;
        let h = RatMat::h_matrix(v);
        for x in [[1i64, 2, 3, 4, 5], [0, 0, 1, 0, -7], [3, 3, 3, 3, 3]] {
            let xv: Vec<Q> = x.iter().map(|&c| qi(c)).collect();
            let hx = h.matvec(&xv);
            let quad: Q = xv.iter().zip(&hx).map(|(a, b)| a * b).sum();
            let mean = xv.iter().sum::<Q>() / qi(v as i64);
            let oracle: Q = xv
                .iter()
                .map(|a| {
                    let d = a - &mean;
                    &d * &d
                })
                .sum();
            assert_eq!(quad, oracle);
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RatMat::h_matrix(4).rank(), 3);
        assert_eq!(RatMat::ones(5, 5).rank(), 1);
        assert_eq!(RatMat::zeros(3, 3).rank(), 0);
    }

    #[test]
    fn schur_examples() {
        let i4 = RatMat::identity(4);
        assert_eq!(i4.schur(&[0, 1]).unwrap(), RatMat::identity(2));
        let m = RatMat::from_i64(&[&[2, 1], &[1, 2]]);
        let s = m.schur(&[0]).unwrap();
        assert_eq!(s.at(0, 0), &qr(3, 2));
        // cross-check against the full inverse: (M^-1)_00 = 1/s
        let minv = m.inverse().unwrap();
        assert_eq!(minv.at(0, 0), &(Q::one() / qr(3, 2)));
    }

    #[test]
    fn complete_symmetric_examples() {
        assert_eq!(
            RatMat::complete_symmetric(2, Q::one(), Q::zero()).unwrap(),
            RatMat::identity(2)
        );
        assert_eq!(
            RatMat::complete_symmetric(3, Q::one(), Q::one()).unwrap(),
            RatMat::ones(3, 3)
        );
        let v = 6;
        assert_eq!(
            RatMat::complete_symmetric(v, qr(v as i64 - 1, v as i64), qr(-1, v as i64)).unwrap(),
            RatMat::h_matrix(v)
        );
        assert_eq!(
            RatMat::complete_symmetric(0, Q::one(), Q::one()),
            Err(MatError::TooSmall(1))
        );
    }

    #[test]
    fn nnd_dominance_closure() {
        // is_nnd(A) and is_nnd(B - A) imply is_nnd(B), on a few instances.
        let a = RatMat::h_matrix(4);
        let b = &a + &RatMat::identity(4);
        assert!(a.is_nnd().unwrap());
        assert!((&b - &a).is_nnd().unwrap());
        assert!(b.is_nnd().unwrap());
    }

    #[test]
    fn mp_antitone_on_ah_bj_family() {
        // For A >= B >= 0 with equal ranges (aH + bJ family), B+ - A+ is n.n.d.
        let v = 4usize;
        let mk = |a: Q, b: Q| {
            &RatMat::h_matrix(v).scale(&a) + &RatMat::ones(v, v).scale(&b)
        };
        let big = mk(qi(5), qr(1, 2));
        let small = mk(qi(2), qr(1, 3));
        assert!((&big - &small).is_nnd().unwrap());
        let diff = &small.mp_inverse() - &big.mp_inverse();
        assert!(diff.is_nnd().unwrap());
    }

    #[test]
    fn csv_and_json_round_trip() {
        let m = RatMat::from_fn(2, 2, |i, j| qr(i as i64 + 1, j as i64 + 2));
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.contains("1/2"));
        let back: RatMat = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        assert_eq!(m.to_csv(), "1/2,1/3\n1,2/3");
    }
}
