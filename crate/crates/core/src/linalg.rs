//! Dense exact linear algebra: reduced row echelon form, kernels, ranks and
//! determinants over any [`Field`].
//!
//! Pivots are always the first nonzero entry scanning down the current
//! column, so every result is deterministic. Fields that ask for it (see
//! [`Field::fraction_free`]) are eliminated with Bareiss updates.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Output of [`Matrix::rref_kernel`].
#[derive(Clone, Debug)]
pub struct RrefKernel<F: Field> {
    pub rank: usize,
    pub rref: Matrix<F>,
    pub pivots: Vec<usize>,
    /// Basis of `{v : M v = 0}`, itself in reduced row echelon form.
    pub kernel: Vec<Vec<F::Elem>>,
}

impl<F: Field> Matrix<F> {
    pub fn new(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix { field, rows, cols, data }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.field.one();
        }
        m
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(field: F, rows: &[&[i64]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&k| field.from_int(k)).collect())
            .collect();
        Self::from_rows(field, rows)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { field: self.field.clone(), rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let t = f.mul(a, other.get(k, j));
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &t);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(f.zero(), |acc, (a, b)| {
                    if f.is_zero(a) || f.is_zero(b) {
                        acc
                    } else {
                        f.add(&acc, &f.mul(a, b))
                    }
                })
            })
            .collect())
    }

    pub fn rank(&self) -> usize {
        self.rref_kernel().rank
    }

    pub fn rref_kernel(&self) -> RrefKernel<F> {
        let mut rows = self.to_rows();
        let pivots = if self.field.fraction_free() {
            bareiss_echelon(&self.field, &mut rows, self.cols);
            reduce_echelon(&self.field, &mut rows, self.cols)
        } else {
            gauss_jordan(&self.field, &mut rows, self.cols)
        };
        let rank = pivots.len();
        let kernel = kernel_from_rref(&self.field, &rows, &pivots, self.cols);
        let rref = Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: rows.into_iter().flatten().collect(),
        };
        RrefKernel { rank, rref, pivots, kernel }
    }

    pub fn det(&self) -> Result<F::Elem> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let f = &self.field;
        let n = self.rows;
        if n == 0 {
            return Ok(f.one());
        }
        let mut rows = self.to_rows();
        if f.fraction_free() {
            let (pivots, sign) = bareiss_echelon(f, &mut rows, n);
            if pivots.len() < n {
                return Ok(f.zero());
            }
            let d = rows[n - 1][n - 1].clone();
            return Ok(if sign { f.neg(&d) } else { d });
        }
        let mut det = f.one();
        for c in 0..n {
            let Some(k) = (c..n).find(|&k| !f.is_zero(&rows[k][c])) else {
                return Ok(f.zero());
            };
            if k != c {
                rows.swap(k, c);
                det = f.neg(&det);
            }
            let piv = rows[c][c].clone();
            det = f.mul(&det, &piv);
            let inv = f.inv(&piv)?;
            for i in c + 1..n {
                if f.is_zero(&rows[i][c]) {
                    continue;
                }
                let factor = f.mul(&rows[i][c], &inv);
                for j in c..n {
                    let t = f.mul(&factor, &rows[c][j]);
                    rows[i][j] = f.sub(&rows[i][j], &t);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let f = &self.field;
        let mut rows: Vec<Vec<F::Elem>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
                r
            })
            .collect();
        let pivots = gauss_jordan(f, &mut rows, n);
        if pivots.len() < n {
            return Err(Error::Singular);
        }
        Self::from_rows(f.clone(), rows.into_iter().map(|r| r[n..].to_vec()).collect())
    }
}

/// Whether `v` lies in the span of `rows`.
pub fn in_span<F: Field>(f: &F, rows: &[Vec<F::Elem>], v: &[F::Elem]) -> bool {
    let mut m: Vec<Vec<F::Elem>> = rows.to_vec();
    let before = gauss_jordan(f, &mut m, v.len()).len();
    m.push(v.to_vec());
    gauss_jordan(f, &mut m, v.len()).len() == before
}

/// In-place Gauss-Jordan elimination over the first `cols` columns; returns
/// the pivot columns.
pub(crate) fn gauss_jordan<F: Field>(f: &F, rows: &mut [Vec<F::Elem>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(k) = (r..rows.len()).find(|&k| !f.is_zero(&rows[k][c])) else {
            continue;
        };
        rows.swap(r, k);
        let inv = f.inv(&rows[r][c]).expect("nonzero pivot");
        if !f.is_one(&inv) {
            for x in rows[r].iter_mut() {
                if !f.is_zero(x) {
                    *x = f.mul(x, &inv);
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Fraction-free (Bareiss) forward elimination to row echelon form. Every
/// division is exact. Returns the pivot columns and whether an odd number of
/// row swaps happened.
fn bareiss_echelon<F: Field>(f: &F, rows: &mut [Vec<F::Elem>], cols: usize) -> (Vec<usize>, bool) {
    let mut pivots = Vec::new();
    let mut odd = false;
    let mut prev = f.one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(k) = (r..rows.len()).find(|&k| !f.is_zero(&rows[k][c])) else {
            continue;
        };
        if k != r {
            rows.swap(r, k);
            odd = !odd;
        }
        let piv = rows[r][c].clone();
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..row.len() {
                let a = f.mul(&piv, &row[j]);
                let b = f.mul(&lead, &pivot_row[j]);
                let num = f.sub(&a, &b);
                row[j] = if f.is_one(&prev) {
                    num
                } else {
                    f.div(&num, &prev).expect("nonzero previous pivot")
                };
            }
            row[c] = f.zero();
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    (pivots, odd)
}

/// Turn a row echelon form into the reduced one.
fn reduce_echelon<F: Field>(f: &F, rows: &mut [Vec<F::Elem>], cols: usize) -> Vec<usize> {
    gauss_jordan(f, rows, cols)
}

/// Kernel basis read off an RREF, then itself brought to RREF so the basis
/// does not depend on how the free variables were chosen.
fn kernel_from_rref<F: Field>(
    f: &F,
    rref: &[Vec<F::Elem>],
    pivots: &[usize],
    cols: usize,
) -> Vec<Vec<F::Elem>> {
    let mut is_pivot = vec![false; cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let mut basis: Vec<Vec<F::Elem>> = (0..cols)
        .filter(|&j| !is_pivot[j])
        .map(|free| {
            let mut v = vec![f.zero(); cols];
            v[free] = f.one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = f.neg(&rref[i][free]);
            }
            v
        })
        .collect();
    gauss_jordan(f, &mut basis, cols);
    basis
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "[{}x{} over {:?}]", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|a| self.field.format_elem(a)).collect();
            writeln!(out, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FiniteField;
    use crate::ratfun::RationalFunctionField;
    use crate::upoly::Poly;
    use proptest::prelude::*;

    fn fp(p: u64) -> FiniteField {
        FiniteField::prime(p).unwrap()
    }

    #[test]
    fn rref_kernel_examples() {
        let f2 = fp(2);
        let id = Matrix::identity(f2.clone(), 3).rref_kernel();
        assert_eq!(id.rank, 3);
        assert!(id.kernel.is_empty());

        let z = Matrix::zeros(f2, 2, 3).rref_kernel();
        assert_eq!(z.rank, 0);
        assert_eq!(z.kernel.len(), 3);

        let f3 = fp(3);
        let m = Matrix::from_ints(f3.clone(), &[&[1, 1], &[1, 1]]).unwrap();
        let rk = m.rref_kernel();
        assert_eq!(rk.rank, 1);
        assert_eq!(rk.kernel, vec![vec![f3.from_int(1), f3.from_int(2)]]);
    }

    #[test]
    fn det_examples() {
        let f4 = FiniteField::gf(4).unwrap();
        assert!(f4.is_one(&Matrix::identity(f4.clone(), 4).det().unwrap()));
        let g = f4.generator("g").unwrap();
        let m = Matrix::from_rows(
            f4.clone(),
            vec![vec![f4.one(), f4.one()], vec![g.clone(), f4.mul(&g, &g)]],
        )
        .unwrap();
        assert!(f4.is_one(&m.det().unwrap()));
        let rep = Matrix::from_rows(f4.clone(), vec![vec![g.clone(), f4.one()]; 2]).unwrap();
        assert!(f4.is_zero(&rep.det().unwrap()));
        let rect = Matrix::zeros(f4, 2, 3);
        assert_eq!(rect.det(), Err(Error::NotSquare { rows: 2, cols: 3 }));
    }

    fn minor_det<F: Field>(f: &F, m: &[Vec<F::Elem>]) -> F::Elem {
        if m.is_empty() {
            return f.one();
        }
        let mut acc = f.zero();
        for j in 0..m.len() {
            let sub: Vec<Vec<F::Elem>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let t = f.mul(&m[0][j], &minor_det(f, &sub));
            acc = if j % 2 == 0 { f.add(&acc, &t) } else { f.sub(&acc, &t) };
        }
        acc
    }

    /// Rank as the size of the largest nonvanishing minor.
    fn minor_rank<F: Field>(f: &F, m: &Matrix<F>) -> usize {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        for k in (1..=m.rows().min(m.cols())).rev() {
            for rs in subsets(m.rows(), k) {
                for cs in subsets(m.cols(), k) {
                    let sub: Vec<Vec<F::Elem>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| m.get(i, j).clone()).collect())
                        .collect();
                    if !f.is_zero(&minor_det(f, &sub)) {
                        return k;
                    }
                }
            }
        }
        0
    }

    proptest! {
        #[test]
        fn rank_agrees_with_minor_oracle(p in prop::sample::select(vec![2i64, 3, 5]),
                                         entries in prop::collection::vec(0i64..5, 16)) {
            let f = fp(p as u64);
            let rows: Vec<&[i64]> = entries.chunks(4).collect();
            let m = Matrix::from_ints(f.clone(), &rows).unwrap();
            prop_assert_eq!(m.rank(), minor_rank(&f, &m));
            prop_assert_eq!(m.det().unwrap(), minor_det(&f, &m.to_rows()));
        }

        #[test]
        fn kernel_vectors_annihilate(p in prop::sample::select(vec![2i64, 3, 7]),
                                     entries in prop::collection::vec(0i64..7, 15)) {
            let f = fp(p as u64);
            let rows: Vec<&[i64]> = entries.chunks(5).collect();
            let m = Matrix::from_ints(f.clone(), &rows).unwrap();
            let rk = m.rref_kernel();
            prop_assert_eq!(rk.rank + rk.kernel.len(), 5);
            for v in &rk.kernel {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| f.is_zero(x)));
            }
        }

        #[test]
        fn bareiss_matches_plain_elimination(entries in prop::collection::vec((0i64..3, 0i64..3), 9)) {
            // (a + b t) entries over F_3(t); compare with a substitution oracle.
            let k = RationalFunctionField::new(fp(3));
            let base = k.base().clone();
            let cell = |(a, b): (i64, i64)| {
                k.from_poly(Poly::new(base.clone(), vec![base.from_int(a), base.from_int(b)]))
            };
            let rows: Vec<Vec<_>> = entries.chunks(3).map(|c| c.iter().map(|&e| cell(e)).collect()).collect();
            let m = Matrix::from_rows(k.clone(), rows.clone()).unwrap();
            let d = m.det().unwrap();
            prop_assert_eq!(d.clone(), minor_det(&k, &rows));
            let rk = m.rref_kernel();
            prop_assert_eq!(rk.rank == 3, !k.is_zero(&d));
            for v in &rk.kernel {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| k.is_zero(x)));
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let f5 = fp(5);
        let m = Matrix::from_ints(f5.clone(), &[&[1, 2, 0], &[0, 1, 4], &[3, 0, 2]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(f5.clone(), 3));
        let sing = Matrix::from_ints(f5, &[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(sing.inverse().err(), Some(Error::Singular));
    }
}
