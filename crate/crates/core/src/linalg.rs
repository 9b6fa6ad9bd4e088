//! Dense matrices over a [`Coeff`] field: elimination, kernels, inverses
//! and characteristic polynomials.

use std::fmt;

use crate::error::{Error, Result};
use num_complex::Complex64;

use crate::scalar::Coeff;

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.data[r * self.cols..(r + 1) * self.cols].iter().map(|x| format!("{x:?}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<S: Coeff> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<S>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x.clone() * s)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + &other[(i, j)]
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - &other[(i, j)]
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    let prod = a.clone() * b;
                    out.data[idx] = out.data[idx].clone() + &prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + &(a.clone() * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Coeff::is_zero)
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.sub(other).is_zero()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Coeff::magnitude).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    /// Block-diagonal matrix with the given blocks.
    pub fn block_diag(blocks: &[&Matrix<S>]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let tol = if S::EXACT {
            0.0
        } else {
            let scale = self.data.iter().map(Coeff::magnitude).fold(0.0, f64::max);
            scale * 1e-10
        };
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let pick = if S::EXACT {
                (r..self.rows).find(|&i| !self[(i, c)].is_zero())
            } else {
                (r..self.rows)
                    .map(|i| (i, self[(i, c)].magnitude()))
                    .filter(|&(_, m)| m > tol)
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .map(|(i, _)| i)
            };
            let Some(p) = pick else { continue };
            self.swap_rows(p, r);
            let inv = self[(r, c)].inv().expect("nonzero pivot");
            for j in c..self.cols {
                let v = self[(r, j)].clone() * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self[(i, c)].clone();
                if structurally_zero(&f) {
                    continue;
                }
                for j in c..self.cols {
                    let pv = &self.data[r * self.cols + j];
                    if structurally_zero(pv) {
                        continue;
                    }
                    let v = self[(i, j)].clone() - &(f.clone() * pv);
                    self[(i, j)] = v;
                }
                if !S::EXACT {
                    self[(i, c)] = S::zero();
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        if S::EXACT {
            return self.clone().rref().len();
        }
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let m = nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_c64());
        let sv = m.svd(false, false).singular_values;
        let top = sv.iter().copied().fold(0.0, f64::max);
        sv.iter().filter(|&&x| x > top * FLOAT_RANK_TOL).count()
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solve `self * X = rhs` when the solution is unique.
    pub fn solve(&self, rhs: &Matrix<S>) -> Result<Matrix<S>> {
        assert_eq!(self.rows, rhs.rows);
        let n = self.cols;
        let mut aug = Self::zeros(self.rows, n + rhs.cols);
        for i in 0..self.rows {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..rhs.cols {
                aug[(i, n + j)] = rhs[(i, j)].clone();
            }
        }
        let pivots = aug.rref();
        if pivots.iter().any(|&p| p >= n) {
            return Err(Error::Singular("inconsistent linear system".into()));
        }
        if pivots.len() < n {
            return Err(Error::Singular("underdetermined linear system".into()));
        }
        Ok(Self::from_fn(n, rhs.cols, |i, j| aug[(i, n + j)].clone()))
    }

    /// Solve `self * x = b` when some solution exists (not necessarily unique).
    pub fn solve_any(&self, b: &[S]) -> Option<Vec<S>> {
        let n = self.cols;
        let mut aug = Self::zeros(self.rows, n + 1);
        for i in 0..self.rows {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n)] = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&n) {
            return None;
        }
        let mut x = vec![S::zero(); n];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug[(r, n)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Singular("non-square matrix".into()));
        }
        self.solve(&Self::identity(self.rows))
    }

    pub fn det(&self) -> S {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let pick = if S::EXACT {
                (c..n).find(|&i| !m[(i, c)].is_zero())
            } else {
                (c..n)
                    .max_by(|&a, &b| m[(a, c)].magnitude().total_cmp(&m[(b, c)].magnitude()))
                    .filter(|&i| !m[(i, c)].is_zero())
            };
            let Some(p) = pick else { return S::zero() };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for i in c + 1..n {
                let f = m[(i, c)].clone() * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m[(i, j)].clone() - &(f.clone() * &m[(c, j)]);
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Coefficients of det(t I - self), lowest degree first.
    pub fn char_poly(&self) -> Vec<S> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        // Faddeev-LeVerrier.
        let mut coeffs = vec![S::zero(); n + 1];
        coeffs[n] = S::one();
        let mut m = Self::zeros(n, n);
        let id = Self::identity(n);
        for k in 1..=n {
            m = self.mul(&m).add(&id.scale(&coeffs[n + 1 - k]));
            let am = self.mul(&m);
            let t = am.trace();
            coeffs[n - k] = -t.div(&S::from_i64(k as i64)).expect("k > 0");
        }
        coeffs
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// Skipping an update is only safe when the entry is exactly zero; float
/// entries below the comparison tolerance still have to be eliminated.
fn structurally_zero<S: Coeff>(x: &S) -> bool {
    if S::EXACT {
        x.is_zero()
    } else {
        x.magnitude() == 0.0
    }
}

/// Singular values, largest first, of the matrix with the given columns.
fn singular_values(cols: &[&Vec<Complex64>]) -> Vec<f64> {
    let rows = cols.first().map_or(0, |c| c.len());
    if rows == 0 {
        return Vec::new();
    }
    let m = nalgebra::DMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i]);
    let mut sv: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Rank of a set of vectors.
pub fn rank_of<S: Coeff>(vectors: &[Vec<S>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    if S::EXACT {
        Matrix::from_rows(vectors.to_vec()).rank()
    } else {
        independent_subset(vectors).len()
    }
}

/// Relative singular-value cutoff for float ranks.
pub const FLOAT_RANK_TOL: f64 = 1e-9;

/// A maximal linearly independent subset, as sorted indices. Exact
/// coefficients keep the first independent vectors in order of appearance;
/// floats use column pivoting so the chosen basis is well conditioned.
pub fn independent_subset<S: Coeff>(vectors: &[Vec<S>]) -> Vec<usize> {
    if vectors.is_empty() {
        return Vec::new();
    }
    if S::EXACT {
        return Matrix::from_cols(vectors).rref();
    }
    let as_c: Vec<Vec<Complex64>> = vectors
        .iter()
        .map(|v| v.iter().map(Coeff::to_c64).collect())
        .collect();
    let all: Vec<&Vec<Complex64>> = as_c.iter().collect();
    let sv_all = singular_values(&all);
    let top = sv_all.first().copied().unwrap_or(0.0);
    let rank = sv_all.iter().filter(|&&x| x > top * FLOAT_RANK_TOL).count();
    let norm = |v: &[Complex64]| v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    // Gram-Schmidt with column pivoting: always take the vector with the
    // largest residual, so the chosen basis is well conditioned.
    let mut residual = as_c.clone();
    let mut chosen: Vec<usize> = Vec::new();
    while chosen.len() < rank {
        let (best, n) = (0..residual.len())
            .filter(|i| !chosen.contains(i))
            .map(|i| (i, norm(&residual[i])))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("rank bounded by the family size");
        if n <= top * FLOAT_RANK_TOL {
            break;
        }
        let e: Vec<Complex64> = residual[best].iter().map(|x| x / n).collect();
        chosen.push(best);
        for r in residual.iter_mut() {
            let c: Complex64 = r.iter().zip(&e).map(|(x, y)| x * y.conj()).sum();
            for (x, y) in r.iter_mut().zip(&e) {
                *x -= c * y;
            }
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span<S: Coeff>(basis: &[Vec<S>], v: &[S]) -> bool {
    if basis.is_empty() {
        return v.iter().all(Coeff::is_zero);
    }
    Matrix::from_cols(basis).solve_any(v).is_some()
}

/// Whether two families span the same subspace.
pub fn same_span<S: Coeff>(a: &[Vec<S>], b: &[Vec<S>]) -> bool {
    let ra = rank_of(a);
    let rb = rank_of(b);
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    ra == rb && rank_of(&both) == ra
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn m(rows: &[&[i64]]) -> Matrix<Scalar> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(3));
        assert_eq!(a.det(), Scalar::int(18));
    }

    #[test]
    fn kernel_and_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(Coeff::is_zero));
    }

    #[test]
    fn char_poly_of_companion() {
        // t^2 - 3t + 2 for diag(1, 2)
        let a = m(&[&[1, 0], &[0, 2]]);
        let p = a.char_poly();
        assert_eq!(p, vec![Scalar::int(2), Scalar::int(-3), Scalar::int(1)]);
    }

    #[test]
    fn float_rank_is_tolerant() {
        use num_complex::Complex64 as C;
        let a: Matrix<C> = Matrix::from_rows(vec![
            vec![C::new(1.0, 0.0), C::new(2.0, 0.0)],
            vec![C::new(2.0, 0.0), C::new(4.0 + 1e-14, 0.0)],
        ]);
        assert_eq!(a.rank(), 1);
    }
}
