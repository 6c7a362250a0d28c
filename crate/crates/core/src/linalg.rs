//! Dense column-major matrices and Gaussian elimination with row pivoting.
//!
//! The factorization accepts tall matrices (`rows >= cols`) and stops after
//! `cols` steps: on a rectangular Vandermonde matrix the pivot rows are the
//! Discrete Leja Points. The arithmetic touching column `j` only ever reads
//! columns `0..=j`, so the first `k` pivots do not depend on later columns.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Relative pivot threshold below which a column is declared dependent.
pub const RANK_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.cols).map(|j| self[(i, j)]).collect()
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.cols)
            .map(|j| self.col(j).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            for k in 0..self.cols {
                let b = other[(k, j)];
                if b == 0.0 {
                    continue;
                }
                let a = self.col(k);
                for (o, &x) in out.col_mut(j).iter_mut().zip(a) {
                    *o += x * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![0.0; self.rows];
        for (j, &xj) in x.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.col(j)) {
                *o += a * xj;
            }
        }
        out
    }

    /// `x^T A`, i.e. `A^T x`.
    pub fn vecmat(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows);
        (0..self.cols)
            .map(|j| self.col(j).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Multiplies column `j` by `factors[j]`.
    pub fn scale_columns(&self, factors: &[f64]) -> Matrix {
        assert_eq!(factors.len(), self.cols);
        let mut out = self.clone();
        for (j, &f) in factors.iter().enumerate() {
            out.col_mut(j).iter_mut().for_each(|x| *x *= f);
        }
        out
    }

    /// Plain-text dump: one row per line, 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    out.push(' ');
                }
                write!(out, "{:.16e}", self[(i, j)]).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

/// `P A = L U` for an `n x m` matrix `A`, `n >= m`, after `m` elimination steps.
#[derive(Clone, Debug)]
pub struct LuFactors {
    // strictly lower part: L multipliers (n x m panel); upper m x m: U
    packed: Matrix,
    // perm[k] = original row placed at position k
    perm: Vec<usize>,
    pivots: Vec<f64>,
}

impl LuFactors {
    pub fn rows(&self) -> usize {
        self.packed.rows
    }

    pub fn cols(&self) -> usize {
        self.packed.cols
    }

    /// Original row indices in pivot order; the first `cols()` are the pivot rows.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn pivot_rows(&self) -> &[usize] {
        &self.perm[..self.cols()]
    }

    /// `|u_kk|` for every step.
    pub fn pivot_magnitudes(&self) -> &[f64] {
        &self.pivots
    }

    /// Unit lower-trapezoidal `n x m` factor.
    pub fn l(&self) -> Matrix {
        let (n, m) = (self.rows(), self.cols());
        let mut l = Matrix::zeros(n, m);
        for j in 0..m {
            l[(j, j)] = 1.0;
            for i in j + 1..n {
                l[(i, j)] = self.packed[(i, j)];
            }
        }
        l
    }

    pub fn u(&self) -> Matrix {
        let m = self.cols();
        let mut u = Matrix::zeros(m, m);
        for j in 0..m {
            for i in 0..=j {
                u[(i, j)] = self.packed[(i, j)];
            }
        }
        u
    }

    /// Rows of `a` in pivot order (`P A`).
    pub fn permute_rows(&self, a: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(a.rows, a.cols);
        for j in 0..a.cols {
            for (k, &p) in self.perm.iter().enumerate() {
                out[(k, j)] = a[(p, j)];
            }
        }
        out
    }

    /// Solves `A x = rhs` for square factors; `rhs` is indexed by original row.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let m = self.cols();
        if self.rows() != m {
            return Err(Error::Config(format!(
                "solve needs square factors, have {}x{m}",
                self.rows()
            )));
        }
        if rhs.len() != m {
            return Err(Error::Dimension {
                expected: m,
                found: rhs.len(),
            });
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        // forward substitution with unit L, column oriented
        for k in 0..m {
            let xk = x[k];
            if xk != 0.0 {
                let col = self.packed.col(k);
                for i in k + 1..m {
                    x[i] -= col[i] * xk;
                }
            }
        }
        for k in (0..m).rev() {
            let col = self.packed.col(k);
            x[k] /= col[k];
            let xk = x[k];
            if xk != 0.0 {
                for i in 0..k {
                    x[i] -= col[i] * xk;
                }
            }
        }
        Ok(x)
    }

    /// Columns of `A^{-1}`: column `i` solves `A a = e_i`.
    pub fn inverse(&self) -> Result<Matrix> {
        let m = self.cols();
        let mut inv = Matrix::zeros(m, m);
        let mut e = vec![0.0; m];
        for i in 0..m {
            e[i] = 1.0;
            let a = self.solve(&e)?;
            inv.col_mut(i).copy_from_slice(&a);
            e[i] = 0.0;
        }
        Ok(inv)
    }
}

/// Gaussian elimination with partial (row) pivoting, `cols` steps.
///
/// At step `k` the pivot is the largest `|a_ik|` among rows not yet used; ties
/// go to the smallest original row index. A pivot below
/// `tolerance * max_i |a_ik|` (original column `k`) aborts with
/// [`Error::RankDeficient`].
pub fn lu_row_pivot(a: &Matrix, tolerance: f64) -> Result<LuFactors> {
    let (n, m) = (a.rows, a.cols);
    if n < m {
        return Err(Error::InsufficientRows { rows: n, cols: m });
    }
    let col_scale: Vec<f64> = (0..m)
        .map(|j| a.col(j).iter().fold(0.0, |s: f64, x| s.max(x.abs())))
        .collect();
    let mut w = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::with_capacity(m);
    let mut mult = vec![0.0; n];

    for k in 0..m {
        let mut best = k;
        let mut best_mag = w[(k, k)].abs();
        for i in k + 1..n {
            let mag = w[(i, k)].abs();
            if mag > best_mag || (mag == best_mag && perm[i] < perm[best]) {
                best = i;
                best_mag = mag;
            }
        }
        let threshold = tolerance * col_scale[k];
        if !(best_mag >= threshold) || best_mag == 0.0 {
            return Err(Error::RankDeficient {
                step: k,
                magnitude: best_mag,
                tolerance: threshold,
            });
        }
        if best != k {
            perm.swap(k, best);
            for j in 0..m {
                let c = w.col_mut(j);
                c.swap(k, best);
            }
        }
        pivots.push(best_mag);

        let pivot = w[(k, k)];
        {
            let c = w.col_mut(k);
            for v in &mut c[k + 1..n] {
                *v /= pivot;
            }
            mult[k + 1..n].copy_from_slice(&c[k + 1..n]);
        }
        for j in k + 1..m {
            let c = w.col_mut(j);
            let akj = c[k];
            if akj != 0.0 {
                for i in k + 1..n {
                    c[i] -= mult[i] * akj;
                }
            }
        }
    }

    Ok(LuFactors {
        packed: w,
        perm,
        pivots,
    })
}

/// `‖A‖₁ ‖A^{-1}‖₁`.
pub fn cond_1(a: &Matrix, inverse: &Matrix) -> f64 {
    a.norm_1() * inverse.norm_1()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Matrix {
        let mut a = Matrix::zeros(n, m);
        for j in 0..m {
            for i in 0..n {
                a[(i, j)] = rng.gen_range(-1.0..1.0);
            }
        }
        a
    }

    fn residual(a: &Matrix, f: &LuFactors) -> f64 {
        let pa = f.permute_rows(a);
        let lu = f.l().matmul(&f.u());
        let m = a.cols();
        let mut top = Matrix::zeros(a.rows(), m);
        for j in 0..m {
            for i in 0..a.rows() {
                top[(i, j)] = pa[(i, j)];
            }
        }
        top.sub(&lu).norm_1()
    }

    #[test]
    fn factorization_residual_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for &(n, m) in &[(5, 5), (40, 12), (100, 30)] {
            let a = random_matrix(&mut rng, n, m);
            let f = lu_row_pivot(&a, RANK_TOLERANCE).unwrap();
            assert!(residual(&a, &f) <= 1e-12 * a.norm_1());
            assert!(f.l().max_abs() <= 1.0);
        }
    }

    #[test]
    fn solve_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_matrix(&mut rng, 21, 21);
        let f = lu_row_pivot(&a, RANK_TOLERANCE).unwrap();
        let x: Vec<f64> = (0..21).map(|i| i as f64 - 10.0).collect();
        let b = a.matvec(&x);
        let sol = f.solve(&b).unwrap();
        for (s, t) in sol.iter().zip(&x) {
            assert!((s - t).abs() < 1e-9);
        }
        let inv = f.inverse().unwrap();
        let r = a.matmul(&inv).sub(&Matrix::identity(21)).norm_1();
        assert!(r < 1e-8 * cond_1(&a, &inv), "{r}");
    }

    #[test]
    fn singular_is_rank_deficient() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]]);
        match lu_row_pivot(&a, RANK_TOLERANCE) {
            Err(Error::RankDeficient { step, .. }) => assert_eq!(step, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn too_few_rows() {
        let a = Matrix::zeros(2, 3);
        assert!(matches!(
            lu_row_pivot(&a, RANK_TOLERANCE),
            Err(Error::InsufficientRows { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn ties_go_to_smallest_index() {
        let a = Matrix::from_rows(&[vec![1.0, 0.0], vec![-1.0, 1.0], vec![1.0, 2.0]]);
        let f = lu_row_pivot(&a, RANK_TOLERANCE).unwrap();
        assert_eq!(f.pivot_rows()[0], 0);
    }

    #[test]
    fn one_by_one() {
        let a = Matrix::from_rows(&[vec![1.0]]);
        let f = lu_row_pivot(&a, RANK_TOLERANCE).unwrap();
        let inv = f.inverse().unwrap();
        assert_eq!(inv[(0, 0)], 1.0);
        assert_eq!(cond_1(&a, &inv), 1.0);
    }
}
