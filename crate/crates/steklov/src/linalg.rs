//! Thin bridges to the dense and sparse LU factorizations in `faer`.
//!
//! Vectors cross this boundary as `&[Complex64]` slices; `faer::c64` is the
//! same type, so conversions are plain copies.

use faer::c64;
use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;
use num_complex::Complex64;

use crate::assembly::SparseComplexMatrix;
use crate::error::{Result, SteklovError};

pub fn to_faer_mat(n_rows: usize, n_cols: usize, row_major: &[Complex64]) -> Mat<c64> {
    Mat::from_fn(n_rows, n_cols, |i, j| row_major[i * n_cols + j])
}

pub fn col_to_vec(m: &Mat<c64>, j: usize) -> Vec<Complex64> {
    (0..m.nrows()).map(|i| m[(i, j)]).collect()
}

/// Dense partial-pivot LU, reusable for many right-hand sides.
pub struct DenseLu {
    lu: faer::linalg::solvers::PartialPivLu<c64>,
    n: usize,
}

impl DenseLu {
    pub fn new(mat: &Mat<c64>) -> Self {
        DenseLu { lu: mat.partial_piv_lu(), n: mat.nrows() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(b.len(), self.n);
        let rhs = Mat::from_fn(self.n, 1, |i, _| b[i]);
        let x = self.lu.solve(&rhs);
        col_to_vec(&x, 0)
    }

    pub fn solve_mat(&self, b: &Mat<c64>) -> Mat<c64> {
        self.lu.solve(b)
    }
}

/// Sparse LU of a CSR matrix.
pub struct SparseLu {
    lu: faer::sparse::linalg::solvers::Lu<usize, c64>,
    n: usize,
}

impl SparseLu {
    pub fn new(a: &SparseComplexMatrix) -> Result<Self> {
        let n = a.dim();
        let triplets: Vec<Triplet<usize, usize, c64>> =
            a.triplets().map(|(i, j, v)| Triplet::new(i, j, v)).collect();
        let mat = SparseColMat::try_new_from_triplets(n, n, &triplets)
            .map_err(|e| SteklovError::FactorizationFailed(format!("{e:?}")))?;
        let lu = mat
            .sp_lu()
            .map_err(|e| SteklovError::FactorizationFailed(format!("{e:?}")))?;
        Ok(SparseLu { lu, n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(b.len(), self.n);
        let rhs = Mat::from_fn(self.n, 1, |i, _| b[i]);
        let x = self.lu.solve(&rhs);
        col_to_vec(&x, 0)
    }

    pub fn solve_mat(&self, b: &Mat<c64>) -> Mat<c64> {
        self.lu.solve(b)
    }
}

pub fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn all_finite(x: &[Complex64]) -> bool {
    x.iter().all(|v| v.re.is_finite() && v.im.is_finite())
}

/// Estimate 1/(||A||_1 ||A^-1||_1) from a handful of solves with fixed
/// pseudo-random right-hand sides. Crude, but singular and near-singular
/// matrices blow the solve norms up by many orders of magnitude, which is
/// all the Neumann-eigenvalue guard needs.
pub fn recip_condition_estimate(
    one_norm: f64,
    n: usize,
    solve: impl Fn(&[Complex64]) -> Vec<Complex64>,
) -> f64 {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x51E6);
    let mut inv_norm_est: f64 = 0.0;
    for _ in 0..3 {
        let b: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
            .collect();
        let x = solve(&b);
        if !all_finite(&x) {
            return 0.0;
        }
        inv_norm_est = inv_norm_est.max(norm2(&x) / norm2(&b));
    }
    if inv_norm_est == 0.0 || one_norm == 0.0 {
        return 0.0;
    }
    1.0 / (one_norm * inv_norm_est)
}
