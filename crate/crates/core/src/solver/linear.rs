//! Sparse direct solves with a residual check.

use faer::sparse::{SparseColMat, Triplet};
use faer::linalg::solvers::Solve;
use faer::Mat;

use crate::error::{Error, Result};

/// Square sparse matrix in triplet form (duplicates are summed).
#[derive(Debug, Clone, Default)]
pub struct SparseSystem {
    pub n: usize,
    pub triplets: Vec<Triplet<usize, usize, f64>>,
}

impl SparseSystem {
    pub fn new(n: usize) -> Self {
        Self { n, triplets: Vec::new() }
    }

    pub fn push(&mut self, row: usize, col: usize, val: f64) {
        self.triplets.push(Triplet::new(row, col, val));
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for t in &self.triplets {
            y[t.row] += t.val * x[t.col];
        }
        y
    }

    /// Infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        let mut rows = vec![0.0; self.n];
        for t in &self.triplets {
            rows[t.row] += t.val.abs();
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// Solves `A x = b` by sparse LU, refining until the relative residual
    /// `|b - Ax| / (|A| |x| + |b|)` (infinity norms) is below `tol`, with at
    /// most three refinements.
    pub fn solve(&self, b: &[f64], tol: f64) -> Result<Vec<f64>> {
        let a = SparseColMat::<usize, f64>::try_new_from_triplets(self.n, self.n, &self.triplets)
            .map_err(|e| Error::LinearSolve(format!("assembly: {e:?}")))?;
        let lu = a.sp_lu().map_err(|e| Error::LinearSolve(format!("factorisation: {e:?}")))?;
        let bnorm = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if bnorm == 0.0 {
            return Ok(vec![0.0; self.n]);
        }
        let anorm = self.norm_inf();
        let rel_of = |x: &[f64], r: &[f64]| {
            let xn = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            r.iter().fold(0.0f64, |m, v| m.max(v.abs())) / (anorm * xn + bnorm)
        };
        let solve = |rhs: &[f64]| {
            let mut m = Mat::<f64>::from_fn(self.n, 1, |i, _| rhs[i]);
            lu.solve_in_place(m.as_mut());
            (0..self.n).map(|i| m[(i, 0)]).collect::<Vec<f64>>()
        };
        let mut x = solve(b);
        for _ in 0..=3 {
            let ax = self.matvec(&x);
            let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
            let rel = rel_of(&x, &r);
            if !rel.is_finite() {
                return Err(Error::LinearSolve("non-finite solution".into()));
            }
            if rel < tol {
                return Ok(x);
            }
            let dx = solve(&r);
            for (xi, d) in x.iter_mut().zip(dx) {
                *xi += d;
            }
        }
        let ax = self.matvec(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let rel = rel_of(&x, &r);
        if rel < tol {
            Ok(x)
        } else {
            Err(Error::LinearSolve(format!("relative residual {rel:e} after refinement")))
        }
    }
}
