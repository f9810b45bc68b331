//! Row-oriented Cholesky factorization over packed lower-triangular storage.
//!
//! Rows are produced one at a time (Cholesky–Banachiewicz), so extending a
//! factor by one row yields exactly the factor a from-scratch decomposition
//! of the enlarged matrix would produce.

use crate::Scalar;

/// Jitter ladder tried in order: `1e-8`, then up to three 10× escalations.
pub const JITTER_LADDER: [f64; 4] = [1e-8, 1e-7, 1e-6, 1e-5];

#[derive(Clone, Debug, PartialEq)]
pub struct Cholesky<T> {
    /// Row `i` occupies `data[i(i+1)/2 .. (i+1)(i+2)/2]`.
    data: Vec<T>,
    dim: usize,
}

/// Error carrying the row whose pivot was not positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NotPositiveDefinite {
    pub row: usize,
}

impl<T: Scalar> Cholesky<T> {
    pub fn empty() -> Self {
        Self {
            data: Vec::new(),
            dim: 0,
        }
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            data: Vec::with_capacity(n * (n + 1) / 2),
            dim: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        let start = i * (i + 1) / 2;
        &self.data[start..start + i + 1]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        debug_assert!(j <= i);
        self.data[i * (i + 1) / 2 + j]
    }

    /// Appends the next row; `a_row` holds `A[n][0..=n]` of the matrix being
    /// factored (off-diagonals followed by the diagonal).
    pub fn push_row(&mut self, a_row: &[T]) -> Result<(), NotPositiveDefinite> {
        let n = self.dim;
        assert_eq!(a_row.len(), n + 1, "row length must equal current dim + 1");
        let start = self.data.len();
        for (j, &a) in a_row[..n].iter().enumerate() {
            let mut s = a;
            let rj = self.row(j);
            for k in 0..j {
                s -= self.data[start + k] * rj[k];
            }
            let lij = s / rj[j];
            self.data.push(lij);
        }
        let mut s = a_row[n];
        for k in 0..n {
            let l = self.data[start + k];
            s -= l * l;
        }
        if !(s > T::zero()) || !s.is_finite() {
            self.data.truncate(start);
            return Err(NotPositiveDefinite { row: n });
        }
        self.data.push(s.sqrt());
        self.dim += 1;
        Ok(())
    }

    /// Solves `L x = b` in place.
    pub fn forward_solve(&self, b: &mut [T]) {
        assert_eq!(b.len(), self.dim);
        for i in 0..self.dim {
            let r = self.row(i);
            let mut s = b[i];
            for k in 0..i {
                s -= r[k] * b[k];
            }
            b[i] = s / r[i];
        }
    }

    /// Solves `Lᵀ x = b` in place.
    pub fn backward_solve(&self, b: &mut [T]) {
        assert_eq!(b.len(), self.dim);
        for i in (0..self.dim).rev() {
            let mut s = b[i];
            for k in i + 1..self.dim {
                s -= self.get(k, i) * b[k];
            }
            b[i] = s / self.get(i, i);
        }
    }

    /// Solves `(L Lᵀ) x = b` in place.
    pub fn solve(&self, b: &mut [T]) {
        self.forward_solve(b);
        self.backward_solve(b);
    }

    /// Extends a forward-solved vector `v = L⁻¹ b` (computed against the first
    /// `v.len()` rows) by the component for row `v.len()`, given `b[v.len()]`.
    #[inline]
    pub fn extend_forward(&self, v: &mut Vec<T>, b_next: T) {
        let i = v.len();
        let r = self.row(i);
        let mut s = b_next;
        for k in 0..i {
            s -= r[k] * v[k];
        }
        v.push(s / r[i]);
    }
}
