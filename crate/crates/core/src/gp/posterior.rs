//! Posterior variance over a fixed candidate set, updated one observation at a
//! time.
//!
//! The factor is grown row by row and each candidate keeps its forward-solved
//! cross-covariance `L⁻¹ k(X, c)`, so after every addition the variances are
//! bit-identical to those of [`GpModel::predict`] fitted from scratch on the
//! same data, at `O(n)` instead of `O(n²)` cost per candidate.
//!
//! [`GpModel::predict`]: super::GpModel::predict

use super::cholesky::{Cholesky, JITTER_LADDER};
use super::kernel::{kernel, GpHyperparams};
use super::model::{factor_gram, find_duplicate, gram_row};
use crate::error::{Error, Result};
use crate::{Point2, Scalar};

#[derive(Clone, Debug)]
pub struct CandidatePosterior<T> {
    hyperparams: GpHyperparams<T>,
    candidates: Vec<Point2<T>>,
    prior: Vec<T>,
    locations: Vec<Point2<T>>,
    factor: Cholesky<T>,
    rung: usize,
    cross: Vec<Vec<T>>,
    explained: Vec<T>,
}

impl<T: Scalar> CandidatePosterior<T> {
    pub fn new(hyperparams: GpHyperparams<T>, candidates: Vec<Point2<T>>) -> Result<Self> {
        hyperparams.validate()?;
        let prior = candidates.iter().map(|c| kernel(c, c, &hyperparams)).collect();
        let n = candidates.len();
        Ok(Self {
            hyperparams,
            candidates,
            prior,
            locations: Vec::new(),
            factor: Cholesky::empty(),
            rung: 0,
            cross: vec![Vec::new(); n],
            explained: vec![T::zero(); n],
        })
    }

    pub fn candidates(&self) -> &[Point2<T>] {
        &self.candidates
    }

    pub fn locations(&self) -> &[Point2<T>] {
        &self.locations
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    /// Conditions on one more input location.
    pub fn add(&mut self, location: Point2<T>) -> Result<()> {
        if self.hyperparams.noise_variance == T::zero() && self.locations.contains(&location) {
            return Err(Error::FactorizationFailure {
                row: self.locations.len(),
                jitter: 0.0,
            });
        }
        self.locations.push(location);
        let n = self.locations.len() - 1;
        let jitter = T::of(JITTER_LADDER[self.rung]);
        let row = gram_row(&self.locations, n, &self.hyperparams, jitter);
        if self.factor.push_row(&row).is_err() {
            return self.refactor();
        }
        let h = &self.hyperparams;
        for ((c, v), acc) in self
            .candidates
            .iter()
            .zip(self.cross.iter_mut())
            .zip(self.explained.iter_mut())
        {
            self.factor.extend_forward(v, kernel(c, &location, h));
            let last = v[n];
            *acc += last * last;
        }
        Ok(())
    }

    fn refactor(&mut self) -> Result<()> {
        debug_assert!(find_duplicate(&self.locations).is_none() || self.hyperparams.noise_variance > T::zero());
        let (factor, rung) = match factor_gram(&self.locations, &self.hyperparams, self.rung + 1) {
            Ok(ok) => ok,
            Err(e) => {
                self.locations.pop();
                return Err(e);
            }
        };
        self.factor = factor;
        self.rung = rung;
        let h = &self.hyperparams;
        for ((c, v), acc) in self
            .candidates
            .iter()
            .zip(self.cross.iter_mut())
            .zip(self.explained.iter_mut())
        {
            v.clear();
            *acc = T::zero();
            for x in &self.locations {
                self.factor.extend_forward(v, kernel(c, x, h));
                let last = v[v.len() - 1];
                *acc += last * last;
            }
        }
        Ok(())
    }

    pub fn variance(&self, index: usize) -> T {
        (self.prior[index] - self.explained[index]).max(T::zero())
    }

    pub fn variances(&self) -> Vec<T> {
        (0..self.candidates.len()).map(|i| self.variance(i)).collect()
    }

    /// Predictive mean at every candidate for observed `values`, given in the
    /// order the locations were added: `(L⁻¹k)·(L⁻¹y)` from the cached solves.
    pub fn means(&self, values: &[T]) -> Result<Vec<T>> {
        if values.len() != self.locations.len() {
            return Err(Error::ShapeMismatch {
                left: values.len(),
                right: self.locations.len(),
            });
        }
        let mut z = values.to_vec();
        self.factor.forward_solve(&mut z);
        Ok(self
            .cross
            .iter()
            .map(|v| v.iter().zip(&z).fold(T::zero(), |acc, (&a, &b)| acc + a * b))
            .collect())
    }

    /// `(max, mean)` of the predictive variance over all candidates.
    pub fn variance_summary(&self) -> (T, T) {
        let mut max = T::zero();
        let mut sum = T::zero();
        for i in 0..self.candidates.len() {
            let v = self.variance(i);
            max = max.max(v);
            sum += v;
        }
        let n = T::of_usize(self.candidates.len().max(1));
        (max, sum / n)
    }
}
