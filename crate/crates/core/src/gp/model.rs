use serde::{Deserialize, Serialize};

use super::cholesky::{Cholesky, JITTER_LADDER};
use super::kernel::{kernel, GpHyperparams};
use crate::error::{Error, Result};
use crate::{Observation, Point2, Scalar};

/// Predictive mean and variance at one query point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Prediction<T> {
    pub mean: T,
    pub variance: T,
}

/// Exact zero-mean GP regressor with a cached factor of `K + (σₙ² + jitter) I`.
///
/// A fitted model is immutable; adding data means fitting a new model.
#[derive(Clone, Debug)]
pub struct GpModel<T> {
    observations: Vec<Observation<T>>,
    hyperparams: GpHyperparams<T>,
    factor: Cholesky<T>,
    /// `(K + σₙ²I)⁻¹ y`.
    weights: Vec<T>,
    jitter: T,
}

/// Row `i` of the jittered Gram matrix, restricted to columns `0..=i`.
pub(crate) fn gram_row<T: Scalar>(
    locations: &[Point2<T>],
    i: usize,
    h: &GpHyperparams<T>,
    jitter: T,
) -> Vec<T> {
    let xi = &locations[i];
    let mut row: Vec<T> = locations[..i].iter().map(|xj| kernel(xi, xj, h)).collect();
    row.push(kernel(xi, xi, h) + h.noise_variance + jitter);
    row
}

/// Without observation noise two coincident inputs make the Gram matrix
/// singular; the diagonal jitter would mask that, so reject it up front.
pub(crate) fn find_duplicate<T: Scalar>(locations: &[Point2<T>]) -> Option<usize> {
    (1..locations.len()).find(|&i| locations[..i].iter().any(|p| *p == locations[i]))
}

/// Factors the jittered Gram matrix, walking the jitter ladder from
/// `first_rung`. Returns the factor and the rung that succeeded.
pub(crate) fn factor_gram<T: Scalar>(
    locations: &[Point2<T>],
    h: &GpHyperparams<T>,
    first_rung: usize,
) -> Result<(Cholesky<T>, usize)> {
    let mut failure = None;
    'ladder: for (rung, &jitter) in JITTER_LADDER.iter().enumerate().skip(first_rung) {
        let j = T::of(jitter);
        let mut factor = Cholesky::with_capacity(locations.len());
        for i in 0..locations.len() {
            if let Err(e) = factor.push_row(&gram_row(locations, i, h, j)) {
                failure = Some(Error::FactorizationFailure { row: e.row, jitter });
                continue 'ladder;
            }
        }
        return Ok((factor, rung));
    }
    Err(failure.unwrap_or(Error::FactorizationFailure {
        row: 0,
        jitter: JITTER_LADDER[JITTER_LADDER.len() - 1],
    }))
}

impl<T: Scalar> GpModel<T> {
    pub fn fit(observations: &[Observation<T>], hyperparams: GpHyperparams<T>) -> Result<Self> {
        hyperparams.validate()?;
        if observations.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if let Some(bad) = observations.iter().find(|o| !o.location.is_finite() || !o.value.is_finite()) {
            return Err(Error::InvalidHyperparams(format!(
                "non-finite observation at ({}, {}) value {}",
                bad.location.x, bad.location.y, bad.value
            )));
        }
        let locations: Vec<Point2<T>> = observations.iter().map(|o| o.location).collect();
        if hyperparams.noise_variance == T::zero() {
            if let Some(row) = find_duplicate(&locations) {
                return Err(Error::FactorizationFailure { row, jitter: 0.0 });
            }
        }
        let (factor, rung) = factor_gram(&locations, &hyperparams, 0)?;
        let mut weights: Vec<T> = observations.iter().map(|o| o.value).collect();
        factor.solve(&mut weights);
        Ok(Self {
            observations: observations.to_vec(),
            hyperparams,
            factor,
            weights,
            jitter: T::of(JITTER_LADDER[rung]),
        })
    }

    pub fn observations(&self) -> &[Observation<T>] {
        &self.observations
    }

    pub fn hyperparams(&self) -> &GpHyperparams<T> {
        &self.hyperparams
    }

    /// Diagonal jitter that made the Gram matrix factor.
    pub fn jitter(&self) -> T {
        self.jitter
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn predict_one(&self, query: &Point2<T>) -> Prediction<T> {
        let h = &self.hyperparams;
        let mut k: Vec<T> = self
            .observations
            .iter()
            .map(|o| kernel(query, &o.location, h))
            .collect();
        let mean = k
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&ki, &wi)| acc + ki * wi);
        self.factor.forward_solve(&mut k);
        let explained = k.iter().fold(T::zero(), |acc, &v| acc + v * v);
        let variance = (kernel(query, query, h) - explained).max(T::zero());
        Prediction { mean, variance }
    }

    pub fn predict(&self, queries: &[Point2<T>]) -> Vec<Prediction<T>> {
        queries.iter().map(|q| self.predict_one(q)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn obs(x: f64, y: f64, v: f64) -> Observation<f64> {
        Observation::new(Point2::new(x, y), v)
    }

    #[test]
    fn single_noiseless_observation_interpolates() {
        let h = GpHyperparams::new(1.0, 2.0, 0.0).unwrap();
        let m = GpModel::fit(&[obs(0.0, 0.0, 0.5)], h).unwrap();
        let p = m.predict_one(&Point2::new(0.0, 0.0));
        assert_abs_diff_eq!(p.mean, 0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(p.variance, 0.0, epsilon = 1e-6);
    }

    #[test]
    fn coincident_points_without_noise_fail() {
        let h = GpHyperparams::new(1.0, 2.0, 0.0).unwrap();
        let err = GpModel::fit(&[obs(1.0, 1.0, 0.2), obs(1.0, 1.0, 0.3)], h).unwrap_err();
        assert!(matches!(err, Error::FactorizationFailure { row: 1, .. }));
    }

    #[test]
    fn coincident_points_with_noise_fit() {
        let h = GpHyperparams::new(1.0, 2.0, 1e-2).unwrap();
        let m = GpModel::fit(&[obs(1.0, 1.0, 0.2), obs(1.0, 1.0, 0.4)], h).unwrap();
        assert_abs_diff_eq!(m.predict_one(&Point2::new(1.0, 1.0)).mean, 0.3, epsilon = 5e-3);
    }

    #[test]
    fn empty_dataset_rejected() {
        let h = GpHyperparams::new(1.0, 2.0, 0.0).unwrap();
        assert_eq!(GpModel::<f64>::fit(&[], h).unwrap_err(), Error::EmptyDataset);
    }

    #[test]
    fn far_query_recovers_prior() {
        let h = GpHyperparams::new(1.0, 1.0, 1e-6).unwrap();
        let m = GpModel::fit(&[obs(0.0, 0.0, 0.9), obs(1.0, 0.0, 0.7)], h).unwrap();
        let p = m.predict_one(&Point2::new(100.0, 100.0));
        assert_abs_diff_eq!(p.mean, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.variance, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn two_point_model_matches_hand_inverse() {
        // 2x2 system inverted in closed form.
        let (s2, ell, sn2) = (1.0f64, 2.0f64, 1e-6f64);
        let h = GpHyperparams::new(s2, ell, sn2).unwrap();
        let m = GpModel::fit(&[obs(0.0, 0.0, 0.2), obs(4.0, 0.0, 0.8)], h).unwrap();
        let jit = m.jitter();
        let k12 = (-16.0f64 / 8.0).exp();
        let d = s2 + sn2 + jit;
        let det = d * d - k12 * k12;
        let inv = [[d / det, -k12 / det], [-k12 / det, d / det]];
        let kq = (-4.0f64 / 8.0).exp();
        let kvec = [kq, kq];
        let y = [0.2, 0.8];
        let mut mean = 0.0;
        let mut quad = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                mean += kvec[i] * inv[i][j] * y[j];
                quad += kvec[i] * inv[i][j] * kvec[j];
            }
        }
        let p = m.predict_one(&Point2::new(2.0, 0.0));
        assert_abs_diff_eq!(p.mean, mean, epsilon = 1e-12);
        assert_abs_diff_eq!(p.variance, s2 - quad, epsilon = 1e-12);
        // by symmetry the mean is half the total weight times 0.2 + 0.8
        assert_abs_diff_eq!(p.mean, 0.5 * 2.0 * kq / (d + k12), epsilon = 1e-12);
    }

    #[test]
    fn works_in_single_precision() {
        let h = GpHyperparams::new(1.0f32, 2.0, 1e-4).unwrap();
        let m = GpModel::fit(
            &[
                Observation::new(Point2::new(0.0f32, 0.0), 0.5),
                Observation::new(Point2::new(3.0f32, 0.0), 0.1),
            ],
            h,
        )
        .unwrap();
        let p = m.predict_one(&Point2::new(0.0, 0.0));
        assert!((p.mean - 0.5).abs() < 1e-2);
        assert!(p.variance < 1e-2);
    }
}
