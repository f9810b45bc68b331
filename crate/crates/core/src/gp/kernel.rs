use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{Point2, Scalar};

/// Hyperparameters of the squared-exponential kernel plus observation noise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct GpHyperparams<T> {
    pub signal_variance: T,
    pub length_scale: T,
    pub noise_variance: T,
}

impl<T: Scalar> GpHyperparams<T> {
    pub const DEFAULT_NOISE_VARIANCE: f64 = 1e-6;

    pub fn new(signal_variance: T, length_scale: T, noise_variance: T) -> Result<Self> {
        let h = Self {
            signal_variance,
            length_scale,
            noise_variance,
        };
        h.validate()?;
        Ok(h)
    }

    /// Unit signal variance, `ℓ = side / 5` and the default noise floor.
    pub fn for_domain(side: T) -> Self {
        Self {
            signal_variance: T::one(),
            length_scale: side / T::of(5.0),
            noise_variance: T::of(Self::DEFAULT_NOISE_VARIANCE),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.signal_variance > T::zero() && self.signal_variance.is_finite()) {
            return Err(Error::InvalidHyperparams(format!(
                "signal variance must be positive, got {}",
                self.signal_variance
            )));
        }
        if !(self.length_scale > T::zero() && self.length_scale.is_finite()) {
            return Err(Error::InvalidHyperparams(format!(
                "length scale must be positive, got {}",
                self.length_scale
            )));
        }
        if !(self.noise_variance >= T::zero() && self.noise_variance.is_finite()) {
            return Err(Error::InvalidHyperparams(format!(
                "noise variance must be non-negative, got {}",
                self.noise_variance
            )));
        }
        Ok(())
    }
}

/// Squared-exponential covariance `σ² exp(-‖a-b‖² / 2ℓ²)`.
#[inline]
pub fn kernel<T: Scalar>(a: &Point2<T>, b: &Point2<T>, h: &GpHyperparams<T>) -> T {
    let two = T::of(2.0);
    h.signal_variance * (-a.distance_squared(b) / (two * h.length_scale * h.length_scale)).exp()
}
