use crate::Scalar;

/// Multiplicative trade-off: `σ² (1 - d / d_max)`.
#[inline]
pub fn acquisition_a1<T: Scalar>(variance: T, distance: T, d_max: T) -> T {
    variance * (T::one() - distance / d_max)
}

/// Additive trade-off: `0.5 (σ² + (1 - d / d_max))`.
#[inline]
pub fn acquisition_a2<T: Scalar>(variance: T, distance: T, d_max: T) -> T {
    T::of(0.5) * (variance + (T::one() - distance / d_max))
}
