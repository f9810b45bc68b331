use serde::{Deserialize, Serialize};

use crate::Scalar;

/// A location in the plane, in field units.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance_squared(&self, other: &Self) -> T {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn distance(&self, other: &Self) -> T {
        self.distance_squared(other).sqrt()
    }
}

/// A single measurement `y = f(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Observation<T> {
    pub location: Point2<T>,
    pub value: T,
}

impl<T: Scalar> Observation<T> {
    pub fn new(location: Point2<T>, value: T) -> Self {
        Self { location, value }
    }
}

/// Sum of Euclidean legs along a polyline.
pub fn path_length<T: Scalar>(points: &[Point2<T>]) -> T {
    points
        .windows(2)
        .fold(T::zero(), |acc, w| acc + w[0].distance(&w[1]))
}
