//! Seeded synthetic ground-truth moisture fields on a square node grid.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`, which is stable across platforms and releases, so a
//! `(spec, kind, seed, params)` tuple always reproduces the same grid.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{Point2, Scalar};

pub const DEFAULT_CLUSTERS: usize = 10;

/// Cluster amplitudes are drawn uniformly from this range before rescaling.
pub const CLUSTER_AMPLITUDE_RANGE: (f64, f64) = (0.5, 1.0);

/// Square domain `[0, side]²` sampled on `resolution × resolution` nodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct GridSpec<T> {
    pub side: T,
    pub resolution: usize,
}

impl<T: Scalar> GridSpec<T> {
    pub fn new(side: T, resolution: usize) -> Result<Self> {
        let spec = Self { side, resolution };
        spec.validate()?;
        Ok(spec)
    }

    /// Unit node spacing: `side + 1` nodes per side.
    pub fn unit_spacing(side: T) -> Result<Self> {
        let res = side
            .round()
            .to_usize()
            .ok_or_else(|| Error::Config(format!("side {side} is not a valid grid size")))?;
        Self::new(side, res + 1)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.side > T::zero() && self.side.is_finite()) {
            return Err(Error::Config(format!("grid side must be positive, got {}", self.side)));
        }
        if self.resolution < 2 {
            return Err(Error::Config(format!(
                "grid resolution must be at least 2, got {}",
                self.resolution
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.resolution * self.resolution
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> T {
        self.side / T::of_usize(self.resolution - 1)
    }

    /// Node `(i, j)`: column `i` along x, row `j` along y.
    pub fn node(&self, i: usize, j: usize) -> Point2<T> {
        let n = T::of_usize(self.resolution - 1);
        Point2::new(
            self.side * T::of_usize(i) / n,
            self.side * T::of_usize(j) / n,
        )
    }

    /// Every node in row-major order (rows of constant y).
    pub fn nodes(&self) -> Vec<Point2<T>> {
        (0..self.resolution)
            .flat_map(|j| (0..self.resolution).map(move |i| (i, j)))
            .map(|(i, j)| self.node(i, j))
            .collect()
    }

    pub fn contains(&self, p: &Point2<T>) -> bool {
        p.x >= T::zero() && p.y >= T::zero() && p.x <= self.side && p.y <= self.side
    }

    /// Length of the domain diagonal, the largest distance between two points.
    pub fn diagonal(&self) -> T {
        self.side * T::of(2.0).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Uniform,
    Sloped,
    Gaussian,
    Hybrid,
}

impl FieldKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FieldKind::Uniform => "uniform",
            FieldKind::Sloped => "sloped",
            FieldKind::Gaussian => "gaussian",
            FieldKind::Hybrid => "hybrid",
        }
    }
}

/// Isotropic bump; `radius` is the standard deviation of the Gaussian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct GaussianCluster<T> {
    pub center: Point2<T>,
    pub radius: T,
    pub amplitude: T,
}

impl<T: Scalar> GaussianCluster<T> {
    pub fn eval(&self, p: &Point2<T>) -> T {
        let two = T::of(2.0);
        self.amplitude * (-p.distance_squared(&self.center) / (two * self.radius * self.radius)).exp()
    }
}

/// Realized generator parameters, enough to regenerate the field exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct FieldParams<T> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<T>,
    /// Gradient direction in radians, counter-clockwise from +x.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<T>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clusters: Vec<GaussianCluster<T>>,
}

impl<T> Default for FieldParams<T> {
    fn default() -> Self {
        Self {
            level: None,
            direction: None,
            clusters: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct GroundTruthField<T> {
    pub spec: GridSpec<T>,
    pub kind: FieldKind,
    pub seed: u64,
    pub params: FieldParams<T>,
    /// Row-major, `values[j * resolution + i]` is node `(i, j)`.
    pub values: Vec<T>,
}

impl<T: Scalar> GroundTruthField<T> {
    pub fn value_at(&self, i: usize, j: usize) -> T {
        self.values[j * self.spec.resolution + i]
    }

    pub fn min_max(&self) -> (T, T) {
        min_max(&self.values)
    }

    /// Bilinear interpolation of the node grid; exact at nodes.
    pub fn sample(&self, p: &Point2<T>) -> Result<T> {
        sample_truth(self, p)
    }
}

fn min_max<T: Scalar>(values: &[T]) -> (T, T) {
    values.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    })
}

/// Affine map of `values` onto `[0, 1]`. Constant grids are left untouched.
fn rescale_unit<T: Scalar>(values: &mut [T]) {
    let (lo, hi) = min_max(values);
    let span = hi - lo;
    if !(span > T::zero()) {
        return;
    }
    for v in values.iter_mut() {
        *v = (*v - lo) / span;
    }
}

fn uniform_in<T: Scalar>(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> T {
    T::of(lo + (hi - lo) * rng.gen::<f64>())
}

pub fn generate_uniform<T: Scalar>(spec: GridSpec<T>, level: T) -> Result<GroundTruthField<T>> {
    spec.validate()?;
    if !(level >= T::zero() && level <= T::one()) {
        return Err(Error::Config(format!("uniform level must lie in [0, 1], got {level}")));
    }
    Ok(GroundTruthField {
        spec,
        kind: FieldKind::Uniform,
        seed: 0,
        params: FieldParams {
            level: Some(level),
            ..FieldParams::default()
        },
        values: vec![level; spec.len()],
    })
}

fn sloped_values<T: Scalar>(spec: &GridSpec<T>, direction: T) -> Vec<T> {
    let (ux, uy) = (direction.cos(), direction.sin());
    let mut values: Vec<T> = spec.nodes().iter().map(|p| p.x * ux + p.y * uy).collect();
    rescale_unit(&mut values);
    values
}

/// Affine gradient along `direction` (radians from +x), rescaled to `[0, 1]`.
pub fn generate_sloped_with_direction<T: Scalar>(
    spec: GridSpec<T>,
    direction: T,
) -> Result<GroundTruthField<T>> {
    spec.validate()?;
    Ok(GroundTruthField {
        spec,
        kind: FieldKind::Sloped,
        seed: 0,
        params: FieldParams {
            direction: Some(direction),
            ..FieldParams::default()
        },
        values: sloped_values(&spec, direction),
    })
}

fn draw_direction<T: Scalar>(rng: &mut ChaCha8Rng) -> T {
    uniform_in(rng, 0.0, std::f64::consts::TAU)
}

pub fn generate_sloped<T: Scalar>(spec: GridSpec<T>, seed: u64) -> Result<GroundTruthField<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut field = generate_sloped_with_direction(spec, draw_direction(&mut rng))?;
    field.seed = seed;
    Ok(field)
}

/// Clusters with centers uniform over the domain and radii uniform in
/// `[1, side/10]` (collapsing to radius 1 when `side < 10`).
pub fn draw_clusters<T: Scalar>(
    spec: &GridSpec<T>,
    n_clusters: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<GaussianCluster<T>> {
    let side = spec.side.as_f64();
    let r_hi = (side / 10.0).max(1.0);
    let (a_lo, a_hi) = CLUSTER_AMPLITUDE_RANGE;
    (0..n_clusters)
        .map(|_| {
            let cx = uniform_in(rng, 0.0, side);
            let cy = uniform_in(rng, 0.0, side);
            let radius = uniform_in(rng, 1.0, r_hi);
            let amplitude = uniform_in(rng, a_lo, a_hi);
            GaussianCluster {
                center: Point2::new(cx, cy),
                radius,
                amplitude,
            }
        })
        .collect()
}

fn cluster_values<T: Scalar>(spec: &GridSpec<T>, clusters: &[GaussianCluster<T>]) -> Vec<T> {
    let mut values: Vec<T> = spec
        .nodes()
        .iter()
        .map(|p| clusters.iter().fold(T::zero(), |acc, c| acc + c.eval(p)))
        .collect();
    rescale_unit(&mut values);
    values
}

/// Sum of explicit bumps over a zero base, rescaled to `[0, 1]`.
pub fn generate_gaussian_from_clusters<T: Scalar>(
    spec: GridSpec<T>,
    clusters: Vec<GaussianCluster<T>>,
) -> Result<GroundTruthField<T>> {
    spec.validate()?;
    let values = cluster_values(&spec, &clusters);
    Ok(GroundTruthField {
        spec,
        kind: FieldKind::Gaussian,
        seed: 0,
        params: FieldParams {
            clusters,
            ..FieldParams::default()
        },
        values,
    })
}

pub fn generate_gaussian<T: Scalar>(
    spec: GridSpec<T>,
    n_clusters: usize,
    seed: u64,
) -> Result<GroundTruthField<T>> {
    if n_clusters == 0 {
        return Err(Error::Config("a gaussian field needs at least one cluster".into()));
    }
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clusters = draw_clusters(&spec, n_clusters, &mut rng);
    let mut field = generate_gaussian_from_clusters(spec, clusters)?;
    field.seed = seed;
    Ok(field)
}

/// Equal-weight sum of a gradient and a cluster field, rescaled to `[0, 1]`.
pub fn generate_hybrid_from_parts<T: Scalar>(
    spec: GridSpec<T>,
    direction: T,
    clusters: Vec<GaussianCluster<T>>,
) -> Result<GroundTruthField<T>> {
    spec.validate()?;
    let slope = sloped_values(&spec, direction);
    let bumps = cluster_values(&spec, &clusters);
    let mut values: Vec<T> = slope.iter().zip(&bumps).map(|(&a, &b)| a + b).collect();
    rescale_unit(&mut values);
    Ok(GroundTruthField {
        spec,
        kind: FieldKind::Hybrid,
        seed: 0,
        params: FieldParams {
            direction: Some(direction),
            clusters,
            ..FieldParams::default()
        },
        values,
    })
}

/// The gradient direction is drawn first from the seeded stream, so the
/// sloped component matches `generate_sloped(spec, seed)`.
pub fn generate_hybrid<T: Scalar>(
    spec: GridSpec<T>,
    n_clusters: usize,
    seed: u64,
) -> Result<GroundTruthField<T>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let direction = draw_direction(&mut rng);
    let clusters = draw_clusters(&spec, n_clusters, &mut rng);
    let mut field = generate_hybrid_from_parts(spec, direction, clusters)?;
    field.seed = seed;
    Ok(field)
}

/// Grid coordinate along one axis, snapped onto a node when within round-off.
fn cell_coord<T: Scalar>(v: T, spec: &GridSpec<T>) -> (usize, T) {
    let last = spec.resolution - 1;
    let f = v / spec.side * T::of_usize(last);
    let nearest = f.round();
    let f = if (f - nearest).abs() <= T::of(1e-9) * T::of_usize(last) {
        nearest
    } else {
        f
    };
    let i0 = f.floor().to_usize().unwrap_or(0).min(last - 1);
    (i0, f - T::of_usize(i0))
}

/// Bilinear interpolation of the field grid at `p`.
pub fn sample_truth<T: Scalar>(field: &GroundTruthField<T>, p: &Point2<T>) -> Result<T> {
    let spec = &field.spec;
    if !p.is_finite() || !spec.contains(p) {
        return Err(Error::OutOfBounds {
            x: p.x.as_f64(),
            y: p.y.as_f64(),
            side: spec.side.as_f64(),
        });
    }
    let (i0, tx) = cell_coord(p.x, spec);
    let (j0, ty) = cell_coord(p.y, spec);
    let one = T::one();
    let v00 = field.value_at(i0, j0);
    let v10 = field.value_at(i0 + 1, j0);
    let v01 = field.value_at(i0, j0 + 1);
    let v11 = field.value_at(i0 + 1, j0 + 1);
    let bottom = v00 * (one - tx) + v10 * tx;
    let top = v01 * (one - tx) + v11 * tx;
    Ok(bottom * (one - ty) + top * ty)
}
