//! Dense-inversion reference for the GP posterior, independent of the
//! Cholesky path under test.

use soilmap::gp::{kernel, GpHyperparams};
use soilmap::{Observation, Point2};

/// Gauss-Jordan inverse with partial pivoting.
pub fn invert(mut a: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                for j in 0..n {
                    a[r][j] -= f * a[col][j];
                    inv[r][j] -= f * inv[col][j];
                }
            }
        }
    }
    inv
}

/// `μ = k(x,X) [K + (σₙ²+jitter) I]⁻¹ y`, `σ² = k(x,x) - k(x,X) [..]⁻¹ k(X,x)`.
pub fn oracle(obs: &[Observation<f64>], h: &GpHyperparams<f64>, jitter: f64, q: &Point2<f64>) -> (f64, f64) {
    let n = obs.len();
    let gram: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let k = kernel(&obs[i].location, &obs[j].location, h);
                    if i == j {
                        k + h.noise_variance + jitter
                    } else {
                        k
                    }
                })
                .collect()
        })
        .collect();
    let inv = invert(gram);
    let kq: Vec<f64> = obs.iter().map(|o| kernel(q, &o.location, h)).collect();
    let mut mean = 0.0;
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            mean += kq[i] * inv[i][j] * obs[j].value;
            quad += kq[i] * inv[i][j] * kq[j];
        }
    }
    (mean, kernel(q, q, h) - quad)
}

