//! Lagrange interpolation on intertwining arrays and torus-grid norms.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::math::{cis, ComplexPoint};

use super::array::leja_bidisk_array;
use super::flip::BivariateBasis;
use super::index::{block_size, lex_to_pair};

/// `sum_p f(H_p) l_p(z, w)`.
pub fn interpolate<F>(basis: &BivariateBasis, f: F, z: ComplexPoint, w: ComplexPoint) -> ComplexPoint
where
    F: Fn(ComplexPoint, ComplexPoint) -> ComplexPoint,
{
    let values: Vec<ComplexPoint> = basis.array().nodes().into_iter().map(|(a, b)| f(a, b)).collect();
    interpolate_values(basis, &values, z, w)
}

/// Interpolant of the node values `values` (in node order) at `(z, w)`.
pub fn interpolate_values(
    basis: &BivariateBasis,
    values: &[ComplexPoint],
    z: ComplexPoint,
    w: ComplexPoint,
) -> ComplexPoint {
    basis
        .eval_all(z, w)
        .into_iter()
        .zip(values)
        .map(|(l, &v)| l * v)
        .sum()
}

fn circle(grid: usize) -> Vec<ComplexPoint> {
    (0..grid).map(|g| cis(2.0 * PI * g as f64 / grid as f64)).collect()
}

/// Applies `visit` to the basis values at every point of the `grid x grid`
/// torus and folds the per-row results with `max`.
fn torus_fold<F>(basis: &BivariateBasis, grid: usize, width: usize, visit: F) -> Vec<f64>
where
    F: Fn(&[ComplexPoint], &mut [f64]) + Sync,
{
    let pts = circle(grid);
    let w_tables: Vec<_> = pts.iter().map(|&w| basis.w_table(w)).collect();
    pts.par_iter()
        .map(|&z| {
            let zt = basis.z_table(z);
            let mut acc = vec![0.0; width];
            let mut vals = vec![ComplexPoint::new(0.0, 0.0); basis.len()];
            for wt in &w_tables {
                for (j, v) in vals.iter_mut().enumerate() {
                    *v = basis.eval_with(j, &zt, wt);
                }
                visit(&vals, &mut acc);
            }
            acc
        })
        .reduce(
            || vec![0.0; width],
            |a, b| a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect(),
        )
}

/// Max over the torus grid of `sum_p |l_p(z, w)|`.
pub fn bivariate_lebesgue(basis: &BivariateBasis, grid: usize) -> f64 {
    torus_fold(basis, grid, 1, |vals, acc| {
        let s: f64 = vals.iter().map(|v| v.norm()).sum();
        acc[0] = acc[0].max(s);
    })[0]
}

/// Torus-grid sup of every `|l_p|`, in node order.
pub fn flip_torus_sups(basis: &BivariateBasis, grid: usize) -> Vec<f64> {
    torus_fold(basis, grid, basis.len(), |vals, acc| {
        for (a, v) in acc.iter_mut().zip(vals) {
            *a = a.max(v.norm());
        }
    })
}

/// `2 (n - p - q + 1) pi^2 e^{6 pi}`, bound on the sup of `|l_{(eta_p, theta_q)}|`
/// for arrays of two disk Leja sequences.
pub fn node_bound(n: usize, p: usize, q: usize) -> f64 {
    2.0 * (n + 1 - p - q) as f64 * PI * PI * (6.0 * PI).exp()
}

/// `pi^2 e^{6 pi} n (n+1) (n+2)`, envelope of the Lebesgue constant of `Omega_{N_n}`.
pub fn lebesgue_envelope(n: usize) -> f64 {
    PI * PI * (6.0 * PI).exp() * (n * (n + 1) * (n + 2)) as f64
}

/// Coefficients `c[k][l]` of the basis polynomial of node `j`, recovered by
/// a discrete Fourier transform on the `(n+1) x (n+1)` roots-of-unity grid.
pub fn flip_coefficients(basis: &BivariateBasis, j: usize) -> Vec<Vec<ComplexPoint>> {
    let n = basis.array().shape().0;
    let g = n + 1;
    let pts = circle(g);
    let mut vals = vec![vec![ComplexPoint::new(0.0, 0.0); g]; g];
    for (a, &z) in pts.iter().enumerate() {
        let zt = basis.z_table(z);
        for (b, &w) in pts.iter().enumerate() {
            vals[a][b] = basis.eval_with(j, &zt, &basis.w_table(w));
        }
    }
    let scale = 1.0 / (g * g) as f64;
    (0..g)
        .map(|k| {
            (0..g)
                .map(|l| {
                    let mut s = ComplexPoint::new(0.0, 0.0);
                    for a in 0..g {
                        for b in 0..g {
                            let phase = -2.0 * PI * ((a * k + b * l) % g) as f64 / g as f64;
                            s += vals[a][b] * cis(phase);
                        }
                    }
                    s * scale
                })
                .collect()
        })
        .collect()
}

/// Coefficients of node basis polynomials outside the space spanned by
/// the first `N` monomials, as `(node, k, l, |c|)`, above `tol` times the
/// largest coefficient (at least 1).
pub fn degree_violations(basis: &BivariateBasis, tol: f64) -> Vec<(usize, usize, usize, f64)> {
    let (n, m) = basis.array().shape();
    let mut out = Vec::new();
    for j in 0..basis.len() {
        let c = flip_coefficients(basis, j);
        let scale = c
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(1.0, f64::max);
        for (k, row) in c.iter().enumerate() {
            for (l, v) in row.iter().enumerate() {
                let allowed = k + l < n || (k + l == n && l <= m);
                if !allowed && v.norm() > tol * scale {
                    out.push((j, k, l, v.norm()));
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub n: usize,
    #[serde(rename = "N")]
    pub total: usize,
    pub sup_error: f64,
}

/// Interpolates `f` on the full arrays `Omega_{N_n}` of two disk Leja
/// sequences for every `n` in `ns` and reports the torus-grid sup error.
pub fn jackson_decay_experiment<F>(
    f: F,
    ns: std::ops::RangeInclusive<usize>,
    grid: usize,
) -> Result<Vec<DecayRow>>
where
    F: Fn(ComplexPoint, ComplexPoint) -> ComplexPoint + Sync,
{
    let pts = circle(grid);
    ns.map(|n| {
        let total = block_size(n);
        let basis = BivariateBasis::new(leja_bidisk_array(total)?)?;
        let values: Vec<ComplexPoint> = basis
            .array()
            .nodes()
            .into_iter()
            .map(|(a, b)| f(a, b))
            .collect();
        let w_tables: Vec<_> = pts.iter().map(|&w| basis.w_table(w)).collect();
        let sup_error = pts
            .par_iter()
            .map(|&z| {
                let zt = basis.z_table(z);
                pts.iter()
                    .zip(&w_tables)
                    .map(|(&w, wt)| {
                        let approx: ComplexPoint = (0..total)
                            .map(|j| basis.eval_with(j, &zt, wt) * values[j])
                            .sum();
                        (approx - f(z, w)).norm()
                    })
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max);
        Ok(DecayRow {
            n,
            total,
            sup_error,
        })
    })
    .collect()
}

/// Random element of the span of the first `total` monomials.
pub fn random_polynomial<R: rand::Rng>(total: usize, rng: &mut R) -> Vec<ComplexPoint> {
    (0..total)
        .map(|_| ComplexPoint::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

pub fn eval_polynomial(coeffs: &[ComplexPoint], z: ComplexPoint, w: ComplexPoint) -> ComplexPoint {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let (k, l) = lex_to_pair(i + 1).expect("index from 1");
            c * z.powu(k as u32) * w.powu(l as u32)
        })
        .sum()
}
