//! Checks that an intertwining sequence is a Leja sequence for a product set.

use serde::{Deserialize, Serialize};

use crate::error::{LejaError, Result};
use crate::math::ComplexPoint;

use super::array::build_array;
use super::index::{lex_to_pair, shape_of};
use super::vdm::{extension_parts, vdm_determinant, vdm_extension_factor, BiPoint};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Leja2dReport {
    /// `(N, shortfall)` for every extension checked.
    pub per_n: Vec<(usize, f64)>,
    pub worst_shortfall: f64,
    pub worst_n: usize,
    pub passed: bool,
}

impl Leja2dReport {
    fn from_rows(per_n: Vec<(usize, f64)>, tol: f64) -> Self {
        let (worst_n, worst_shortfall) = per_n
            .iter()
            .copied()
            .fold((0, 0.0), |acc, r| if r.1 > acc.1 { r } else { acc });
        Leja2dReport {
            passed: worst_shortfall <= tol,
            per_n,
            worst_shortfall,
            worst_n,
        }
    }
}

fn max_abs_poly(roots: &[ComplexPoint], samples: &[ComplexPoint]) -> f64 {
    if roots.is_empty() {
        return 1.0;
    }
    samples
        .iter()
        .map(|&x| roots.iter().map(|&r| (x - r).norm()).product::<f64>())
        .fold(0.0, f64::max)
}

/// For every `1 <= N < n_max`, compares the extension ratio at `H_{N+1}`
/// with its maximum over `z_samples x w_samples`.
///
/// The ratio factors into a `z` part and a `w` part, so the maximum over
/// the product set is the product of two one-dimensional maxima. The
/// shortfall is `1 - |ratio(H_{N+1})| / max`; the check passes when no
/// shortfall exceeds `tol`.
pub fn verify_2d_leja(
    eta: &[ComplexPoint],
    theta: &[ComplexPoint],
    n_max: usize,
    z_samples: &[ComplexPoint],
    w_samples: &[ComplexPoint],
    tol: f64,
) -> Result<Leja2dReport> {
    if z_samples.is_empty() || w_samples.is_empty() {
        return Err(LejaError::EmptyBoundary);
    }
    let mut rows = Vec::new();
    for total in 1..n_max {
        let array = build_array(eta, theta, total)?;
        let (k, l) = lex_to_pair(total + 1)?;
        let (n_next, _) = shape_of(total + 1)?;
        if eta.len() <= k.max(n_next) || theta.len() <= l.max(n_next) {
            return Err(LejaError::InsufficientSources {
                needed: n_next + 1,
                got: eta.len().min(theta.len()),
            });
        }
        let next = vdm_extension_factor(&array, eta[k], theta[l]).norm();
        let (zr, wr) = extension_parts(&array);
        let best = max_abs_poly(&zr, z_samples) * max_abs_poly(&wr, w_samples);
        rows.push((total, 1.0 - next / best));
    }
    Ok(Leja2dReport::from_rows(rows, tol))
}

/// Brute-force version for an arbitrary node order: for every
/// `1 <= N < nodes.len()`, compares `|VDM(H_1..H_{N+1})|` with the maximum
/// of `|VDM(H_1..H_N, (z, w))|` over the sample grid, by determinants.
pub fn leja_2d_bruteforce(
    nodes: &[BiPoint],
    z_samples: &[ComplexPoint],
    w_samples: &[ComplexPoint],
    tol: f64,
) -> Result<Leja2dReport> {
    if z_samples.is_empty() || w_samples.is_empty() {
        return Err(LejaError::EmptyBoundary);
    }
    let mut rows = Vec::new();
    for total in 1..nodes.len() {
        let mut ext = nodes[..=total].to_vec();
        let own = vdm_determinant(&ext).norm();
        let mut best: f64 = 0.0;
        for &z in z_samples {
            for &w in w_samples {
                ext[total] = (z, w);
                best = best.max(vdm_determinant(&ext).norm());
            }
        }
        rows.push((total, 1.0 - own / best));
    }
    Ok(Leja2dReport::from_rows(rows, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivariate::array::build_array;
    use crate::leja::canonical_disk_leja;
    use crate::math::roots_of_unity;

    fn src(n: usize) -> Vec<ComplexPoint> {
        canonical_disk_leja(n, ComplexPoint::new(1.0, 0.0))
            .unwrap()
            .into_points()
    }

    #[test]
    fn bidisk_passes() {
        let s = src(8);
        let grid = roots_of_unity(512);
        let r = verify_2d_leja(&s, &s, 21, &grid, &grid, 1e-6).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.per_n.len(), 20);
        let vac = verify_2d_leja(&s, &s, 1, &grid, &grid, 1e-6).unwrap();
        assert!(vac.passed && vac.per_n.is_empty());
    }

    #[test]
    fn bruteforce_agrees_on_intertwining_order() {
        let s = src(4);
        let grid = roots_of_unity(16);
        let nodes = build_array(&s, &s, 7).unwrap().nodes();
        let r = leja_2d_bruteforce(&nodes, &grid, &grid, 1e-9).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn swapped_order_fails() {
        let s = src(4);
        let grid = roots_of_unity(16);
        let mut nodes = build_array(&s, &s, 6).unwrap().nodes();
        nodes.swap(1, 2);
        let r = leja_2d_bruteforce(&nodes, &grid, &grid, 1e-6).unwrap();
        assert!(!r.passed);
        assert_eq!(r.worst_n, 1);
        assert!(r.per_n[0].1 > 0.5);
    }
}
