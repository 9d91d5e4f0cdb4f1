//! Generalized Vandermonde determinants in the graded monomial basis.

use nalgebra::DMatrix;

use crate::error::{LejaError, Result};
use crate::math::ComplexPoint;

use super::array::IntertwiningArray;
use super::index::lex_to_pair;

/// Largest array the determinant route is trusted for.
pub const DEFAULT_ORACLE_CAP: usize = 21;

/// `|det|` below `1e-250` is treated as singular.
const LOG_DET_FLOOR: f64 = -250.0 * std::f64::consts::LN_10;

pub type BiPoint = (ComplexPoint, ComplexPoint);

/// `e_j(z, w) = z^{k(j)} w^{l(j)}`.
pub fn monomial(j: usize, z: ComplexPoint, w: ComplexPoint) -> ComplexPoint {
    let (k, l) = lex_to_pair(j).expect("monomial index starts at 1");
    z.powu(k as u32) * w.powu(l as u32)
}

/// Matrix `[e_i(H_j)]` with monomials along rows and points along columns.
pub fn vdm_matrix(points: &[BiPoint]) -> DMatrix<ComplexPoint> {
    let n = points.len();
    DMatrix::from_fn(n, n, |i, j| monomial(i + 1, points[j].0, points[j].1))
}

pub fn vdm_determinant(points: &[BiPoint]) -> ComplexPoint {
    if points.is_empty() {
        return ComplexPoint::new(1.0, 0.0);
    }
    vdm_matrix(points).lu().determinant()
}

/// Lagrange basis value of node `p` (1-based) as a ratio of determinants,
/// the node replaced by `(z, w)` in the numerator.
pub fn flip_via_vdm_ratio(
    array: &IntertwiningArray,
    p: usize,
    z: ComplexPoint,
    w: ComplexPoint,
) -> Result<ComplexPoint> {
    flip_via_vdm_ratio_capped(array, p, z, w, DEFAULT_ORACLE_CAP)
}

pub fn flip_via_vdm_ratio_capped(
    array: &IntertwiningArray,
    p: usize,
    z: ComplexPoint,
    w: ComplexPoint,
    cap: usize,
) -> Result<ComplexPoint> {
    let total = array.len();
    if total > cap {
        return Err(LejaError::OracleCap { cap, n: total });
    }
    if p == 0 || p > total {
        return Err(LejaError::IndexOutOfRange { index: p, len: total });
    }
    let mut nodes = array.nodes();
    let den = vdm_determinant(&nodes);
    let log_den = den.norm().ln();
    if log_den < LOG_DET_FLOOR {
        return Err(LejaError::IllConditioned(log_den / std::f64::consts::LN_10));
    }
    nodes[p - 1] = (z, w);
    Ok(vdm_determinant(&nodes) / den)
}

/// `VDM(H_1..H_N, (z, w)) / VDM(H_1..H_N)` in factored form.
pub fn vdm_extension_factor(array: &IntertwiningArray, z: ComplexPoint, w: ComplexPoint) -> ComplexPoint {
    let (zp, wp) = extension_parts(array);
    let zf: ComplexPoint = zp.iter().map(|&e| z - e).product();
    let wf: ComplexPoint = wp.iter().map(|&t| w - t).product();
    zf * wf
}

/// Roots of the `z` and `w` factors of the extension ratio.
pub fn extension_parts(array: &IntertwiningArray) -> (Vec<ComplexPoint>, Vec<ComplexPoint>) {
    let (n, m) = array.shape();
    if array.len() == super::index::block_size(n) {
        (array.eta()[..=n].to_vec(), Vec::new())
    } else {
        let z_len = (n + 1).saturating_sub(m + 2);
        (array.eta()[..z_len].to_vec(), array.theta()[..=m].to_vec())
    }
}

/// `prod_{i<k} (x_k - x_i)`.
fn vdm_1d(x: &[ComplexPoint]) -> ComplexPoint {
    let mut acc = ComplexPoint::new(1.0, 0.0);
    for k in 0..x.len() {
        for i in 0..k {
            acc *= x[k] - x[i];
        }
    }
    acc
}

/// Product formula for the determinant of the full triangular array of degree `n`.
pub fn schiffer_siciak(eta: &[ComplexPoint], theta: &[ComplexPoint], n: usize) -> Result<ComplexPoint> {
    for src in [eta, theta] {
        if src.len() < n + 1 {
            return Err(LejaError::InsufficientSources {
                needed: n + 1,
                got: src.len(),
            });
        }
    }
    Ok((1..=n)
        .map(|j| vdm_1d(&eta[..=j]) * vdm_1d(&theta[..=j]))
        .product())
}
