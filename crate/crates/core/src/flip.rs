//! Univariate fundamental Lagrange polynomials, their sup norms on the unit
//! circle and Lebesgue constants.
//!
//! By the maximum modulus principle every sup over the closed disk is attained
//! on the circle, so all norms here are computed from a uniform angle grid
//! followed by golden-section refinement of the best grid cell. The same
//! engine runs on any closed parametrized curve, which is how the transported
//! nodes of [`crate::transport`] reuse it.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LejaError, Result};
use crate::leja::{omega0_of_section, LejaSection};
use crate::math::{binary_decompose, cis, log_abs_product, pow2_power, wrap_angle, ComplexPoint};
use crate::search::golden_section_max;

/// Below this distance to a node the removable singularity of
/// `|z^m - 1| / |z - z_k|` is evaluated through its polynomial form.
pub const NEAR_NODE: f64 = 1e-8;

/// Default number of golden-section iterations.
pub const DEFAULT_REFINE: usize = 40;

/// Default coarse grid: at least 4096 angles and 64 per node, rounded up to a
/// power of two so that dyadic roots of unity fall on grid angles.
pub fn default_grid(n: usize) -> usize {
    (64 * n).max(4096).next_power_of_two()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupNormEstimate {
    pub value: f64,
    pub argmax_angle: f64,
    pub coarse_grid_size: usize,
    pub refined: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LebesgueReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub constant: f64,
    pub argmax_angle: f64,
    pub per_node_sup: Vec<f64>,
}

/// `prod_{j != k} (z - eta_j) / (eta_k - eta_j)` for 1-based `k`.
pub fn flip_direct(points: &[ComplexPoint], k: usize, z: ComplexPoint) -> Result<ComplexPoint> {
    check_index(k, points.len())?;
    let node = points[k - 1];
    let mut acc = ComplexPoint::new(1.0, 0.0);
    for (j, &p) in points.iter().enumerate() {
        if j == k - 1 {
            continue;
        }
        let den = node - p;
        if den == ComplexPoint::new(0.0, 0.0) {
            return Err(LejaError::DuplicateNodes(j.min(k - 1) + 1, j.max(k - 1) + 1));
        }
        acc *= (z - p) / den;
    }
    Ok(acc)
}

fn check_index(k: usize, len: usize) -> Result<()> {
    if k == 0 || k > len {
        return Err(LejaError::IndexOutOfRange { index: k, len });
    }
    Ok(())
}

/// Precomputed Lagrange basis on a fixed node set.
///
/// Stores `ln prod_{j != k} |eta_k - eta_j|` for every node, and its
/// reciprocal in linear scale whenever that is representable, so moduli can
/// be evaluated as `|w(z)| / (|z - eta_k| D_k)` with `w` the node polynomial.
// hypot is not needed at the moderate magnitudes of the fast paths
#[inline]
fn dist(a: ComplexPoint, b: ComplexPoint) -> f64 {
    (a - b).norm_sqr().sqrt()
}

#[derive(Clone, Debug)]
pub struct FlipBasis {
    nodes: Vec<ComplexPoint>,
    log_denom: Vec<f64>,
    inv_denom: Option<Vec<f64>>,
}

impl FlipBasis {
    pub fn new(nodes: Vec<ComplexPoint>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(LejaError::ZeroInput);
        }
        let mut log_denom = Vec::with_capacity(nodes.len());
        for (k, &a) in nodes.iter().enumerate() {
            let mut s = 0.0;
            for (j, &b) in nodes.iter().enumerate() {
                if j == k {
                    continue;
                }
                let r = (a - b).norm();
                if r == 0.0 {
                    return Err(LejaError::DuplicateNodes(j.min(k) + 1, j.max(k) + 1));
                }
                s += r.ln();
            }
            log_denom.push(s);
        }
        let inv: Vec<f64> = log_denom.iter().map(|&l| (-l).exp()).collect();
        let inv_denom = inv
            .iter()
            .all(|v| v.is_finite() && *v > 1e-250 && *v < 1e250)
            .then_some(inv);
        Ok(FlipBasis {
            nodes,
            log_denom,
            inv_denom,
        })
    }

    pub fn nodes(&self) -> &[ComplexPoint] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Complex value of the `k`-th basis polynomial.
    pub fn eval(&self, k: usize, z: ComplexPoint) -> Result<ComplexPoint> {
        flip_direct(&self.nodes, k, z)
    }

    /// `|w(z)|` by plain multiplication, `None` if it leaves the safe range.
    fn node_poly_abs_fast(&self, z: ComplexPoint) -> Option<f64> {
        let v: f64 = self.nodes.iter().map(|&p| dist(z, p)).product();
        (v.is_finite() && (v == 0.0 || v > 1e-250)).then_some(v)
    }

    fn abs_excluding(&self, k: usize, z: ComplexPoint) -> f64 {
        let s: f64 = self
            .nodes
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k - 1)
            .map(|(_, &p)| (z - p).norm().ln())
            .sum();
        (s - self.log_denom[k - 1]).exp()
    }

    /// `|l_k(z)|` for 1-based `k` (unchecked index).
    pub fn abs(&self, k: usize, z: ComplexPoint) -> f64 {
        let d = dist(z, self.nodes[k - 1]);
        if d < NEAR_NODE {
            return self.abs_excluding(k, z);
        }
        if let (Some(inv), Some(w)) = (&self.inv_denom, self.node_poly_abs_fast(z)) {
            return w * inv[k - 1] / d;
        }
        (log_abs_product(&self.nodes, z) - d.ln() - self.log_denom[k - 1]).exp()
    }

    /// Lebesgue function `sum_k |l_k(z)|`, summed in node order.
    pub fn lebesgue_fn(&self, z: ComplexPoint) -> f64 {
        let fast = match (&self.inv_denom, self.node_poly_abs_fast(z)) {
            (Some(inv), Some(w)) => Some((inv, w)),
            _ => None,
        };
        let mut sum = 0.0;
        for k in 1..=self.nodes.len() {
            let d = dist(z, self.nodes[k - 1]);
            sum += match fast {
                Some((inv, w)) if d >= NEAR_NODE => w * inv[k - 1] / d,
                _ => self.abs(k, z),
            };
        }
        sum
    }
}

fn grid_angles(grid: usize) -> Vec<f64> {
    (0..grid).map(|g| 2.0 * PI * g as f64 / grid as f64).collect()
}

/// Sup of `|l_k|` along the closed curve `t -> curve(t)`, `t in [0, 2 pi)`.
pub fn sup_norm_on_curve<F>(
    basis: &FlipBasis,
    k: usize,
    curve: &F,
    grid: usize,
    refine_iters: usize,
) -> Result<SupNormEstimate>
where
    F: Fn(f64) -> ComplexPoint + Sync,
{
    check_index(k, basis.len())?;
    let angles = grid_angles(grid.max(1));
    let mut best = (0.0, f64::NEG_INFINITY);
    for &t in &angles {
        let v = basis.abs(k, curve(t));
        if v > best.1 {
            best = (t, v);
        }
    }
    Ok(refine(best, grid, refine_iters, |t| basis.abs(k, curve(t))))
}

fn refine<F: FnMut(f64) -> f64>(
    best: (f64, f64),
    grid: usize,
    refine_iters: usize,
    f: F,
) -> SupNormEstimate {
    let h = 2.0 * PI / grid.max(1) as f64;
    let (mut t, mut v) = best;
    if refine_iters > 0 && v.is_finite() {
        let (rt, rv) = golden_section_max(f, t - h, t + h, refine_iters);
        if rv > v {
            t = rt;
            v = rv;
        }
    }
    SupNormEstimate {
        value: v,
        argmax_angle: wrap_angle(t),
        coarse_grid_size: grid,
        refined: refine_iters > 0,
    }
}

/// Sup norms of every basis polynomial along `curve`, sharing one pass of
/// node-polynomial values across all `k`.
pub fn sup_norms_on_curve<F>(
    basis: &FlipBasis,
    curve: &F,
    grid: usize,
    refine_iters: usize,
) -> Vec<SupNormEstimate>
where
    F: Fn(f64) -> ComplexPoint + Sync,
{
    let angles = grid_angles(grid.max(1));
    let pts: Vec<ComplexPoint> = angles.iter().map(|&t| curve(t)).collect();
    let fast: Option<(Vec<f64>, &Vec<f64>)> = basis.inv_denom.as_ref().and_then(|inv| {
        let w: Option<Vec<f64>> = pts.iter().map(|&z| basis.node_poly_abs_fast(z)).collect();
        w.map(|w| (w.into_iter().map(|x| x * x).collect(), inv))
    });

    (1..=basis.len())
        .into_par_iter()
        .map(|k| {
            let node = basis.nodes[k - 1];
            let mut best = (0.0, f64::NEG_INFINITY);
            match &fast {
                Some((w2, inv)) => {
                    // maximize |w|^2 / |z - eta_k|^2 away from the node
                    let mut best_r = (0usize, -1.0f64);
                    for (g, &z) in pts.iter().enumerate() {
                        let d = z - node;
                        let d2 = d.norm_sqr();
                        if d2 < NEAR_NODE * NEAR_NODE {
                            let v = basis.abs(k, z);
                            if v > best.1 {
                                best = (angles[g], v);
                            }
                            continue;
                        }
                        let r = w2[g] / d2;
                        if r > best_r.1 {
                            best_r = (g, r);
                        }
                    }
                    if best_r.1 >= 0.0 {
                        let v = best_r.1.sqrt() * inv[k - 1];
                        if v > best.1 {
                            best = (angles[best_r.0], v);
                        }
                    }
                }
                None => {
                    for (g, &z) in pts.iter().enumerate() {
                        let v = basis.abs(k, z);
                        if v > best.1 {
                            best = (angles[g], v);
                        }
                    }
                }
            }
            refine(best, grid, refine_iters, |t| basis.abs(k, curve(t)))
        })
        .collect()
}

/// Max of the Lebesgue function along `curve`, returned as `(value, angle)`.
pub fn lebesgue_value_on_curve<F>(
    basis: &FlipBasis,
    curve: &F,
    grid: usize,
    refine_iters: usize,
) -> (f64, f64)
where
    F: Fn(f64) -> ComplexPoint + Sync,
{
    let angles = grid_angles(grid.max(1));
    let values: Vec<f64> = angles
        .par_iter()
        .map(|&t| basis.lebesgue_fn(curve(t)))
        .collect();
    let mut best = (0.0, f64::NEG_INFINITY);
    for (g, &v) in values.iter().enumerate() {
        if v > best.1 {
            best = (angles[g], v);
        }
    }
    let est = refine(best, grid, refine_iters, |t| basis.lebesgue_fn(curve(t)));
    (est.value, est.argmax_angle)
}

pub fn lebesgue_report_on_curve<F>(
    basis: &FlipBasis,
    curve: &F,
    grid: usize,
    refine_iters: usize,
) -> LebesgueReport
where
    F: Fn(f64) -> ComplexPoint + Sync,
{
    let (constant, argmax_angle) = lebesgue_value_on_curve(basis, curve, grid, refine_iters);
    let per_node_sup = sup_norms_on_curve(basis, curve, grid, refine_iters)
        .into_iter()
        .map(|s| s.value)
        .collect();
    LebesgueReport {
        n: basis.len(),
        constant,
        argmax_angle,
        per_node_sup,
    }
}

pub fn sup_norm_on_circle(
    points: &[ComplexPoint],
    k: usize,
    coarse_grid: usize,
    refine_iters: usize,
) -> Result<SupNormEstimate> {
    let basis = FlipBasis::new(points.to_vec())?;
    sup_norm_on_curve(&basis, k, &cis, coarse_grid, refine_iters)
}

pub fn lebesgue_constant(
    points: &[ComplexPoint],
    coarse_grid: usize,
    refine_iters: usize,
) -> Result<LebesgueReport> {
    let basis = FlipBasis::new(points.to_vec())?;
    Ok(lebesgue_report_on_curve(&basis, &cis, coarse_grid, refine_iters))
}

/// `|l_k|` for the `m`-th roots of unity in closed form; `z_k = exp(2 i pi (k-1) / m)`.
pub fn roots_of_unity_flip_abs(m: usize, k: usize, z: ComplexPoint) -> Result<f64> {
    if m == 0 {
        return Err(LejaError::ZeroInput);
    }
    check_index(k, m)?;
    let zk = cis(2.0 * PI * (k - 1) as f64 / m as f64);
    Ok(roots_block_abs(m, zk, z))
}

/// `|z^m - 1| / (m |z - z_k|)` for a root of unity `z_k`, switching to
/// `|sum_j z_k^{m-j-1} z^j| / m` next to the node.
fn roots_block_abs(m: usize, zk: ComplexPoint, z: ComplexPoint) -> f64 {
    let d = (z - zk).norm();
    if d < NEAR_NODE {
        let mut sum = ComplexPoint::new(0.0, 0.0);
        let mut zp = ComplexPoint::new(1.0, 0.0);
        for j in 0..m {
            sum += zk.powu((m - j - 1) as u32) * zp;
            zp *= z;
        }
        return sum.norm() / m as f64;
    }
    let zm = if m.is_power_of_two() {
        pow2_power(z, m.trailing_zeros())
    } else {
        z.powu(m as u32)
    };
    (zm - 1.0).norm() / (m as f64 * d)
}

/// Block-structured evaluation of `|l_k|` for the leading `2^{p_1}` nodes of
/// a disk Leja section whose length is not a power of two:
///
/// `|l_k(z)| = |z^{2^{p_1}} - 1| / (2^{p_1} |z - z_k|) * prod_{q>=2} |z^{2^{p_q}} + w^{2^{p_q}}| / |z_k^{2^{p_q}} + w^{2^{p_q}}|`
///
/// with `w = omega_0`. Everything is evaluated relative to the section origin.
#[derive(Clone, Debug)]
pub struct StructuredFlip {
    origin: ComplexPoint,
    block_nodes: Vec<ComplexPoint>,
    tail_exponents: Vec<u32>,
    omega_powers: Vec<ComplexPoint>,
    omega0: ComplexPoint,
}

impl StructuredFlip {
    pub fn new(section: &LejaSection) -> Result<Self> {
        let dec = binary_decompose(section.len() as u64)?;
        if dec.is_power_of_two() {
            return Err(LejaError::PowerOfTwo(section.len()));
        }
        let omega0 = omega0_of_section(section)?;
        let block = 1usize << dec.leading();
        let normalized = section.normalized();
        let tail_exponents: Vec<u32> = dec.exponents()[1..].to_vec();
        let omega_powers = tail_exponents
            .iter()
            .map(|&p| pow2_power(omega0, p))
            .collect();
        Ok(StructuredFlip {
            origin: section.origin(),
            block_nodes: normalized[..block].to_vec(),
            tail_exponents,
            omega_powers,
            omega0,
        })
    }

    pub fn omega0(&self) -> ComplexPoint {
        self.omega0
    }

    pub fn block_len(&self) -> usize {
        self.block_nodes.len()
    }

    pub fn abs(&self, k: usize, z: ComplexPoint) -> Result<f64> {
        if k == 0 {
            return Err(LejaError::IndexOutOfRange {
                index: k,
                len: self.block_nodes.len(),
            });
        }
        if k > self.block_nodes.len() {
            return Err(LejaError::OutsideLeadingBlock {
                k,
                block: self.block_nodes.len(),
            });
        }
        let u = z / self.origin;
        let zk = self.block_nodes[k - 1];
        let mut v = roots_block_abs(self.block_nodes.len(), zk, u);
        for (&p, &wp) in self.tail_exponents.iter().zip(&self.omega_powers) {
            v *= (pow2_power(u, p) + wp).norm() / (pow2_power(zk, p) + wp).norm();
        }
        Ok(v)
    }
}

pub fn flip_structured_abs(section: &LejaSection, k: usize, z: ComplexPoint) -> Result<f64> {
    StructuredFlip::new(section)?.abs(k, z)
}

/// Summary of all sup norms for the `(2^p - 1)`-section.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialNStats {
    pub p: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub sum_sup: f64,
    pub avg_sup: f64,
    pub max_sup: f64,
    pub min_over_k: f64,
}

impl SpecialNStats {
    /// `4 cos(pi/8) / pi`, the lower bound on the largest sup norm.
    pub fn lower_window() -> f64 {
        4.0 * (PI / 8.0).cos() / PI
    }

    /// Summary of the sup norms of all `2^p - 1` basis polynomials.
    pub fn from_sups(p: u32, sups: &[f64]) -> Self {
        let sum_sup = crate::math::compensated_sum(sups.iter().copied());
        SpecialNStats {
            p,
            n: sups.len(),
            sum_sup,
            avg_sup: sum_sup / sups.len() as f64,
            max_sup: sups.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            min_over_k: sups.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    /// Violated bounds, empty when all hold.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.sum_sup <= self.n as f64 {
            out.push(format!("sum of sups {} not above N = {}", self.sum_sup, self.n));
        }
        if self.max_sup > 2.0 + 1e-6 {
            out.push(format!("max sup {} exceeds 2", self.max_sup));
        }
        if self.max_sup < Self::lower_window() - 1e-6 {
            out.push(format!("max sup {} below 4cos(pi/8)/pi", self.max_sup));
        }
        out
    }
}

pub fn special_n_statistics(
    p: u32,
    coarse_grid: Option<usize>,
    refine_iters: usize,
) -> Result<SpecialNStats> {
    if p < 2 {
        return Err(LejaError::Invalid(format!("special N needs p >= 2, got {p}")));
    }
    let n = (1usize << p) - 1;
    let section = crate::leja::canonical_disk_leja(n, ComplexPoint::new(1.0, 0.0))?;
    let basis = FlipBasis::new(section.into_points())?;
    let grid = coarse_grid.unwrap_or_else(|| default_grid(n));
    let sups: Vec<f64> = sup_norms_on_curve(&basis, &cis, grid, refine_iters)
        .into_iter()
        .map(|s| s.value)
        .collect();
    Ok(SpecialNStats::from_sups(p, &sups))
}

/// Value of `|l_k|` for the node `z_k` with `omega_0 / z_k = exp(i pi / 2^{p_1})`
/// of the `(2^{p_1+1} - 1)`-section, at `z = z_k exp(i pi / 2^{p_1 + 1})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpotValue {
    pub p1: u32,
    pub k: usize,
    pub direct: f64,
    pub structured: f64,
    pub closed_form: f64,
}

pub fn omega0_spot_value(p1: u32) -> Result<SpotValue> {
    if p1 == 0 {
        return Err(LejaError::Invalid("spot value needs p1 >= 1".into()));
    }
    let n = (1usize << (p1 + 1)) - 1;
    let section = crate::leja::canonical_disk_leja(n, ComplexPoint::new(1.0, 0.0))?;
    let structured = StructuredFlip::new(&section)?;
    let block = 1usize << p1;
    let target = structured.omega0() * cis(-PI / block as f64);
    let k = (1..=block)
        .min_by(|&a, &b| {
            let da = (section.points()[a - 1] - target).norm();
            let db = (section.points()[b - 1] - target).norm();
            da.total_cmp(&db)
        })
        .unwrap();
    let zk = section.points()[k - 1];
    let z = zk * cis(PI / (2 * block) as f64);
    let theta = PI / (4 * block) as f64;
    Ok(SpotValue {
        p1,
        k,
        direct: flip_direct(section.points(), k, z)?.norm(),
        structured: structured.abs(k, z)?,
        closed_form: theta.cos() / (block as f64 * theta.sin()),
    })
}
