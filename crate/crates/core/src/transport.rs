//! Disk Leja points pushed through the exterior map of an ellipse.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LejaError, Result};
use crate::flip::{
    lebesgue_report_on_curve, sup_norm_on_curve, FlipBasis, LebesgueReport, SupNormEstimate,
};
use crate::leja::{CompactTag, LejaSection};
use crate::math::{cis, ComplexPoint};

/// Exterior conformal map of a compact onto the exterior of the unit disk
/// (inverse direction: disk exterior to compact exterior).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExteriorMap {
    /// `phi(z) = c1 z + c2 / z` with `c1 = (a+b)/2`, `c2 = (a-b)/2`.
    Ellipse { a: f64, b: f64 },
}

impl ExteriorMap {
    pub fn coefficients(&self) -> (f64, f64) {
        match *self {
            ExteriorMap::Ellipse { a, b } => ((a + b) / 2.0, (a - b) / 2.0),
        }
    }

    pub fn phi(&self, z: ComplexPoint) -> ComplexPoint {
        let (c1, c2) = self.coefficients();
        z * c1 + c2 / z
    }

    pub fn dphi(&self, z: ComplexPoint) -> ComplexPoint {
        let (c1, c2) = self.coefficients();
        ComplexPoint::new(c1, 0.0) - c2 / (z * z)
    }

    pub fn is_identity(&self) -> bool {
        self.coefficients() == (1.0, 0.0)
    }

    /// Bounds `(m1, m2)` with `m1 <= |phi(z) - phi(w)| / |z - w| <= m2` on the circle.
    pub fn distortion_bounds(&self) -> (f64, f64) {
        match *self {
            ExteriorMap::Ellipse { a, b } => (b, a),
        }
    }
}

pub fn ellipse_exterior_map(a: f64, b: f64) -> Result<ExteriorMap> {
    if !(a.is_finite() && b.is_finite()) || b <= 0.0 || a < b {
        return Err(LejaError::InvalidAxes { a, b });
    }
    Ok(ExteriorMap::Ellipse { a, b })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportedSection {
    pub source: LejaSection,
    pub images: Vec<ComplexPoint>,
    pub map: ExteriorMap,
}

impl TransportedSection {
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn basis(&self) -> Result<FlipBasis> {
        FlipBasis::new(self.images.clone())
    }

    /// Boundary parametrization `t -> phi(e^{it})`.
    pub fn boundary(&self) -> impl Fn(f64) -> ComplexPoint + Sync + '_ {
        move |t| self.map.phi(cis(t))
    }
}

pub fn transport_sequence(map: ExteriorMap, section: &LejaSection) -> Result<TransportedSection> {
    if section.compact_tag() != CompactTag::UnitDisk {
        return Err(LejaError::Invalid("transport needs a unit-disk section".into()));
    }
    let images = section.points().iter().map(|&z| map.phi(z)).collect();
    Ok(TransportedSection {
        source: section.clone(),
        images,
        map,
    })
}

/// Sup of the transported `|l_p|` over the compact, `p` 1-based.
pub fn flip_sup_on_compact(
    ts: &TransportedSection,
    p: usize,
    boundary_grid: usize,
    refine_iters: usize,
) -> Result<SupNormEstimate> {
    let basis = ts.basis()?;
    sup_norm_on_curve(&basis, p, &ts.boundary(), boundary_grid, refine_iters)
}

pub fn lebesgue_on_compact(
    ts: &TransportedSection,
    boundary_grid: usize,
    refine_iters: usize,
) -> Result<LebesgueReport> {
    let basis = ts.basis()?;
    Ok(lebesgue_report_on_curve(
        &basis,
        &ts.boundary(),
        boundary_grid,
        refine_iters,
    ))
}

/// Step for the finite-difference derivatives in the Alper integrand limit.
const FD_STEP: f64 = 1e-4;

/// `phi''(w) / (2 phi'(w))` from central differences of `phi` along the
/// radial direction, the value the Alper integrand tends to as `z -> w`.
fn alper_limit(map: &ExteriorMap, w: ComplexPoint) -> ComplexPoint {
    let h = w * FD_STEP;
    let (fp, f0, fm) = (map.phi(w + h), map.phi(w), map.phi(w - h));
    let d1 = (fp - fm) / (h * 2.0);
    let d2 = (fp - f0 * 2.0 + fm) / (h * h);
    d2 / (d1 * 2.0)
}

/// `sup_{|w|=1} int_0^{2pi} |phi'(e^{it}) / (phi(e^{it}) - phi(w)) - 1/(e^{it} - w)| dt`
/// with `w` on a uniform grid and the inner integral by the trapezoid rule.
pub fn estimate_alper_constant(map: &ExteriorMap, w_grid: usize, t_grid: usize) -> Result<f64> {
    if w_grid < 256 || t_grid < 256 {
        return Err(LejaError::Invalid(format!(
            "alper grids must be at least 256, got {w_grid} and {t_grid}"
        )));
    }
    let dt = 2.0 * PI / t_grid as f64;
    let zs: Vec<ComplexPoint> = (0..t_grid).map(|g| cis(g as f64 * dt)).collect();
    let values: Vec<f64> = (0..w_grid)
        .into_par_iter()
        .map(|j| {
            let s = 2.0 * PI * j as f64 / w_grid as f64;
            let w = cis(s);
            let fw = map.phi(w);
            let singular = ((s / dt).round() as usize) % t_grid;
            let mut sum = 0.0;
            for (g, &z) in zs.iter().enumerate() {
                let v = if g == singular {
                    alper_limit(map, w)
                } else {
                    map.dphi(z) / (map.phi(z) - fw) - 1.0 / (z - w)
                };
                sum += v.norm();
            }
            sum * dt
        })
        .collect();
    Ok(values.into_iter().fold(0.0, f64::max))
}

/// `(min, max)` of `|phi(z) - phi(w)| / |z - w|` over `samples` random circle pairs.
pub fn measured_distortion<R: Rng>(map: &ExteriorMap, samples: usize, rng: &mut R) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut taken = 0;
    while taken < samples {
        let z = cis(rng.gen_range(-PI..PI));
        let w = cis(rng.gen_range(-PI..PI));
        let d = (z - w).norm();
        if d < 1e-6 {
            continue;
        }
        let r = (map.phi(z) - map.phi(w)).norm() / d;
        lo = lo.min(r);
        hi = hi.max(r);
        taken += 1;
    }
    (lo, hi)
}

/// Worst ratio of transported to source FLIP modulus against its envelope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioEnvelope {
    #[serde(rename = "N")]
    pub n: usize,
    /// Largest `|l~_p(phi(z))| / |l_p(z)|` over grid points and `p`.
    pub max_ratio: f64,
    /// `(m2 / m1) * P_max / P_min` with `P(z) = prod_j |phi(z) - phi(a_j)| / |z - a_j|`.
    pub envelope: f64,
}

impl RatioEnvelope {
    pub fn holds(&self) -> bool {
        self.max_ratio.is_finite() && self.max_ratio <= self.envelope * (1.0 + 1e-9)
    }
}

/// Compares transported and source FLIP moduli on a circle grid.
///
/// `P` is sampled on the grid and at the nodes, where the capacity power
/// cancels out of `P_max / P_min`. Points where the source modulus is below
/// `1e-6` are skipped, the ratio being numerically meaningless there.
pub fn transport_ratio_envelope(ts: &TransportedSection, grid: usize) -> Result<RatioEnvelope> {
    let src = FlipBasis::new(ts.source.points().to_vec())?;
    let dst = ts.basis()?;
    let nodes = ts.source.points();
    let p_of = |z: ComplexPoint| -> f64 {
        nodes
            .iter()
            .map(|&a| {
                let d = z - a;
                if d.norm() < 1e-12 {
                    ts.map.dphi(a).norm()
                } else {
                    ((ts.map.phi(z) - ts.map.phi(a)) / d).norm()
                }
            })
            .product()
    };
    let zs: Vec<ComplexPoint> = (0..grid)
        .map(|g| cis(2.0 * PI * g as f64 / grid as f64))
        .collect();
    let mut p_min = f64::INFINITY;
    let mut p_max = f64::NEG_INFINITY;
    for &z in zs.iter().chain(nodes) {
        let v = p_of(z);
        p_min = p_min.min(v);
        p_max = p_max.max(v);
    }
    let per_k: Vec<f64> = (1..=nodes.len())
        .into_par_iter()
        .map(|k| {
            zs.iter()
                .filter_map(|&z| {
                    let s = src.abs(k, z);
                    (s >= 1e-6).then(|| dst.abs(k, ts.map.phi(z)) / s)
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let (m1, m2) = ts.map.distortion_bounds();
    Ok(RatioEnvelope {
        n: nodes.len(),
        max_ratio: per_k.into_iter().fold(0.0, f64::max),
        envelope: (m2 / m1) * p_max / p_min,
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len()) as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flip::{default_grid, lebesgue_constant, sup_norm_on_circle};
    use crate::leja::canonical_disk_leja;
    use approx::assert_relative_eq;
    use rand::SeedableRng;

    fn one() -> ComplexPoint {
        ComplexPoint::new(1.0, 0.0)
    }

    #[test]
    fn map_examples() {
        let id = ellipse_exterior_map(1.0, 1.0).unwrap();
        let z = ComplexPoint::new(0.3, -0.7);
        assert_eq!(id.phi(z), z);
        let e = ellipse_exterior_map(1.2, 0.8).unwrap();
        assert_relative_eq!(e.phi(one()).re, 1.2, epsilon = 1e-15);
        let pi = e.phi(ComplexPoint::i());
        assert!(pi.re.abs() < 1e-15);
        assert_relative_eq!(pi.im, 0.8, epsilon = 1e-15);
        let e2 = ellipse_exterior_map(2.0, 1.0).unwrap();
        for g in 0..256 {
            let t = 2.0 * PI * g as f64 / 256.0;
            let p = e2.phi(cis(t));
            assert!((p.re * p.re / 4.0 + p.im * p.im - 1.0).abs() < 1e-12);
            assert!((p - ComplexPoint::new(2.0 * t.cos(), t.sin())).norm() < 1e-12);
        }
        assert!(ellipse_exterior_map(1.0, 0.0).is_err());
        assert!(ellipse_exterior_map(0.5, 1.0).is_err());
    }

    #[test]
    fn map_json_shape() {
        let e = ellipse_exterior_map(1.2, 0.8).unwrap();
        let v = serde_json::to_value(e).unwrap();
        assert_eq!(v["kind"], "ellipse");
        assert_eq!(v["a"], 1.2);
        assert_eq!(v["b"], 0.8);
    }

    #[test]
    fn transport_examples() {
        let s4 = canonical_disk_leja(4, one()).unwrap();
        let id = transport_sequence(ellipse_exterior_map(1.0, 1.0).unwrap(), &s4).unwrap();
        assert_eq!(id.images, s4.points());
        let e = transport_sequence(ellipse_exterior_map(1.2, 0.8).unwrap(), &s4).unwrap();
        let want = [
            ComplexPoint::new(1.2, 0.0),
            ComplexPoint::new(-1.2, 0.0),
            ComplexPoint::new(0.0, 0.8),
            ComplexPoint::new(0.0, -0.8),
        ];
        for (a, b) in e.images.iter().zip(want) {
            assert!((a - b).norm() < 1e-12);
        }
        let s1 = canonical_disk_leja(1, one()).unwrap();
        assert_eq!(transport_sequence(e.map, &s1).unwrap().len(), 1);
    }

    #[test]
    fn identity_transport_matches_disk() {
        let s = canonical_disk_leja(19, cis(0.4)).unwrap();
        let ts = transport_sequence(ellipse_exterior_map(1.0, 1.0).unwrap(), &s).unwrap();
        for k in [1, 7, 19] {
            let a = flip_sup_on_compact(&ts, k, 2048, 40).unwrap();
            let b = sup_norm_on_circle(s.points(), k, 2048, 40).unwrap();
            assert!((a.value - b.value).abs() <= 1e-9);
        }
        let la = lebesgue_on_compact(&ts, 2048, 40).unwrap();
        let lb = lebesgue_constant(s.points(), 2048, 40).unwrap();
        assert!((la.constant - lb.constant).abs() <= 1e-9);
        let s1 = canonical_disk_leja(1, one()).unwrap();
        let ts1 = transport_sequence(ellipse_exterior_map(1.2, 0.8).unwrap(), &s1).unwrap();
        assert_eq!(lebesgue_on_compact(&ts1, 256, 40).unwrap().constant, 1.0);
    }

    #[test]
    fn ellipse_lebesgue_increases() {
        let map = ellipse_exterior_map(1.2, 0.8).unwrap();
        let mut prev = 0.0;
        for p in 3..=6u32 {
            let n = (1usize << p) - 1;
            let s = canonical_disk_leja(n, one()).unwrap();
            let ts = transport_sequence(map, &s).unwrap();
            let l = lebesgue_on_compact(&ts, default_grid(n), 40).unwrap().constant;
            assert!(l.is_finite() && l > prev, "p={p}: {l} after {prev}");
            prev = l;
        }
    }

    #[test]
    fn alper_limit_matches_closed_form() {
        let map = ellipse_exterior_map(1.2, 0.8).unwrap();
        let (c1, c2) = map.coefficients();
        for t in [0.0, 0.3, 2.0, -1.1] {
            let w = cis(t);
            let exact = c2 / (w * (w * w * c1 - c2));
            assert!((alper_limit(&map, w) - exact).norm() < 1e-6);
            // the integrand away from the diagonal
            let z = cis(t + 0.5);
            let v = map.dphi(z) / (map.phi(z) - map.phi(w)) - 1.0 / (z - w);
            let closed = c2 / (z * (z * w * c1 - c2));
            assert!((v - closed).norm() < 1e-12);
        }
    }

    #[test]
    fn alper_constant_examples() {
        let id = ellipse_exterior_map(1.0, 1.0).unwrap();
        assert!(estimate_alper_constant(&id, 256, 256).unwrap().abs() <= 1e-6);
        let e = ellipse_exterior_map(1.2, 0.8).unwrap();
        let a1 = estimate_alper_constant(&e, 256, 512).unwrap();
        let a2 = estimate_alper_constant(&e, 512, 1024).unwrap();
        assert!(a1 > 0.0 && a1.is_finite());
        assert!((a1 - a2).abs() <= 1e-3, "{a1} vs {a2}");
        let e2 = ellipse_exterior_map(2.0, 1.0).unwrap();
        assert!(estimate_alper_constant(&e2, 256, 512).unwrap() > a1);
        assert!(estimate_alper_constant(&e, 128, 512).is_err());
    }

    #[test]
    fn distortion_within_axes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for (a, b) in [(1.2, 0.8), (2.0, 1.0), (1.0, 1.0)] {
            let map = ellipse_exterior_map(a, b).unwrap();
            let (lo, hi) = measured_distortion(&map, 10_000, &mut rng);
            assert!(lo >= b * (1.0 - 1e-9) && hi <= a * (1.0 + 1e-9));
        }
    }

    #[test]
    fn ratio_envelope_small() {
        let map = ellipse_exterior_map(1.2, 0.8).unwrap();
        for n in [2usize, 5, 16, 33] {
            let s = canonical_disk_leja(n, one()).unwrap();
            let ts = transport_sequence(map, &s).unwrap();
            let r = transport_ratio_envelope(&ts, 2048).unwrap();
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.5)).collect();
        assert_relative_eq!(loglog_slope(&xs, &ys), 1.5, epsilon = 1e-12);
    }
}
