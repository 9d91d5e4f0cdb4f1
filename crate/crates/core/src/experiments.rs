//! Parameter sweeps behind the command-line tool and the acceptance suite.
//!
//! Every sweep returns plain rows plus a list of violated checks; an empty
//! list means everything held.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bivariate::flip::delta_defect;
use crate::bivariate::interp::{
    degree_violations, eval_polynomial, flip_torus_sups, lebesgue_envelope, node_bound,
    random_polynomial,
};
use crate::bivariate::vdm::vdm_determinant;
use crate::bivariate::{
    bivariate_lebesgue, block_size, build_array, flip_via_vdm_ratio, interpolate,
    jackson_decay_experiment, leja_bidisk_array, schiffer_siciak, vdm_extension_factor,
    verify_2d_leja, BivariateBasis, CaseCoverage, DecayRow, Leja2dReport,
};
use crate::error::Result;
use crate::flip::{
    default_grid, lebesgue_value_on_curve, sup_norms_on_curve, FlipBasis, SpecialNStats,
};
use crate::leja::canonical_disk_leja;
use crate::math::{cis, roots_of_unity, ComplexPoint};
use crate::transport::{
    estimate_alper_constant, transport_ratio_envelope, transport_sequence, ExteriorMap,
};

/// `pi e^{3 pi}`, the uniform bound on disk Leja basis polynomials.
pub fn uniform_flip_bound() -> f64 {
    PI * (3.0 * PI).exp()
}

fn one() -> ComplexPoint {
    ComplexPoint::new(1.0, 0.0)
}

/// Uniform point in the closed unit disk.
pub fn random_disk_point<R: Rng>(rng: &mut R) -> ComplexPoint {
    cis(rng.gen_range(-PI..PI)) * rng.gen_range(0.0f64..=1.0).sqrt()
}

pub fn rel_err(a: ComplexPoint, b: ComplexPoint) -> f64 {
    (a - b).norm() / b.norm()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult<T> {
    pub rows: Vec<T>,
    pub violations: Vec<String>,
}

impl<T> SweepResult<T> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Sup norms of every basis polynomial and the Lebesgue constant of a node set on a curve.
pub fn norms_on_curve<F>(nodes: Vec<ComplexPoint>, curve: &F, grid: usize, refine: usize) -> Result<(Vec<f64>, f64)>
where
    F: Fn(f64) -> ComplexPoint + Sync,
{
    let basis = FlipBasis::new(nodes)?;
    let sups = sup_norms_on_curve(&basis, curve, grid, refine)
        .into_iter()
        .map(|s| s.value)
        .collect();
    let (leb, _) = lebesgue_value_on_curve(&basis, curve, grid, refine);
    Ok((sups, leb))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub max_sup: f64,
    pub lebesgue: f64,
    /// `pi e^{3 pi} - max_sup`
    pub sup_margin: f64,
    /// `lebesgue / N`
    pub lebesgue_over_n: f64,
}

/// Max sup norm and Lebesgue constant of canonical disk sections.
pub fn bounds_sweep(
    ns: impl IntoIterator<Item = usize>,
    grid: Option<usize>,
    refine: usize,
    tol: f64,
) -> Result<SweepResult<BoundsRow>> {
    let bound = uniform_flip_bound();
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for n in ns {
        let s = canonical_disk_leja(n, one())?;
        let g = grid.unwrap_or_else(|| default_grid(n));
        let (sups, lebesgue) = norms_on_curve(s.into_points(), &cis, g, refine)?;
        let max_sup = sups.iter().copied().fold(0.0, f64::max);
        if max_sup > bound + tol {
            violations.push(format!("N={n}: max sup {max_sup} above pi e^(3 pi)"));
        }
        if lebesgue > bound * n as f64 {
            violations.push(format!("N={n}: Lebesgue {lebesgue} above pi e^(3 pi) N"));
        }
        if lebesgue > 2.0 * n as f64 + tol {
            violations.push(format!("N={n}: Lebesgue {lebesgue} above 2N"));
        }
        rows.push(BoundsRow {
            n,
            max_sup,
            lebesgue,
            sup_margin: bound - max_sup,
            lebesgue_over_n: lebesgue / n as f64,
        });
    }
    Ok(SweepResult { rows, violations })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialRow {
    pub p: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub lebesgue: f64,
    pub sum_sup: f64,
    pub avg_sup: f64,
    pub max_sup: f64,
    pub min_over_k: f64,
}

/// Sections of length `2^p - 1`: Lebesgue constant against `2^p - 1` and the
/// sup-norm window. With `trend`, also requires every average above 1 and the
/// last average below the first, over the rows with `p >= 2`.
pub fn special_sweep(
    ps: impl IntoIterator<Item = u32>,
    grid: Option<usize>,
    refine: usize,
    lebesgue_rel_tol: f64,
    trend: bool,
) -> Result<SweepResult<SpecialRow>> {
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for p in ps {
        let n = (1usize << p) - 1;
        let s = canonical_disk_leja(n, one())?;
        let g = grid.unwrap_or_else(|| default_grid(n));
        let (sups, lebesgue) = norms_on_curve(s.into_points(), &cis, g, refine)?;
        let rel = (lebesgue - n as f64).abs() / n as f64;
        if rel > lebesgue_rel_tol {
            violations.push(format!("p={p}: Lebesgue {lebesgue} differs from {n} by {rel:e}"));
        }
        let st = SpecialNStats::from_sups(p, &sups);
        if p >= 2 {
            violations.extend(st.violations().into_iter().map(|v| format!("p={p}: {v}")));
        }
        rows.push(SpecialRow {
            p,
            n,
            lebesgue,
            sum_sup: st.sum_sup,
            avg_sup: st.avg_sup,
            max_sup: st.max_sup,
            min_over_k: st.min_over_k,
        });
    }
    if trend {
        let tracked: Vec<&SpecialRow> = rows.iter().filter(|r| r.p >= 2).collect();
        for r in &tracked {
            if r.avg_sup <= 1.0 {
                violations.push(format!("p={}: avg sup {} not above 1", r.p, r.avg_sup));
            }
        }
        if let (Some(first), Some(last)) = (tracked.first(), tracked.last()) {
            if tracked.len() > 1 && last.avg_sup >= first.avg_sup {
                violations.push(format!(
                    "avg sup does not decrease: p={} gives {}, p={} gives {}",
                    first.p, first.avg_sup, last.p, last.avg_sup
                ));
            }
        }
    }
    Ok(SweepResult { rows, violations })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaSummary {
    pub rows: Vec<ErrorRow>,
    pub degree_violations: usize,
    pub coverage: CaseCoverage,
    pub violations: Vec<String>,
}

/// Delta property and coefficient support of every basis polynomial for
/// `N = 1..=n_max`, with the closed-form branches seen.
pub fn delta_suite(n_max: usize, tol: f64) -> Result<DeltaSummary> {
    let mut rows = Vec::new();
    let mut coverage = CaseCoverage::default();
    let mut violations = Vec::new();
    let mut degree_count = 0;
    for total in 1..=n_max {
        let basis = BivariateBasis::new(leja_bidisk_array(total)?)?;
        let (defect, cov) = delta_defect(&basis);
        for (c, k) in coverage.counts.iter_mut().zip(cov.counts) {
            *c += k;
        }
        if defect > tol {
            violations.push(format!("N={total}: delta defect {defect:e}"));
        }
        let deg = degree_violations(&basis, tol);
        degree_count += deg.len();
        for (j, k, l, v) in deg {
            violations.push(format!("N={total}: node {} has coefficient z^{k} w^{l} = {v:e}", j + 1));
        }
        rows.push(ErrorRow { n: total, value: defect });
    }
    if !coverage.all_fired() {
        violations.push(format!("branches never used: {:?}", coverage.missing()));
    }
    Ok(DeltaSummary {
        rows,
        degree_violations: degree_count,
        coverage,
        violations,
    })
}

/// Closed form against the determinant ratio at `points` random points per `N`.
pub fn oracle_suite(n_max: usize, points: usize, seed: u64, tol: f64) -> Result<SweepResult<ErrorRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for total in 1..=n_max {
        let array = leja_bidisk_array(total)?;
        let basis = BivariateBasis::new(array.clone())?;
        let mut worst: f64 = 0.0;
        for _ in 0..points {
            let (z, w) = (random_disk_point(&mut rng), random_disk_point(&mut rng));
            let vals = basis.eval_all(z, w);
            for (p, v) in vals.iter().enumerate() {
                let o = flip_via_vdm_ratio(&array, p + 1, z, w)?;
                worst = worst.max(rel_err(*v, o));
            }
        }
        if worst > tol {
            violations.push(format!("N={total}: relative gap {worst:e}"));
        }
        rows.push(ErrorRow { n: total, value: worst });
    }
    Ok(SweepResult { rows, violations })
}

/// Factored extension ratio against determinants for `N = 1..=n_max`.
pub fn factorization_suite(n_max: usize, points: usize, seed: u64, tol: f64) -> Result<SweepResult<ErrorRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for total in 1..=n_max {
        let array = leja_bidisk_array(total)?;
        let nodes = array.nodes();
        let base = vdm_determinant(&nodes);
        let mut worst: f64 = 0.0;
        for _ in 0..points {
            let (z, w) = (random_disk_point(&mut rng), random_disk_point(&mut rng));
            let mut ext = nodes.clone();
            ext.push((z, w));
            let oracle = vdm_determinant(&ext);
            worst = worst.max(rel_err(vdm_extension_factor(&array, z, w) * base, oracle));
        }
        if worst > tol {
            violations.push(format!("N={total}: relative gap {worst:e}"));
        }
        rows.push(ErrorRow { n: total, value: worst });
    }
    Ok(SweepResult { rows, violations })
}

/// Product formula against the determinant of the full array, `n = 0..=n_max`.
pub fn schiffer_siciak_suite(n_max: usize, tol: f64) -> Result<SweepResult<ErrorRow>> {
    let src = canonical_disk_leja(n_max + 1, one())?.into_points();
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for n in 0..=n_max {
        let array = build_array(&src, &src, block_size(n))?;
        let err = rel_err(schiffer_siciak(&src, &src, n)?, vdm_determinant(&array.nodes()));
        if err > tol {
            violations.push(format!("n={n}: relative gap {err:e}"));
        }
        rows.push(ErrorRow { n, value: err });
    }
    Ok(SweepResult { rows, violations })
}

/// 2D Leja check for the bidisk with canonical disk Leja sources, arrays of
/// size `1..=n_max` extended by one point.
pub fn bidisk_leja_check(n_max: usize, samples: usize, tol: f64) -> Result<Leja2dReport> {
    let n = crate::bivariate::shape_of(n_max + 1)?.0;
    let src = canonical_disk_leja(n + 2, one())?.into_points();
    let grid = roots_of_unity(samples);
    verify_2d_leja(&src, &src, n_max + 1, &grid, &grid, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRowF {
    pub n: usize,
    #[serde(rename = "N")]
    pub total: usize,
    pub value: f64,
}

/// Torus-grid Lebesgue constants of full arrays against the explicit envelope.
pub fn bivariate_lebesgue_sweep(
    ns: impl IntoIterator<Item = usize>,
    grid: usize,
) -> Result<SweepResult<TableRowF>> {
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for n in ns {
        let total = block_size(n);
        let basis = BivariateBasis::new(leja_bidisk_array(total)?)?;
        let value = bivariate_lebesgue(&basis, grid);
        if !(value <= lebesgue_envelope(n)) && n > 0 {
            violations.push(format!("n={n}: Lebesgue {value} above envelope"));
        }
        rows.push(TableRowF { n, total, value });
    }
    Ok(SweepResult { rows, violations })
}

/// Largest `sup |l_{(eta_p, theta_q)}| / (2 (n-p-q+1) pi^2 e^{6 pi})` over
/// the nodes of every array of degree `n` in `ns`, all `m`.
pub fn node_bound_sweep(ns: impl IntoIterator<Item = usize>, grid: usize) -> Result<SweepResult<TableRowF>> {
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for n in ns {
        let lo = if n == 0 { 1 } else { block_size(n - 1) + 1 };
        for total in lo..=block_size(n) {
            let basis = BivariateBasis::new(leja_bidisk_array(total)?)?;
            let sups = flip_torus_sups(&basis, grid);
            let mut worst: f64 = 0.0;
            for (&(p, q), &s) in basis.array().pairs().iter().zip(&sups) {
                let bound = node_bound(n, p, q);
                worst = worst.max(s / bound);
                if s > bound + 1e-6 {
                    violations.push(format!("N={total}: node ({p},{q}) sup {s} above {bound}"));
                }
            }
            rows.push(TableRowF { n, total, value: worst });
        }
    }
    Ok(SweepResult { rows, violations })
}

/// Interpolation error for `exp(z + w)` on full arrays; must strictly decrease.
pub fn decay_sweep(ns: std::ops::RangeInclusive<usize>, grid: usize) -> Result<SweepResult<DecayRow>> {
    let rows = jackson_decay_experiment(|z, w| (z + w).exp(), ns, grid)?;
    let violations = rows
        .windows(2)
        .filter(|w| w[1].sup_error >= w[0].sup_error)
        .map(|w| format!("error does not decrease from n={} to n={}", w[0].n, w[1].n))
        .collect();
    Ok(SweepResult { rows, violations })
}

/// Reproduction of `polys` random polynomials of the interpolation space for
/// every `N = 1..=n_max`, each checked at `points` random points.
pub fn reproduction_suite(
    n_max: usize,
    polys: usize,
    points: usize,
    seed: u64,
    tol: f64,
) -> Result<SweepResult<ErrorRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for total in 1..=n_max {
        let basis = BivariateBasis::new(leja_bidisk_array(total)?)?;
        let mut worst: f64 = 0.0;
        for _ in 0..polys {
            let c = random_polynomial(total, &mut rng);
            for _ in 0..points {
                let (z, w) = (random_disk_point(&mut rng), random_disk_point(&mut rng));
                let got = interpolate(&basis, |a, b| eval_polynomial(&c, a, b), z, w);
                worst = worst.max((got - eval_polynomial(&c, z, w)).norm());
            }
        }
        if worst > tol {
            violations.push(format!("N={total}: reproduction error {worst:e}"));
        }
        rows.push(ErrorRow { n: total, value: worst });
    }
    Ok(SweepResult { rows, violations })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub max_sup: f64,
    pub lebesgue: f64,
}

/// Max transported sup norm and Lebesgue constant for canonical sections
/// pushed through `map`.
pub fn transport_sweep(
    map: ExteriorMap,
    ns: impl IntoIterator<Item = usize>,
    grid: Option<usize>,
    refine: usize,
) -> Result<SweepResult<TransportRow>> {
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for n in ns {
        let s = canonical_disk_leja(n, one())?;
        let ts = transport_sequence(map, &s)?;
        let g = grid.unwrap_or_else(|| default_grid(n));
        let (sups, lebesgue) = norms_on_curve(ts.images.clone(), &ts.boundary(), g, refine)?;
        let max_sup = sups.iter().copied().fold(0.0, f64::max);
        if !max_sup.is_finite() || !lebesgue.is_finite() {
            violations.push(format!("N={n}: non-finite norm"));
        }
        rows.push(TransportRow { n, max_sup, lebesgue });
    }
    Ok(SweepResult { rows, violations })
}

/// Largest gap between identity-map transport and the plain disk computation.
pub fn identity_transport_gap(ns: impl IntoIterator<Item = usize> + Clone, refine: usize) -> Result<f64> {
    let id = crate::transport::ellipse_exterior_map(1.0, 1.0)?;
    let t = transport_sweep(id, ns.clone(), None, refine)?;
    let d = bounds_sweep(ns, None, refine, f64::INFINITY)?;
    Ok(t.rows
        .iter()
        .zip(&d.rows)
        .map(|(a, b)| (a.max_sup - b.max_sup).abs().max((a.lebesgue - b.lebesgue).abs()))
        .fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlperRow {
    pub w_grid: usize,
    pub t_grid: usize,
    pub value: f64,
}

/// Alper constant at `(w_grid, t_grid)` and at doubled grids.
pub fn alper_study(map: &ExteriorMap, w_grid: usize, t_grid: usize) -> Result<Vec<AlperRow>> {
    [(w_grid, t_grid), (2 * w_grid, 2 * t_grid)]
        .into_iter()
        .map(|(w, t)| {
            Ok(AlperRow {
                w_grid: w,
                t_grid: t,
                value: estimate_alper_constant(map, w, t)?,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub max_ratio: f64,
    pub envelope: f64,
}

pub fn envelope_sweep(
    map: ExteriorMap,
    ns: impl IntoIterator<Item = usize>,
    grid: usize,
) -> Result<SweepResult<EnvelopeRow>> {
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for n in ns {
        let ts = transport_sequence(map, &canonical_disk_leja(n, one())?)?;
        let r = transport_ratio_envelope(&ts, grid)?;
        if !r.holds() {
            violations.push(format!("N={n}: ratio {} above envelope {}", r.max_ratio, r.envelope));
        }
        rows.push(EnvelopeRow {
            n,
            max_ratio: r.max_ratio,
            envelope: r.envelope,
        });
    }
    Ok(SweepResult { rows, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::ellipse_exterior_map;

    #[test]
    fn small_bounds_sweep() {
        let r = bounds_sweep(1..=16, None, 40, 1e-6).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.rows.len(), 16);
        assert!((r.rows[6].lebesgue - 7.0).abs() < 1e-6);
        assert!((r.rows[7].max_sup - 1.0).abs() < 1e-8);
    }

    #[test]
    fn small_special_sweep() {
        let r = special_sweep(1..=5, None, 40, 1e-6, true).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
    }

    #[test]
    fn small_bivariate_suites() {
        assert!(delta_suite(8, 1e-10).unwrap().violations.is_empty());
        assert!(oracle_suite(6, 4, 0, 1e-8).unwrap().passed());
        assert!(factorization_suite(6, 4, 0, 1e-8).unwrap().passed());
        assert!(schiffer_siciak_suite(3, 1e-8).unwrap().passed());
        assert!(bidisk_leja_check(6, 64, 1e-6).unwrap().passed);
        assert!(reproduction_suite(6, 3, 4, 0, 1e-10).unwrap().passed());
        assert!(bivariate_lebesgue_sweep(1..=3, 16).unwrap().passed());
        assert!(node_bound_sweep(1..=2, 16).unwrap().passed());
    }

    #[test]
    fn small_transport() {
        assert!(identity_transport_gap(1..=8, 40).unwrap() <= 1e-9);
        let map = ellipse_exterior_map(1.2, 0.8).unwrap();
        assert!(transport_sweep(map, 1..=8, None, 40).unwrap().passed());
        assert!(envelope_sweep(map, [3, 9], 1024).unwrap().passed());
        let a = alper_study(&map, 256, 256).unwrap();
        assert_eq!(a[1].w_grid, 512);
    }
}
