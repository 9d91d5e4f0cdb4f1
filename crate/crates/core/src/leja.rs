//! Leja sections for the unit disk and for sampled planar compacts.
//!
//! On the closed unit disk every Leja sequence starting at 1 is explicit:
//! the `k`-th point is `exp(i pi sum_l j_l 2^{-l})` where `k - 1 = sum_l j_l 2^l`,
//! so the first `2^s` points are always the `2^s`-th roots of unity. Any
//! section of length `N = 2^{p_1} + N'` splits as the leading block of roots of
//! unity followed by a rotated Leja section of length `N'`; iterating the split
//! exposes the rotations `rho_q` and the point `omega_0` used by the structured
//! Lagrange formulas in [`crate::flip`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{LejaError, Result};
use crate::math::{binary_decompose, cis, is_unit, ComplexPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompactTag {
    UnitDisk,
    SampledCompact,
}

/// The first `N` points of a Leja sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LejaSection {
    points: Vec<ComplexPoint>,
    compact_tag: CompactTag,
}

impl LejaSection {
    /// Wraps an existing point list. Disk sections are checked for unit
    /// modulus.
    pub fn from_points(points: Vec<ComplexPoint>, compact_tag: CompactTag) -> Result<Self> {
        if points.is_empty() {
            return Err(LejaError::ZeroInput);
        }
        if compact_tag == CompactTag::UnitDisk {
            if let Some(p) = points.iter().find(|p| !is_unit(**p)) {
                return Err(LejaError::NonUnitOrigin(format!("{p}")));
            }
        }
        Ok(LejaSection {
            points,
            compact_tag,
        })
    }

    pub fn points(&self) -> &[ComplexPoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<ComplexPoint> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn compact_tag(&self) -> CompactTag {
        self.compact_tag
    }

    /// The first point `z_1`.
    pub fn origin(&self) -> ComplexPoint {
        self.points[0]
    }

    /// The section rotated so that it starts at 1.
    pub fn normalized(&self) -> Vec<ComplexPoint> {
        let o = self.origin();
        self.points.iter().map(|&p| p / o).collect()
    }
}

/// Discretization of the boundary of a compact set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundarySamples {
    samples: Vec<ComplexPoint>,
    description: String,
}

impl BoundarySamples {
    pub fn new(samples: Vec<ComplexPoint>, description: impl Into<String>) -> Result<Self> {
        if samples.is_empty() {
            return Err(LejaError::EmptyBoundary);
        }
        let mut order: Vec<usize> = (0..samples.len()).collect();
        order.sort_by(|&a, &b| {
            samples[a]
                .re
                .total_cmp(&samples[b].re)
                .then(samples[a].im.total_cmp(&samples[b].im))
        });
        for w in order.windows(2) {
            if samples[w[0]] == samples[w[1]] {
                return Err(LejaError::DuplicateNodes(w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        Ok(BoundarySamples {
            samples,
            description: description.into(),
        })
    }

    /// `count` equispaced points `exp(2 i pi u / count)` on the unit circle.
    pub fn circle(count: usize) -> Result<Self> {
        let samples = (0..count)
            .map(|u| cis(2.0 * PI * u as f64 / count as f64))
            .collect();
        Self::new(samples, format!("unit circle, {count} uniform angles"))
    }

    /// `(a cos t, b sin t)` at `count` equispaced parameters, starting at `t = 0`.
    pub fn ellipse(a: f64, b: f64, count: usize) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(LejaError::InvalidAxes { a, b });
        }
        let samples = (0..count)
            .map(|u| {
                let t = 2.0 * PI * u as f64 / count as f64;
                ComplexPoint::new(a * t.cos(), b * t.sin())
            })
            .collect();
        Self::new(
            samples,
            format!("ellipse a={a}, b={b}, {count} uniform parameters"),
        )
    }

    pub fn samples(&self) -> &[ComplexPoint] {
        &self.samples
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Angle (in units of pi) of the `k`-th canonical Leja point, `k >= 1`.
fn canonical_angle_over_pi(k: usize) -> f64 {
    let mut digits = k - 1;
    let mut weight = 1.0;
    let mut acc = 0.0;
    while digits > 0 {
        if digits & 1 == 1 {
            acc += weight;
        }
        digits >>= 1;
        weight *= 0.5;
    }
    acc
}

/// The explicit Leja section of the unit disk starting at `origin`.
pub fn canonical_disk_leja(n: usize, origin: ComplexPoint) -> Result<LejaSection> {
    if n == 0 {
        return Err(LejaError::ZeroInput);
    }
    if !is_unit(origin) {
        return Err(LejaError::NonUnitOrigin(format!("{origin}")));
    }
    let points = (1..=n)
        .map(|k| {
            if k == 1 {
                origin
            } else {
                origin * cis(PI * canonical_angle_over_pi(k))
            }
        })
        .collect();
    Ok(LejaSection {
        points,
        compact_tag: CompactTag::UnitDisk,
    })
}

/// Log-domain values closer than this are treated as ties.
const GREEDY_TIE_TOL: f64 = 1e-12;

/// Greedy Leja construction restricted to a discrete boundary.
///
/// Each new point maximizes `sum_j ln |z - eta_j|` over the samples; ties are
/// resolved in favour of the lowest sample index.
pub fn greedy_leja(
    boundary: &BoundarySamples,
    n: usize,
    seed_index: usize,
) -> Result<LejaSection> {
    let samples = boundary.samples();
    if n == 0 {
        return Err(LejaError::ZeroInput);
    }
    if n > samples.len() {
        return Err(LejaError::NotEnoughSamples {
            requested: n,
            available: samples.len(),
        });
    }
    if seed_index >= samples.len() {
        return Err(LejaError::SeedOutOfRange {
            index: seed_index,
            len: samples.len(),
        });
    }

    let mut acc = vec![0.0f64; samples.len()];
    let mut taken = vec![false; samples.len()];
    let mut points = Vec::with_capacity(n);
    let mut last = seed_index;
    taken[last] = true;
    points.push(samples[last]);

    while points.len() < n {
        let newest = samples[last];
        for (a, &z) in acc.iter_mut().zip(samples) {
            let r = (z - newest).norm();
            *a += if r == 0.0 { f64::NEG_INFINITY } else { r.ln() };
        }
        let mut best: Option<(usize, f64)> = None;
        for (i, &v) in acc.iter().enumerate() {
            if taken[i] {
                continue;
            }
            match best {
                Some((_, bv)) if v <= bv + GREEDY_TIE_TOL => {}
                _ => best = Some((i, v)),
            }
        }
        // n <= samples.len() guarantees an untaken sample exists
        let (idx, _) = best.unwrap();
        taken[idx] = true;
        points.push(samples[idx]);
        last = idx;
    }

    let compact_tag = if samples.iter().all(|&z| is_unit(z)) {
        CompactTag::UnitDisk
    } else {
        CompactTag::SampledCompact
    };
    Ok(LejaSection {
        points,
        compact_tag,
    })
}

/// Leading block of roots of unity, the rotation of the tail and the
/// renormalized tail.
///
/// All three are expressed for the section divided by its origin, so that
/// the block is exactly `Omega_{2^{p_1}}`; multiply by `origin` to return to
/// the section's own frame.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionSplit {
    pub origin: ComplexPoint,
    pub roots_block: Vec<ComplexPoint>,
    pub rho1: ComplexPoint,
    pub remainder: LejaSection,
}

impl SectionSplit {
    /// Rebuilds the parent section: `origin * (roots_block ++ rho1 * remainder)`.
    pub fn reassemble(&self) -> Vec<ComplexPoint> {
        self.roots_block
            .iter()
            .copied()
            .chain(self.remainder.points().iter().map(|&r| self.rho1 * r))
            .map(|p| self.origin * p)
            .collect()
    }
}

pub fn split_section(section: &LejaSection) -> Result<SectionSplit> {
    let n = section.len();
    let dec = binary_decompose(n as u64)?;
    if dec.is_power_of_two() {
        return Err(LejaError::PowerOfTwo(n));
    }
    let block = 1usize << dec.leading();
    let normalized = section.normalized();
    let rho1 = normalized[block];
    let remainder = normalized[block..].iter().map(|&p| p / rho1).collect();
    Ok(SectionSplit {
        origin: section.origin(),
        roots_block: normalized[..block].to_vec(),
        rho1,
        remainder: LejaSection {
            points: remainder,
            compact_tag: section.compact_tag,
        },
    })
}

/// The rotations `rho_1, ..., rho_{n-1}` read off the recursive splits,
/// followed by the size `2^{p_n}` of the last block.
pub fn block_rotations(section: &LejaSection) -> Result<(Vec<ComplexPoint>, usize)> {
    let mut rotations = Vec::new();
    let mut current = LejaSection {
        points: section.normalized(),
        compact_tag: section.compact_tag,
    };
    loop {
        let dec = binary_decompose(current.len() as u64)?;
        if dec.is_power_of_two() {
            return Ok((rotations, current.len()));
        }
        let split = split_section(&current)?;
        rotations.push(split.rho1);
        current = split.remainder;
    }
}

/// `omega_0 = rho_1 ... rho_n`, relative to the section's origin.
///
/// The last rotation `rho_n` is not observable from the section itself; any
/// `2^{p_n}`-th root of -1 is admissible and `exp(i pi / 2^{p_n})` is used.
pub fn omega0_of_section(section: &LejaSection) -> Result<ComplexPoint> {
    let n = section.len();
    if binary_decompose(n as u64)?.is_power_of_two() {
        return Err(LejaError::PowerOfTwo(n));
    }
    let (rotations, last_block) = block_rotations(section)?;
    let alpha: ComplexPoint = rotations.iter().product();
    Ok(alpha * cis(PI / last_block as f64))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LejaReport {
    pub max_violation: f64,
    /// 1-based index of the worst point, 0 when nothing was checked.
    pub worst_k: usize,
    pub passed: bool,
}

/// Checks the Leja extremal property of each point against a boundary grid.
///
/// The violation at `k` is the relative shortfall
/// `1 - prod_{j<k} |eta_k - eta_j| / max_z prod_{j<k} |z - eta_j|`, floored at 0.
pub fn validate_leja(section: &LejaSection, boundary: &BoundarySamples, rel_tol: f64) -> LejaReport {
    let pts = section.points();
    let samples = boundary.samples();
    let mut acc = vec![0.0f64; samples.len()];
    let mut max_violation = 0.0f64;
    let mut worst_k = 0usize;
    for k in 1..pts.len() {
        let newest = pts[k - 1];
        for (a, &z) in acc.iter_mut().zip(samples) {
            let r = (z - newest).norm();
            *a += if r == 0.0 { f64::NEG_INFINITY } else { r.ln() };
        }
        let grid_max = acc.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let own: f64 = pts[..k].iter().map(|&p| (pts[k] - p).norm().ln()).sum();
        let violation = if own >= grid_max {
            0.0
        } else {
            -(own - grid_max).exp_m1()
        };
        if violation > max_violation {
            max_violation = violation;
            worst_k = k + 1;
        }
    }
    LejaReport {
        max_violation,
        worst_k,
        passed: max_violation <= rel_tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{pow2_power, roots_of_unity};
    use num_complex::Complex64;

    fn one() -> ComplexPoint {
        Complex64::new(1.0, 0.0)
    }

    fn close(a: ComplexPoint, b: ComplexPoint, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    /// Every element of `a` has a partner in `b` within `tol`.
    fn same_set(a: &[ComplexPoint], b: &[ComplexPoint], tol: f64) -> bool {
        a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| close(*x, *y, tol)))
    }

    #[test]
    fn canonical_small_sections() {
        let s = canonical_disk_leja(4, one()).unwrap();
        let expect = [one(), -one(), Complex64::i(), -Complex64::i()];
        for (p, e) in s.points().iter().zip(expect) {
            assert!(close(*p, e, 1e-15), "{p} vs {e}");
        }
        assert_eq!(canonical_disk_leja(1, one()).unwrap().points(), &[one()]);
        let s8 = canonical_disk_leja(8, one()).unwrap();
        assert!(same_set(s8.points(), &roots_of_unity(8), 1e-14));
    }

    #[test]
    fn canonical_rejects_bad_input() {
        assert!(canonical_disk_leja(0, one()).is_err());
        assert!(canonical_disk_leja(4, Complex64::new(1.1, 0.0)).is_err());
    }

    #[test]
    fn canonical_power_blocks_are_roots_of_unity() {
        let full = canonical_disk_leja(4096, one()).unwrap();
        for p in 0..=12 {
            let m = 1usize << p;
            assert!(
                same_set(&full.points()[..m], &roots_of_unity(m), 1e-12),
                "p = {p}"
            );
        }
        // rotated origin rotates the blocks
        let o = cis(0.37);
        let rot = canonical_disk_leja(16, o).unwrap();
        let target: Vec<_> = roots_of_unity(16).into_iter().map(|r| r * o).collect();
        assert!(same_set(rot.points(), &target, 1e-12));
    }

    #[test]
    fn greedy_examples() {
        let circle = BoundarySamples::circle(1024).unwrap();
        let s = greedy_leja(&circle, 2, 0).unwrap();
        assert!(close(s.points()[1], -one(), 1e-12));

        let dense = BoundarySamples::circle(4096).unwrap();
        let s = greedy_leja(&dense, 16, 0).unwrap();
        assert!(validate_leja(&s, &dense, 1e-9).passed);

        let ell = BoundarySamples::ellipse(1.2, 0.8, 256).unwrap();
        let s = greedy_leja(&ell, 1, 0).unwrap();
        assert_eq!(s.points(), &[Complex64::new(1.2, 0.0)]);
        assert_eq!(s.compact_tag(), CompactTag::SampledCompact);
    }

    #[test]
    fn greedy_errors() {
        let c = BoundarySamples::circle(8).unwrap();
        assert!(matches!(
            greedy_leja(&c, 9, 0),
            Err(LejaError::NotEnoughSamples { .. })
        ));
        assert!(greedy_leja(&c, 2, 8).is_err());
    }

    #[test]
    fn greedy_on_dense_circle_passes_validation() {
        for n in [5usize, 12, 33] {
            let count = 64 * n;
            let b = BoundarySamples::circle(count).unwrap();
            let s = greedy_leja(&b, n, 3).unwrap();
            let fine = BoundarySamples::circle(count).unwrap();
            let rep = validate_leja(&s, &fine, 10.0 / count as f64);
            assert!(rep.passed, "n={n}: {rep:?}");
        }
    }

    #[test]
    fn split_examples() {
        let s3 = canonical_disk_leja(3, one()).unwrap();
        let sp = split_section(&s3).unwrap();
        assert_eq!(sp.roots_block.len(), 2);
        assert!(close(sp.rho1, Complex64::i(), 1e-15));
        assert_eq!(sp.remainder.len(), 1);
        assert!(close(sp.remainder.points()[0], one(), 1e-15));

        let s6 = canonical_disk_leja(6, one()).unwrap();
        let sp = split_section(&s6).unwrap();
        assert!(close(sp.rho1, s6.points()[4], 1e-15));
        let circle = BoundarySamples::circle(4096).unwrap();
        assert!(validate_leja(&sp.remainder, &circle, 1e-9).passed);
        assert!(close(sp.remainder.origin(), one(), 1e-15));

        let s5 = canonical_disk_leja(5, one()).unwrap();
        let sp = split_section(&s5).unwrap();
        assert_eq!(sp.remainder.len(), 1);

        let s4 = canonical_disk_leja(4, one()).unwrap();
        assert_eq!(split_section(&s4), Err(LejaError::PowerOfTwo(4)));
    }

    #[test]
    fn split_reassembles_for_all_small_sections() {
        let full = canonical_disk_leja(4096, one()).unwrap();
        for n in 3..=4096usize {
            if n.is_power_of_two() {
                continue;
            }
            let s = LejaSection::from_points(full.points()[..n].to_vec(), CompactTag::UnitDisk)
                .unwrap();
            let sp = split_section(&s).unwrap();
            let block = sp.roots_block.len();
            assert!((pow2_power(sp.rho1, block.trailing_zeros()) + one()).norm() < 1e-10);
            for (a, b) in sp.reassemble().iter().zip(s.points()) {
                assert!(close(*a, *b, 1e-14), "n={n}");
            }
        }
    }

    #[test]
    fn omega0_examples() {
        let s3 = canonical_disk_leja(3, one()).unwrap();
        let w = omega0_of_section(&s3).unwrap();
        assert!(close(w, -Complex64::i(), 1e-15));

        let s6 = canonical_disk_leja(6, one()).unwrap();
        let w = omega0_of_section(&s6).unwrap();
        assert!((pow2_power(w, 2) + one()).norm() < 1e-10);
        assert!((w.norm() - 1.0).abs() < 1e-14);

        assert!(omega0_of_section(&canonical_disk_leja(8, one()).unwrap()).is_err());
    }

    #[test]
    fn omega0_properties_up_to_4096() {
        let full = canonical_disk_leja(4097, one()).unwrap();
        for n in 3..=4096usize {
            if n.is_power_of_two() {
                continue;
            }
            let s = LejaSection::from_points(full.points()[..n].to_vec(), CompactTag::UnitDisk)
                .unwrap();
            let w = omega0_of_section(&s).unwrap();
            let dec = binary_decompose(n as u64).unwrap();
            assert!((pow2_power(w, dec.leading()) + one()).norm() <= 1e-10, "n={n}");
            // next canonical point lies in omega_0 * Omega_{2^{p_n}}
            let next = full.points()[n];
            let ratio = next / w;
            assert!(
                (pow2_power(ratio, dec.trailing()) - one()).norm() <= 1e-9,
                "n={n}"
            );
        }
    }

    #[test]
    fn validate_examples() {
        let circle = BoundarySamples::circle(8192).unwrap();
        let s = canonical_disk_leja(32, one()).unwrap();
        assert!(validate_leja(&s, &circle, 1e-6).passed);

        let bad = LejaSection::from_points(vec![one(), Complex64::i()], CompactTag::UnitDisk)
            .unwrap();
        let rep = validate_leja(&bad, &circle, 1e-6);
        assert!(!rep.passed);
        assert_eq!(rep.worst_k, 2);
        assert!((rep.max_violation - (1.0 - 2f64.sqrt() / 2.0)).abs() < 1e-12);

        let single = canonical_disk_leja(1, one()).unwrap();
        let rep = validate_leja(&single, &circle, 1e-6);
        assert!(rep.passed);
        assert_eq!(rep.max_violation, 0.0);
    }

    #[test]
    fn boundary_rejects_duplicates() {
        let z = Complex64::new(0.5, 0.5);
        assert!(BoundarySamples::new(vec![z, one(), z], "dup").is_err());
        assert!(BoundarySamples::new(vec![], "empty").is_err());
    }
}
