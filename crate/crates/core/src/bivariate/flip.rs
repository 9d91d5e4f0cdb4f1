//! Closed-form fundamental Lagrange polynomials of an intertwining array.
//!
//! Every basis polynomial is a signed sum of separable products
//! `E_p(a)(z) * T_q(b)(w)` where
//!
//! `E_p(a)(z) = prod_{j=0, j != p}^{a} (z - eta_j) / (eta_p - eta_j)`,
//! `T_q(b)(w) = prod_{i=0, i != q}^{b} (w - theta_i) / (theta_q - theta_i)`,
//!
//! and an empty product is 1. Which sum applies depends on where `(p, q)`
//! sits relative to the shape `(n, m)`.

use serde::{Deserialize, Serialize};

use crate::error::{LejaError, Result};
use crate::math::ComplexPoint;

use super::array::IntertwiningArray;

/// The branch of the closed form used for a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlipCase {
    /// `p+q = n`, or `p+q = n-1` with `q >= m+1`.
    Outer,
    /// `p+q = n-1`, `q = m`.
    EdgeAtM,
    /// `p+q = n-1`, `q <= m-1`.
    EdgeBelowM,
    /// `p+q <= n-2`, `q <= m-1`, `p <= n-m-1`.
    InnerLowP,
    /// `p+q <= n-2`, `q <= m-1`, `p >= n-m`.
    InnerHighP,
    /// `p+q <= n-2`, `q = m`.
    InnerAtM,
    /// `p+q <= n-2`, `q >= m+1`.
    InnerAboveM,
}

impl FlipCase {
    pub const ALL: [FlipCase; 7] = [
        FlipCase::Outer,
        FlipCase::EdgeAtM,
        FlipCase::EdgeBelowM,
        FlipCase::InnerLowP,
        FlipCase::InnerHighP,
        FlipCase::InnerAtM,
        FlipCase::InnerAboveM,
    ];

    pub fn index(self) -> usize {
        FlipCase::ALL.iter().position(|&c| c == self).unwrap()
    }
}

/// One term `sign * E_p(z_top)(z) * T_q(w_top)(w)`; a top below 0 is an empty product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlipTerm {
    pub sign: i8,
    pub z_top: i64,
    pub w_top: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlipExpansion {
    pub p: usize,
    pub q: usize,
    pub case: FlipCase,
    pub terms: Vec<FlipTerm>,
}

fn t(sign: i8, z_top: i64, w_top: i64) -> FlipTerm {
    FlipTerm { sign, z_top, w_top }
}

/// Telescoping pairs `+E(z(r)) T(q+r+1) - E(z(r)) T(q+r)` for `r` in `lo..=hi`.
fn ladder(out: &mut Vec<FlipTerm>, q: i64, lo: i64, hi: i64, z_of: impl Fn(i64) -> i64) {
    for r in lo..=hi {
        out.push(t(1, z_of(r), q + r + 1));
        out.push(t(-1, z_of(r), q + r));
    }
}

/// Term list for node `(eta_p, theta_q)` of an array of shape `(n, m)`.
pub fn flip_expansion(n: usize, m: usize, p: usize, q: usize) -> Result<FlipExpansion> {
    let inside = p + q < n || (p + q == n && q <= m);
    if !inside || m > n {
        return Err(LejaError::NodeNotInArray { p, q });
    }
    let (n, m, pi, qi) = (n as i64, m as i64, p as i64, q as i64);
    let s = pi + qi;
    let mut terms = Vec::new();
    let case = if s == n || (s == n - 1 && qi > m) {
        terms.push(t(1, pi - 1, qi - 1));
        FlipCase::Outer
    } else if s == n - 1 && qi == m {
        terms.push(t(1, n - m, m - 1));
        FlipCase::EdgeAtM
    } else if s == n - 1 {
        terms.push(t(1, pi + 1, qi - 1));
        terms.push(t(-1, pi - 1, qi - 1));
        terms.push(t(1, pi - 1, qi + 1));
        FlipCase::EdgeBelowM
    } else if qi < m {
        terms.push(t(1, n - qi, qi - 1));
        terms.push(t(-1, n - qi - 1, qi - 1));
        terms.push(t(1, n - qi - 1, qi + 1));
        if pi < n - m {
            ladder(&mut terms, qi, 1, m - qi - 1, |r| n - qi - r - 1);
            ladder(&mut terms, qi, m - qi, n - pi - qi - 2, |r| n - qi - r - 2);
            FlipCase::InnerLowP
        } else {
            ladder(&mut terms, qi, 1, n - pi - qi - 1, |r| n - qi - r - 1);
            FlipCase::InnerHighP
        }
    } else if qi == m {
        terms.push(t(1, n - m, m - 1));
        terms.push(t(-1, n - m - 2, m - 1));
        terms.push(t(1, n - m - 2, m + 1));
        ladder(&mut terms, m, 1, n - m - pi - 2, |r| n - m - r - 2);
        FlipCase::InnerAtM
    } else {
        terms.push(t(1, n - qi - 1, qi - 1));
        terms.push(t(-1, n - qi - 2, qi - 1));
        terms.push(t(1, n - qi - 2, qi + 1));
        ladder(&mut terms, qi, 1, n - pi - qi - 2, |r| n - qi - r - 2);
        FlipCase::InnerAboveM
    };
    Ok(FlipExpansion { p, q, case, terms })
}

/// Values `prod_{j=0, j != p}^{top} (x - s_j) / (s_p - s_j)` for every
/// `p < rows` and `top` in `-1..=max_top`, stored at `[p][top + 1]`.
#[derive(Clone, Debug)]
pub struct AxisTable {
    width: usize,
    values: Vec<ComplexPoint>,
}

impl AxisTable {
    fn new(src: &[ComplexPoint], rows: usize, max_top: usize, x: ComplexPoint) -> Self {
        let width = max_top + 2;
        let mut values = Vec::with_capacity(rows * width);
        for p in 0..rows {
            let mut acc = ComplexPoint::new(1.0, 0.0);
            values.push(acc);
            for (j, &s) in src.iter().enumerate().take(max_top + 1) {
                if j != p {
                    acc *= (x - s) / (src[p] - s);
                }
                values.push(acc);
            }
        }
        AxisTable { width, values }
    }

    fn get(&self, p: usize, top: i64) -> ComplexPoint {
        let col = (top.max(-1) + 1) as usize;
        self.values[p * self.width + col]
    }
}

/// Basis of an array, with the term lists resolved once per node.
#[derive(Clone, Debug)]
pub struct BivariateBasis {
    array: IntertwiningArray,
    expansions: Vec<FlipExpansion>,
}

impl BivariateBasis {
    pub fn new(array: IntertwiningArray) -> Result<Self> {
        let (n, m) = array.shape();
        let expansions = array
            .pairs()
            .iter()
            .map(|&(p, q)| flip_expansion(n, m, p, q))
            .collect::<Result<Vec<_>>>()?;
        Ok(BivariateBasis { array, expansions })
    }

    pub fn array(&self) -> &IntertwiningArray {
        &self.array
    }

    pub fn expansions(&self) -> &[FlipExpansion] {
        &self.expansions
    }

    pub fn len(&self) -> usize {
        self.array.len()
    }

    pub fn is_empty(&self) -> bool {
        self.array.is_empty()
    }

    pub fn z_table(&self, z: ComplexPoint) -> AxisTable {
        let n = self.array.shape().0;
        AxisTable::new(self.array.eta(), n + 1, n, z)
    }

    pub fn w_table(&self, w: ComplexPoint) -> AxisTable {
        let n = self.array.shape().0;
        AxisTable::new(self.array.theta(), n + 1, n, w)
    }

    /// Value of the basis polynomial of node `j` (0-based) from prebuilt tables.
    pub fn eval_with(&self, j: usize, zt: &AxisTable, wt: &AxisTable) -> ComplexPoint {
        let e = &self.expansions[j];
        e.terms
            .iter()
            .map(|term| zt.get(e.p, term.z_top) * wt.get(e.q, term.w_top) * f64::from(term.sign))
            .sum()
    }

    /// All basis values at `(z, w)`, in node order.
    pub fn eval_all(&self, z: ComplexPoint, w: ComplexPoint) -> Vec<ComplexPoint> {
        let (zt, wt) = (self.z_table(z), self.w_table(w));
        (0..self.len()).map(|j| self.eval_with(j, &zt, &wt)).collect()
    }

    pub fn eval(&self, j: usize, z: ComplexPoint, w: ComplexPoint) -> ComplexPoint {
        self.eval_with(j, &self.z_table(z), &self.w_table(w))
    }

    pub fn lebesgue_fn(&self, z: ComplexPoint, w: ComplexPoint) -> f64 {
        self.eval_all(z, w).iter().map(|v| v.norm()).sum()
    }
}

/// `l_{(eta_p, theta_q)}(z, w)` for the array.
pub fn bivariate_flip(
    array: &IntertwiningArray,
    p: usize,
    q: usize,
    z: ComplexPoint,
    w: ComplexPoint,
) -> Result<ComplexPoint> {
    bivariate_flip_with_case(array, p, q, z, w).map(|(v, _)| v)
}

/// As [`bivariate_flip`], also reporting which branch produced the value.
pub fn bivariate_flip_with_case(
    array: &IntertwiningArray,
    p: usize,
    q: usize,
    z: ComplexPoint,
    w: ComplexPoint,
) -> Result<(ComplexPoint, FlipCase)> {
    array
        .position(p, q)
        .ok_or(LejaError::NodeNotInArray { p, q })?;
    let (n, m) = array.shape();
    let exp = flip_expansion(n, m, p, q)?;
    let zt = AxisTable::new(array.eta(), n + 1, n, z);
    let wt = AxisTable::new(array.theta(), n + 1, n, w);
    let v = exp
        .terms
        .iter()
        .map(|term| zt.get(p, term.z_top) * wt.get(q, term.w_top) * f64::from(term.sign))
        .sum();
    Ok((v, exp.case))
}

/// Counts how often each branch fired.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseCoverage {
    pub counts: [usize; 7],
}

impl CaseCoverage {
    pub fn record(&mut self, case: FlipCase) {
        self.counts[case.index()] += 1;
    }

    pub fn all_fired(&self) -> bool {
        self.counts.iter().all(|&c| c > 0)
    }

    pub fn missing(&self) -> Vec<FlipCase> {
        FlipCase::ALL
            .iter()
            .copied()
            .filter(|c| self.counts[c.index()] == 0)
            .collect()
    }
}

/// Largest `|l_j(H_k) - delta_jk|` over the array, with the branches seen.
pub fn delta_defect(basis: &BivariateBasis) -> (f64, CaseCoverage) {
    let mut worst: f64 = 0.0;
    let mut cov = CaseCoverage::default();
    for e in basis.expansions() {
        cov.record(e.case);
    }
    for k in 0..basis.len() {
        let (z, w) = basis.array().node(k);
        for (j, v) in basis.eval_all(z, w).into_iter().enumerate() {
            let target = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((v - target).norm());
        }
    }
    (worst, cov)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivariate::array::{build_array, leja_bidisk_array};
    use crate::math::cis;

    #[test]
    fn single_node_is_one() {
        let a = leja_bidisk_array(1).unwrap();
        let v = bivariate_flip(&a, 0, 0, ComplexPoint::new(0.3, 0.1), cis(2.0)).unwrap();
        assert_eq!(v, ComplexPoint::new(1.0, 0.0));
    }

    #[test]
    fn rejects_non_nodes() {
        let a = leja_bidisk_array(4).unwrap();
        assert!(matches!(
            bivariate_flip(&a, 1, 1, ComplexPoint::new(0.0, 0.0), ComplexPoint::new(0.0, 0.0)),
            Err(LejaError::NodeNotInArray { p: 1, q: 1 })
        ));
        assert!(flip_expansion(2, 0, 0, 3).is_err());
    }

    #[test]
    fn delta_on_leja_arrays_and_coverage() {
        let mut cov = CaseCoverage::default();
        for total in 1..=28 {
            let basis = BivariateBasis::new(leja_bidisk_array(total).unwrap()).unwrap();
            let (d, c) = delta_defect(&basis);
            assert!(d <= 1e-10, "N={total}: {d}");
            for (i, n) in c.counts.iter().enumerate() {
                cov.counts[i] += n;
            }
        }
        assert!(cov.all_fired(), "missing {:?}", cov.missing());
    }

    #[test]
    fn delta_on_generic_sources() {
        let e: Vec<ComplexPoint> = (0..8).map(|i| cis(0.7 * i as f64) * (0.5 + 0.05 * i as f64)).collect();
        let th: Vec<ComplexPoint> = (0..8).map(|i| ComplexPoint::new(0.1 * i as f64, -0.2)).collect();
        for total in 1..=21 {
            let basis = BivariateBasis::new(build_array(&e, &th, total).unwrap()).unwrap();
            let (d, _) = delta_defect(&basis);
            assert!(d <= 1e-9, "N={total}: {d}");
        }
    }

    #[test]
    fn with_case_matches_basis() {
        let a = leja_bidisk_array(13).unwrap();
        let basis = BivariateBasis::new(a.clone()).unwrap();
        let (z, w) = (ComplexPoint::new(0.2, -0.5), cis(1.0) * 0.7);
        for (j, &(p, q)) in a.pairs().iter().enumerate() {
            let (v, c) = bivariate_flip_with_case(&a, p, q, z, w).unwrap();
            assert!((v - basis.eval(j, z, w)).norm() < 1e-14);
            assert_eq!(c, basis.expansions()[j].case);
        }
    }
}
