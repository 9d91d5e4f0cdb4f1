use crate::error::{LejaError, Result};
use crate::leja::canonical_disk_leja;
use crate::math::ComplexPoint;

use super::index::{lex_to_pair, shape_of};

/// The first `N` points `H_j = (eta_{k(j)}, theta_{l(j)})` of the
/// intertwining sequence of two univariate node sequences.
#[derive(Clone, Debug, PartialEq)]
pub struct IntertwiningArray {
    eta: Vec<ComplexPoint>,
    theta: Vec<ComplexPoint>,
    total: usize,
    n: usize,
    m: usize,
    pairs: Vec<(usize, usize)>,
}

impl IntertwiningArray {
    pub fn eta(&self) -> &[ComplexPoint] {
        &self.eta
    }

    pub fn theta(&self) -> &[ComplexPoint] {
        &self.theta
    }

    /// Number of nodes `N`.
    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// `(n, m)` of the array.
    pub fn shape(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    /// Source indices `(p, q)` of every node, in order.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn node(&self, j: usize) -> (ComplexPoint, ComplexPoint) {
        let (p, q) = self.pairs[j];
        (self.eta[p], self.theta[q])
    }

    pub fn nodes(&self) -> Vec<(ComplexPoint, ComplexPoint)> {
        (0..self.total).map(|j| self.node(j)).collect()
    }

    /// 0-based position of `(eta_p, theta_q)`, if it is a node.
    pub fn position(&self, p: usize, q: usize) -> Option<usize> {
        let s = p + q;
        let inside = s < self.n || (s == self.n && q <= self.m);
        inside.then(|| super::index::pair_to_lex(p, q) - 1)
    }
}

fn check_distinct(points: &[ComplexPoint]) -> Result<()> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(LejaError::DuplicateNodes(i, j));
            }
        }
    }
    Ok(())
}

/// Builds `Omega_N`; each source must hold at least `n + 1` distinct points.
pub fn build_array(
    eta: &[ComplexPoint],
    theta: &[ComplexPoint],
    total: usize,
) -> Result<IntertwiningArray> {
    let (n, m) = shape_of(total)?;
    for src in [eta, theta] {
        if src.len() < n + 1 {
            return Err(LejaError::InsufficientSources {
                needed: n + 1,
                got: src.len(),
            });
        }
        check_distinct(src)?;
    }
    let pairs = (1..=total)
        .map(lex_to_pair)
        .collect::<Result<Vec<_>>>()?;
    Ok(IntertwiningArray {
        eta: eta.to_vec(),
        theta: theta.to_vec(),
        total,
        n,
        m,
        pairs,
    })
}

/// Array from two canonical disk Leja sequences starting at 1, with one
/// spare source point per axis.
pub fn leja_bidisk_array(total: usize) -> Result<IntertwiningArray> {
    let (n, _) = shape_of(total)?;
    let src = canonical_disk_leja(n + 2, ComplexPoint::new(1.0, 0.0))?.into_points();
    build_array(&src, &src, total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn src(len: usize, base: f64) -> Vec<ComplexPoint> {
        (0..len).map(|i| ComplexPoint::new(base + i as f64, 0.5)).collect()
    }

    #[test]
    fn examples() {
        let (e, t) = (src(4, 0.0), src(4, 10.0));
        let a1 = build_array(&e, &t, 1).unwrap();
        assert_eq!(a1.nodes(), vec![(e[0], t[0])]);
        let a5 = build_array(&e, &t, 5).unwrap();
        assert_eq!(
            a5.nodes(),
            vec![(e[0], t[0]), (e[1], t[0]), (e[0], t[1]), (e[2], t[0]), (e[1], t[1])]
        );
        let a6 = build_array(&e, &t, 6).unwrap();
        assert_eq!(a6.node(5), (e[0], t[2]));
        assert_eq!(a6.shape(), (2, 2));
    }

    #[test]
    fn node_set_matches_shape() {
        for total in 1..=45 {
            let a = build_array(&src(10, 0.0), &src(10, 20.0), total).unwrap();
            let (n, m) = a.shape();
            let mut want: Vec<(usize, usize)> = Vec::new();
            for s in 0..n {
                for l in 0..=s {
                    want.push((s - l, l));
                }
            }
            for l in 0..=m {
                want.push((n - l, l));
            }
            let mut got = a.pairs().to_vec();
            got.sort();
            want.sort();
            assert_eq!(got, want);
            for (j, &(p, q)) in a.pairs().iter().enumerate() {
                assert_eq!(a.position(p, q), Some(j));
            }
            assert_eq!(a.position(n + 1, 0), None);
        }
    }

    #[test]
    fn rejects_bad_sources() {
        assert!(matches!(
            build_array(&src(2, 0.0), &src(4, 9.0), 6),
            Err(LejaError::InsufficientSources { .. })
        ));
        let mut dup = src(4, 0.0);
        dup[2] = dup[0];
        assert!(build_array(&dup, &src(4, 9.0), 3).is_err());
    }
}
