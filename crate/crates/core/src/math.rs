//! Integer decompositions and small numerical helpers shared by the rest
//! of the crate.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LejaError, Result};

/// A point of the complex plane.
pub type ComplexPoint = Complex64;

/// Absolute tolerance used for all unit-modulus checks.
pub const UNIT_TOL: f64 = 1e-12;

/// Tolerance for detecting `alpha` in `pi * Z`.
pub const PI_MULTIPLE_TOL: f64 = 1e-12;

/// `N = 2^{p_1} + ... + 2^{p_n}` with `p_1 > ... > p_n >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryDecomposition {
    exponents: Vec<u32>,
}

impl BinaryDecomposition {
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Leading exponent `p_1`.
    pub fn leading(&self) -> u32 {
        self.exponents[0]
    }

    /// Smallest exponent `p_n`.
    pub fn trailing(&self) -> u32 {
        *self.exponents.last().unwrap()
    }

    /// Number of ones in the binary expansion.
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn is_power_of_two(&self) -> bool {
        self.exponents.len() == 1
    }

    pub fn reassemble(&self) -> u64 {
        self.exponents.iter().map(|&p| 1u64 << p).sum()
    }
}

/// `l = 2^{s_1} - 2^{s_2} + 2^{s_3} - ... - 2^{s_{2L}}` with strictly
/// decreasing exponents. Signs alternate starting with `+`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternatingDecomposition {
    exponents: Vec<u32>,
}

impl AlternatingDecomposition {
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Number of `(+, -)` pairs, i.e. the number of runs of ones in `l`.
    pub fn pairs(&self) -> usize {
        self.exponents.len() / 2
    }

    pub fn reassemble(&self) -> i128 {
        self.exponents
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let v = 1i128 << s;
                if i % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .sum()
    }
}

pub fn binary_decompose(n: u64) -> Result<BinaryDecomposition> {
    if n == 0 {
        return Err(LejaError::ZeroInput);
    }
    let exponents = (0..64u32).rev().filter(|&b| n >> b & 1 == 1).collect();
    Ok(BinaryDecomposition { exponents })
}

/// Rewrites `l` as an alternating sum of powers of two.
///
/// Every maximal run of consecutive ones `2^r + 2^{r-1} + ... + 2^{r'}`
/// in the binary expansion of `l` collapses to `2^{r+1} - 2^{r'}`; runs
/// are separated by at least one zero bit, so the exponents stay strictly
/// decreasing. The first exponent is therefore always the index of the
/// highest set bit plus one.
pub fn alternating_decompose(l: u64) -> Result<AlternatingDecomposition> {
    if l == 0 {
        return Err(LejaError::ZeroInput);
    }
    let mut exponents = Vec::new();
    let mut bit: i64 = 63 - l.leading_zeros() as i64;
    while bit >= 0 {
        if l >> bit & 1 == 0 {
            bit -= 1;
            continue;
        }
        let top = bit as u32;
        while bit >= 0 && l >> bit & 1 == 1 {
            bit -= 1;
        }
        let bottom = (bit + 1) as u32;
        exponents.push(top + 1);
        exponents.push(bottom);
    }
    Ok(AlternatingDecomposition { exponents })
}

fn near_pi_multiple(alpha: f64) -> bool {
    let r = alpha / PI;
    (r - r.round()).abs() * PI <= PI_MULTIPLE_TOL
}

/// `prod_{j=1}^m cos(alpha / 2^j)`, checked against
/// `sin(alpha) / (2^m sin(alpha / 2^m))`.
pub fn half_angle_cos_product(alpha: f64, m: u32) -> Result<f64> {
    if near_pi_multiple(alpha) {
        return Err(LejaError::AngleMultipleOfPi(alpha));
    }
    let mut prod = 1.0;
    let mut a = alpha;
    for _ in 0..m {
        a *= 0.5;
        prod *= a.cos();
    }
    Ok(prod)
}

/// Closed form of [`half_angle_cos_product`].
pub fn half_angle_cos_closed_form(alpha: f64, m: u32) -> Result<f64> {
    if near_pi_multiple(alpha) {
        return Err(LejaError::AngleMultipleOfPi(alpha));
    }
    let scale = (m as f64).exp2();
    Ok(alpha.sin() / (scale * (alpha / scale).sin()))
}

/// Log-magnitude and phase of `prod_j (z - z_j)`.
///
/// The magnitude is `-inf` exactly when some factor vanishes; the phase is
/// then reported as 0. Phases are wrapped to `(-pi, pi]`.
pub fn stable_abs_product(points: &[ComplexPoint], z: ComplexPoint) -> (f64, f64) {
    let mut log_mag = 0.0;
    let mut phase = 0.0;
    for &p in points {
        let d = z - p;
        let r = d.norm();
        if r == 0.0 {
            return (f64::NEG_INFINITY, 0.0);
        }
        log_mag += r.ln();
        phase += d.im.atan2(d.re);
    }
    (log_mag, wrap_angle(phase))
}

/// Sum of `ln |z - z_j|`, without the phase.
pub fn log_abs_product(points: &[ComplexPoint], z: ComplexPoint) -> f64 {
    let mut s = 0.0;
    for &p in points {
        let r = (z - p).norm();
        if r == 0.0 {
            return f64::NEG_INFINITY;
        }
        s += r.ln();
    }
    s
}

/// Wraps an angle to `(-pi, pi]`.
pub fn wrap_angle(t: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = t.rem_euclid(two_pi);
    if r > PI {
        r -= two_pi;
    }
    r
}

/// `exp(i t)`.
#[inline]
pub fn cis(t: f64) -> ComplexPoint {
    ComplexPoint::from_polar(1.0, t)
}

/// `z^(2^p)` by repeated squaring.
#[inline]
pub fn pow2_power(z: ComplexPoint, p: u32) -> ComplexPoint {
    let mut w = z;
    for _ in 0..p {
        w = w * w;
    }
    w
}

pub fn is_unit(z: ComplexPoint) -> bool {
    (z.norm() - 1.0).abs() <= UNIT_TOL
}

pub fn is_finite(z: ComplexPoint) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// The `m`-th roots of unity `exp(2 i pi u / m)`, `u = 0..m`.
pub fn roots_of_unity(m: usize) -> Vec<ComplexPoint> {
    (0..m)
        .map(|u| cis(2.0 * PI * u as f64 / m as f64))
        .collect()
}

/// Compensated (Neumaier) summation in index order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}
