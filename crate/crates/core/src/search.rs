//! Golden-section refinement of a maximum on a bracket.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes `f` on `[a, b]` assuming it is unimodal there.
///
/// Returns the best `(t, f(t))` seen over all probes, so the value is never
/// below the best interior evaluation even when `f` is not unimodal.
pub fn golden_section_max<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    iters: usize,
) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            if fc > best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            if fd > best.1 {
                best = (d, fd);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_peak() {
        let (t, v) = golden_section_max(|x| 1.0 - (x - 0.3) * (x - 0.3), -1.0, 2.0, 60);
        assert!((t - 0.3).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_iterations_still_probes() {
        let (_, v) = golden_section_max(|x| -x.abs(), -1.0, 1.0, 0);
        assert!(v <= 0.0 && v > -1.0);
    }
}
