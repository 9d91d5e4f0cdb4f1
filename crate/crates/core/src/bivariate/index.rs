//! Graded lexicographic indexing of bivariate monomials:
//! `(0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...`

use crate::error::{LejaError, Result};

/// `N_n = (n+1)(n+2)/2`, the dimension of polynomials of total degree `<= n`.
pub fn block_size(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

/// Exponents `(k, l)` of the `j`-th monomial, `j >= 1`.
pub fn lex_to_pair(j: usize) -> Result<(usize, usize)> {
    if j == 0 {
        return Err(LejaError::ZeroInput);
    }
    let (s, _) = shape_of(j)?;
    let l = j - 1 - s * (s + 1) / 2;
    Ok((s - l, l))
}

pub fn pair_to_lex(k: usize, l: usize) -> usize {
    let s = k + l;
    s * (s + 1) / 2 + l + 1
}

/// `(n, m)` with `N_{n-1} < N <= N_n` and `m = N - N_{n-1} - 1`.
pub fn shape_of(total: usize) -> Result<(usize, usize)> {
    if total == 0 {
        return Err(LejaError::ZeroInput);
    }
    let mut n = 0;
    while block_size(n) < total {
        n += 1;
    }
    let below = if n == 0 { 0 } else { block_size(n - 1) };
    Ok((n, total - below - 1))
}
