use crate::error::{Error, Result};

/// Generalized Laguerre polynomial `L_n^alpha(z)` by the three-term recurrence
/// `(k+1) L_{k+1} = (2k+1+alpha-z) L_k - (k+alpha) L_{k-1}`.
pub fn laguerre(n: usize, alpha: f64, z: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if z.is_nan() {
        return Err(Error::NonFinite("laguerre"));
    }
    Ok(laguerre_unchecked(n, alpha, z))
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_nan() || alpha <= -1.0 {
        return Err(Error::LaguerreAlpha(alpha));
    }
    Ok(())
}

#[inline]
pub(crate) fn laguerre_unchecked(n: usize, alpha: f64, z: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - z;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - z) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Writes `L_k^alpha(z)` into `out[k]` for every `k < out.len()`.
#[inline]
pub(crate) fn laguerre_sequence(alpha: f64, z: f64, out: &mut [f64]) {
    let len = out.len();
    if len == 0 {
        return;
    }
    out[0] = 1.0;
    if len == 1 {
        return;
    }
    out[1] = 1.0 + alpha - z;
    for k in 1..len - 1 {
        let kf = k as f64;
        out[k + 1] = ((2.0 * kf + 1.0 + alpha - z) * out[k] - (kf + alpha) * out[k - 1]) / (kf + 1.0);
    }
}
