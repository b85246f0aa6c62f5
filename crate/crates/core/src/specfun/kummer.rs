use crate::error::{Error, Result};

/// Above this value of `-z` the large-argument expansion is used.
pub(crate) const ASYMPTOTIC_SWITCH: f64 = 50.0;

/// Confluent hypergeometric function `Phi(2, 1/2; z)` for `z <= 0`.
///
/// For `-z <= 50` the Kummer-transformed series `e^z Phi(-3/2, 1/2; -z)` is
/// summed; its terms are positive from the third on, so there is no
/// cancellation of the kind that ruins the defining alternating series. Beyond
/// that the algebraic large-argument expansion
/// `Phi(2, 1/2; -y) ~ (3/4) y^-2 sum_s (2)_s (5/2)_s / s! y^-s` is used; the
/// neglected exponentially small part is below 1e-16 relative there.
pub fn kummer_phi(z: f64) -> Result<f64> {
    if z.is_nan() {
        return Err(Error::NonFinite("kummer_phi"));
    }
    if z > 0.0 {
        return Err(Error::KummerDomain(z));
    }
    Ok(kummer_phi_unchecked(z))
}

#[inline]
pub(crate) fn kummer_phi_unchecked(z: f64) -> f64 {
    let y = -z;
    if y <= ASYMPTOTIC_SWITCH {
        transformed_series(y)
    } else {
        asymptotic(y)
    }
}

pub(crate) fn transformed_series(y: f64) -> f64 {
    if y == 0.0 {
        return 1.0;
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        term *= (kf - 1.5) / (kf + 0.5) * y / (kf + 1.0);
        sum += term;
        k += 1;
        if (k as f64 > y && term.abs() <= 1e-17 * sum.abs()) || k > 2000 {
            break;
        }
    }
    (-y).exp() * sum
}

pub(crate) fn asymptotic(y: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for s in 0..500 {
        let sf = s as f64;
        let next = term * (2.0 + sf) * (2.5 + sf) / ((sf + 1.0) * y);
        if next >= term || next <= 1e-18 * sum {
            if next < term {
                sum += next;
            }
            break;
        }
        term = next;
        sum += term;
    }
    0.75 * sum / (y * y)
}
