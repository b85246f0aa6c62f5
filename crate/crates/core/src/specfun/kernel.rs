use num_complex::Complex64;

use super::quadrature::QuadratureRule;
use crate::error::{Error, Result};

/// `int_0^inf e^{-t + 2i sqrt(kappa t) x} t^m g(t) dt` on the given rule.
///
/// This is the common factor of every quadrature-based estimator. The cosine
/// part runs on the `e^{-t}` nodes, the sine part on the companion
/// `t^{1/2} e^{-t}` nodes.
pub fn kernel_integral<G: Fn(f64) -> f64>(
    g: G,
    m: usize,
    kappa: f64,
    x: f64,
    rule: &QuadratureRule,
) -> Result<Complex64> {
    check(kappa, x)?;
    Ok(oscillatory_integral(&g, 2 * m, kappa, x, rule))
}

/// Same as [`kernel_integral`] with the power `t^{m + 1/2}`, which appears in
/// off-diagonal matrix elements with an odd total index difference.
pub fn kernel_integral_half<G: Fn(f64) -> f64>(
    g: G,
    m: usize,
    kappa: f64,
    x: f64,
    rule: &QuadratureRule,
) -> Result<Complex64> {
    check(kappa, x)?;
    Ok(oscillatory_integral(&g, 2 * m + 1, kappa, x, rule))
}

fn check(kappa: f64, x: f64) -> Result<()> {
    if !kappa.is_finite() || !x.is_finite() {
        return Err(Error::NonFinite("kernel_integral"));
    }
    if kappa <= 1.0 {
        return Err(Error::Format(format!("kappa = {kappa} must exceed 1")));
    }
    Ok(())
}

/// Power of `t` is `twice_power / 2`.
pub(crate) fn oscillatory_integral<G: Fn(f64) -> f64 + ?Sized>(
    g: &G,
    twice_power: usize,
    kappa: f64,
    x: f64,
    rule: &QuadratureRule,
) -> Complex64 {
    let c = 2.0 * kappa.sqrt() * x;
    let k = (twice_power / 2) as i32;
    let plain = rule.nodes().iter().zip(rule.sqrt_nodes()).zip(rule.weights());
    let half = rule.half_nodes().iter().zip(rule.half_sqrt_nodes()).zip(rule.half_weights());
    let (re, im) = if twice_power.is_multiple_of(2) {
        // t^k cos(c s) on e^{-t};  t^k sin(c s)/s on t^{1/2} e^{-t}
        let re: f64 = plain
            .map(|((&t, &s), &w)| w * t.powi(k) * (c * s).cos() * g(t))
            .sum();
        let im: f64 = half
            .map(|((&t, &s), &w)| w * t.powi(k) * (c * s).sin() / s * g(t))
            .sum();
        (re, im)
    } else {
        // t^{k+1/2} cos(c s) on t^{1/2} e^{-t};  t^k s sin(c s) on e^{-t}
        let re: f64 = half
            .map(|((&t, &s), &w)| w * t.powi(k) * (c * s).cos() * g(t))
            .sum();
        let im: f64 = plain
            .map(|((&t, &s), &w)| w * t.powi(k) * s * (c * s).sin() * g(t))
            .sum();
        (re, im)
    };
    Complex64::new(re, im)
}

/// The part of the oscillatory integral that survives symmetrization under
/// `x -> -x`: the real part for integer powers, `Im` for half-integer powers.
///
/// Either way the integrand is `e^{-t}` times an entire function of `t`, so
/// only the plain nodes are needed. `twice_power` as in [`oscillatory_integral`].
#[inline]
pub(crate) fn symmetric_part<G: Fn(f64) -> f64 + ?Sized>(
    g: &G,
    twice_power: usize,
    kappa: f64,
    x: f64,
    rule: &QuadratureRule,
) -> f64 {
    let c = 2.0 * kappa.sqrt() * x;
    let k = (twice_power / 2) as i32;
    let nodes = rule.nodes().iter().zip(rule.sqrt_nodes()).zip(rule.weights());
    if twice_power.is_multiple_of(2) {
        nodes.map(|((&t, &s), &w)| w * t.powi(k) * (c * s).cos() * g(t)).sum()
    } else {
        nodes.map(|((&t, &s), &w)| w * t.powi(k) * s * (c * s).sin() * g(t)).sum()
    }
}
