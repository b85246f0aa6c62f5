use num_complex::{Complex, Complex64};

use super::{FockProjector, GhzTerms, HomodyneSample, ModeVec};
use crate::error::{Error, Result};
use crate::specfun::{kummer_phi_unchecked, laguerre_unchecked, symmetric_part, QuadratureRule};

/// Largest photon number accepted by [`matrix_element_estimator`].
pub const MAX_PHOTON_INDEX: usize = 170;

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `ln(mu! / nu!)` for `nu <= mu`.
pub(crate) fn ln_factorial_ratio(nu: usize, mu: usize) -> f64 {
    (nu + 1..=mu).map(|k| (k as f64).ln()).sum()
}

/// Estimator of `|{m_l}><{n_l}|`, averaging to `<{n_l}| rho |{m_l}>`.
///
/// With `mu_l = max(n_l, m_l)`, `nu_l = min(n_l, m_l)`, `D = sum (mu_l - nu_l)`:
///
/// `e^{i sum (n_l - m_l) psi_l} kappa^{M+1}/M! prod[(-i sqrt(kappa) u_l)^{mu_l-nu_l} sqrt(nu_l!/mu_l!)]`
/// `x int e^{-t + 2i sqrt(kappa t) x} t^{M + D/2} prod L_{nu_l}^{mu_l-nu_l}(kappa u_l^2 t) dt`,
///
/// symmetrized under `(x, psi) -> (-x, psi + pi)`: the integral contributes
/// its real part when `D` is even and `i` times its imaginary part when odd.
pub fn matrix_element_estimator(
    proj: &FockProjector,
    s: &HomodyneSample,
    rule: &QuadratureRule,
) -> Result<Complex64> {
    let modes = s.config().num_modes();
    if proj.len() != modes {
        return Err(Error::Arity {
            what: "projector modes",
            expected: modes,
            got: proj.len(),
        });
    }
    let kappa = s.efficiency().kappa();
    let sqrt_kappa = kappa.sqrt();
    let mut ln_ratio = 0.0;
    let mut d_total = 0usize;
    let mut phase = 0.0;
    let mut amp = 1.0;
    let mut factors: ModeVec<(usize, f64, f64)> = ModeVec::with_capacity(modes);
    for (l, (&n, &m)) in proj.n().iter().zip(proj.m()).enumerate() {
        let (mu, nu) = (n.max(m), n.min(m));
        if mu > MAX_PHOTON_INDEX {
            return Err(Error::FactorialOverflow(mu));
        }
        let d = mu - nu;
        let u = s.config().amplitudes()[l];
        d_total += d;
        ln_ratio += ln_factorial_ratio(nu, mu);
        amp *= (sqrt_kappa * u).powi(d as i32);
        phase += (n as f64 - m as f64) * s.config().psis()[l];
        factors.push((nu, d as f64, kappa * u * u));
    }
    let big_m = modes - 1;
    let sign = if (d_total / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let coeff = sign * kappa.powi(modes as i32) / factorial(big_m) * amp * (-0.5 * ln_ratio).exp();
    let g = |t: f64| -> f64 {
        factors
            .iter()
            .map(|&(nu, alpha, scale)| laguerre_unchecked(nu, alpha, scale * t))
            .product()
    };
    let value = coeff * symmetric_part(&g, 2 * big_m + d_total, kappa, s.x(), rule);
    Ok(Complex::new(value * phase.cos(), value * phase.sin()))
}

/// Estimator of the Fock-space diagonal element `<{n_l}| rho |{n_l}>`.
/// Independent of the LO phases.
pub fn diagonal_estimator(n: &[usize], s: &HomodyneSample, rule: &QuadratureRule) -> Result<f64> {
    let modes = s.config().num_modes();
    if n.len() != modes {
        return Err(Error::Arity {
            what: "photon numbers",
            expected: modes,
            got: n.len(),
        });
    }
    let kappa = s.efficiency().kappa();
    let scales: ModeVec<f64> = s.config().amplitudes().iter().map(|u| kappa * u * u).collect();
    let g = |t: f64| -> f64 {
        n.iter()
            .zip(&scales)
            .map(|(&k, &scale)| laguerre_unchecked(k, 0.0, scale * t))
            .product()
    };
    let big_m = modes - 1;
    let coeff = kappa.powi(modes as i32) / factorial(big_m);
    Ok(coeff * symmetric_part(&g, 2 * big_m, kappa, s.x(), rule))
}

/// Estimator of the probability that the total photon number over all modes is `n`.
/// Depends only on the outcome and the efficiency, not on the LO setting.
pub fn total_photon_estimator(n: usize, s: &HomodyneSample, rule: &QuadratureRule) -> Result<f64> {
    let kappa = s.efficiency().kappa();
    let big_m = s.config().num_modes() - 1;
    let alpha = big_m as f64;
    let g = |t: f64| laguerre_unchecked(n, alpha, kappa * t);
    let coeff = kappa.powi(big_m as i32 + 1) / factorial(big_m);
    Ok(coeff * symmetric_part(&g, 2 * big_m, kappa, s.x(), rule))
}

/// Two-mode joint photon-number probability `p(n, m)`.
pub fn joint_photon_estimator(
    n: usize,
    m: usize,
    s: &HomodyneSample,
    rule: &QuadratureRule,
) -> Result<f64> {
    s.require_modes("joint photon estimator modes", 2)?;
    diagonal_estimator(&[n, m], s, rule)
}

/// Two-mode coherence `C_{n,m} = <m,m| rho |n,n>`.
pub fn coherence_estimator(
    n: usize,
    m: usize,
    s: &HomodyneSample,
    rule: &QuadratureRule,
) -> Result<Complex64> {
    s.require_modes("coherence estimator modes", 2)?;
    matrix_element_estimator(&FockProjector::new(&[m, m], &[n, n])?, s, rule)
}

/// Two-mode coherent-state overlap `<alpha, beta| rho |alpha, beta>`,
/// `kappa^2 Phi(2, 1/2; -kappa (x - X_ab)^2)` where
/// `X_ab = cos th Re(alpha^* e^{i psi_0}) + sin th Re(beta^* e^{i psi_1})` is the
/// mean of the measured quadrature in the coherent state. No `1/pi^2`
/// normalization is applied.
pub fn q_function_estimator(alpha: Complex64, beta: Complex64, s: &HomodyneSample) -> Result<f64> {
    s.require_modes("Q-function estimator modes", 2)?;
    if !(alpha.re.is_finite() && alpha.im.is_finite() && beta.re.is_finite() && beta.im.is_finite()) {
        return Err(Error::NonFinite("coherent amplitude"));
    }
    let u = s.config().amplitudes();
    let psi = s.config().psis();
    let shift = u[0] * (alpha.conj() * Complex64::cis(psi[0])).re
        + u[1] * (beta.conj() * Complex64::cis(psi[1])).re;
    let kappa = s.efficiency().kappa();
    let dx = s.x() - shift;
    Ok(kappa * kappa * kummer_phi_unchecked(-kappa * dx * dx))
}

/// Generating function `<z^N>` of the two-mode total photon number, `0 <= z <= 1`.
pub fn mgf_estimator(z: f64, s: &HomodyneSample) -> Result<f64> {
    s.require_modes("generating-function estimator modes", 2)?;
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::MgfDomain(z));
    }
    let kappa = s.efficiency().kappa();
    let denom = z + (1.0 - z) / kappa;
    let x = s.x();
    Ok(kummer_phi_unchecked(-(1.0 - z) / denom * x * x) / (denom * denom))
}

/// Two-mode total photon number: `4 x^2 + 2/kappa - 2`.
pub fn mean_photon_estimator(s: &HomodyneSample) -> Result<f64> {
    s.require_modes("mean photon estimator modes", 2)?;
    let kappa = s.efficiency().kappa();
    let x = s.x();
    Ok(4.0 * x * x + 2.0 / kappa - 2.0)
}

/// Square of the two-mode total photon number:
/// `8 x^4 + (24/kappa - 20) x^2 + 6/kappa^2 - 10/kappa + 4`.
pub fn second_moment_estimator(s: &HomodyneSample) -> Result<f64> {
    s.require_modes("second moment estimator modes", 2)?;
    let kappa = s.efficiency().kappa();
    let x2 = s.x() * s.x();
    Ok(8.0 * x2 * x2 + (24.0 / kappa - 20.0) * x2 + 6.0 / (kappa * kappa) - 10.0 / kappa + 4.0)
}

/// Overlap of the three-beam state with `(|1_o 1_o 1_o> + e^{i phi} |1_e 1_e 1_e>)/sqrt 2`,
/// from one outcome per beam, each beam measured with its own LO over its
/// `(o, e)` polarization pair.
pub fn ghz_projector_estimator(
    phi: f64,
    samples: &[HomodyneSample],
    rule: &QuadratureRule,
) -> Result<f64> {
    Ok(GhzTerms::new(samples, rule)?.overlap(phi))
}
