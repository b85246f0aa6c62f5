//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                let (mut q0, mut q1) = (1.0, z);
                for k in 2..=n {
                    let q2 = ((2 * k - 1) as f64 * z * q1 - (k - 1) as f64 * q0) / k as f64;
                    q0 = q1;
                    q1 = q2;
                }
                let dq = n as f64 * (z * q1 - q0) / (z * z - 1.0);
                w[i] = 2.0 / ((1.0 - z * z) * dq * dq);
                break;
            }
        }
        x[i] = z;
    }
    (x, w)
}

/// Composite 20-point Gauss-Legendre over `[a, b]` with `panels` panels.
pub fn composite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = gauss_legendre(20);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (xi, wi) in x.iter().zip(&w) {
            total += wi * 0.5 * h * f(mid + 0.5 * h * xi);
        }
    }
    total
}

/// `int_0^inf e^{-t + 2i sqrt(kappa t) x} t^{twice_power/2} g(t) dt` via `t = s^2`.
pub fn oscillatory(g: &dyn Fn(f64) -> f64, twice_power: usize, kappa: f64, x: f64) -> Complex64 {
    let c = 2.0 * kappa.sqrt() * x;
    let base = |s: f64| 2.0 * s.powi(twice_power as i32 + 1) * (-s * s).exp() * g(s * s);
    let re = composite(|s| base(s) * (c * s).cos(), 0.0, 14.0, 700);
    let im = composite(|s| base(s) * (c * s).sin(), 0.0, 14.0, 700);
    Complex64::new(re, im)
}

/// Explicit-sum generalized Laguerre polynomial.
pub fn laguerre_explicit(n: usize, alpha: f64, z: f64) -> f64 {
    laguerre_explicit_with_scale(n, alpha, z).0
}

/// Explicit sum together with the sum of absolute terms, which bounds its
/// cancellation error.
pub fn laguerre_explicit_with_scale(n: usize, alpha: f64, z: f64) -> (f64, f64) {
    // L_n^a(z) = sum_k (-1)^k binom(n + a, n - k) z^k / k!
    let mut total = 0.0;
    let mut scale = 0.0;
    for k in 0..=n {
        let mut binom = 1.0;
        for j in 1..=(n - k) {
            binom *= (alpha + k as f64 + j as f64) / j as f64;
        }
        let mut zk = 1.0;
        for j in 1..=k {
            zk *= z / j as f64;
        }
        total += if k % 2 == 0 { 1.0 } else { -1.0 } * binom * zk;
        scale += (binom * zk).abs();
    }
    (total, scale)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Unsymmetrized estimator of `|{m}><{n}|` straight from its integral form,
/// for a sample with amplitudes `u`, phases `psi`.
pub fn matrix_element_raw(n: &[usize], m: &[usize], u: &[f64], psi: &[f64], kappa: f64, x: f64) -> Complex64 {
    let modes = n.len();
    let big_m = modes - 1;
    let mut pref = Complex64::new(kappa.powi(modes as i32) / factorial(big_m), 0.0);
    let mut d_total = 0;
    let mut phase = 0.0;
    let mut lag = Vec::new();
    for l in 0..modes {
        let (mu, nu) = (n[l].max(m[l]), n[l].min(m[l]));
        let d = mu - nu;
        d_total += d;
        pref *= Complex64::new(0.0, -kappa.sqrt() * u[l]).powu(d as u32);
        pref *= (factorial(nu) / factorial(mu)).sqrt();
        phase += (n[l] as f64 - m[l] as f64) * psi[l];
        lag.push((nu, d as f64, kappa * u[l] * u[l]));
    }
    let g = move |t: f64| -> f64 {
        lag.iter().map(|&(nu, a, sc)| laguerre_explicit(nu, a, sc * t)).product()
    };
    Complex64::cis(phase) * pref * oscillatory(&g, 2 * big_m + d_total, kappa, x)
}

/// Estimator averaged over the symmetry `(x, psi) -> (-x, psi + pi)`.
pub fn matrix_element_oracle(n: &[usize], m: &[usize], u: &[f64], psi: &[f64], kappa: f64, x: f64) -> Complex64 {
    let shifted: Vec<f64> = psi.iter().map(|p| p + std::f64::consts::PI).collect();
    0.5 * (matrix_element_raw(n, m, u, psi, kappa, x) + matrix_element_raw(n, m, u, &shifted, kappa, -x))
}

/// Two-mode amplitudes `(cos th, sin th)`.
pub fn amps(theta: f64) -> [f64; 2] {
    [theta.cos(), theta.sin()]
}

/// Frozen 40-digit values of `Phi(2, 1/2; z)` from an arbitrary-precision series.
#[allow(clippy::excessive_precision)]
pub const KUMMER_REFERENCE: [(f64, f64); 9] = [
    (-0.5, -0.2247784590070763318),
    (-1.0, -0.538079506912768419136387420407556754792),
    (-3.0, -0.1080959856180013048),
    (-10.0, 0.01638876879327962408),
    (-25.0, 0.001507489705056328059486656578860377816365),
    (-49.9, 0.0003350040885840169996),
    (-50.1, 0.0003321845703444259368),
    (-80.0, 0.0001250318571736827708),
    (-200.0, 0.00001923143703497541233),
];

/// Vacuum and one-photon quadrature densities for `X = (a + a^dag)/2`.
pub fn psi_sq(n: usize, x: f64) -> f64 {
    let g = (2.0 / std::f64::consts::PI).sqrt() * (-2.0 * x * x).exp();
    match n {
        0 => g,
        1 => 4.0 * x * x * g,
        _ => unreachable!(),
    }
}

/// Brute-force GHZ outcome density at `eta = 1`: builds the six-mode state on
/// `(o, e)` occupation bits per beam and evaluates
/// `<GHZ| prod_j (|psi_1(x_j)|^2 P_A + |psi_0(x_j)|^2 (1 - P_A)) |GHZ>` where
/// `P_A` projects a beam's one-photon sector onto `A^dag |0>`.
/// Settings are `(theta, psi_o, psi_e)` per beam.
pub fn ghz_density_bruteforce(settings: [(f64, f64, f64); 3], x: [f64; 3]) -> f64 {
    // per-beam basis: |00>, |10> (o), |01> (e), |11>
    let mut state = DVector::<Complex64>::zeros(64);
    let idx = |b: [usize; 3]| b[0] * 16 + b[1] * 4 + b[2];
    state[idx([1, 1, 1])] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    state[idx([2, 2, 2])] = Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut op = DMatrix::<Complex64>::from_element(1, 1, Complex64::new(1.0, 0.0));
    for (j, &(theta, po, pe)) in settings.iter().enumerate() {
        let a = [Complex64::from_polar(theta.cos(), po), Complex64::from_polar(theta.sin(), pe)];
        let (p1, p0) = (psi_sq(1, x[j]), psi_sq(0, x[j]));
        let mut block = DMatrix::<Complex64>::zeros(4, 4);
        for r in 0..2 {
            for c in 0..2 {
                let pa = a[r] * a[c].conj();
                let id = if r == c { 1.0 } else { 0.0 };
                block[(r + 1, c + 1)] = pa * p1 + (Complex64::new(id, 0.0) - pa) * p0;
            }
        }
        op = op.kronecker(&block);
    }
    (state.adjoint() * op * state)[(0, 0)].re
}

/// Standard normal CDF from the complementary error function
/// (Chebyshev fit, relative error below 1.2e-7).
pub fn normal_cdf(z: f64) -> f64 {
    let x = -z / std::f64::consts::SQRT_2;
    let t = 1.0 / (1.0 + 0.5 * x.abs());
    let poly = -x * x - 1.26551223
        + t * (1.00002368
            + t * (0.37409196
                + t * (0.09678418
                    + t * (-0.18628806
                        + t * (0.27886807 + t * (-1.13520398 + t * (1.48851587 + t * (-0.82215223 + t * 0.17087277))))))));
    let erfc = t * poly.exp();
    0.5 * if x >= 0.0 { erfc } else { 2.0 - erfc }
}

/// Kolmogorov-Smirnov statistic of `values` against `cdf`.
pub fn ks_statistic(values: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = cdf(v);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

/// 1% critical value of the KS statistic for large samples.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// Pearson chi-square statistic of bin counts against equal expected counts.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum()
}

/// 1% upper critical value of chi-square with 19 degrees of freedom.
pub const CHI2_19_1PCT: f64 = 36.191;
