//! Slow, independent reference evaluation of the estimator integrals.
//!
//! Substitutes `t = s^2`, which turns `e^{-t + 2i sqrt(kappa t) x}` into a
//! smooth Gaussian-times-oscillation in `s`, and integrates with adaptive
//! Gauss-Kronrod (7, 15). Used by the self-test to check the Gauss-Laguerre
//! path; never used by the estimators themselves.

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let (lo, hi) = (f(center - dx), f(center + dx));
        let sum = lo + hi;
        kron += WGK[j] * sum;
        abs += WGK[j] * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kron * half, ((kron - gauss) * half).abs(), abs * half.abs())
}

/// Adaptive Gauss-Kronrod integral of `f` over `[a, b]` to absolute tolerance `tol`,
/// relaxed per segment to the rounding level of that segment.
pub fn adaptive_integral<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (val, err, abs) = kronrod(f, a, b);
        // Below a few ulps of the integral of |f| the error estimate is rounding noise.
        if err <= tol.max(50.0 * f64::EPSILON * abs) || depth >= 40 {
            return val;
        }
        let mid = 0.5 * (a + b);
        recurse(f, a, mid, 0.5 * tol, depth + 1) + recurse(f, mid, b, 0.5 * tol, depth + 1)
    }
    recurse(f, a, b, tol, 0)
}

/// Reference value of `int_0^inf e^{-t + 2i sqrt(kappa t) x} t^{twice_power/2} g(t) dt`.
pub fn oscillatory_reference<G: Fn(f64) -> f64>(
    g: G,
    twice_power: usize,
    kappa: f64,
    x: f64,
) -> Complex64 {
    const S_MAX: f64 = 12.0;
    const PANELS: usize = 48;
    let c = 2.0 * kappa.sqrt() * x;
    let p = twice_power as i32 + 1;
    let base = |s: f64| 2.0 * s.powi(p) * (-s * s).exp() * g(s * s);
    let re_f = |s: f64| base(s) * (c * s).cos();
    let im_f = |s: f64| base(s) * (c * s).sin();
    let width = S_MAX / PANELS as f64;
    let mut re = 0.0;
    let mut im = 0.0;
    for k in 0..PANELS {
        let a = k as f64 * width;
        let b = a + width;
        re += adaptive_integral(&re_f, a, b, 1e-15);
        im += adaptive_integral(&im_f, a, b, 1e-15);
    }
    Complex64::new(re, im)
}
