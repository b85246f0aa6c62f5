use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 512;

/// Order used by the estimators unless configured otherwise.
pub const DEFAULT_ORDER: usize = 150;

/// Gauss-Laguerre rule for the weight `e^{-t}` on `[0, inf)`.
///
/// Every rule also carries a companion rule of the same order for the weight
/// `t^{1/2} e^{-t}`. The estimator integrands contain `e^{2i sqrt(kappa t) x}`,
/// whose sine part is `sqrt(t)` times an entire function of `t`; integrating
/// that part against the companion weight keeps both real and imaginary parts
/// spectrally convergent.
///
/// For orders above roughly 175 the weights of the outermost nodes are below
/// the smallest representable double and are stored as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    sqrt_nodes: Vec<f64>,
    half_nodes: Vec<f64>,
    half_weights: Vec<f64>,
    half_sqrt_nodes: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Nodes in increasing order, all positive.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sqrt_nodes(&self) -> &[f64] {
        &self.sqrt_nodes
    }

    /// Nodes of the companion rule for the weight `t^{1/2} e^{-t}`.
    pub fn half_nodes(&self) -> &[f64] {
        &self.half_nodes
    }

    pub fn half_weights(&self) -> &[f64] {
        &self.half_weights
    }

    pub fn half_sqrt_nodes(&self) -> &[f64] {
        &self.half_sqrt_nodes
    }

    /// `sum_i w_i f(t_i)`, approximating `int_0^inf e^{-t} f(t) dt`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

/// Builds the `order`-point Gauss-Laguerre rule together with its companion.
pub fn gauss_laguerre(order: usize) -> Result<QuadratureRule> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::QuadratureOrder(order));
    }
    let (nodes, weights) = generalized_rule(order, 0.0, 1.0);
    let (half_nodes, half_weights) = generalized_rule(order, 0.5, 0.5 * std::f64::consts::PI.sqrt());
    Ok(QuadratureRule {
        order,
        sqrt_nodes: nodes.iter().map(|t| t.sqrt()).collect(),
        half_sqrt_nodes: half_nodes.iter().map(|t| t.sqrt()).collect(),
        nodes,
        weights,
        half_nodes,
        half_weights,
    })
}

/// Nodes from the eigenvalues of the Jacobi matrix, polished by Newton
/// iteration on the orthonormal recurrence; weights from the Christoffel
/// function `1 / sum_k p_k(t)^2`. `mu0` is the total mass of the weight.
fn generalized_rule(order: usize, alpha: f64, mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let jacobi = DMatrix::from_fn(order, order, |i, j| {
        if i == j {
            2.0 * i as f64 + 1.0 + alpha
        } else if i + 1 == j || j + 1 == i {
            let k = i.max(j) as f64;
            (k * (k + alpha)).sqrt()
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));

    let mut weights = Vec::with_capacity(order);
    for t in nodes.iter_mut() {
        for _ in 0..4 {
            let eval = orthonormal_eval(*t, order, alpha, mu0);
            let step = eval.value / eval.derivative;
            *t -= step;
            if step.abs() <= 4.0 * f64::EPSILON * t.abs() {
                break;
            }
        }
        let eval = orthonormal_eval(*t, order, alpha, mu0);
        weights.push((-(eval.sum_sq.ln() + 2.0 * eval.log_scale)).exp());
    }
    (nodes, weights)
}

struct OrthonormalEval {
    value: f64,
    derivative: f64,
    /// `sum_{k<n} p_k^2`, in units of `exp(2 log_scale)`.
    sum_sq: f64,
    log_scale: f64,
}

/// Evaluates `p_n`, `p_n'` and `sum_{k<n} p_k^2` for the orthonormal Laguerre
/// family, rescaling on the fly so large nodes do not overflow.
fn orthonormal_eval(t: f64, n: usize, alpha: f64, mu0: f64) -> OrthonormalEval {
    const BIG: f64 = 1e100;
    let off = |k: usize| -> f64 {
        let k = k as f64;
        (k * (k + alpha)).sqrt()
    };
    let mut prev = 0.0;
    let mut cur = 1.0 / mu0.sqrt();
    let mut dprev = 0.0;
    let mut dcur = 0.0;
    let mut sum_sq = 0.0;
    let mut log_scale = 0.0;
    for k in 0..n {
        sum_sq += cur * cur;
        let diag = 2.0 * k as f64 + 1.0 + alpha;
        let b_next = off(k + 1);
        let b_k = off(k);
        let next = ((t - diag) * cur - b_k * prev) / b_next;
        let dnext = (cur + (t - diag) * dcur - b_k * dprev) / b_next;
        prev = cur;
        cur = next;
        dprev = dcur;
        dcur = dnext;
        if cur.abs() > BIG || dcur.abs() > BIG {
            let s = 1.0 / BIG;
            prev *= s;
            cur *= s;
            dprev *= s;
            dcur *= s;
            sum_sq *= s * s;
            log_scale += BIG.ln();
        }
    }
    OrthonormalEval {
        value: cur,
        derivative: dcur,
        sum_sq,
        log_scale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_range() {
        assert_eq!(gauss_laguerre(0), Err(Error::QuadratureOrder(0)));
        assert_eq!(gauss_laguerre(513), Err(Error::QuadratureOrder(513)));
    }

    #[test]
    fn one_point_rule() {
        let r = gauss_laguerre(1).unwrap();
        assert!((r.nodes()[0] - 1.0).abs() < 1e-15);
        assert!((r.weights()[0] - 1.0).abs() < 1e-15);
        assert!((r.half_nodes()[0] - 1.5).abs() < 1e-15);
    }

    #[test]
    fn two_point_rule() {
        let r = gauss_laguerre(2).unwrap();
        let s = 2f64.sqrt();
        assert!((r.nodes()[0] - (2.0 - s)).abs() < 1e-14);
        assert!((r.nodes()[1] - (2.0 + s)).abs() < 1e-14);
        assert!((r.weights()[0] - (2.0 + s) / 4.0).abs() < 1e-14);
        assert!((r.weights()[1] - (2.0 - s) / 4.0).abs() < 1e-14);
    }

    #[test]
    fn half_rule_mass_and_moments() {
        // int t^{1/2} e^{-t} t^k dt = Gamma(k + 3/2)
        let r = gauss_laguerre(40).unwrap();
        let mut gamma = 0.5 * std::f64::consts::PI.sqrt();
        for k in 0..20 {
            let q: f64 = r
                .half_nodes()
                .iter()
                .zip(r.half_weights())
                .map(|(t, w)| w * t.powi(k))
                .sum();
            assert!(((q - gamma) / gamma).abs() < 1e-11, "k = {k}");
            gamma *= k as f64 + 1.5;
        }
    }
}
