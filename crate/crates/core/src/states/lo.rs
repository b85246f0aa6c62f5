use std::f64::consts::TAU;

use rand::Rng;

use crate::error::{Error, Result};
use crate::kernels::LOConfig;
use crate::rng::substream;

/// Random LO setting over `m + 1` modes from the averaging measure: phases
/// uniform, squared amplitudes `(u_0^2, ..., u_M^2)` uniform on the simplex.
pub fn sample_lo_general(m: usize, seed: u64) -> Result<LOConfig> {
    draw_lo(m, &mut substream(seed, 0))
}

/// Same as [`sample_lo_general`] drawing from the caller's generator.
pub fn draw_lo<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<LOConfig> {
    if m == 0 {
        return Err(Error::Arity {
            what: "LO angles",
            expected: 1,
            got: 0,
        });
    }
    // spacings of sorted uniforms are uniform on the simplex
    let mut cuts: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut weights = Vec::with_capacity(m + 1);
    let mut prev = 0.0;
    for &c in &cuts {
        weights.push(c - prev);
        prev = c;
    }
    weights.push(1.0 - prev);
    let psis: Vec<f64> = (0..=m).map(|_| rng.random_range(0.0..TAU)).collect();
    // th_{l+1} = atan2(|tail after l|, u_l)
    let mut thetas = Vec::with_capacity(m);
    let mut tail: f64 = weights.iter().sum();
    for w in weights.iter().take(m) {
        tail -= w;
        thetas.push(tail.max(0.0).sqrt().atan2(w.sqrt()));
    }
    LOConfig::new(&thetas, &psis)
}
