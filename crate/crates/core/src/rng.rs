//! Counter-derived random substreams.
//!
//! A dataset of `count` items is cut into fixed-size blocks; block `k` is
//! drawn from ChaCha8 seeded with the user seed on stream `k`. The output is
//! therefore the same whether blocks are generated sequentially or in
//! parallel, and any block can be regenerated on its own.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Items per substream block.
pub const BLOCK: usize = 1 << 14;

pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generates `count` items, block `k` from `substream(seed, k)`, in parallel.
pub fn generate_blocks<T, F>(seed: u64, count: usize, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    let blocks = count.div_ceil(BLOCK);
    let parts: Vec<Vec<T>> = (0..blocks)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(seed, k as u64);
            let len = BLOCK.min(count - k * BLOCK);
            (0..len).map(|_| draw(&mut rng)).collect()
        })
        .collect();
    let mut out = Vec::with_capacity(count);
    for p in parts {
        out.extend(p);
    }
    out
}
