//! Fixed inputs shared by the benchmarks in `benches/`.

use iis_core::sampling::Sampler;
use iis_core::{Rational, SymmetricParams};

/// The first `n` admissible samples for a seed, in draw order.
pub fn samples(seed: u64, n: usize) -> Vec<SymmetricParams<Rational>> {
    Sampler::new(seed, 50).take(n).collect()
}
