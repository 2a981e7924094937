//! Seeded fixtures shared by the benchmarks in `benches/`.

use palg_core::{random, FieldSpec, LaurentElem, WittVector, DEFAULT_PRECISION};
use rand::rngs::StdRng;
use rand::SeedableRng;

pub fn rng() -> StdRng {
    StdRng::seed_from_u64(0x5eed)
}

pub fn field(p: u64) -> FieldSpec {
    FieldSpec::rational_function_field(p).unwrap()
}

/// A dense series with `terms` nonzero coefficients, known to `O(t^64)`.
pub fn dense_series(spec: FieldSpec, rng: &mut StdRng, terms: usize) -> LaurentElem {
    random::laurent(spec, rng, -8, 40, terms).with_precision(DEFAULT_PRECISION)
}

/// `(ω, b)` with `K_ω` totally ramified and `p ∤ v(b)`.
pub fn symbol_pair(
    spec: FieldSpec,
    rng: &mut StdRng,
    m: usize,
) -> (WittVector<LaurentElem>, LaurentElem) {
    (
        random::ramified_witt(spec, rng, m, -5),
        random::coprime_b(spec, rng, -5, 5),
    )
}
