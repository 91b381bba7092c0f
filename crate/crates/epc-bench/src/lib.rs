//! Shared fixtures for the criterion benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use epc_core::bilinear::BilinearConstruction;
use epc_core::field::{Gf, MERSENNE61};
use epc_core::matrix::Matrix;
use epc_core::scheme::{Inputs, Mode, Scheme, SchemeParams};

pub fn gf() -> Gf {
    Gf::new(MERSENNE61).unwrap()
}

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

pub fn square_inputs(gf: Gf, span: usize, seed: u64) -> (Matrix, Matrix) {
    let mut rng = rng(seed);
    (
        Matrix::random(gf, span, span, &mut rng),
        Matrix::random(gf, span, span, &mut rng),
    )
}

pub fn scheme(gf: Gf, mode: Mode, workers: usize) -> Scheme {
    let params = SchemeParams {
        mode,
        p: 2,
        m: 2,
        n: 2,
        workers,
        collusion: 0,
        batch: 1,
        library: 1,
        systematic: false,
    };
    let cons = mode
        .needs_construction()
        .then(|| BilinearConstruction::strassen_222(gf));
    Scheme::new(gf, params, cons).unwrap()
}

pub fn plain(a: Matrix, b: Matrix) -> Inputs {
    Inputs::Plain { a: vec![a], b: vec![b] }
}
