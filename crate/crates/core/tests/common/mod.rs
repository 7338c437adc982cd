#![allow(dead_code)]

use grassmann_core::{Algebra, PrimeField};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random monic separable polynomial of degree `n` over the default field.
pub fn random_etale(n: usize, rng: &mut ChaCha8Rng) -> Algebra {
    let f = PrimeField::default();
    loop {
        let coeffs: Vec<u64> = (0..n).map(|_| f.random(rng)).collect();
        if let Ok(a) = Algebra::etale_from_poly(f, &coeffs) {
            return a;
        }
    }
}

/// The split algebra `F_p^n` with coordinate idempotents.
pub fn split(f: PrimeField, n: usize) -> Algebra {
    let mut c = vec![vec![vec![0; n]; n]; n];
    for (i, plane) in c.iter_mut().enumerate() {
        plane[i][i] = 1;
    }
    Algebra::from_structure_constants(f, &c, &vec![1; n]).unwrap()
}
