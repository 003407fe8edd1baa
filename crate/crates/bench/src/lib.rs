//! Fixtures shared by the benchmarks.

use billiard_bounds::power::SimplicialComplex;
use billiard_bounds::Gf2Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Square matrix with independent entries set with probability `density`.
pub fn random_matrix(n: usize, density: f64, seed: u64) -> Gf2Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<(usize, usize)> = (0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|_| rng.random_bool(density))
        .collect();
    Gf2Matrix::from_entries(n, n, entries).expect("entries are in range")
}

pub fn triangle() -> SimplicialComplex {
    SimplicialComplex::polygon(3).expect("a triangle is a valid complex")
}
