//! Seeded fixtures shared by tests, benches and the command line.
//!
//! The canonical configuration is the first sample of four vectors in
//! `diag(1,1,-1,-1)` that passes every incidence check, drawn from a ChaCha8
//! stream with [`CANONICAL_SEED`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nalgebra::{DMatrix, DVector};

use crate::geometry::hypercube::validate_pairs;
use crate::geometry::FrameConfig;
use crate::lattice::EvenLattice;
use crate::quadspace::{InnerProductSpace, Vector};

pub const CANONICAL_SEED: u64 = 0;
pub const RANK3_SEED: u64 = 11;
const MAX_ATTEMPTS: usize = 1_000_000;

/// `diag(1, 1, -1, -1)`.
pub fn split_space() -> InnerProductSpace {
    InnerProductSpace::diagonal(&[1.0, 1.0, -1.0, -1.0]).expect("nondegenerate")
}

/// Rejection sampling of a valid configuration. Returns the configuration and
/// the number of samples drawn.
pub fn search_config(seed: u64) -> (FrameConfig, usize) {
    search(seed, None)
}

fn search(seed: u64, c1: Option<Vector>) -> (FrameConfig, usize) {
    let space = split_space();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = [0.5, 0.5, 1.5, 1.5];
    let draw = |rng: &mut ChaCha8Rng| {
        Vector::new(scale.iter().map(|s| s * rng.gen_range(-1.0..1.0)).collect())
    };
    for attempt in 1..=MAX_ATTEMPTS {
        let first = draw(&mut rng);
        let c1 = c1.clone().unwrap_or(first);
        let (c2, c1p, c2p) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        if let Ok(cfg) = FrameConfig::new(space.clone(), c1, c2, c1p, c2p) {
            return (cfg, attempt);
        }
    }
    panic!("no valid configuration in {MAX_ATTEMPTS} samples for seed {seed}");
}

/// A valid configuration with `C1 = e3`, for the rank-one factorization of
/// the shadow, searched with [`CANONICAL_SEED`].
pub fn unary_config() -> FrameConfig {
    search(CANONICAL_SEED, Some(Vector::basis(4, 2))).0
}

/// The configuration used throughout the test suite.
pub fn canonical_config() -> FrameConfig {
    search_config(CANONICAL_SEED).0
}

/// `count` vectors uniform in `[-w, w]^4`.
pub fn sample_vectors(seed: u64, count: usize, w: f64) -> Vec<Vector> {
    sample_vectors_dim(seed, 4, count, w)
}

/// `count` vectors uniform in `[-w, w]^dim`.
pub fn sample_vectors_dim(seed: u64, dim: usize, count: usize, w: f64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Vector::new((0..dim).map(|_| rng.gen_range(-w..w)).collect()))
        .collect()
}

/// `diag(1, 1, 1, -1, -1, -1)`.
pub fn split_space_33() -> InnerProductSpace {
    InnerProductSpace::diagonal(&[1.0, 1.0, 1.0, -1.0, -1.0, -1.0]).expect("nondegenerate")
}

/// Three pairs in signature `(3,3)`, each vector a perturbation of a negative
/// basis vector, searched with [`RANK3_SEED`].
pub fn rank3_config() -> (InnerProductSpace, Vec<(Vector, Vector)>) {
    search_rank3(RANK3_SEED)
}

/// Rejection sampling of a valid rank-3 pair configuration.
pub fn search_rank3(seed: u64) -> (InnerProductSpace, Vec<(Vector, Vector)>) {
    let space = split_space_33();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |j: usize, rng: &mut ChaCha8Rng| {
        let mut c: Vec<f64> = (0..6).map(|_| 0.0).collect();
        for v in c.iter_mut().take(3) {
            *v = rng.gen_range(-0.6..0.6);
        }
        c[3 + j] = 1.0;
        for k in 3..6 {
            if k != 3 + j {
                c[k] = rng.gen_range(-0.2..0.2);
            }
        }
        Vector::new(c)
    };
    for _ in 0..MAX_ATTEMPTS {
        let pairs: Vec<(Vector, Vector)> =
            (0..3).map(|j| (draw(j, &mut rng), draw(j, &mut rng))).collect();
        if validate_pairs(&space, &pairs).map(|r| r.pass).unwrap_or(false) {
            return (space, pairs);
        }
    }
    panic!("no valid rank-3 configuration for seed {seed}");
}

/// `sqrt(2) Z^4` in `diag(1,1,-1,-1)`: Gram `diag(2,2,-2,-2)`, sixteen cosets.
pub fn fixture_lattice() -> EvenLattice {
    let b = DMatrix::from_diagonal_element(4, 4, 2f64.sqrt());
    EvenLattice::new(split_space(), b).expect("even lattice")
}

/// `U ⊕ U` realised in `diag(1,1,-1,-1)` with generators `(e_i ± e_{i+2})/sqrt 2`.
pub fn hyperbolic_lattice() -> EvenLattice {
    let h = 0.5f64.sqrt();
    let b = DMatrix::from_row_slice(
        4,
        4,
        &[h, h, 0.0, 0.0, 0.0, 0.0, h, h, h, -h, 0.0, 0.0, 0.0, 0.0, h, -h],
    );
    EvenLattice::new(split_space(), b).expect("even lattice")
}

/// `diag(sqrt 6, sqrt 2, sqrt 6, sqrt 2) Z^4` in `diag(1,1,-1,-1)`, Gram
/// `diag(6,2,-6,-2)`.
pub fn unary_lattice() -> EvenLattice {
    let b = DMatrix::from_diagonal(&DVector::from_column_slice(&[
        6f64.sqrt(),
        2f64.sqrt(),
        6f64.sqrt(),
        2f64.sqrt(),
    ]));
    EvenLattice::new(split_space(), b).expect("even lattice")
}

/// `diag(sqrt 6, sqrt 2, ..., sqrt 2) Z^6` in `diag(1,1,1,-1,-1,-1)`, Gram
/// `diag(6,2,2,-2,-2,-2)`. The factor 6 gives cosets that differ from
/// their negatives, where odd sign series need not vanish.
pub fn rank3_lattice() -> EvenLattice {
    let mut diag = vec![2f64.sqrt(); 6];
    diag[0] = 6f64.sqrt();
    let b = DMatrix::from_diagonal(&DVector::from_vec(diag));
    EvenLattice::new(split_space_33(), b).expect("even lattice")
}
