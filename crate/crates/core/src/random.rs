//! Seeded random instances: curvature tensors, frame changes and directions.
//!
//! Every generator takes an explicit seed and draws from its own ChaCha
//! stream, so instances are reproducible and independent of call order.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::curvature::CurvatureTensor;
use crate::forms::trial_rng;
use crate::matrix::Matrix;
use crate::scalar::{Coeff, GaussianRational};

/// SplitMix64 finaliser, used to derive independent sub-seeds.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    trial_rng(seed, 0)
}

/// Standard complex normal: real and imaginary parts `N(0, 1/2)`.
pub fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * s, im * s)
}

pub fn complex_normal_vector(len: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = rng_for(seed);
    (0..len).map(|_| complex_normal(&mut rng)).collect()
}

/// Distribution parameters recorded alongside generated instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorDistribution {
    pub kind: String,
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub seed: u64,
}

/// Tensor with i.i.d. standard complex normal entries.
pub fn float_tensor(n: usize, r: usize, m: usize, seed: u64) -> crate::Result<CurvatureTensor<Complex64>> {
    let mut rng = rng_for(seed);
    let values = (0..n * r * m).map(|_| complex_normal(&mut rng)).collect();
    CurvatureTensor::new(n, r, m, values)
}

/// Tensor with Gaussian-integer entries, real and imaginary parts uniform in `[-bound, bound]`.
pub fn gaussian_integer_tensor(
    n: usize,
    r: usize,
    m: usize,
    bound: i64,
    seed: u64,
) -> crate::Result<CurvatureTensor<GaussianRational>> {
    let mut rng = rng_for(seed);
    let values = (0..n * r * m)
        .map(|_| {
            GaussianRational::from_i64(
                rng.random_range(-bound..=bound),
                rng.random_range(-bound..=bound),
            )
        })
        .collect();
    CurvatureTensor::new(n, r, m, values)
}

/// Instance shape used by the randomized theorem suites:
/// `n, r ∈ 1..=max_nr`, `m ∈ 1..=max_m`.
pub fn random_shape(seed: u64, max_nr: usize, max_m: usize) -> (usize, usize, usize) {
    let mut rng = rng_for(seed);
    (
        rng.random_range(1..=max_nr),
        rng.random_range(1..=max_nr),
        rng.random_range(1..=max_m),
    )
}

/// Random complex normal matrix (invertible with probability one).
pub fn float_matrix(r: usize, seed: u64) -> Matrix<Complex64> {
    let mut rng = rng_for(seed);
    let values: Vec<Complex64> = (0..r * r).map(|_| complex_normal(&mut rng)).collect();
    Matrix::from_fn(r, r, |i, j| values[i * r + j])
}

/// Unitary matrix from Gram–Schmidt orthonormalisation of a complex normal matrix.
pub fn float_unitary(r: usize, seed: u64) -> Matrix<Complex64> {
    let g = float_matrix(r, seed);
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(r);
    for j in 0..r {
        let mut v: Vec<Complex64> = (0..r).map(|i| *g.get(i, j)).collect();
        for u in &columns {
            let dot: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        columns.push(v.into_iter().map(|x| x / norm).collect());
    }
    Matrix::from_fn(r, r, |i, j| columns[j][i])
}

/// Unit-modulus Gaussian rationals used as exact phases.
fn exact_phases() -> Vec<GaussianRational> {
    vec![
        GaussianRational::from_i64(1, 0),
        GaussianRational::from_i64(0, 1),
        GaussianRational::from_i64(-1, 0),
        GaussianRational::from_i64(0, -1),
        GaussianRational::from_ratio(3, 4, 5),
        GaussianRational::from_ratio(4, -3, 5),
        GaussianRational::from_ratio(-5, 12, 13),
        GaussianRational::from_ratio(8, 15, 17),
    ]
}

/// Exactly unitary matrix: a random permutation times a diagonal of exact phases
/// (signs included among the phases).
pub fn exact_unitary(r: usize, seed: u64) -> Matrix<GaussianRational> {
    let mut rng = rng_for(seed);
    let mut perm: Vec<usize> = (0..r).collect();
    for i in (1..r).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    let phases = exact_phases();
    let diag: Vec<GaussianRational> = (0..r)
        .map(|_| phases[rng.random_range(0..phases.len())].clone())
        .collect();
    Matrix::from_fn(r, r, |i, j| {
        if perm[j] == i {
            diag[j].clone()
        } else {
            GaussianRational::zero()
        }
    })
}

/// Random exact invertible matrix with small Gaussian-integer entries.
pub fn exact_invertible(r: usize, seed: u64) -> Matrix<GaussianRational> {
    let mut attempt = 0;
    loop {
        let mut rng = rng_for(mix_seed(seed, attempt));
        let values: Vec<GaussianRational> = (0..r * r)
            .map(|_| GaussianRational::from_i64(rng.random_range(-3..=3), rng.random_range(-3..=3)))
            .collect();
        let p = Matrix::from_fn(r, r, |i, j| values[i * r + j].clone());
        if p.inverse().is_ok() {
            return p;
        }
        attempt += 1;
    }
}
