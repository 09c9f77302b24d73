//! Seeded corpora and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64;
use permac::exact::{hafnian_exact, multidim_permanent_exact, permanent_ryser};
use permac::{CubicalTensor, EvenSymmetricMatrix, SquareMatrix};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub struct Sampler(ChaCha20Rng);

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha20Rng::seed_from_u64(seed))
    }

    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform (by area) in the disc `|z - 1| <= radius`.
    pub fn near_one(&mut self, radius: f64) -> Complex64 {
        let r = radius * self.uniform().sqrt();
        Complex64::new(1.0, 0.0) + Complex64::from_polar(r, TAU * self.uniform())
    }

    /// Uniform in the square `[-1, 1] x [-1, 1]`.
    pub fn square(&mut self) -> Complex64 {
        Complex64::new(2.0 * self.uniform() - 1.0, 2.0 * self.uniform() - 1.0)
    }

    pub fn matrix_near_one(&mut self, n: usize, radius: f64) -> SquareMatrix {
        SquareMatrix::from_fn(n, |_, _| self.near_one(radius)).unwrap()
    }

    pub fn matrix_square(&mut self, n: usize) -> SquareMatrix {
        SquareMatrix::from_fn(n, |_, _| self.square()).unwrap()
    }

    /// Symmetric, off-diagonal entries in the disc, zero diagonal.
    pub fn symmetric_near_one(&mut self, dim: usize, radius: f64) -> EvenSymmetricMatrix {
        let mut e = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in i + 1..dim {
                let z = self.near_one(radius);
                e[i * dim + j] = z;
                e[j * dim + i] = z;
            }
        }
        EvenSymmetricMatrix::new_strict(dim, e).unwrap()
    }

    pub fn tensor_near_one(&mut self, nu: usize, n: usize, radius: f64) -> CubicalTensor {
        CubicalTensor::from_fn(nu, n, |_| self.near_one(radius)).unwrap()
    }
}

pub fn rel_err(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm()
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `g^(k)(0)` for `k = 0..=degree`, from exact evaluations of the polynomial
/// `g` at the `degree + 1` roots of unity followed by a discrete Fourier
/// transform (exact interpolation for polynomials of that degree).
pub fn interpolated_derivatives(degree: usize, g: impl Fn(Complex64) -> Complex64) -> Vec<Complex64> {
    let points = degree + 1;
    let w = |j: usize| Complex64::from_polar(1.0, TAU * j as f64 / points as f64);
    let values: Vec<Complex64> = (0..points).map(|j| g(w(j))).collect();
    (0..points)
        .map(|k| {
            let c: Complex64 = values
                .iter()
                .enumerate()
                .map(|(j, v)| v * w((j * k) % points).conj())
                .sum::<Complex64>()
                / points as f64;
            c * factorial(k)
        })
        .collect()
}

pub fn permanent_oracle(a: &SquareMatrix) -> Vec<Complex64> {
    interpolated_derivatives(a.n(), |z| permanent_ryser(&a.interpolate_from_ones(z)).unwrap())
}

pub fn hafnian_oracle(s: &EvenSymmetricMatrix) -> Vec<Complex64> {
    interpolated_derivatives(s.pairs(), |z| hafnian_exact(&s.interpolate_from_ones(z)).unwrap())
}

pub fn tensor_oracle(t: &CubicalTensor) -> Vec<Complex64> {
    interpolated_derivatives(t.n(), |z| multidim_permanent_exact(&t.interpolate_from_ones(z)).unwrap())
}

/// `f^(k)(0)` for `f = ln g`, `k = 0..=order`, by a trapezoidal Cauchy integral
/// on `|z| = radius` with `points` nodes. `ln g` is taken relative to `g(0)`
/// with the principal branch, valid while `g(z)/g(0)` stays off the negative axis.
pub fn cauchy_log_derivatives(
    order: usize,
    radius: f64,
    points: usize,
    g: impl Fn(Complex64) -> Complex64,
) -> Vec<Complex64> {
    let g0 = g(Complex64::new(0.0, 0.0));
    let w = |j: usize| Complex64::from_polar(1.0, TAU * j as f64 / points as f64);
    let values: Vec<Complex64> = (0..points).map(|j| (g(w(j) * radius) / g0).ln()).collect();
    (0..=order)
        .map(|k| {
            let c: Complex64 = values
                .iter()
                .enumerate()
                .map(|(j, v)| v * w((j * k) % points).conj())
                .sum::<Complex64>()
                / points as f64;
            let c = if k == 0 { c + g0.ln() } else { c };
            c * factorial(k) / radius.powi(k as i32)
        })
        .collect()
}
