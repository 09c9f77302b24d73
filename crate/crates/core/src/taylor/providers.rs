//! Derivatives of `g(z)` at `z = 0` for permanents, hafnians and
//! multidimensional permanents.
//!
//! Write `B = A - J`. Expanding every factor `1 + z b` of every term of the
//! partition function and collecting powers of `z`:
//!
//! * permanent: `g^(k)(0) = (n-k)! * sum over ordered k-tuples of distinct rows
//!   (i_1..i_k) and of distinct columns (j_1..j_k) of prod_l b[i_l, j_l]`,
//!   equivalently `(n-k)! k! sum_{|R|=|C|=k} per B[R, C]`;
//! * hafnian (`2n x 2n`): `g^(k)(0) = M(n-k) * sum over ordered sequences of k
//!   disjoint unordered pairs {i, j} of prod b[i, j]`, equivalently
//!   `M(n-k) k! sum_{|U|=2k} haf B[U]`, where `M(r) = (2r)! / (r! 2^r)` counts
//!   perfect matchings of the `2(n-k)` untouched indices;
//! * `nu`-dimensional permanent: `g^(k)(0) = ((n-k)!)^(nu-1) * sum over one
//!   ordered k-tuple per axis of prod_l b[i_l, j^1_l, ..., j^(nu-1)_l]`,
//!   equivalently `((n-k)!)^(nu-1) k! sum_{R_1..R_nu} PER B[R_1, .., R_nu]`.
//!
//! The grouped (sub-structure) forms drive the providers; the tuple forms are
//! kept as independent cross-checks. Both cost `n^O(k)` for the `k`-th derivative.

use num_complex::Complex64;

use crate::error::Result;
use crate::exact::{hafnian_memo, multidim_permanent_exact, ryser_dense};
use crate::numerics::{
    enumerate_k_subsets, enumerate_k_tuples, factorial, log_factorial, max_deviation_from_one,
    perfect_matchings, CubicalTensor, EvenSymmetricMatrix, SquareMatrix, ONE, ZERO,
};
use crate::parallel::chunked_sum;
use crate::region::{default_delta, DELTA_PERMANENT};

use super::DerivativeProvider;

fn unnormalize(base_log_value: f64, coefficients: Vec<Complex64>) -> Vec<Complex64> {
    let scale = base_log_value.exp();
    coefficients
        .into_iter()
        .enumerate()
        .map(|(k, c)| c * scale * factorial(k as u64))
        .collect()
}

// ---------------------------------------------------------------------------
// Permanent
// ---------------------------------------------------------------------------

/// Derivatives of `per(J + z (A - J))` at 0.
#[derive(Debug, Clone)]
pub struct PermanentProvider {
    n: usize,
    minus_ones: SquareMatrix,
    gamma: f64,
    threads: usize,
}

impl PermanentProvider {
    pub fn new(a: &SquareMatrix) -> Self {
        Self {
            n: a.n(),
            minus_ones: a.minus_ones(),
            gamma: max_deviation_from_one(a),
            threads: 1,
        }
    }

    /// Splits the row-subset loop across `threads` workers (deterministic per count).
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    /// `sum_{|R|=|C|=k} per B[R, C]`, rows outer, columns inner, both lexicographic.
    fn submatrix_sum(&self, k: usize) -> Complex64 {
        let subsets: Vec<Vec<usize>> = enumerate_k_subsets(self.n, k).collect();
        let b = &self.minus_ones;
        chunked_sum(subsets.len(), self.threads, |range| {
            let mut buf = vec![ZERO; k * k];
            let mut acc = ZERO;
            for rows in &subsets[range] {
                for cols in &subsets {
                    for (p, &i) in rows.iter().enumerate() {
                        for (q, &j) in cols.iter().enumerate() {
                            buf[p * k + q] = b.get(i, j);
                        }
                    }
                    acc += ryser_dense(&buf, k, 1);
                }
            }
            acc
        })
    }
}

impl DerivativeProvider for PermanentProvider {
    fn base_log_value(&self) -> f64 {
        log_factorial(self.n as u64)
    }

    fn degree_bound(&self) -> usize {
        self.n
    }

    fn relative_coefficients(&self, order: usize) -> Result<Vec<Complex64>> {
        let mut out = vec![ONE];
        // (n-k)!/n! built incrementally.
        let mut ratio = 1.0;
        for k in 1..=order {
            if k > self.n {
                out.push(ZERO);
                continue;
            }
            ratio /= (self.n - k + 1) as f64;
            out.push(self.submatrix_sum(k) * ratio);
        }
        Ok(out)
    }

    fn gamma(&self) -> f64 {
        self.gamma
    }

    fn default_delta(&self) -> Result<f64> {
        Ok(DELTA_PERMANENT)
    }
}

/// `g^(k)(0)` for `g(z) = per(J + z (A - J))`, `k = 0..=order`, via submatrix permanents.
pub fn permanent_g_derivatives(a: &SquareMatrix, order: usize) -> Result<Vec<Complex64>> {
    let p = PermanentProvider::new(a);
    Ok(unnormalize(p.base_log_value(), p.relative_coefficients(order)?))
}

/// Same as [`permanent_g_derivatives`] by the literal sum over pairs of ordered
/// `k`-tuples. Cost grows like `(n!/(n-k)!)^2`.
pub fn permanent_g_derivatives_by_tuples(a: &SquareMatrix, order: usize) -> Result<Vec<Complex64>> {
    let n = a.n();
    let b = a.minus_ones();
    Ok((0..=order)
        .map(|k| {
            if k > n {
                return ZERO;
            }
            let tuples: Vec<Vec<usize>> = enumerate_k_tuples(n, k).collect();
            let mut acc = ZERO;
            for rows in &tuples {
                for cols in &tuples {
                    acc += rows
                        .iter()
                        .zip(cols)
                        .fold(ONE, |p, (&i, &j)| p * b.get(i, j));
                }
            }
            acc * factorial((n - k) as u64)
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Hafnian
// ---------------------------------------------------------------------------

/// Derivatives of `haf(J + z (S - J))` at 0 for a `2n x 2n` symmetric `S`.
#[derive(Debug, Clone)]
pub struct HafnianProvider {
    pairs: usize,
    minus_ones: EvenSymmetricMatrix,
    gamma: f64,
    threads: usize,
}

impl HafnianProvider {
    pub fn new(s: &EvenSymmetricMatrix) -> Self {
        Self {
            pairs: s.pairs(),
            minus_ones: s.minus_ones(),
            gamma: s.max_offdiagonal_deviation(),
            threads: 1,
        }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    /// `sum_{|U|=2k} haf B[U]` in lexicographic subset order.
    fn principal_sum(&self, k: usize) -> Complex64 {
        let subsets: Vec<Vec<usize>> = enumerate_k_subsets(self.minus_ones.dim(), 2 * k).collect();
        let b = &self.minus_ones;
        chunked_sum(subsets.len(), self.threads, |range| {
            subsets[range]
                .iter()
                .map(|u| hafnian_memo(2 * k, |i, j| b.get(u[i], u[j])))
                .sum()
        })
    }
}

impl DerivativeProvider for HafnianProvider {
    fn base_log_value(&self) -> f64 {
        perfect_matchings(self.pairs as u64).ln()
    }

    fn degree_bound(&self) -> usize {
        self.pairs
    }

    fn relative_coefficients(&self, order: usize) -> Result<Vec<Complex64>> {
        let n = self.pairs;
        let mut out = vec![ONE];
        // M(n-k)/M(n) = 1 / ((2n-1)(2n-3)...(2n-2k+1))
        let mut ratio = 1.0;
        for k in 1..=order {
            if k > n {
                out.push(ZERO);
                continue;
            }
            ratio /= (2 * (n - k) + 1) as f64;
            out.push(self.principal_sum(k) * ratio);
        }
        Ok(out)
    }

    fn gamma(&self) -> f64 {
        self.gamma
    }

    fn default_delta(&self) -> Result<f64> {
        Ok(DELTA_PERMANENT)
    }
}

/// `g^(k)(0)` for `g(z) = haf(J + z (S - J))`, `k = 0..=order`, via principal sub-hafnians.
pub fn hafnian_g_derivatives(s: &EvenSymmetricMatrix, order: usize) -> Result<Vec<Complex64>> {
    let p = HafnianProvider::new(s);
    Ok(unnormalize(p.base_log_value(), p.relative_coefficients(order)?))
}

/// Same as [`hafnian_g_derivatives`] by the literal sum over ordered sequences
/// of `k` pairwise disjoint unordered pairs.
pub fn hafnian_g_derivatives_by_sequences(s: &EvenSymmetricMatrix, order: usize) -> Result<Vec<Complex64>> {
    fn sequences(b: &EvenSymmetricMatrix, remaining: usize, used: u64) -> Complex64 {
        if remaining == 0 {
            return ONE;
        }
        let dim = b.dim();
        let mut acc = ZERO;
        for i in 0..dim {
            if used & (1 << i) != 0 {
                continue;
            }
            for j in (i + 1)..dim {
                if used & (1 << j) != 0 {
                    continue;
                }
                acc += b.get(i, j) * sequences(b, remaining - 1, used | (1 << i) | (1 << j));
            }
        }
        acc
    }

    let n = s.pairs();
    let b = s.minus_ones();
    Ok((0..=order)
        .map(|k| {
            if k > n {
                ZERO
            } else {
                sequences(&b, k, 0) * perfect_matchings((n - k) as u64)
            }
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Multidimensional permanent
// ---------------------------------------------------------------------------

/// Derivatives of `PER(J + z (T - J))` at 0 for a cubical tensor `T`.
#[derive(Debug, Clone)]
pub struct TensorProvider {
    minus_ones: CubicalTensor,
    gamma: f64,
    threads: usize,
}

impl TensorProvider {
    pub fn new(t: &CubicalTensor) -> Self {
        Self {
            minus_ones: t.minus_ones(),
            gamma: max_deviation_from_one(t),
            threads: 1,
        }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    /// `sum over k-subsets R_1..R_nu of PER B[R_1, .., R_nu]`, odometer order
    /// with the first axis outermost.
    fn subtensor_sum(&self, k: usize) -> Result<Complex64> {
        let b = &self.minus_ones;
        let nu = b.nu();
        let subsets: Vec<Vec<usize>> = enumerate_k_subsets(b.n(), k).collect();
        let count = subsets.len();
        let parts = crate::parallel::chunked_map(count, self.threads, |range| -> Result<Complex64> {
            let mut acc = ZERO;
            let mut choice = vec![0usize; nu];
            for first in range {
                choice[0] = first;
                choice[1..].iter_mut().for_each(|c| *c = 0);
                loop {
                    let selections: Vec<Vec<usize>> =
                        choice.iter().map(|&c| subsets[c].clone()).collect();
                    acc += multidim_permanent_exact(&b.select(&selections)?)?;

                    let mut axis = nu;
                    loop {
                        axis -= 1;
                        if axis == 0 {
                            break;
                        }
                        choice[axis] += 1;
                        if choice[axis] < count {
                            break;
                        }
                        choice[axis] = 0;
                    }
                    if axis == 0 {
                        break;
                    }
                }
            }
            Ok(acc)
        });
        let parts = parts.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(crate::parallel::tree_sum(&parts))
    }
}

impl DerivativeProvider for TensorProvider {
    fn base_log_value(&self) -> f64 {
        (self.minus_ones.nu() - 1) as f64 * log_factorial(self.minus_ones.n() as u64)
    }

    fn degree_bound(&self) -> usize {
        self.minus_ones.n()
    }

    fn relative_coefficients(&self, order: usize) -> Result<Vec<Complex64>> {
        let n = self.minus_ones.n();
        let exponent = (self.minus_ones.nu() - 1) as i32;
        let mut out = vec![ONE];
        // ((n-k)!/n!)^(nu-1)
        let mut ratio = 1.0;
        for k in 1..=order {
            if k > n {
                out.push(ZERO);
                continue;
            }
            ratio /= (n - k + 1) as f64;
            out.push(self.subtensor_sum(k)? * ratio.powi(exponent));
        }
        Ok(out)
    }

    fn gamma(&self) -> f64 {
        self.gamma
    }

    fn default_delta(&self) -> Result<f64> {
        default_delta(self.minus_ones.nu())
    }
}

/// `g^(k)(0)` for `g(z) = PER(J + z (T - J))`, `k = 0..=order`, via sub-tensor permanents.
pub fn tensor_g_derivatives(t: &CubicalTensor, order: usize) -> Result<Vec<Complex64>> {
    let p = TensorProvider::new(t);
    Ok(unnormalize(p.base_log_value(), p.relative_coefficients(order)?))
}

/// Same as [`tensor_g_derivatives`] by the literal sum over one ordered
/// `k`-tuple of distinct indices per axis.
pub fn tensor_g_derivatives_by_tuples(t: &CubicalTensor, order: usize) -> Result<Vec<Complex64>> {
    let (nu, n) = (t.nu(), t.n());
    let b = t.minus_ones();
    Ok((0..=order)
        .map(|k| {
            if k > n {
                return ZERO;
            }
            let tuples: Vec<Vec<usize>> = enumerate_k_tuples(n, k).collect();
            let count = tuples.len();
            let mut choice = vec![0usize; nu];
            let mut index = vec![0usize; nu];
            let mut acc = ZERO;
            'outer: loop {
                let mut prod = ONE;
                for l in 0..k {
                    for axis in 0..nu {
                        index[axis] = tuples[choice[axis]][l];
                    }
                    prod *= b.get(&index);
                }
                acc += prod;

                let mut axis = nu;
                loop {
                    if axis == 0 {
                        break 'outer;
                    }
                    axis -= 1;
                    choice[axis] += 1;
                    if choice[axis] < count {
                        break;
                    }
                    choice[axis] = 0;
                }
            }
            acc * factorial((n - k) as u64).powi((nu - 1) as i32)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Entries;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_matrix(n: usize) -> SquareMatrix {
        SquareMatrix::from_fn(n, |i, j| {
            let t = (i * n + j) as f64;
            c(1.0 + 0.15 * (1.3 * t).sin(), 0.12 * (0.7 * t + 0.4).cos())
        })
        .unwrap()
    }

    #[test]
    fn permanent_base_and_first_derivative() {
        let a = sample_matrix(5);
        let d = permanent_g_derivatives(&a, 1).unwrap();
        assert!((d[0] - c(120.0, 0.0)).norm() < 1e-10);
        let total: Complex64 = a.entries().iter().map(|z| z - ONE).sum();
        assert!((d[1] - total * 24.0).norm() < 1e-10 * d[1].norm());
    }

    #[test]
    fn permanent_beyond_degree_is_zero() {
        let a = sample_matrix(3);
        let d = permanent_g_derivatives(&a, 6).unwrap();
        assert_eq!(d.len(), 7);
        assert!(d[4..].iter().all(|z| *z == ZERO));
        let t = permanent_g_derivatives_by_tuples(&a, 6).unwrap();
        assert!(t[4..].iter().all(|z| *z == ZERO));
    }

    #[test]
    fn permanent_forms_agree() {
        let a = sample_matrix(5);
        let grouped = permanent_g_derivatives(&a, 4).unwrap();
        let tuples = permanent_g_derivatives_by_tuples(&a, 4).unwrap();
        for k in 0..=4 {
            assert!((grouped[k] - tuples[k]).norm() <= 1e-10 * tuples[k].norm(), "k={k}");
        }
    }

    #[test]
    fn permanent_threads_match_serial() {
        let a = sample_matrix(7);
        let serial = PermanentProvider::new(&a).relative_coefficients(7).unwrap();
        let par = PermanentProvider::new(&a).with_threads(3).relative_coefficients(7).unwrap();
        for k in 0..=7 {
            assert!((serial[k] - par[k]).norm() <= 1e-12 * serial[k].norm());
        }
    }

    #[test]
    fn hafnian_base_and_first_derivative() {
        let s = EvenSymmetricMatrix::from_fn(6, |i, j| c(1.0 + 0.03 * (i + 2 * j) as f64, 0.01 * j as f64)).unwrap();
        let d = hafnian_g_derivatives(&s, 1).unwrap();
        assert!((d[0] - c(15.0, 0.0)).norm() < 1e-12);
        let mut pair_sum = ZERO;
        for i in 0..6 {
            for j in (i + 1)..6 {
                pair_sum += s.get(i, j) - ONE;
            }
        }
        assert!((d[1] - pair_sum * 3.0).norm() < 1e-12);
    }

    #[test]
    fn hafnian_forms_agree() {
        let s = EvenSymmetricMatrix::from_fn(8, |i, j| {
            let t = (i * 8 + j) as f64;
            c(1.0 + 0.2 * t.sin(), 0.1 * (2.0 * t).cos())
        })
        .unwrap();
        let grouped = hafnian_g_derivatives(&s, 5).unwrap();
        let seq = hafnian_g_derivatives_by_sequences(&s, 5).unwrap();
        for k in 0..=5 {
            assert!((grouped[k] - seq[k]).norm() <= 1e-10 * seq[k].norm().max(1e-300), "k={k}");
        }
        assert_eq!(grouped[5], ZERO);
    }

    #[test]
    fn tensor_base_and_first_derivative() {
        let t = CubicalTensor::from_fn(3, 3, |idx| c(1.0 + 0.05 * idx[0] as f64 - 0.02 * idx[2] as f64, 0.01 * idx[1] as f64))
            .unwrap();
        let d = tensor_g_derivatives(&t, 1).unwrap();
        assert!((d[0] - c(36.0, 0.0)).norm() < 1e-10);
        let total: Complex64 = t.entries().iter().map(|z| z - ONE).sum();
        assert!((d[1] - total * 4.0).norm() < 1e-10);
    }

    #[test]
    fn tensor_forms_agree() {
        let t = CubicalTensor::from_fn(3, 4, |idx| {
            let s = (idx[0] * 16 + idx[1] * 4 + idx[2]) as f64;
            c(1.0 + 0.1 * (0.9 * s).sin(), 0.1 * (1.7 * s).cos())
        })
        .unwrap();
        let grouped = tensor_g_derivatives(&t, 4).unwrap();
        let tuples = tensor_g_derivatives_by_tuples(&t, 4).unwrap();
        for k in 0..=4 {
            assert!((grouped[k] - tuples[k]).norm() <= 1e-10 * tuples[k].norm(), "k={k}");
        }
        let par = TensorProvider::new(&t).with_threads(4).relative_coefficients(4).unwrap();
        let serial = TensorProvider::new(&t).relative_coefficients(4).unwrap();
        for k in 0..=4 {
            assert!((par[k] - serial[k]).norm() <= 1e-12 * serial[k].norm());
        }
    }

    #[test]
    fn tensor_of_matrix_matches_permanent_provider() {
        let a = sample_matrix(4);
        let t = CubicalTensor::from_matrix(&a);
        let x = tensor_g_derivatives(&t, 4).unwrap();
        let y = permanent_g_derivatives(&a, 4).unwrap();
        for k in 0..=4 {
            assert!((x[k] - y[k]).norm() <= 1e-10 * y[k].norm());
        }
    }
}
