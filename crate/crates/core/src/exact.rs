//! Exact exponential-time permanents, hafnians and multidimensional permanents.
//!
//! These are the verification oracles for the Taylor approximation and are
//! also usable directly on small inputs.

use itertools::Itertools;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{CubicalTensor, Entries, EvenSymmetricMatrix, SquareMatrix, ONE, ZERO};
use crate::parallel::chunked_sum;

/// Largest dimension accepted by [`permanent_ryser`].
pub const RYSER_MAX_N: usize = 30;
/// Largest dimension accepted by [`permanent_naive`].
pub const NAIVE_MAX_N: usize = 9;
/// Largest side `2n` accepted by the hafnian oracles.
pub const HAFNIAN_MAX_DIM: usize = 20;
/// Upper limit on the `(n!)^(nu-1)` terms of [`multidim_permanent_exact`].
pub const MULTIDIM_MAX_TERMS: u64 = 10_000_000;

/// Which exact permanent routine to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermanentAlgorithm {
    Ryser,
    Naive,
    /// Naive for tiny matrices, Ryser otherwise.
    Auto,
}

impl PermanentAlgorithm {
    pub fn name(self) -> &'static str {
        match self {
            PermanentAlgorithm::Ryser => "ryser",
            PermanentAlgorithm::Naive => "naive",
            PermanentAlgorithm::Auto => "auto",
        }
    }
}

pub fn permanent(a: &SquareMatrix, algorithm: PermanentAlgorithm, threads: usize) -> Result<Complex64> {
    match algorithm {
        PermanentAlgorithm::Ryser => permanent_ryser_par(a, threads),
        PermanentAlgorithm::Naive => permanent_naive(a),
        PermanentAlgorithm::Auto if a.n() <= 3 => permanent_naive(a),
        PermanentAlgorithm::Auto => permanent_ryser_par(a, threads),
    }
}

/// Permanent by Ryser's inclusion-exclusion with Gray-code subset updates.
///
/// Uses the centred (Nijenhuis-Wilf) form
/// `per A = (-1)^(n-1) 2 sum_{S in [n-1]} (-1)^|S| prod_i (x_i + sum_{j in S} a_ij)`
/// with `x_i = a_{i,n} - (1/2) sum_j a_ij`, which visits `2^(n-1)` subsets and
/// keeps the row sums centred. Each Gray-code step adds or removes one column.
pub fn permanent_ryser(a: &SquareMatrix) -> Result<Complex64> {
    permanent_ryser_par(a, 1)
}

/// [`permanent_ryser`] with the subset loop split over `threads` workers.
/// Results are reproducible for a fixed `threads`; `threads <= 1` is the reference.
pub fn permanent_ryser_par(a: &SquareMatrix, threads: usize) -> Result<Complex64> {
    let n = a.n();
    if n > RYSER_MAX_N {
        return Err(Error::SizeGuard {
            what: "ryser dimension",
            limit: RYSER_MAX_N as u64,
            got: n as u64,
        });
    }
    Ok(ryser_dense(a.entries(), n, threads))
}

/// Centred Ryser over a dense row-major `n x n` buffer; no size guard.
pub(crate) fn ryser_dense(a: &[Complex64], n: usize, threads: usize) -> Complex64 {
    debug_assert_eq!(a.len(), n * n);
    match n {
        0 => return ONE,
        1 => return a[0],
        _ => {}
    }
    let at = |i: usize, j: usize| a[i * n + j];
    let base: Vec<Complex64> = (0..n)
        .map(|i| at(i, n - 1) - a[i * n..(i + 1) * n].iter().sum::<Complex64>() * 0.5)
        .collect();
    let free = n - 1;
    let total = 1usize << free;

    let sum = chunked_sum(total, threads, |range| {
        if range.is_empty() {
            return ZERO;
        }
        let start_gray = range.start ^ (range.start >> 1);
        let mut sums = base.clone();
        for j in 0..free {
            if start_gray & (1 << j) != 0 {
                for (i, s) in sums.iter_mut().enumerate() {
                    *s += at(i, j);
                }
            }
        }
        let mut parity = start_gray.count_ones() & 1;
        let mut acc = signed_product(&sums, parity);
        for t in range.start + 1..range.end {
            let j = t.trailing_zeros() as usize;
            let gray = t ^ (t >> 1);
            if gray & (1 << j) != 0 {
                for (i, s) in sums.iter_mut().enumerate() {
                    *s += at(i, j);
                }
            } else {
                for (i, s) in sums.iter_mut().enumerate() {
                    *s -= at(i, j);
                }
            }
            parity ^= 1;
            acc += signed_product(&sums, parity);
        }
        acc
    });

    let sign = if free.is_multiple_of(2) { 2.0 } else { -2.0 };
    sum * sign
}

#[inline]
fn signed_product(values: &[Complex64], parity: u32) -> Complex64 {
    let p = values.iter().fold(ONE, |acc, v| acc * v);
    if parity == 0 {
        p
    } else {
        -p
    }
}

/// Permanent as the literal sum over all `n!` permutations.
pub fn permanent_naive(a: &SquareMatrix) -> Result<Complex64> {
    let n = a.n();
    if n > NAIVE_MAX_N {
        return Err(Error::SizeGuard {
            what: "naive permanent dimension",
            limit: NAIVE_MAX_N as u64,
            got: n as u64,
        });
    }
    Ok((0..n)
        .permutations(n)
        .map(|sigma| {
            sigma
                .iter()
                .enumerate()
                .fold(ONE, |acc, (i, &j)| acc * a.get(i, j))
        })
        .sum())
}

fn hafnian_guard(s: &EvenSymmetricMatrix) -> Result<()> {
    if s.dim() > HAFNIAN_MAX_DIM {
        return Err(Error::SizeGuard {
            what: "hafnian dimension",
            limit: HAFNIAN_MAX_DIM as u64,
            got: s.dim() as u64,
        });
    }
    Ok(())
}

/// Hafnian by first-row expansion, memoized over the bitmask of unmatched
/// indices. Diagonal entries are never read.
pub fn hafnian_exact(s: &EvenSymmetricMatrix) -> Result<Complex64> {
    hafnian_guard(s)?;
    Ok(hafnian_memo(s.dim(), |i, j| s.get(i, j)))
}

/// Memoized hafnian of the `dim x dim` symmetric matrix read through `at`; no size guard.
pub(crate) fn hafnian_memo(dim: usize, at: impl Fn(usize, usize) -> Complex64) -> Complex64 {
    let full = (1usize << dim) - 1;
    // Every submask is numerically smaller, so increasing mask order is a valid
    // evaluation order. Odd masks are never read.
    let mut memo = vec![ZERO; full + 1];
    memo[0] = ONE;
    for mask in 1..=full {
        if mask.count_ones() % 2 != 0 {
            continue;
        }
        let low = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << low);
        let mut acc = ZERO;
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            acc += at(low, j) * memo[rest & !(1 << j)];
        }
        memo[mask] = acc;
    }
    memo[full]
}

/// Plain depth-first first-row expansion `haf Z = sum_j z_{1j} haf Z_j`,
/// without memoization. Reference for [`hafnian_exact`].
pub fn hafnian_recursive(s: &EvenSymmetricMatrix) -> Result<Complex64> {
    hafnian_guard(s)?;
    fn go(s: &EvenSymmetricMatrix, mask: usize) -> Complex64 {
        if mask == 0 {
            return ONE;
        }
        let low = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << low);
        let mut acc = ZERO;
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            acc += s.get(low, j) * go(s, rest & !(1 << j));
        }
        acc
    }
    Ok(go(s, (1usize << s.dim()) - 1))
}

/// Number of terms `(n!)^(nu-1)` in the multidimensional permanent, saturating.
pub fn multidim_term_count(nu: usize, n: usize) -> u64 {
    let fact = (2..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k));
    match fact {
        Some(f) => (0..nu - 1).try_fold(1u64, |acc, _| acc.checked_mul(f)).unwrap_or(u64::MAX),
        None => u64::MAX,
    }
}

/// `PER T = sum over (nu-1)-tuples of permutations of prod_i t[i, s1(i), ..., s_{nu-1}(i)]`,
/// as a literal sum.
pub fn multidim_permanent_exact(t: &CubicalTensor) -> Result<Complex64> {
    let (nu, n) = (t.nu(), t.n());
    let terms = multidim_term_count(nu, n);
    if terms > MULTIDIM_MAX_TERMS {
        return Err(Error::SizeGuard {
            what: "multidimensional permanent terms",
            limit: MULTIDIM_MAX_TERMS,
            got: terms,
        });
    }
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let axes = nu - 1;
    let mut choice = vec![0usize; axes];
    let mut index = vec![0usize; nu];
    let mut total = ZERO;
    loop {
        let mut prod = ONE;
        for i in 0..n {
            index[0] = i;
            for (axis, &c) in choice.iter().enumerate() {
                index[axis + 1] = perms[c][i];
            }
            prod *= t.get(&index);
        }
        total += prod;

        let mut axis = axes;
        loop {
            if axis == 0 {
                return Ok(total);
            }
            axis -= 1;
            choice[axis] += 1;
            if choice[axis] < perms.len() {
                break;
            }
            choice[axis] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn zero_permanent_example() -> SquareMatrix {
        let p = c(0.5, 0.5);
        let q = c(0.5, -0.5);
        SquareMatrix::new(2, vec![p, q, q, p]).unwrap()
    }

    #[test]
    fn ones_gives_factorial() {
        let j = SquareMatrix::ones(6).unwrap();
        assert!((permanent_ryser(&j).unwrap() - c(720.0, 0.0)).norm() < 1e-9);
        assert!((permanent_naive(&j).unwrap() - c(720.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn zero_permanent() {
        let a = zero_permanent_example();
        assert!(permanent_ryser(&a).unwrap().norm() < 1e-14);
        assert!(permanent_naive(&a).unwrap().norm() < 1e-14);
    }

    #[test]
    fn small_cases() {
        let one = SquareMatrix::new(1, vec![c(2.0, -3.0)]).unwrap();
        assert_eq!(permanent_ryser(&one).unwrap(), c(2.0, -3.0));
        assert_eq!(permanent_naive(&one).unwrap(), c(2.0, -3.0));

        let (a, b, cc, d) = (c(1.0, 2.0), c(-0.5, 0.25), c(3.0, 0.0), c(0.0, -1.0));
        let m = SquareMatrix::new(2, vec![a, b, cc, d]).unwrap();
        let expected = a * d + b * cc;
        assert!((permanent_naive(&m).unwrap() - expected).norm() < 1e-15);
        assert!((permanent_ryser(&m).unwrap() - expected).norm() < 1e-14);

        let id = SquareMatrix::identity(4).unwrap();
        assert!((permanent_ryser(&id).unwrap() - ONE).norm() < 1e-14);
        assert_eq!(permanent_naive(&id).unwrap(), ONE);
    }

    #[test]
    fn guards() {
        let big = SquareMatrix::ones(10).unwrap();
        assert!(matches!(permanent_naive(&big), Err(Error::SizeGuard { .. })));
        let huge = SquareMatrix::ones(31).unwrap();
        assert!(matches!(permanent_ryser(&huge), Err(Error::SizeGuard { .. })));
        let s = EvenSymmetricMatrix::ones(22).unwrap();
        assert!(matches!(hafnian_exact(&s), Err(Error::SizeGuard { .. })));
        let t = CubicalTensor::ones(3, 7).unwrap();
        assert!(matches!(multidim_permanent_exact(&t), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn parallel_ryser_matches_serial() {
        let a = SquareMatrix::from_fn(9, |i, j| c(((i * 7 + j * 3) % 5) as f64 * 0.3 - 0.4, (i as f64 - j as f64) * 0.1))
            .unwrap();
        let serial = permanent_ryser(&a).unwrap();
        for threads in [2, 3, 8] {
            let par = permanent_ryser_par(&a, threads).unwrap();
            assert!((par - serial).norm() <= 1e-12 * serial.norm());
            assert_eq!(par, permanent_ryser_par(&a, threads).unwrap());
        }
    }

    #[test]
    fn hafnian_of_ones() {
        let s = EvenSymmetricMatrix::ones(4).unwrap();
        assert_eq!(hafnian_exact(&s).unwrap(), c(3.0, 0.0));
        assert_eq!(hafnian_recursive(&s).unwrap(), c(3.0, 0.0));
    }

    #[test]
    fn hafnian_two_by_two_ignores_diagonal() {
        let s = EvenSymmetricMatrix::new(2, vec![c(9.0, 9.0), c(0.3, -2.0), c(0.3, -2.0), c(-7.0, 0.0)]).unwrap();
        assert_eq!(hafnian_exact(&s).unwrap(), c(0.3, -2.0));
        assert_eq!(hafnian_recursive(&s).unwrap(), c(0.3, -2.0));
    }

    #[test]
    fn multidim_small_cases() {
        let t = CubicalTensor::ones(3, 3).unwrap();
        assert!((multidim_permanent_exact(&t).unwrap() - c(36.0, 0.0)).norm() < 1e-12);

        let t = CubicalTensor::from_fn(3, 2, |idx| {
            c(1.0 + (idx[0] * 4 + idx[1] * 2 + idx[2]) as f64, 0.5 * idx[2] as f64)
        })
        .unwrap();
        let a = |i: usize, j: usize, k: usize| t.get(&[i, j, k]);
        let expected = a(0, 0, 0) * a(1, 1, 1)
            + a(0, 0, 1) * a(1, 1, 0)
            + a(0, 1, 0) * a(1, 0, 1)
            + a(0, 1, 1) * a(1, 0, 0);
        assert!((multidim_permanent_exact(&t).unwrap() - expected).norm() < 1e-12);
    }

    #[test]
    fn term_count() {
        assert_eq!(multidim_term_count(3, 3), 36);
        assert_eq!(multidim_term_count(2, 5), 120);
        assert_eq!(multidim_term_count(4, 30), u64::MAX);
    }
}
