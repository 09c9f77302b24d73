//! Numeric containers and combinatorial helpers shared by every other module.
//!
//! All containers store dense row-major (or lexicographic, for tensors) entries
//! and reject non-finite values at construction. Indices are 0-based.

use itertools::Itertools;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The base field everywhere: a double-precision complex number.
pub type ComplexScalar = Complex64;

pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

fn check_finite(entries: &[Complex64]) -> Result<()> {
    match entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(pos) => Err(Error::InvalidInput(format!(
            "entry {pos} is not finite ({})",
            entries[pos]
        ))),
        None => Ok(()),
    }
}

/// Anything with a flat list of complex entries.
pub trait Entries {
    fn entries(&self) -> &[Complex64];
}

/// `max |z - 1|` over all entries.
pub fn max_deviation_from_one<E: Entries + ?Sized>(m: &E) -> f64 {
    m.entries()
        .iter()
        .map(|z| (z - ONE).norm())
        .fold(0.0, f64::max)
}

/// Result of asking whether a structure lies in the closed polydisc `|z - 1| <= radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolydiscReport {
    pub max_deviation: f64,
    pub radius: f64,
    pub within: bool,
}

pub fn polydisc_report<E: Entries + ?Sized>(m: &E, radius: f64) -> PolydiscReport {
    let max_deviation = max_deviation_from_one(m);
    PolydiscReport {
        max_deviation,
        radius,
        within: max_deviation <= radius,
    }
}

// ---------------------------------------------------------------------------
// Square matrices
// ---------------------------------------------------------------------------

/// An `n x n` complex matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl SquareMatrix {
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("matrix dimension must be at least 1".into()));
        }
        if entries.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        check_finite(&entries)?;
        Ok(Self { n, entries })
    }

    /// Builds a matrix from `f(row, col)`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let entries = (0..n * n).map(|p| f(p / n, p % n)).collect();
        Self::new(n, entries)
    }

    /// The all-ones matrix `J`.
    pub fn ones(n: usize) -> Result<Self> {
        Self::new(n, vec![ONE; n * n])
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| if i == j { ONE } else { ZERO })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.entries[row * self.n..(row + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        Self {
            n,
            entries: (0..n * n).map(|p| self.get(p % n, p / n)).collect(),
        }
    }

    /// Entry `(i, j)` of the result is `self[rows[i], cols[j]]`.
    ///
    /// With `rows` and `cols` both permutations this reorders the matrix; with
    /// shorter index lists it extracts a (square) submatrix.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::InvalidInput("row and column selections differ in length".into()));
        }
        let k = rows.len();
        Self::from_fn(k, |i, j| self.get(rows[i], cols[j]))
    }

    /// `J + z (A - J)`, entrywise `1 + z (a_ij - 1)`.
    pub fn interpolate_from_ones(&self, z: Complex64) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|a| ONE + z * (a - ONE)).collect(),
        }
    }

    /// `A - J`.
    pub fn minus_ones(&self) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|a| a - ONE).collect(),
        }
    }
}

impl Entries for SquareMatrix {
    fn entries(&self) -> &[Complex64] {
        &self.entries
    }
}

// ---------------------------------------------------------------------------
// Even-dimensional symmetric matrices (hafnian input)
// ---------------------------------------------------------------------------

/// A `2n x 2n` symmetric complex matrix.
///
/// Construction from an arbitrary array treats the upper triangle (including
/// the diagonal) as authoritative and mirrors it onto the lower triangle, so
/// the stored matrix is exactly symmetric. [`EvenSymmetricMatrix::new_strict`]
/// rejects asymmetric input instead.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenSymmetricMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl EvenSymmetricMatrix {
    fn check_shape(dim: usize, len: usize) -> Result<()> {
        if dim < 2 || !dim.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "symmetric matrix dimension must be even and at least 2, got {dim}"
            )));
        }
        if len != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {len}",
                dim * dim
            )));
        }
        Ok(())
    }

    /// Mirrors the upper triangle of `entries` onto the lower triangle.
    pub fn new(dim: usize, mut entries: Vec<Complex64>) -> Result<Self> {
        Self::check_shape(dim, entries.len())?;
        for i in 0..dim {
            for j in 0..i {
                entries[i * dim + j] = entries[j * dim + i];
            }
        }
        check_finite(&entries)?;
        Ok(Self { dim, entries })
    }

    /// Rejects any entry with `a_ij != a_ji` (bitwise comparison of values).
    pub fn new_strict(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        Self::check_shape(dim, entries.len())?;
        for i in 0..dim {
            for j in 0..i {
                if entries[i * dim + j] != entries[j * dim + i] {
                    return Err(Error::InvalidInput(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        check_finite(&entries)?;
        Ok(Self { dim, entries })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                entries[i * dim + j] = f(i, j);
            }
        }
        Self::new(dim, entries)
    }

    pub fn ones(dim: usize) -> Result<Self> {
        Self::new(dim, vec![ONE; dim * dim])
    }

    /// `[[0, A], [A^T, 0]]`, whose hafnian equals `per A`.
    pub fn bipartite_block(a: &SquareMatrix) -> Self {
        let n = a.n();
        let dim = 2 * n;
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..n {
            for j in 0..n {
                entries[i * dim + n + j] = a.get(i, j);
                entries[(n + j) * dim + i] = a.get(i, j);
            }
        }
        Self { dim, entries }
    }

    /// Side length `2n`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of pairs in a perfect matching, `n`.
    #[inline]
    pub fn pairs(&self) -> usize {
        self.dim / 2
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    /// Principal submatrix on `indices` (length must be even and nonzero).
    pub fn principal(&self, indices: &[usize]) -> Result<Self> {
        let k = indices.len();
        Self::check_shape(k, k * k)?;
        let entries = (0..k * k)
            .map(|p| self.get(indices[p / k], indices[p % k]))
            .collect();
        Ok(Self { dim: k, entries })
    }

    pub fn interpolate_from_ones(&self, z: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| ONE + z * (a - ONE)).collect(),
        }
    }

    pub fn minus_ones(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a - ONE).collect(),
        }
    }

    /// Largest `|a_ij - 1|` over off-diagonal entries. The diagonal never
    /// enters a hafnian, so this is the deviation that matters for the
    /// zero-free region.
    pub fn max_offdiagonal_deviation(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                best = best.max((self.get(i, j) - ONE).norm());
            }
        }
        best
    }
}

impl Entries for EvenSymmetricMatrix {
    fn entries(&self) -> &[Complex64] {
        &self.entries
    }
}

// ---------------------------------------------------------------------------
// Cubical tensors (multidimensional permanent input)
// ---------------------------------------------------------------------------

/// A `nu`-dimensional `n x ... x n` array, stored in lexicographic index order.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicalTensor {
    nu: usize,
    n: usize,
    entries: Vec<Complex64>,
}

fn checked_pow(n: usize, nu: usize) -> Option<usize> {
    (0..nu).try_fold(1usize, |acc, _| acc.checked_mul(n))
}

impl CubicalTensor {
    pub fn new(nu: usize, n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if nu < 2 {
            return Err(Error::InvalidInput(format!("tensor arity must be at least 2, got {nu}")));
        }
        if n == 0 {
            return Err(Error::InvalidInput("tensor side must be at least 1".into()));
        }
        let expected = checked_pow(n, nu)
            .ok_or_else(|| Error::InvalidInput("tensor size overflows".into()))?;
        if entries.len() != expected {
            return Err(Error::InvalidInput(format!(
                "expected {expected} entries for a {nu}-dimensional tensor of side {n}, got {}",
                entries.len()
            )));
        }
        check_finite(&entries)?;
        Ok(Self { nu, n, entries })
    }

    /// Builds a tensor from `f(index)`, `index.len() == nu`.
    pub fn from_fn(nu: usize, n: usize, mut f: impl FnMut(&[usize]) -> Complex64) -> Result<Self> {
        let total = checked_pow(n, nu)
            .ok_or_else(|| Error::InvalidInput("tensor size overflows".into()))?;
        let mut index = vec![0usize; nu];
        let mut entries = Vec::with_capacity(total);
        for _ in 0..total {
            entries.push(f(&index));
            for axis in (0..nu).rev() {
                index[axis] += 1;
                if index[axis] < n {
                    break;
                }
                index[axis] = 0;
            }
        }
        Self::new(nu, n, entries)
    }

    pub fn ones(nu: usize, n: usize) -> Result<Self> {
        let total = checked_pow(n, nu)
            .ok_or_else(|| Error::InvalidInput("tensor size overflows".into()))?;
        Self::new(nu, n, vec![ONE; total])
    }

    /// A 2-dimensional tensor with the same entries as `a`.
    pub fn from_matrix(a: &SquareMatrix) -> Self {
        Self {
            nu: 2,
            n: a.n(),
            entries: a.entries().to_vec(),
        }
    }

    #[inline]
    pub fn nu(&self) -> usize {
        self.nu
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.nu);
        index.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    #[inline]
    pub fn get(&self, index: &[usize]) -> Complex64 {
        self.entries[self.offset(index)]
    }

    /// Sub-tensor keeping `selections[axis]` along each axis. All selections
    /// must have the same nonzero length.
    pub fn select(&self, selections: &[Vec<usize>]) -> Result<Self> {
        if selections.len() != self.nu {
            return Err(Error::InvalidInput("one selection per axis is required".into()));
        }
        let k = selections[0].len();
        if selections.iter().any(|s| s.len() != k) {
            return Err(Error::InvalidInput("selections differ in length".into()));
        }
        let mut full = vec![0usize; self.nu];
        Self::from_fn(self.nu, k, |idx| {
            for (axis, &i) in idx.iter().enumerate() {
                full[axis] = selections[axis][i];
            }
            self.get(&full)
        })
    }

    pub fn interpolate_from_ones(&self, z: Complex64) -> Self {
        Self {
            nu: self.nu,
            n: self.n,
            entries: self.entries.iter().map(|a| ONE + z * (a - ONE)).collect(),
        }
    }

    pub fn minus_ones(&self) -> Self {
        Self {
            nu: self.nu,
            n: self.n,
            entries: self.entries.iter().map(|a| a - ONE).collect(),
        }
    }
}

impl Entries for CubicalTensor {
    fn entries(&self) -> &[Complex64] {
        &self.entries
    }
}

// ---------------------------------------------------------------------------
// Combinatorics
// ---------------------------------------------------------------------------

/// Ordered `k`-tuples of distinct indices from `0..n`, in lexicographic order.
///
/// Yields `n! / (n - k)!` tuples; none when `k > n`.
pub fn enumerate_k_tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).permutations(k)
}

/// `k`-subsets of `0..n` as sorted index lists, in lexicographic order.
pub fn enumerate_k_subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).combinations(k)
}

/// `ln(n!)`, summed term by term.
pub fn log_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `n!` as a double. Exact up to `n = 22`, correctly scaled up to `n = 170`.
pub fn factorial(n: u64) -> f64 {
    (2..=n).map(|k| k as f64).product()
}

/// `C(n, k)` as a double; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

/// Number of perfect matchings of `2r` points, `(2r)! / (r! 2^r) = (2r - 1)!!`.
pub fn perfect_matchings(r: u64) -> f64 {
    (1..=r).map(|i| (2 * i - 1) as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn deviation_of_ones_is_zero() {
        assert_eq!(max_deviation_from_one(&SquareMatrix::ones(3).unwrap()), 0.0);
    }

    #[test]
    fn deviation_of_single_entry() {
        let m = SquareMatrix::new(1, vec![c(1.19, 0.0)]).unwrap();
        assert!((max_deviation_from_one(&m) - 0.19).abs() < 1e-15);
    }

    #[test]
    fn deviation_of_zero_permanent_example() {
        let p = c(0.5, 0.5);
        let q = c(0.5, -0.5);
        let m = SquareMatrix::new(2, vec![p, q, q, p]).unwrap();
        assert!((max_deviation_from_one(&m) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn polydisc_membership() {
        let m = SquareMatrix::new(1, vec![c(1.0, 0.1)]).unwrap();
        assert!(polydisc_report(&m, 0.195).within);
        assert!(!polydisc_report(&m, 0.05).within);
    }

    #[test]
    fn tuple_counts() {
        assert_eq!(enumerate_k_tuples(3, 1).collect::<Vec<_>>(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(enumerate_k_tuples(3, 2).count(), 6);
        assert_eq!(enumerate_k_tuples(4, 4).count(), 24);
        assert_eq!(enumerate_k_tuples(3, 4).count(), 0);
        assert_eq!(enumerate_k_tuples(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn tuples_are_lexicographic() {
        let all: Vec<_> = enumerate_k_tuples(4, 3).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn tuple_counts_exhaustive() {
        for n in 0..=8usize {
            for k in 0..=n {
                let tuples: Vec<_> = enumerate_k_tuples(n, k).collect();
                let expected = (n - k + 1..=n).product::<usize>();
                assert_eq!(tuples.len(), expected, "n={n} k={k}");
                assert!(tuples.iter().all(|t| t.iter().all_unique()));
                assert!(tuples.iter().all_unique());
            }
        }
    }

    #[test]
    fn log_factorial_small() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        assert!((log_factorial(5) - 120f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn binomials_and_matchings() {
        assert_eq!(binomial(10, 5), 252.0);
        assert_eq!(binomial(3, 4), 0.0);
        assert_eq!(perfect_matchings(0), 1.0);
        assert_eq!(perfect_matchings(2), 3.0);
        assert_eq!(perfect_matchings(3), 15.0);
        assert_eq!(factorial(6), 720.0);
    }

    #[test]
    fn square_matrix_rejects_bad_shapes() {
        assert!(SquareMatrix::new(0, vec![]).is_err());
        assert!(SquareMatrix::new(2, vec![ONE; 3]).is_err());
        assert!(SquareMatrix::new(1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(SquareMatrix::new(1, vec![c(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn symmetric_mirrors_upper_triangle() {
        let raw = vec![c(1.0, 0.0), c(2.0, 1.0), c(9.0, 9.0), c(4.0, 0.0)];
        let s = EvenSymmetricMatrix::new(2, raw.clone()).unwrap();
        assert_eq!(s.get(1, 0), c(2.0, 1.0));
        assert_eq!(s.get(0, 1), s.get(1, 0));
        assert!(EvenSymmetricMatrix::new_strict(2, raw).is_err());
        assert!(EvenSymmetricMatrix::new(3, vec![ONE; 9]).is_err());
    }

    #[test]
    fn bipartite_block_layout() {
        let a = SquareMatrix::from_fn(2, |i, j| c((i * 2 + j) as f64, 0.0)).unwrap();
        let s = EvenSymmetricMatrix::bipartite_block(&a);
        assert_eq!(s.dim(), 4);
        assert_eq!(s.get(0, 0), ZERO);
        assert_eq!(s.get(0, 3), a.get(0, 1));
        assert_eq!(s.get(3, 0), a.get(0, 1));
        assert_eq!(s.get(1, 2), a.get(1, 0));
    }

    #[test]
    fn tensor_indexing_is_lexicographic() {
        let t = CubicalTensor::from_fn(3, 2, |idx| c((idx[0] * 4 + idx[1] * 2 + idx[2]) as f64, 0.0))
            .unwrap();
        for (p, z) in t.entries().iter().enumerate() {
            assert_eq!(z.re, p as f64);
        }
        assert_eq!(t.get(&[1, 0, 1]).re, 5.0);
        assert!(CubicalTensor::new(1, 2, vec![ONE; 2]).is_err());
        assert!(CubicalTensor::new(3, 2, vec![ONE; 7]).is_err());
    }

    #[test]
    fn tensor_selection() {
        let t = CubicalTensor::from_fn(3, 3, |idx| c((idx[0] * 9 + idx[1] * 3 + idx[2]) as f64, 0.0))
            .unwrap();
        let s = t.select(&[vec![2], vec![0], vec![1]]).unwrap();
        assert_eq!(s.n(), 1);
        assert_eq!(s.get(&[0, 0, 0]).re, 19.0);
    }

    #[test]
    fn matrix_select_and_transpose() {
        let a = SquareMatrix::from_fn(3, |i, j| c(i as f64, j as f64)).unwrap();
        let t = a.transpose();
        assert_eq!(t.get(0, 2), a.get(2, 0));
        let sub = a.select(&[2, 0], &[1, 2]).unwrap();
        assert_eq!(sub.get(0, 1), a.get(2, 2));
        assert_eq!(sub.get(1, 0), a.get(0, 1));
    }
}
