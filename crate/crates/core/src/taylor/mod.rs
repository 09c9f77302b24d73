//! Taylor interpolation of `f(z) = ln g(z)` from the all-ones structure.
//!
//! For a structure `A` near the all-ones structure `J`, let
//! `g(z) = per(J + z (A - J))` (or the hafnian / multidimensional analogue), so
//! `g(0)` is a known count and `g(1)` is the quantity we want. With
//! `f = ln g` the estimate is the degree-`m` Taylor polynomial of `f` at 0,
//! evaluated at 1:
//!
//! ```text
//! ln g(1) ~ f(0) + sum_{k=1}^{m} f^(k)(0) / k!
//! ```
//!
//! The derivatives of `g` at 0 are sums over small sub-structures (see
//! [`providers`]); those of `f` follow from `g' = g f'`, a lower-triangular
//! system solved forward. If `g` has no roots in `|z| <= beta` with `beta > 1`,
//! the truncation error is at most `n / ((m + 1) beta^m (beta - 1))`, where
//! `n` bounds the degree of `g`.
//!
//! Internally everything is carried as normalized Taylor coefficients
//! `g^(k)(0) / (k! g(0))` and `f^(k)(0) / k!`, which stay bounded for any order;
//! raw derivatives overflow a double once `k` passes ~170.

pub mod providers;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{binomial, factorial, ONE, ZERO};

pub use providers::{
    hafnian_g_derivatives, hafnian_g_derivatives_by_sequences, permanent_g_derivatives,
    permanent_g_derivatives_by_tuples, tensor_g_derivatives, tensor_g_derivatives_by_tuples,
    HafnianProvider, PermanentProvider, TensorProvider,
};

/// Hard ceiling on the Taylor order. Far above anything `choose_order` returns
/// for `beta` not pathologically close to 1.
pub const MAX_ORDER: usize = 1 << 20;

/// Source of the derivatives of `g(z)` at 0 for one input structure.
pub trait DerivativeProvider {
    /// `f(0) = ln g(0)`: `ln n!`, `ln((2n)! / (n! 2^n))` or `(nu - 1) ln n!`.
    fn base_log_value(&self) -> f64;

    /// Upper bound on the degree of `g`, and on the number of its roots.
    fn degree_bound(&self) -> usize;

    /// `g^(k)(0) / (k! g(0))` for `k = 0..=order`. Entry 0 is exactly 1 and
    /// entries past [`degree_bound`](Self::degree_bound) are exactly 0.
    fn relative_coefficients(&self, order: usize) -> Result<Vec<Complex64>>;

    /// Deviation of the input from `J` that governs the zero-free region.
    fn gamma(&self) -> f64;

    /// Proven zero-free radius for this kind of structure.
    fn default_delta(&self) -> Result<f64>;

    /// `g^(k)(0)` for `k = 0..=order`.
    fn g_derivatives(&self, order: usize) -> Result<Vec<Complex64>> {
        let scale = self.base_log_value().exp();
        Ok(self
            .relative_coefficients(order)?
            .into_iter()
            .enumerate()
            .map(|(k, c)| c * scale * factorial(k as u64))
            .collect())
    }
}

/// Solves `g^(k) = sum_{j=0}^{k-1} C(k-1, j) g^(j) f^(k-j)` for `f^(k)(0)`, `k = 1..`,
/// given raw derivatives `g^(0..=m)(0)`.
///
/// Entry 0 of the result is the principal `ln g(0)`; entry `k` is `f^(k)(0)`.
pub fn f_derivatives_from_g(g: &[Complex64]) -> Result<Vec<Complex64>> {
    let g0 = *g.first().ok_or_else(|| Error::InvalidParameter("empty derivative list".into()))?;
    if g0 == ZERO {
        return Err(Error::SingularBase);
    }
    let mut f = Vec::with_capacity(g.len());
    f.push(g0.ln());
    for k in 1..g.len() {
        let mut acc = g[k];
        for j in 1..k {
            acc -= g[j] * f[k - j] * binomial((k - 1) as u64, j as u64);
        }
        f.push(acc / g0);
    }
    Ok(f)
}

/// Forward evaluation of the same identity: rebuilds `g^(1..=m)(0)` from
/// `g(0)` and `f^(1..=m)(0)` (entry 0 of `f` is ignored).
pub fn g_derivatives_from_f(g0: Complex64, f: &[Complex64]) -> Vec<Complex64> {
    let mut g = Vec::with_capacity(f.len().max(1));
    g.push(g0);
    for k in 1..f.len() {
        let mut acc = ZERO;
        for j in 0..k {
            acc += g[j] * f[k - j] * binomial((k - 1) as u64, j as u64);
        }
        g.push(acc);
    }
    g
}

/// Normalized form of [`f_derivatives_from_g`]: from `b_k = g^(k)(0)/k!` to
/// `a_k = f^(k)(0)/k!` for `k = 1..=order`, via
/// `k b_k = sum_{j=0}^{k-1} (k - j) a_{k-j} b_j`.
///
/// `b` may be shorter than `order + 1`; missing entries are zero. Entry 0 of
/// the result is the principal `ln b_0`.
pub fn log_coefficients(b: &[Complex64], order: usize) -> Result<Vec<Complex64>> {
    let b0 = *b.first().ok_or_else(|| Error::InvalidParameter("empty coefficient list".into()))?;
    if b0 == ZERO {
        return Err(Error::SingularBase);
    }
    let last = b.len() - 1;
    let mut a = Vec::with_capacity(order + 1);
    a.push(b0.ln());
    for k in 1..=order {
        let kf = k as f64;
        let mut acc = if k <= last { b[k] * kf } else { ZERO };
        for j in 1..k.min(last + 1) {
            acc -= b[j] * a[k - j] * (k - j) as f64;
        }
        a.push(acc / (b0 * kf));
    }
    Ok(a)
}

/// Inverse of [`log_coefficients`]: rebuilds `b_0..=b_order` from `b_0` and `a_1..`.
pub fn poly_coefficients_from_log(b0: Complex64, a: &[Complex64]) -> Vec<Complex64> {
    let mut b = Vec::with_capacity(a.len().max(1));
    b.push(b0);
    for k in 1..a.len() {
        let mut acc = ZERO;
        for j in 0..k {
            acc += b[j] * a[k - j] * (k - j) as f64;
        }
        b.push(acc / k as f64);
    }
    b
}

/// `n / ((m + 1) beta^m (beta - 1))`, evaluated in log space.
pub fn additive_bound(n_effective: usize, order: usize, beta: f64) -> f64 {
    if beta.is_infinite() {
        return 0.0;
    }
    ((n_effective as f64).ln() - ((order + 1) as f64).ln() - order as f64 * beta.ln() - (beta - 1.0).ln())
        .exp()
}

/// Relative error implied by an additive error `eta` on the logarithm: `e^eta - 1`.
pub fn relative_bound(additive: f64) -> f64 {
    additive.exp_m1()
}

/// Smallest `m >= 1` with `n / ((m + 1) beta^m (beta - 1)) <= ln(1 + epsilon)`.
pub fn choose_order(n_effective: usize, beta: f64, epsilon: f64) -> Result<usize> {
    if n_effective == 0 {
        return Err(Error::InvalidParameter("n_effective must be at least 1".into()));
    }
    if beta.is_nan() || beta <= 1.0 {
        return Err(Error::InvalidParameter(format!("beta must exceed 1, got {beta}")));
    }
    check_epsilon(epsilon)?;
    let target = epsilon.ln_1p();
    (1..=MAX_ORDER)
        .find(|&m| additive_bound(n_effective, m, beta) <= target)
        .ok_or(Error::OrderCap { cap: MAX_ORDER })
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {epsilon}")))
    }
}

fn check_region(gamma: f64, delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!("gamma must be finite and nonnegative, got {gamma}")));
    }
    if gamma >= delta {
        return Err(Error::OutsideRegion { gamma, delta });
    }
    Ok(())
}

/// Normalized Taylor coefficients of `g` and `ln g` up to a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeTable {
    degree_bound: usize,
    base_log_value: f64,
    g: Vec<Complex64>,
    f: Vec<Complex64>,
}

impl DerivativeTable {
    pub fn build<P: DerivativeProvider + ?Sized>(provider: &P, order: usize) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::InvalidParameter(format!("order {order} exceeds {MAX_ORDER}")));
        }
        let degree = provider.degree_bound();
        let g = provider.relative_coefficients(order.min(degree))?;
        Self::from_relative_coefficients(degree, provider.base_log_value(), g, order)
    }

    /// `g` holds `g^(k)(0)/(k! g(0))`; it may be shorter than `order + 1`.
    pub fn from_relative_coefficients(
        degree_bound: usize,
        base_log_value: f64,
        mut g: Vec<Complex64>,
        order: usize,
    ) -> Result<Self> {
        let mut f = log_coefficients(&g, order)?;
        f[0] = Complex64::new(base_log_value, 0.0) + f[0];
        g.resize(order + 1, ZERO);
        Ok(Self {
            degree_bound,
            base_log_value,
            g,
            f,
        })
    }

    pub fn order(&self) -> usize {
        self.f.len() - 1
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn base_log_value(&self) -> f64 {
        self.base_log_value
    }

    /// `g^(k)(0) / (k! g(0))`.
    pub fn g_coefficients(&self) -> &[Complex64] {
        &self.g
    }

    /// `f^(k)(0) / k!`; entry 0 is `f(0)`.
    pub fn f_coefficients(&self) -> &[Complex64] {
        &self.f
    }

    /// `g^(k)(0)`. Overflows to infinity for large `k`.
    pub fn g_derivative(&self, k: usize) -> Complex64 {
        self.g[k] * self.base_log_value.exp() * factorial(k as u64)
    }

    /// `f^(k)(0)`. Overflows to infinity for large `k`.
    pub fn f_derivative(&self, k: usize) -> Complex64 {
        self.f[k] * factorial(k as u64)
    }

    /// `f(0) + sum_{k=1}^{order} f^(k)(0)/k!`.
    pub fn log_estimate(&self, order: usize) -> Complex64 {
        self.f[..=order].iter().sum()
    }

    /// Worst componentwise error of rebuilding the `g` coefficients from the
    /// `f` coefficients, each measured relative to the larger of `|b_k|` and
    /// the magnitude of the terms that rebuild it.
    pub fn round_trip_error(&self) -> f64 {
        let mut a = self.f.clone();
        a[0] = ZERO;
        let rebuilt = poly_coefficients_from_log(ONE, &a);
        let mut worst = 0.0f64;
        for k in 1..self.g.len() {
            let terms: f64 = (0..k)
                .map(|j| self.g[j].norm() * a[k - j].norm() * (k - j) as f64)
                .sum::<f64>()
                / k as f64;
            let scale = self.g[k].norm().max(terms);
            if scale > 0.0 {
                worst = worst.max((rebuilt[k] - self.g[k]).norm() / scale);
            }
        }
        worst
    }

    /// The estimate at `order <= self.order()` with the bound for `beta = delta / gamma`.
    pub fn approximation(&self, order: usize, gamma: f64, delta: f64) -> Result<ApproxResult> {
        check_region(gamma, delta)?;
        if order > self.order() {
            return Err(Error::InvalidParameter(format!(
                "order {order} exceeds table order {}",
                self.order()
            )));
        }
        if gamma == 0.0 {
            return Ok(ApproxResult::exact_base(self.base_log_value, self.degree_bound, delta));
        }
        let beta = delta / gamma;
        let log_estimate = self.log_estimate(order);
        let additive = additive_bound(self.degree_bound, order, beta);
        Ok(ApproxResult {
            log_estimate,
            value: log_estimate.exp(),
            order_used: order,
            n_effective: self.degree_bound,
            beta,
            gamma,
            delta,
            additive_bound: additive,
            relative_bound: relative_bound(additive),
            round_trip_error: self.round_trip_error(),
        })
    }
}

/// Estimate of `ln g(1)` and `g(1)` with its guaranteed error bounds.
///
/// The bounds hold whenever `g` has no roots in `|z| <= beta`, which is the
/// case for inputs inside the zero-free polydisc of radius `delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxResult {
    pub log_estimate: Complex64,
    pub value: Complex64,
    pub order_used: usize,
    pub n_effective: usize,
    /// `delta / gamma`; infinite when the input is exactly `J`.
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    /// Bound on `|ln g(1) - log_estimate|`.
    pub additive_bound: f64,
    /// `exp(additive_bound) - 1`, a bound on `|g(1) / value - 1|`.
    pub relative_bound: f64,
    /// [`DerivativeTable::round_trip_error`] of the table behind this estimate.
    pub round_trip_error: f64,
}

impl ApproxResult {
    fn exact_base(base_log_value: f64, n_effective: usize, delta: f64) -> Self {
        let log_estimate = Complex64::new(base_log_value, 0.0);
        Self {
            log_estimate,
            value: log_estimate.exp(),
            order_used: 0,
            n_effective,
            beta: f64::INFINITY,
            gamma: 0.0,
            delta,
            additive_bound: 0.0,
            relative_bound: 0.0,
            round_trip_error: 0.0,
        }
    }
}

/// Approximates `g(1)` to relative error `epsilon`, picking the order from the bound.
pub fn approximate<P: DerivativeProvider + ?Sized>(
    provider: &P,
    gamma: f64,
    delta: f64,
    epsilon: f64,
) -> Result<ApproxResult> {
    check_epsilon(epsilon)?;
    check_region(gamma, delta)?;
    if gamma == 0.0 {
        return Ok(ApproxResult::exact_base(
            provider.base_log_value(),
            provider.degree_bound(),
            delta,
        ));
    }
    let order = choose_order(provider.degree_bound(), delta / gamma, epsilon)?;
    DerivativeTable::build(provider, order)?.approximation(order, gamma, delta)
}

/// Approximates `g(1)` with a fixed Taylor order, reporting the bound that order achieves.
pub fn approximate_at_order<P: DerivativeProvider + ?Sized>(
    provider: &P,
    gamma: f64,
    delta: f64,
    order: usize,
) -> Result<ApproxResult> {
    check_region(gamma, delta)?;
    if gamma == 0.0 {
        return Ok(ApproxResult::exact_base(
            provider.base_log_value(),
            provider.degree_bound(),
            delta,
        ));
    }
    DerivativeTable::build(provider, order)?.approximation(order, gamma, delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exponential_sequence_has_linear_log() {
        let (scale, lambda) = (c(3.0, -1.0), c(0.4, 0.7));
        let g: Vec<_> = (0..8).map(|k| scale * lambda.powu(k)).collect();
        let f = f_derivatives_from_g(&g).unwrap();
        assert!((f[1] - lambda).norm() < 1e-14);
        for fk in &f[2..] {
            assert!(fk.norm() < 1e-13);
        }
    }

    #[test]
    fn one_plus_z_gives_log_series() {
        let mut g = vec![ZERO; 9];
        g[0] = ONE;
        g[1] = ONE;
        let f = f_derivatives_from_g(&g).unwrap();
        for k in 1..9 {
            let expected = if k % 2 == 1 { 1.0 } else { -1.0 } * factorial(k as u64 - 1);
            assert!((f[k] - c(expected, 0.0)).norm() <= 1e-12 * expected.abs());
        }
    }

    #[test]
    fn singular_base_is_rejected() {
        assert_eq!(f_derivatives_from_g(&[ZERO, ONE]), Err(Error::SingularBase));
        assert_eq!(log_coefficients(&[ZERO, ONE], 3), Err(Error::SingularBase));
    }

    #[test]
    fn raw_and_normalized_solvers_agree() {
        let g = [c(24.0, 0.0), c(-3.0, 2.0), c(1.5, -0.5), c(0.25, 0.75), c(-0.1, 0.0)];
        let raw = f_derivatives_from_g(&g).unwrap();
        let b: Vec<_> = g.iter().enumerate().map(|(k, x)| x / factorial(k as u64)).collect();
        let norm = log_coefficients(&b, 6).unwrap();
        for k in 1..g.len() {
            let from_norm = norm[k] * factorial(k as u64);
            assert!((from_norm - raw[k]).norm() <= 1e-12 * raw[k].norm().max(1.0));
        }
        let back = g_derivatives_from_f(g[0], &raw);
        for k in 0..g.len() {
            assert!((back[k] - g[k]).norm() <= 1e-12 * g[k].norm().max(1.0));
        }
    }

    #[test]
    fn normalized_round_trip() {
        let b = vec![ONE, c(0.3, -0.2), c(-0.05, 0.1), c(0.01, 0.0)];
        let a = log_coefficients(&b, 12).unwrap();
        let rebuilt = poly_coefficients_from_log(ONE, &a);
        for k in 0..=12 {
            let want = b.get(k).copied().unwrap_or(ZERO);
            assert!((rebuilt[k] - want).norm() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn choose_order_examples() {
        assert_eq!(choose_order(1, 2.0, 0.5).unwrap(), 1);
        let beta = 195.0 / 190.0;
        let m = choose_order(10, beta, 0.1).unwrap();
        assert!(additive_bound(10, m, beta) <= 0.1f64.ln_1p());
        assert!(additive_bound(10, m - 1, beta) > 0.1f64.ln_1p());
        assert!(choose_order(10, beta, 0.01).unwrap() >= m);
    }

    #[test]
    fn choose_order_rejects_bad_parameters() {
        assert!(choose_order(0, 2.0, 0.1).is_err());
        assert!(choose_order(3, 1.0, 0.1).is_err());
        assert!(choose_order(3, f64::NAN, 0.1).is_err());
        assert!(choose_order(3, 2.0, 0.0).is_err());
        assert!(choose_order(3, 2.0, 1.0).is_err());
    }

    #[test]
    fn additive_bound_matches_formula() {
        let (n, m, beta) = (7usize, 12usize, 1.3f64);
        let direct = n as f64 / ((m + 1) as f64 * beta.powi(m as i32) * (beta - 1.0));
        assert!((additive_bound(n, m, beta) - direct).abs() <= 1e-13 * direct);
        assert_eq!(additive_bound(n, m, f64::INFINITY), 0.0);
        for m in 0..50 {
            assert!(additive_bound(n, m + 1, beta) < additive_bound(n, m, beta));
        }
    }

    #[test]
    fn region_checks() {
        assert_eq!(
            check_region(0.2, 0.195),
            Err(Error::OutsideRegion { gamma: 0.2, delta: 0.195 })
        );
        assert!(check_region(0.1, 0.0).is_err());
        assert!(check_region(f64::NAN, 0.195).is_err());
        assert!(check_region(0.0, 0.195).is_ok());
    }
}
