//! Zero-free region constants and empirical nonvanishing probes.
//!
//! For `nu >= 2` and a radius `delta`, the angle bound `theta` solves
//!
//! ```text
//! theta = 2 delta / ((1 - delta) sqrt(cos((nu - 1) theta + 2 asin delta)))
//! ```
//!
//! inside the window `(nu - 1) theta + 2 asin delta < pi / 2`, and the shrink
//! factor is `tau = sqrt(cos((nu - 1) theta + 2 asin delta))`. Whenever such a
//! `theta` exists, permanents (hafnians, multidimensional permanents) of inputs
//! whose entries all lie within `delta` of 1 are nonzero.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{permanent_ryser, RYSER_MAX_N};
use crate::format;
use crate::numerics::SquareMatrix;
use crate::parallel::chunked_map;

/// Zero-free radius for permanents and hafnians.
pub const DELTA_PERMANENT: f64 = 0.195;
/// Zero-free radius for 3-dimensional permanents.
pub const DELTA_3: f64 = 0.125;
/// Zero-free radius for 4-dimensional permanents.
pub const DELTA_4: f64 = 0.093;

/// Grid resolution used when no published radius exists for an arity.
pub const DEFAULT_RESOLUTION: f64 = 0.001;

/// Default zero-free radius for arity `nu` (2 for matrices and hafnians).
pub fn default_delta(nu: usize) -> Result<f64> {
    match nu {
        0 | 1 => Err(Error::InvalidParameter(format!("nu must be at least 2, got {nu}"))),
        2 => Ok(DELTA_PERMANENT),
        3 => Ok(DELTA_3),
        4 => Ok(DELTA_4),
        _ => max_admissible_delta(nu, DEFAULT_RESOLUTION),
    }
}

/// Solution of the angle equation for one `(delta, nu)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionConstants {
    pub nu: usize,
    pub delta: f64,
    /// Smallest root.
    pub theta: f64,
    pub tau: f64,
    /// Every root found in the admissible window, ascending.
    pub roots: Vec<f64>,
}

impl RegionConstants {
    /// `theta - 2 delta / ((1 - delta) sqrt(cos(...)))`, evaluated at the stored `theta`.
    pub fn residual(&self) -> f64 {
        let arg = (self.nu - 1) as f64 * self.theta + 2.0 * self.delta.asin();
        self.theta - 2.0 * self.delta / ((1.0 - self.delta) * arg.cos().sqrt())
    }

    /// Whether `(nu - 1) theta + 2 asin delta < pi/2`.
    pub fn in_window(&self) -> bool {
        (self.nu - 1) as f64 * self.theta + 2.0 * self.delta.asin() < FRAC_PI_2
    }
}

/// Rearranged residual `theta (1 - delta) sqrt(cos(a theta + b)) - 2 delta`, which
/// is finite on the whole closed window.
fn rearranged(theta: f64, delta: f64, slope: f64, offset: f64) -> f64 {
    let c = (slope * theta + offset).cos().max(0.0);
    theta * (1.0 - delta) * c.sqrt() - 2.0 * delta
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        if hi - lo <= 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if (fmid > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section search for the maximizer of a unimodal function on `[lo, hi]`.
fn golden_max(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-14 {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Smallest `theta >= 0` solving the angle equation in the admissible window.
///
/// The rearranged residual is `-2 delta` at both ends of the window and is
/// log-concave plus a constant in between, so it has at most two roots. The
/// maximizer is located by golden-section search and each sign change on
/// either side of it is bisected.
pub fn solve_theta(delta: f64, nu: usize) -> Result<RegionConstants> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
    }
    if nu < 2 {
        return Err(Error::InvalidParameter(format!("nu must be at least 2, got {nu}")));
    }
    let slope = (nu - 1) as f64;
    let offset = 2.0 * delta.asin();
    let theta_max = (FRAC_PI_2 - offset) / slope;
    if theta_max <= 0.0 {
        return Err(Error::NoSolution { delta, nu });
    }
    let f = |t: f64| rearranged(t, delta, slope, offset);
    let peak = golden_max(0.0, theta_max, f);
    let top = f(peak);
    if top < 0.0 {
        return Err(Error::NoSolution { delta, nu });
    }
    let theta = if top == 0.0 { peak } else { bisect(0.0, peak, f) };
    let mut roots = vec![theta];
    if top > 0.0 {
        roots.push(bisect(peak, theta_max, f));
    }
    let tau = (slope * theta + offset).cos().sqrt();
    Ok(RegionConstants {
        nu,
        delta,
        theta,
        tau,
        roots,
    })
}

/// Largest `delta` on the grid `{r, 2r, 3r, ...} ∩ (0, 1)` for which
/// [`solve_theta`] succeeds; `0.0` if none does.
pub fn max_admissible_delta(nu: usize, resolution: f64) -> Result<f64> {
    if nu < 2 {
        return Err(Error::InvalidParameter(format!("nu must be at least 2, got {nu}")));
    }
    if !(resolution > 0.0 && resolution < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "resolution must lie in (0, 1), got {resolution}"
        )));
    }
    let steps = (1.0 / resolution).ceil() as usize;
    Ok((1..steps)
        .map(|i| i as f64 * resolution)
        .filter(|&d| d < 1.0 && solve_theta(d, nu).is_ok())
        .fold(0.0, f64::max))
}

// ---------------------------------------------------------------------------
// Nonvanishing probe
// ---------------------------------------------------------------------------

/// Human-readable description of the probe's sampling scheme, included in reports.
pub const PROBE_DISTRIBUTION: &str = "entries 1 + r*exp(i*phi), r ~ U[0, radius], phi ~ U[0, 2pi), \
drawn row-major as (r, phi) pairs; ChaCha20 keyed by the little-endian seed, stream = trial index, \
uniforms = (next_u64 >> 11) * 2^-53";

/// Outcome of [`probe_nonvanishing`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub n: usize,
    pub radius: f64,
    pub trials: u64,
    pub seed: u64,
    pub min_modulus: f64,
    pub argmin_trial: u64,
    pub argmin_matrix: SquareMatrix,
}

impl ProbeReport {
    /// Line-oriented `key: value` text; the matrix line uses the shared matrix file format.
    pub fn to_text(&self) -> String {
        format!(
            "n: {}\nradius: {}\ntrials: {}\nseed: {}\ndistribution: {}\nmin_modulus: {}\nargmin_trial: {}\nargmin_matrix: {}\n",
            self.n,
            format::fmt_f64(self.radius),
            self.trials,
            self.seed,
            PROBE_DISTRIBUTION,
            format::fmt_f64(self.min_modulus),
            self.argmin_trial,
            format::write_matrix(&self.argmin_matrix),
        )
    }
}

fn uniform(rng: &mut ChaCha20Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// The matrix sampled for `trial` under `seed`.
pub fn probe_sample(n: usize, radius: f64, seed: u64, trial: u64) -> SquareMatrix {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    let mut rng = ChaCha20Rng::from_seed(key);
    rng.set_stream(trial);
    let entries = (0..n * n)
        .map(|_| {
            let r = radius * uniform(&mut rng);
            let phi = TAU * uniform(&mut rng);
            Complex64::new(1.0, 0.0) + Complex64::from_polar(r, phi)
        })
        .collect();
    SquareMatrix::new(n, entries).expect("sampled entries are finite")
}

/// Samples `trials` matrices near `J` and reports the smallest exact permanent modulus.
///
/// Trials are independent streams, so the report does not depend on `threads`.
pub fn probe_nonvanishing(n: usize, radius: f64, trials: u64, seed: u64, threads: usize) -> Result<ProbeReport> {
    if n == 0 || n > RYSER_MAX_N {
        return Err(Error::SizeGuard {
            what: "probe dimension",
            limit: RYSER_MAX_N as u64,
            got: n as u64,
        });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius must be finite and nonnegative, got {radius}")));
    }
    let best = chunked_map(trials as usize, threads, |range| {
        let mut best = (f64::INFINITY, u64::MAX);
        for trial in range {
            let trial = trial as u64;
            let per = permanent_ryser(&probe_sample(n, radius, seed, trial))
                .expect("dimension already checked");
            if per.norm() < best.0 {
                best = (per.norm(), trial);
            }
        }
        best
    })
    .into_iter()
    .fold((f64::INFINITY, u64::MAX), |acc, b| if b.0 < acc.0 { b } else { acc });

    Ok(ProbeReport {
        n,
        radius,
        trials,
        seed,
        min_modulus: best.0,
        argmin_trial: best.1,
        argmin_matrix: probe_sample(n, radius, seed, best.1),
    })
}
