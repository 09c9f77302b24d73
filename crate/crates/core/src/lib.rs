//! Permanents, hafnians and multidimensional permanents of complex inputs
//! close to the all-ones structure.
//!
//! The main entry points are [`approximate_permanent`],
//! [`approximate_hafnian`] and [`approximate_multidim_permanent`], which
//! expand the logarithm of the partition function in a Taylor series around
//! the all-ones structure and sum enough terms to meet a requested relative
//! error. Exact exponential-time routines in [`exact`] serve as oracles, and
//! [`region`] computes the zero-free radii the error bound relies on.
//!
//! Runnable examples live in `examples/`:
//!
//! ```bash
//! cargo run --release --example approximate_permanent
//! cargo run --release --example hafnian
//! cargo run --release --example multidim_permanent
//! cargo run --release --example exact_oracles
//! cargo run --release --example region_constants
//! cargo run --release --example nonvanishing_probe
//! cargo run --release --example order_selection
//! cargo run --release --example matrix_files
//! ```

pub mod cli;
pub mod error;
pub mod exact;
pub mod format;
pub mod numerics;
pub mod parallel;
pub mod region;
pub mod taylor;

pub use error::{Error, Result};
pub use numerics::{
    max_deviation_from_one, ComplexScalar, CubicalTensor, Entries, EvenSymmetricMatrix,
    PolydiscReport, SquareMatrix,
};
pub use taylor::{ApproxResult, DerivativeProvider, DerivativeTable};

use taylor::{approximate, HafnianProvider, PermanentProvider, TensorProvider};

/// `per A` to relative error `epsilon`, using the default zero-free radius 0.195.
pub fn approximate_permanent(a: &SquareMatrix, epsilon: f64) -> Result<ApproxResult> {
    let p = PermanentProvider::new(a);
    approximate(&p, p.gamma(), p.default_delta()?, epsilon)
}

/// `haf S` to relative error `epsilon`, using the default zero-free radius 0.195.
pub fn approximate_hafnian(s: &EvenSymmetricMatrix, epsilon: f64) -> Result<ApproxResult> {
    let p = HafnianProvider::new(s);
    approximate(&p, p.gamma(), p.default_delta()?, epsilon)
}

/// `PER T` to relative error `epsilon`, using the default radius for `T.nu()`.
pub fn approximate_multidim_permanent(t: &CubicalTensor, epsilon: f64) -> Result<ApproxResult> {
    let p = TensorProvider::new(t);
    approximate(&p, p.gamma(), p.default_delta()?, epsilon)
}
