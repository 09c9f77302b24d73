//! Hafnian approximation for a 10x10 symmetric matrix, and the block identity
//! haf([[0, A], [A^T, 0]]) = per A.

use num_complex::Complex64;
use permac::exact::{hafnian_exact, permanent_ryser};
use permac::region::probe_sample;
use permac::{approximate_hafnian, EvenSymmetricMatrix};

fn main() -> permac::Result<()> {
    let a = probe_sample(5, 0.15, 3, 0);
    let block = EvenSymmetricMatrix::bipartite_block(&a);
    println!("haf(block) = {:.8}", hafnian_exact(&block)?);
    println!("per(A)     = {:.8}", permanent_ryser(&a)?);

    let s = EvenSymmetricMatrix::from_fn(10, |i, j| {
        let t = (i * 7 + j * 7 + i * j) as f64;
        Complex64::new(1.0 + 0.1 * (0.3 * t).cos(), 0.1 * (0.5 * t).sin())
    })?;
    let approx = approximate_hafnian(&s, 0.05)?;
    let exact = hafnian_exact(&s)?;
    println!("approx haf = {:.6} (m = {})", approx.value, approx.order_used);
    println!("exact haf  = {:.6}", exact);
    println!("rel. error = {:.3e}, bound {:.3e}", ((approx.value - exact) / exact).norm(), approx.relative_bound);
    Ok(())
}
