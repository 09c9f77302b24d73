//! The exact routines: Ryser vs the permutation sum, and a matrix with entries
//! at distance sqrt(2)/2 from 1 whose permanent is zero.

use num_complex::Complex64;
use permac::exact::{permanent_naive, permanent_ryser};
use permac::region::probe_sample;
use permac::{max_deviation_from_one, SquareMatrix};

fn main() -> permac::Result<()> {
    for n in 2..=7 {
        let a = probe_sample(n, 0.5, 1, n as u64);
        let r = permanent_ryser(&a)?;
        let p = permanent_naive(&a)?;
        println!("n = {n}: ryser {r:.10}  naive {p:.10}");
    }

    let p = Complex64::new(0.5, 0.5);
    let q = Complex64::new(0.5, -0.5);
    let z = SquareMatrix::new(2, vec![p, q, q, p])?;
    println!(
        "distance from J {:.6}, |per| = {:.3e}",
        max_deviation_from_one(&z),
        permanent_ryser(&z)?.norm()
    );
    Ok(())
}
