//! Zero-free radii: the constants behind the published radii and the largest
//! admissible radius for each tensor dimension.

use permac::region::{max_admissible_delta, solve_theta, DEFAULT_RESOLUTION, DELTA_3, DELTA_4, DELTA_PERMANENT};

fn main() -> permac::Result<()> {
    for (nu, delta) in [(2, DELTA_PERMANENT), (3, DELTA_3), (4, DELTA_4)] {
        let c = solve_theta(delta, nu)?;
        println!(
            "nu = {nu}  delta = {delta:.3}  theta = {:.10}  tau = {:.10}  roots = {:?}",
            c.theta, c.tau, c.roots
        );
    }
    for nu in 2..=6 {
        println!("nu = {nu}  largest admissible delta ~ {:.3}", max_admissible_delta(nu, DEFAULT_RESOLUTION)?);
    }
    match solve_theta(0.9, 2) {
        Ok(_) => println!("delta = 0.9 unexpectedly admissible"),
        Err(e) => println!("delta = 0.9: {e}"),
    }
    Ok(())
}
