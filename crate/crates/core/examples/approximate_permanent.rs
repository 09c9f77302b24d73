//! Approximate the permanent of a random 8x8 complex matrix near J and compare
//! with Ryser's exact formula.

use permac::exact::permanent_ryser;
use permac::region::probe_sample;
use permac::{approximate_permanent, max_deviation_from_one};

fn main() -> permac::Result<()> {
    let a = probe_sample(8, 0.19, 7, 0);
    let approx = approximate_permanent(&a, 0.01)?;
    let exact = permanent_ryser(&a)?;

    println!("gamma            {:.4}", max_deviation_from_one(&a));
    println!("beta             {:.4}", approx.beta);
    println!("order used       {}", approx.order_used);
    println!("approximation    {:.6}", approx.value);
    println!("exact (Ryser)    {:.6}", exact);
    println!("relative error   {:.3e}", ((approx.value - exact) / exact).norm());
    println!("guaranteed bound {:.3e}", approx.relative_bound);
    Ok(())
}
