//! Permanent of a 3-dimensional 5x5x5 tensor near the all-ones tensor.

use num_complex::Complex64;
use permac::exact::multidim_permanent_exact;
use permac::{approximate_multidim_permanent, CubicalTensor};

fn main() -> permac::Result<()> {
    let t = CubicalTensor::from_fn(3, 5, |idx| {
        let s = (idx[0] + 2 * idx[1] + 3 * idx[2]) as f64;
        Complex64::from_polar(1.0, 0.0) + Complex64::from_polar(0.1, 0.9 * s)
    })?;
    let approx = approximate_multidim_permanent(&t, 0.05)?;
    let exact = multidim_permanent_exact(&t)?;
    println!("delta            {}", approx.delta);
    println!("gamma            {:.4}", approx.gamma);
    println!("order used       {}", approx.order_used);
    println!("approximation    {:.4}", approx.value);
    println!("exact            {:.4}", exact);
    println!("relative error   {:.3e}", ((approx.value - exact) / exact).norm());
    Ok(())
}
