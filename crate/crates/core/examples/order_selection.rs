//! How the Taylor order grows with the size and the distance from J, and how
//! the measured error tracks the bound order by order.

use permac::exact::permanent_ryser;
use permac::region::probe_sample;
use permac::taylor::{choose_order, DerivativeTable, PermanentProvider};
use permac::DerivativeProvider;

fn main() -> permac::Result<()> {
    println!("   n   beta    eps    m");
    for n in [10, 50, 100, 500] {
        for (beta, eps) in [(2.0, 0.01), (195.0 / 190.0, 0.01), (195.0 / 190.0, 0.001)] {
            println!("{n:>4}  {beta:.3}  {eps:.0e}  {}", choose_order(n, beta, eps)?);
        }
    }

    let a = probe_sample(7, 0.15, 11, 0);
    let provider = PermanentProvider::new(&a);
    let exact = permanent_ryser(&a)?;
    let table = DerivativeTable::build(&provider, 7)?;
    println!("\n m   measured     bound");
    for m in 1..=7 {
        let r = table.approximation(m, provider.gamma(), 0.195)?;
        println!("{m:>2}  {:.3e}  {:.3e}", ((r.value - exact) / exact).norm(), r.relative_bound);
    }
    Ok(())
}
