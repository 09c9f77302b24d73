//! Random search for small permanents inside the zero-free polydisc.

use permac::region::probe_nonvanishing;

fn main() -> permac::Result<()> {
    for n in 2..=7 {
        let report = probe_nonvanishing(n, 0.195, 1000, 42, 4)?;
        println!(
            "n = {n}  min |per| = {:.6e}  (trial {}, n! = {})",
            report.min_modulus,
            report.argmin_trial,
            (1..=n).product::<usize>()
        );
    }
    print!("{}", probe_nonvanishing(3, 0.195, 100, 42, 1)?.to_text());
    Ok(())
}
