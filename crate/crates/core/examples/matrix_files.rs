//! Reading and writing the JSON matrix format, and driving the command-line
//! front end in-process.

use permac::cli::{cmd_approx, cmd_exact, ApproxOptions};
use permac::exact::PermanentAlgorithm;
use permac::format::{digest, parse_structure, write_structure};

fn main() -> permac::Result<()> {
    let text = r#"{"kind": "matrix", "n": 3, "entries": [1.1, [1, 0.1], 1, 1, 0.95, [1, -0.05], 1, 1, 1.02]}"#;
    let s = parse_structure(text)?;
    let canonical = write_structure(&s);
    println!("canonical: {canonical}");
    println!("digest:    {}", digest(&s));
    assert_eq!(parse_structure(&canonical)?, s);

    println!("{}", cmd_exact(text, PermanentAlgorithm::Auto, 1)?.to_line());
    let (record, _) = cmd_approx(text, &ApproxOptions { epsilon: 1e-6, ..Default::default() })?;
    println!("{}", record.to_line());

    let code = permac::cli::run(["permac", "constants", "--nu", "3"], &mut std::io::stdout(), &mut std::io::stderr());
    println!("exit code {code}");
    Ok(())
}
