// What `varlat batch 4` and `varlat compute` print, driven from code.

use std::io;

use varlat::cli::{cmd_batch, cmd_compute, exit_code, PosetSource, RunConfig};

pub fn run_example() -> varlat::Result<()> {
    let summary = cmd_batch(4, &RunConfig::default(), &mut io::stdout())?;
    assert_eq!(summary.posets, 16);

    let capped = RunConfig {
        poset: Some(PosetSource::from_arg("a;b;c;d")),
        cap: 10_000,
        ..Default::default()
    };
    let err = cmd_compute(&capped, &mut io::sink()).unwrap_err();
    println!("exit {}: {err}", exit_code(&err));
    assert_eq!(exit_code(&err), 3);
    Ok(())
}

fn main() -> varlat::Result<()> {
    run_example()
}
