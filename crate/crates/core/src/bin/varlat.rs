use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use varlat::cli::{self, OutputFormat, PosetSource, RunConfig};
use varlat::variety::DEFAULT_CAP;

/// Free lattices generated by finite posets in finitely generated varieties.
#[derive(Parser)]
#[command(name = "varlat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Size, s, t and length of one free lattice.
    Compute(Common),
    /// One JSON line per poset class of size N.
    Batch {
        size: usize,
        #[command(flatten)]
        common: Common,
        /// Only classify: list the good classes and count them.
        #[arg(long)]
        check_good_only: bool,
    },
    /// Run the cross-check suites.
    Check {
        /// Check the axioms of this connection-family JSON instead.
        #[arg(long)]
        family: Option<PathBuf>,
    },
    /// Write the whole lattice (json, dot or table).
    Export(Common),
}

#[derive(Args)]
struct Common {
    /// DSL text (`a<b; c`), a .json or DSL file, or chain:N / antichain:N / sum:1+1+2.
    #[arg(long)]
    poset: Option<String>,
    /// distributive, m3, or custom:<file>.
    #[arg(long, default_value = "m3")]
    variety: String,
    /// count, json, dot or table.
    #[arg(long)]
    out: Option<OutputFormat>,
    #[arg(long, env = "VARLAT_CAP", value_parser = clap::value_parser!(u64).range(1..))]
    cap: Option<u64>,
    /// Cross-check against the plain join-closure.
    #[arg(long)]
    oracle: bool,
}

impl Common {
    fn config(&self, default_out: OutputFormat, check_good_only: bool) -> RunConfig {
        RunConfig {
            poset: self.poset.as_deref().map(PosetSource::from_arg),
            variety: self.variety.clone(),
            out: self.out.unwrap_or(default_out),
            oracle: self.oracle,
            cap: self.cap.map_or(DEFAULT_CAP, |c| c as usize),
            check_good_only,
        }
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let mut out = BufWriter::new(io::stdout().lock());
    let result = match &args.command {
        Command::Compute(c) => cli::cmd_compute(&c.config(OutputFormat::Count, false), &mut out),
        Command::Export(c) => cli::cmd_export(&c.config(OutputFormat::Json, false), &mut out),
        Command::Batch {
            size,
            common,
            check_good_only,
        } => cli::cmd_batch(*size, &common.config(OutputFormat::Json, *check_good_only), &mut out).map(drop),
        Command::Check { family } => cli::cmd_check(family.as_deref(), &mut out).map(drop),
    };
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::from(cli::EXIT_OK as u8),
        Err(e) => {
            eprintln!("varlat: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
