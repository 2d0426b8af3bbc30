//! `nf-aliaser` command line.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nf_aliaser::config::{load_config, resolve, Product, SweepDoc};
use nf_aliaser::run::{run, Manifest};
use nf_aliaser::sweep::SweepParam;
use nf_aliaser::{presets, Error, Exec, Result};

#[derive(Parser)]
#[command(name = "nf-aliaser", version, about = "Near-field aliasing analysis for bistatic array imaging")]
struct Cli {
    /// Evaluate on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the products listed in a configuration file.
    Run {
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Compute one of the built-in figure configurations.
    Preset {
        /// fig1, fig2a, fig2b, fig2c or range
        name: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Re-evaluate a configuration over a list of parameter values.
    Sweep {
        config: PathBuf,
        /// spacing, length, range or dimensionality
        #[arg(long)]
        param: String,
        /// Comma separated, e.g. 16,32,64
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e.category() {
        "config" => 2,
        "io" => 3,
        "geometry" => 4,
        "wavefield" => 5,
        "imaging" => 6,
        "spectral" => 7,
        _ => 1,
    }
}

fn report(m: &Manifest, out: &Path) {
    for f in &m.files {
        println!("{:<10} {}", f.product, out.join(&f.file).display());
    }
    println!("manifest   {}", out.join("manifest.json").display());
}

fn execute(cli: Cli) -> Result<()> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    match cli.command {
        Command::Run { config, out } => {
            let c = load_config(&config)?;
            report(&run(&c, &out, exec)?, &out);
        }
        Command::Preset { name, out } => {
            let c = resolve(presets::preset(&name)?)?;
            report(&run(&c, &out, exec)?, &out);
        }
        Command::Sweep { config, param, values, out } => {
            let mut doc = load_config(&config)?.doc;
            doc.sweep = Some(SweepDoc { param: SweepParam::parse(&param)?, values });
            doc.outputs = vec![Product::Sweep];
            let c = resolve(doc)?;
            report(&run(&c, &out, exec)?, &out);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::from(exit_code(&e))
        }
    }
}
