use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use padic_exceptional_cli::{run, Command, Flags};

#[derive(Parser)]
#[command(name = "padic-sets", version, about = "p-adic power series with prescribed exceptional sets")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Args {
    /// Instance JSON file.
    instance: Option<PathBuf>,
    #[arg(long)]
    p: Option<u64>,
    /// Radius exponent `u/v` (ρ = p^(u/v)) or `inf`.
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    terms: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    slack_file: Option<PathBuf>,
    /// Output directory; without it the main artifact goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Entire series h with the prescribed exceptional set.
    GenH(Args),
    /// Series g with the prescribed radius.
    GenG(Args),
    /// f = h + g.
    GenF(Args),
    /// Interpolation prefix with prescribed value sets.
    GenThm3(Args),
    /// Evaluate at the instance's points.
    Eval(Args),
    /// Bounded-complexity non-algebraicity certificate.
    Certify(Args),
    /// Weierstrass preparation, or the conjugate check with `alpha`.
    Prep(Args),
    /// Newton polygons.
    Newton(Args),
    /// Check that S is closed under conjugation.
    ConjCheck(Args),
    /// First algebraic numbers of the canonical enumeration.
    EnumAlg(Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, args) = match cli.cmd {
        Cmd::GenH(a) => (Command::GenH, a),
        Cmd::GenG(a) => (Command::GenG, a),
        Cmd::GenF(a) => (Command::GenF, a),
        Cmd::GenThm3(a) => (Command::GenThm3, a),
        Cmd::Eval(a) => (Command::Eval, a),
        Cmd::Certify(a) => (Command::Certify, a),
        Cmd::Prep(a) => (Command::Prep, a),
        Cmd::Newton(a) => (Command::Newton, a),
        Cmd::ConjCheck(a) => (Command::ConjCheck, a),
        Cmd::EnumAlg(a) => (Command::EnumAlg, a),
    };
    let flags = Flags {
        p: args.p,
        rho: args.rho,
        terms: args.terms,
        depth: args.depth,
        seed: args.seed,
        slack_file: args.slack_file,
        out: args.out,
    };
    match run(cmd, args.instance.as_ref(), &flags) {
        Ok(outcome) => {
            if let Some(m) = outcome.message {
                eprintln!("{m}");
            }
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
