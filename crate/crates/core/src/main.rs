use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use surfres::cli_io::{self, CliConfig, CmdOutput, Format};

#[derive(Parser)]
#[command(
    name = "surfres",
    version,
    about = "Embedded resolution of f(x,y) + z^2 from the resolution graph of f"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the numerical constraints of a curve graph.
    Validate(Opts),
    /// Blow up odd-odd adjacencies.
    Normalize(Opts),
    /// Build the exceptional divisor complex.
    Build(Opts),
    /// Dual resolution graph of the surface.
    SurfaceGraph(Opts),
    /// Run every cross-check.
    Check(Opts),
    /// DOT rendering of the divisor complex.
    Render(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Dot,
}

#[derive(Args)]
struct Opts {
    /// Curve graph JSON.
    #[arg(value_name = "INPUT", required_unless_present = "input")]
    path: Option<PathBuf>,
    #[arg(long, conflicts_with = "path")]
    input: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Explicit vertex order, comma separated.
    #[arg(long)]
    order: Option<String>,
    /// Contract -1 curves in the surface graph.
    #[arg(long)]
    minimal: bool,
    /// Refine the input graph randomly before processing.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    steps: Option<usize>,
}

impl Opts {
    fn config(&self) -> anyhow::Result<CliConfig> {
        let input = self
            .input
            .clone()
            .or_else(|| self.path.clone())
            .context("no input file")?;
        let order = self.order.as_deref().map(cli_io::parse_order).transpose()?;
        Ok(CliConfig {
            input,
            output: self.output.clone(),
            format: match self.format {
                FormatArg::Json => Format::Json,
                FormatArg::Dot => Format::Dot,
            },
            order,
            minimal: self.minimal,
            seed: self.seed,
            steps: self.steps,
        })
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let (opts, cmd): (&Opts, fn(&CliConfig) -> surfres::Result<CmdOutput>) = match &cli.command {
        Command::Validate(o) => (o, cli_io::cmd_validate),
        Command::Normalize(o) => (o, cli_io::cmd_normalize),
        Command::Build(o) => (o, cli_io::cmd_build),
        Command::SurfaceGraph(o) => (o, cli_io::cmd_surface_graph),
        Command::Check(o) => (o, cli_io::cmd_check),
        Command::Render(o) => (o, cli_io::cmd_render),
    };
    let cfg = opts.config()?;
    let out = cmd(&cfg).with_context(|| format!("processing {}", cfg.input.display()))?;
    match &cfg.output {
        Some(p) => fs::write(p, &out.text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{}", out.text),
    }
    if !out.ok {
        eprint!("{}", out.text);
        bail!("checks failed");
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
