use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hopfdeform::{exit_code, registry, run, CliError, Command, Overrides, RunConfig};

/// Verify additive deformations of bialgebras and Hopf algebras.
#[derive(Parser, Debug)]
#[command(name = "hopfdeform", version)]
struct Args {
    /// JSON run configuration.
    #[arg(long, conflicts_with = "example")]
    config: Option<PathBuf>,
    /// Run a built-in example instead of a config file.
    #[arg(long)]
    example: Option<String>,
    /// Write the JSON report here.
    #[arg(long)]
    json_out: Option<PathBuf>,
    #[arg(long, env = "HOPFDEFORM_SEED")]
    seed: Option<u64>,
    /// Samples per law.
    #[arg(long)]
    samples: Option<usize>,
    /// Equality tolerance for generator validation.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Comma-separated deformation parameters, e.g. "-1,0,1".
    #[arg(long, allow_hyphen_values = true)]
    t_grid: Option<String>,
    #[arg(long, value_enum)]
    command: Option<Command>,
    /// Print the built-in examples and exit.
    #[arg(long)]
    list_examples: bool,
    /// Print the effective configuration as JSON and exit.
    #[arg(long)]
    print_config: bool,
    /// Suppress the text summary.
    #[arg(long, short)]
    quiet: bool,
}

fn load(args: &Args) -> Result<RunConfig, CliError> {
    let mut cfg = match (&args.config, &args.example) {
        (Some(path), _) => RunConfig::from_json(&std::fs::read_to_string(path)?)?,
        (None, Some(name)) => registry::find(name)
            .ok_or_else(|| CliError::Config(format!("unknown example '{}'", name)))?
            .config(),
        (None, None) => {
            return Err(CliError::Config(
                "one of --config or --example is required".into(),
            ))
        }
    };
    Overrides {
        seed: args.seed,
        samples: args.samples,
        tolerance: args.tolerance,
        t_grid: args.t_grid.clone(),
        command: args.command,
    }
    .apply(&mut cfg)?;
    Ok(cfg)
}

fn main_inner(args: &Args) -> Result<i32, CliError> {
    if args.list_examples {
        print!("{}", registry::list());
        return Ok(0);
    }
    let cfg = load(args)?;
    if args.print_config {
        println!("{}", cfg.to_json());
        return Ok(0);
    }
    let report = run(&cfg)?;
    if let Some(path) = &args.json_out {
        std::fs::write(path, report.to_json())?;
    }
    if !args.quiet {
        print!("{}", report.to_text());
    }
    Ok(exit_code(&report))
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match main_inner(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("hopfdeform: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
