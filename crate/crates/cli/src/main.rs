use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tcg_cli::{
    parse_frame, parse_initial, parse_observables, parse_sweep, run, CliError, FrameOverride,
    Method, ModelSource, RunConfig,
};

/// Exact and time-coarse-grained master equations for driven multilevel
/// atoms.
#[derive(Parser)]
#[command(name = "tcg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate a preset or model file and write CSV output.
    Run(Box<RunArgs>),
    /// List the built-in presets.
    Presets,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Tcg,
    Both,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("model").required(true).args(["preset", "config"]))]
struct RunArgs {
    /// twolevel, raman3, fourlevel or fourlevel_excited.
    #[arg(long)]
    preset: Option<String>,
    /// TOML model file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "both")]
    method: MethodArg,
    /// Drop the jump terms from the coarse-grained generator.
    #[arg(long)]
    no_jump: bool,
    /// Per-level frame phases (comma separated) or `preset`.
    #[arg(long, allow_hyphen_values = true)]
    frame: Option<String>,
    /// Initial amplitudes as `label:amplitude,...`, e.g. `1:1,3:0.5-0.5i`.
    #[arg(long, allow_hyphen_values = true)]
    initial: Option<String>,
    /// Run length in units of tau.
    #[arg(long)]
    tmax: Option<f64>,
    /// Integration step.
    #[arg(long)]
    dt: Option<f64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Print the assembled generator terms instead of running.
    #[arg(long)]
    describe: bool,
    /// Validity sweep, e.g. `omega=0.05:0.5:10,gamma=0.1`.
    #[arg(long)]
    sweep: Option<String>,
    /// Observables as `i-j:re|im|abs,...` over level labels.
    #[arg(long)]
    observables: Option<String>,
}

fn config(args: RunArgs) -> Result<RunConfig, CliError> {
    let source = match (args.preset, args.config) {
        (Some(p), None) => ModelSource::Preset(p),
        (None, Some(path)) => ModelSource::File(path),
        _ => return Err(CliError::Usage("give exactly one of --preset and --config".into())),
    };
    let mut cfg = RunConfig::new(source);
    cfg.method = match args.method {
        MethodArg::Exact => Method::Exact,
        MethodArg::Tcg => Method::Tcg,
        MethodArg::Both => Method::Both,
    };
    cfg.include_jump = !args.no_jump;
    cfg.frame = match args.frame {
        Some(f) => parse_frame(&f)?,
        None => FrameOverride::Keep,
    };
    cfg.initial = args.initial.as_deref().map(parse_initial).transpose()?;
    cfg.tmax = args.tmax;
    cfg.dt = args.dt;
    cfg.out = args.out;
    cfg.describe = args.describe;
    cfg.sweep = args.sweep.as_deref().map(parse_sweep).transpose()?;
    cfg.observables = args.observables.as_deref().map(parse_observables).transpose()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Presets => {
            for name in tcg::scenario::PRESET_NAMES {
                println!("{name}");
            }
            Ok(())
        }
        Command::Run(args) => config(*args).and_then(|cfg| {
            let mut stdout = std::io::stdout().lock();
            run(&cfg, &mut stdout).map(|_| ())
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
