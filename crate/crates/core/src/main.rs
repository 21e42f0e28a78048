use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qv_estimator::cli::{
    self, parse_device_spec, CliError, Mode, Scale, Series, SweepRequest, SweepVariable,
};
use qv_estimator::topology::TopologyKind;
use qv_estimator::validator::TrialConfig;

#[derive(Parser)]
#[command(name = "qv-estimate", version, about = "Quantum volumetric class (QV-k) estimator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// QV-k of a device for each class.
    Estimate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        k: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Mode::Physical)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate a grid of one variable for several classes and connectivities.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        /// Swept variable.
        #[arg(long = "var", value_enum)]
        variable: SweepVariable,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        /// Space points linearly instead of logarithmically.
        #[arg(long)]
        linear: bool,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        k: Vec<u32>,
        /// Connectivity exponents, one curve each.
        #[arg(long, value_delimiter = ',', conflicts_with = "topology")]
        m: Vec<f64>,
        /// Named topologies, one curve each.
        #[arg(long, value_delimiter = ',', value_parser = parse_kind)]
        topology: Vec<TopologyKind>,
        #[arg(long, value_enum, default_value_t = Mode::Physical)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        output: Output,
    },
    /// Full optimizer output for error-corrected modes.
    Optimize {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        k: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Mode::FullFt)]
        mode: Mode,
        #[command(flatten)]
        output: Output,
    },
    /// Monte Carlo check of the depth model.
    Validate {
        #[arg(long)]
        n: u64,
        #[arg(long = "eps-eff")]
        eps_eff: f64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Connectivity exponent of a topology family, or of the graph in a spec.
    FitTopology {
        #[arg(long, value_parser = parse_kind, required_unless_present = "spec", conflicts_with = "spec")]
        kind: Option<TopologyKind>,
        #[arg(long, value_delimiter = ',', default_value = "16,64,144,256,400")]
        sizes: Vec<usize>,
        #[arg(long)]
        spec: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

fn parse_kind(s: &str) -> Result<TopologyKind, String> {
    s.parse::<TopologyKind>().map_err(|e| e.to_string())
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Numeric(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn emit(text: &str, output: &Output) -> Result<(), CliError> {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Estimate {
            spec,
            k,
            mode,
            format,
            output,
        } => {
            let spec = parse_device_spec(&spec)?;
            let report = cli::estimate(&spec, &k, mode)?;
            let text = match format {
                Format::Json => json(&report)?,
                Format::Csv => report.to_csv(),
            };
            emit(&text, &output)
        }
        Command::Sweep {
            spec,
            variable,
            lo,
            hi,
            points,
            linear,
            k,
            m,
            topology,
            mode,
            format,
            output,
        } => {
            let spec = parse_device_spec(&spec)?;
            let series = if topology.is_empty() {
                m.into_iter().map(Series::M).collect()
            } else {
                topology.into_iter().map(Series::Topology).collect()
            };
            let request = SweepRequest {
                variable,
                lo,
                hi,
                points,
                scale: if linear { Scale::Linear } else { Scale::Log },
                k_values: k,
                series,
                mode,
            };
            let report = cli::sweep(&request, &spec)?;
            let text = match format {
                Format::Csv => cli::write_csv(&report),
                Format::Json => json(&report)?,
            };
            emit(&text, &output)
        }
        Command::Optimize { spec, k, mode, output } => {
            let spec = parse_device_spec(&spec)?;
            emit(&json(&cli::optimize(&spec, &k, mode)?)?, &output)
        }
        Command::Validate {
            n,
            eps_eff,
            trials,
            seed,
            output,
        } => {
            let cfg = TrialConfig {
                n,
                eps_eff,
                trials,
                seed,
            };
            emit(&json(&cli::validate(&cfg)?)?, &output)
        }
        Command::FitTopology {
            kind,
            sizes,
            spec,
            output,
        } => {
            let report = match (kind, spec) {
                (Some(kind), _) => cli::fit_topology(kind, &sizes)?,
                (None, Some(path)) => cli::fit_topology_graph(&parse_device_spec(&path)?)?,
                (None, None) => unreachable!("clap requires --kind or --spec"),
            };
            emit(&json(&report)?, &output)
        }
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    match run(args.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qv-estimate: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
