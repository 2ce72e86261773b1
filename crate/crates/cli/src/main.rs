use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use emergent_cli::config::ScaleValue;
use emergent_cli::{exit_code, list_experiments, CliError, RawConfig, EXIT_ERROR};

/// Experiments on emergent algebras: axioms, limits and tangent structure.
#[derive(Parser)]
#[command(name = "emergent", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its report.
    Run(Box<RunArgs>),
    /// List the dilation models.
    ListModels,
    /// List the experiments.
    ListExperiments,
}

#[derive(Args)]
struct RunArgs {
    /// TOML or key=value file with the same fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    experiment: Option<String>,
    /// First scale of the net (`re,im` for complex scales).
    #[arg(long, allow_hyphen_values = true)]
    eps_start: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    eps_ratio: Option<String>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    sample_size: Option<usize>,
    #[arg(long)]
    sample_radius: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Report path; defaults to `$EMERGENT_OUT_DIR/<model>-<experiment>.<format>`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    /// Rows separated by `;`, entries by `,`.
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,
    /// contracting or literal.
    #[arg(long)]
    orientation: Option<String>,
    #[arg(long)]
    locality: Option<f64>,
    /// sum, diff, inv or dif-target (convergence only).
    #[arg(long)]
    expr: Option<String>,
    /// identity, square-first or twist (differential only).
    #[arg(long)]
    map: Option<String>,
}

fn parse_matrix(text: &str) -> Result<Vec<Vec<f64>>, CliError> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|v| {
                    v.trim().parse::<f64>().map_err(|_| {
                        CliError::Config(format!("invalid matrix entry `{v}` (field: matrix)"))
                    })
                })
                .collect()
        })
        .collect()
}

impl RunArgs {
    fn into_raw(self) -> Result<(Option<PathBuf>, RawConfig), CliError> {
        let matrix = self.matrix.as_deref().map(parse_matrix).transpose()?;
        Ok((
            self.config,
            RawConfig {
                model: self.model,
                experiment: self.experiment,
                eps_start: self.eps_start.map(ScaleValue::Text),
                eps_ratio: self.eps_ratio.map(ScaleValue::Text),
                steps: self.steps,
                sample_size: self.sample_size,
                sample_radius: self.sample_radius,
                seed: self.seed,
                tol: self.tol,
                out: self.out,
                format: self.format,
                dim: self.dim,
                matrix,
                orientation: self.orientation,
                locality: self.locality,
                expr: self.expr,
                map: self.map,
            },
        ))
    }
}

fn run(args: RunArgs) -> i32 {
    let outcome = args.into_raw().and_then(|(path, flags)| {
        let file = match path {
            Some(p) => RawConfig::load(&p)?,
            None => RawConfig::default(),
        };
        let cfg = file.overlay(flags).resolve()?;
        emergent_cli::execute(&cfg)
    });
    match &outcome {
        Ok(report) => {
            let failed: Vec<&str> = report
                .pass
                .iter()
                .filter(|(k, ok)| !**ok && k.as_str() != "overall")
                .map(|(k, _)| k.as_str())
                .collect();
            println!(
                "{} {}: {} -> {}",
                report.config.model.id,
                report.config.experiment,
                if report.passed() { "pass" } else { "FAIL" },
                report.config.out.display()
            );
            if !failed.is_empty() {
                println!("failed checks: {}", failed.join(", "));
            }
            for note in &report.notes {
                println!("note: {note}");
            }
        }
        Err(e) => eprintln!("emergent: {e}"),
    }
    exit_code(&outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let code = match cli.command {
        Command::Run(args) => run(*args),
        Command::ListModels => {
            print!("{}", emergent_core::models::list_models());
            0
        }
        Command::ListExperiments => {
            print!("{}", list_experiments());
            0
        }
    };
    ExitCode::from(code as u8)
}
