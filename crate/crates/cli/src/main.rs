use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser};
use einstein_cli::{load_config, run, CliError, Command, Format, Params, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "einstein",
    version,
    about = "Einstein model, gluing and spin-lattice verification tables"
)]
struct Cli {
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (written atomically); stdout when absent.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(clap::Subcommand, Debug)]
enum Sub {
    /// Model parameter a, tip u_a, cone angle and sectional curvature bound for each l.
    ConeSolve(ParamArgs),
    /// Potential, curvature and Einstein residuals of a model on a grid.
    ModelTable(ParamArgs),
    /// Sup norms of the gluing error over a list of U, with decay ratios.
    InterpError(ParamArgs),
    /// Newton solve from the interpolated profile, with convergence history.
    Newton(ParamArgs),
    /// Smallest eigenvalue of the symmetrized linearized operator.
    Coercivity(ParamArgs),
    /// Randomized Clifford algebra and spin property suite.
    SpinVerify(ParamArgs),
    /// Volume and injectivity-radius bound chain.
    Bounds(ParamArgs),
    /// Tube-coordinate distances and Green's kernel decay ratios.
    Distance(ParamArgs),
}

#[derive(Args, Debug, Default)]
struct ParamArgs {
    /// Dimension n.
    #[arg(long)]
    n: Option<usize>,
    /// Branching degree(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    l: Vec<u32>,
    /// Model parameter a (instead of l).
    #[arg(long)]
    a: Option<f64>,
    /// Gluing parameter(s) U, comma separated.
    #[arg(long = "U", value_delimiter = ',')]
    u: Vec<f64>,
    /// Outer radius / weight cap U_max, comma separated.
    #[arg(long = "U-max", alias = "u-max", value_delimiter = ',')]
    u_max: Vec<f64>,
    /// Weight / gluing exponent α.
    #[arg(long)]
    alpha: Option<f64>,
    /// Grid size(s) or sample counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    nodes: Vec<usize>,
    /// Grid scheme: log or uniform.
    #[arg(long)]
    scheme: Option<String>,
    /// Relative offset of the first node above the axis or cone tip.
    #[arg(long)]
    guard: Option<f64>,
    /// Convergence tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for the random stream.
    #[arg(long)]
    seed: Option<u64>,
    /// Random cases per algebraic check.
    #[arg(long)]
    cases: Option<usize>,
    /// Random spin elements for the reflection check.
    #[arg(long)]
    spin_cases: Option<usize>,
    /// Number of sampled point pairs.
    #[arg(long)]
    pairs: Option<usize>,
    /// Minimum lifted distance for Green's kernel pairs.
    #[arg(long)]
    cutoff: Option<f64>,
    /// Injectivity radius.
    #[arg(long = "iM", alias = "i-m")]
    i_m: Option<f64>,
    /// Constant A in the volume bound A·exp(n(n+1)/4 · iM).
    #[arg(long = "A")]
    big_a: Option<f64>,
    /// Hypersurface tube constant.
    #[arg(long = "A1")]
    a1: Option<f64>,
    /// Codimension-two tube constant.
    #[arg(long = "A2")]
    a2: Option<f64>,
    /// Dump the F, G grids instead of the scaling table (interp-error).
    #[arg(long)]
    grid: bool,
}

fn list<T>(v: Vec<T>) -> Option<Vec<T>> {
    (!v.is_empty()).then_some(v)
}

impl ParamArgs {
    fn into_params(self) -> Params {
        Params {
            n: self.n,
            l: list(self.l),
            a: self.a,
            u: list(self.u),
            u_max: list(self.u_max),
            alpha: self.alpha,
            nodes: list(self.nodes),
            scheme: self.scheme,
            guard: self.guard,
            tol: self.tol,
            seed: self.seed,
            cases: self.cases,
            spin_cases: self.spin_cases,
            pairs: self.pairs,
            cutoff: self.cutoff,
            i_m: self.i_m,
            big_a: self.big_a,
            a1: self.a1,
            a2: self.a2,
            grid: self.grid.then_some(true),
        }
    }
}

impl Sub {
    fn split(self) -> (Command, ParamArgs) {
        match self {
            Sub::ConeSolve(a) => (Command::ConeSolve, a),
            Sub::ModelTable(a) => (Command::ModelTable, a),
            Sub::InterpError(a) => (Command::InterpError, a),
            Sub::Newton(a) => (Command::Newton, a),
            Sub::Coercivity(a) => (Command::Coercivity, a),
            Sub::SpinVerify(a) => (Command::SpinVerify, a),
            Sub::Bounds(a) => (Command::Bounds, a),
            Sub::Distance(a) => (Command::Distance, a),
        }
    }
}

fn build_config(cli: Cli) -> Result<RunConfig, CliError> {
    let file = cli
        .config
        .as_deref()
        .map(load_config)
        .transpose()?
        .unwrap_or_default();
    let (flag_command, flag_params) = match cli.command {
        Some(sub) => {
            let (c, a) = sub.split();
            (Some(c), a.into_params())
        }
        None => (None, Params::default()),
    };
    let command = flag_command.or(file.command).ok_or_else(|| {
        CliError::Validation("no command given (subcommand or config file)".into())
    })?;
    let mut params = file.params;
    params.overlay(&flag_params);
    let mut output = file.output.unwrap_or_default();
    if cli.output.is_some() {
        output.path = cli.output;
    }
    if let Some(f) = cli.format {
        output.format = f;
    }
    Ok(RunConfig {
        command,
        params,
        output,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build_config(cli).and_then(|cfg| run(&cfg));
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
