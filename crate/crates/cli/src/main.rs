use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parergo::experiment::{
    default_threshold_grid, linear_grid, render, replay, run, Command, ExperimentConfig, Format, HamiltonianSource,
    StateSource,
};
use parergo::sampling::{BellState, NamedHamiltonian};
use parergo::Error;

const EXIT_INPUT: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_INVARIANT: u8 = 4;

#[derive(Parser)]
#[command(name = "parergo", version, about = "Parallel ergotropy and capacity bounds for bipartite batteries")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random restarts for local-unitary optimization.
    #[arg(long, global = true, default_value_t = 16)]
    restarts: usize,
    /// Worker threads; 0 lets the runtime decide.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Symmetric-extension level; only 0 is available.
    #[arg(long, global = true, default_value_t = 0)]
    dps_level: u32,
    /// SDP relative-gap target.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum BellArg {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl From<BellArg> for BellState {
    fn from(b: BellArg) -> Self {
        match b {
            BellArg::PhiPlus => BellState::PhiPlus,
            BellArg::PhiMinus => BellState::PhiMinus,
            BellArg::PsiPlus => BellState::PsiPlus,
            BellArg::PsiMinus => BellState::PsiMinus,
        }
    }
}

#[derive(Args)]
struct StateArgs {
    /// State file ({"dims", "rho"}).
    #[arg(long)]
    state: Option<String>,
    /// Instance file holding both a state and a Hamiltonian.
    #[arg(long)]
    instance: Option<String>,
    /// Werner state with this visibility.
    #[arg(long)]
    werner: Option<f64>,
    #[arg(long, value_enum, default_value_t = BellArg::PhiPlus)]
    bell: BellArg,
    /// Ginibre random state with local dimensions DA,DB.
    #[arg(long, value_delimiter = ',')]
    ginibre: Option<Vec<usize>>,
    /// Computational basis state DA,DB,INDEX.
    #[arg(long, value_delimiter = ',')]
    basis: Option<Vec<usize>>,
    /// Sample index for --ginibre.
    #[arg(long, default_value_t = 0)]
    index: u64,
}

#[derive(Args)]
struct HamArgs {
    /// Hamiltonian file ({"dims", "h_a", "h_b", "v"}).
    #[arg(long)]
    ham: Option<String>,
    /// Antiferromagnet with coupling OMEGA.
    #[arg(long)]
    antiferro: Option<f64>,
    /// Local dimension for --antiferro.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Flip-flop model WA,WB,G.
    #[arg(long, value_delimiter = ',')]
    flipflop: Option<Vec<f64>>,
    /// Diagonal model with energies E0,E1,E2,E3.
    #[arg(long, value_delimiter = ',')]
    bell_diagonal: Option<Vec<f64>>,
    /// Random Hamiltonian with local dimensions DA,DB.
    #[arg(long, value_delimiter = ',')]
    random_ham: Option<Vec<usize>>,
    /// Include local terms in --random-ham.
    #[arg(long)]
    local: bool,
    #[arg(long, default_value_t = 0)]
    ham_index: u64,
}

#[derive(Args)]
struct GridArgs {
    /// Explicit comma-separated visibilities.
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
    /// Number of evenly spaced points on [0, 1] when --grid is absent.
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Subcommand)]
enum Sub {
    /// All estimators on one instance.
    Bounds {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        ham: HamArgs,
    },
    /// Estimators along the Werner family (default flip-flop 1, 1.1, 0.33).
    WernerSweep {
        #[command(flatten)]
        ham: HamArgs,
        #[arg(long, value_enum, default_value_t = BellArg::PhiPlus)]
        bell: BellArg,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// SDP and analytic bounds against the direct lower bound on random instances.
    RandomCompare {
        #[arg(long, value_delimiter = ',', default_values_t = [3, 3])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 30)]
        count: usize,
        /// Keep local terms in the random Hamiltonians.
        #[arg(long)]
        local: bool,
    },
    /// Capacity and fluctuation witnesses on one instance (default antiferromagnet, ω = 1).
    Witness {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        ham: HamArgs,
    },
    /// Witness detections along the Werner family (default p = 0.30..0.65).
    ThresholdScan {
        #[command(flatten)]
        ham: HamArgs,
        #[arg(long, value_enum, default_value_t = BellArg::PhiPlus)]
        bell: BellArg,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Re-run the config embedded in an output file and compare.
    Replay { file: PathBuf },
}

fn input_error(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn arity<T>(flag: &str, v: &[T], n: usize) -> Result<(), Error> {
    if v.len() == n {
        Ok(())
    } else {
        Err(Error::Parse(format!("--{flag} takes {n} comma-separated values, got {}", v.len())))
    }
}

fn state_source(a: &StateArgs) -> Result<StateSource, Error> {
    let mut found = Vec::new();
    if let Some(p) = &a.state {
        found.push(StateSource::File { path: p.clone() });
    }
    if let Some(p) = &a.instance {
        found.push(StateSource::Instance { path: p.clone() });
    }
    if let Some(p) = a.werner {
        found.push(StateSource::Werner { p, bell: a.bell.into() });
    }
    if let Some(d) = &a.ginibre {
        arity("ginibre", d, 2)?;
        found.push(StateSource::Ginibre { dims: [d[0], d[1]], index: a.index });
    }
    if let Some(b) = &a.basis {
        arity("basis", b, 3)?;
        found.push(StateSource::Basis { dims: [b[0], b[1]], index: b[2] });
    }
    match found.len() {
        1 => Ok(found.remove(0)),
        0 => Err(input_error("give one of --state, --instance, --werner, --ginibre, --basis")),
        _ => Err(input_error("give only one state source")),
    }
}

fn ham_source(a: &HamArgs, instance: Option<&String>, default: NamedHamiltonian) -> Result<HamiltonianSource, Error> {
    let mut found = Vec::new();
    if let Some(p) = &a.ham {
        found.push(HamiltonianSource::File { path: p.clone() });
    }
    if let Some(omega) = a.antiferro {
        found.push(HamiltonianSource::Named { model: NamedHamiltonian::Antiferromagnetic { omega, d: a.d } });
    }
    if let Some(f) = &a.flipflop {
        arity("flipflop", f, 3)?;
        found.push(HamiltonianSource::Named {
            model: NamedHamiltonian::Flipflop { omega_a: f[0], omega_b: f[1], g: f[2] },
        });
    }
    if let Some(e) = &a.bell_diagonal {
        arity("bell-diagonal", e, 4)?;
        found.push(HamiltonianSource::Named { model: NamedHamiltonian::BellDiagonal { energies: [e[0], e[1], e[2], e[3]] } });
    }
    if let Some(d) = &a.random_ham {
        arity("random-ham", d, 2)?;
        found.push(HamiltonianSource::Random { dims: [d[0], d[1]], include_local: a.local, index: a.ham_index });
    }
    match (found.len(), instance) {
        (0, Some(p)) => Ok(HamiltonianSource::Instance { path: p.clone() }),
        (0, None) => Ok(HamiltonianSource::Named { model: default }),
        (1, _) => Ok(found.remove(0)),
        _ => Err(input_error("give only one Hamiltonian source")),
    }
}

fn grid(g: &GridArgs, default: Vec<f64>) -> Vec<f64> {
    match (&g.grid, g.points) {
        (Some(v), _) => v.clone(),
        (None, Some(n)) => linear_grid(0.0, 1.0, n),
        (None, None) => default,
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Solver(_) | Error::NanObjective(_) => EXIT_SOLVER,
        _ => EXIT_INPUT,
    }
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let afm = NamedHamiltonian::Antiferromagnetic { omega: 1.0, d: 2 };
    let command = match &cli.command {
        Sub::Bounds { state, ham } => Command::Bounds {
            state: state_source(state)?,
            hamiltonian: ham_source(ham, state.instance.as_ref(), afm)?,
        },
        Sub::WernerSweep { ham, bell, grid: g } => Command::WernerSweep {
            hamiltonian: ham_source(ham, None, NamedHamiltonian::Flipflop { omega_a: 1.0, omega_b: 1.1, g: 0.33 })?,
            bell: (*bell).into(),
            grid: grid(g, linear_grid(0.0, 1.0, 11)),
        },
        Sub::RandomCompare { dims, count, local } => {
            arity("dims", dims, 2)?;
            Command::RandomCompare { dims: [dims[0], dims[1]], count: *count, include_local: *local }
        }
        Sub::Witness { state, ham } => Command::Witness {
            state: state_source(state)?,
            hamiltonian: ham_source(ham, state.instance.as_ref(), afm)?,
        },
        Sub::ThresholdScan { ham, bell, grid: g } => Command::ThresholdScan {
            hamiltonian: ham_source(ham, None, afm)?,
            bell: (*bell).into(),
            grid: grid(g, default_threshold_grid()),
        },
        Sub::Replay { .. } => unreachable!("replay has no config of its own"),
    };
    Ok(ExperimentConfig {
        command,
        seed: cli.seed,
        restarts: cli.restarts,
        tol: cli.tol,
        dps_level: cli.dps_level,
        format: match cli.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        },
        out: cli.out.as_ref().map(|p| p.display().to_string()),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Sub::Replay { file } = &cli.command {
        return match replay(file, cli.jobs) {
            Ok(r) if r.identical => {
                eprintln!("replay identical: {}", file.display());
                ExitCode::SUCCESS
            }
            Ok(r) => {
                eprintln!("replay differs from {} at line {}", file.display(), r.first_difference.unwrap_or(0));
                print!("{}", r.regenerated);
                ExitCode::from(EXIT_INVARIANT)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(exit_code(&e))
            }
        };
    }
    let config = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let show_progress = matches!(cli.command, Sub::RandomCompare { .. });
    let progress = |done: usize, total: usize| {
        if show_progress {
            eprintln!("instance {done}/{total} finished");
        }
    };
    if let Command::RandomCompare { dims, count, .. } = &config.command {
        if let Ok(d) = parergo::state::Dims::new(dims[0], dims[1]) {
            let est = parergo::experiment::random_compare_estimate(d, *count);
            eprintln!("estimated wall clock: about {:.0} s", est.as_secs_f64());
        }
    }
    let output = match run(&config, cli.jobs, &progress) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    for n in &output.notices {
        eprintln!("note: {n}");
    }
    let text = match render(&output) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVARIANT);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT);
            }
        }
        None => print!("{text}"),
    }
    if !output.violations.is_empty() {
        for v in &output.violations {
            eprintln!("invariant violated: {v}");
        }
        return ExitCode::from(EXIT_INVARIANT);
    }
    ExitCode::SUCCESS
}
