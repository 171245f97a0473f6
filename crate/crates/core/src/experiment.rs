//! Reproducible experiment runs with self-describing CSV/JSON output.
//!
//! Every output embeds the artifact version, a schema tag, per-column method
//! tags and the full [`ExperimentConfig`]; [`replay`] re-runs the embedded
//! config and compares byte for byte.

use std::path::Path;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{hypothesis_check, pc_upper_bound, pe_upper_bound_lmm};
use crate::choi::{pe_sdp_bound, BoundSource, ChoiSdpOptions};
use crate::direct::{parallel_capacity_lower, pe_lower_bound, DirectOptions};
use crate::error::{Error, Result};
use crate::ergotropy::{global_capacity, global_ergotropy};
use crate::linalg::{c, CMat};
use crate::sampling::{
    ginibre_state, named_hamiltonian, random_hamiltonian, werner_state, BellState, NamedHamiltonian, RngSpec,
};
use crate::state::{BipartiteHamiltonian, Dims, QuantumState};
use crate::witness::{hamiltonian_profile, witness_report_with, WitnessOptions};

pub const ARTIFACT_VERSION: &str = concat!("parergo-v", env!("CARGO_PKG_VERSION"));

/// Orderings between estimates are checked with this slack.
pub const ORDERING_SLACK: f64 = 1e-6;

/// Seconds per two-qutrit SDP solve used for the upfront estimate.
pub const QUTRIT_SDP_SECONDS: f64 = 90.0;
/// Largest instance count accepted for two-qutrit comparisons.
pub const QUTRIT_COUNT_CAP: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateSource {
    File { path: String },
    /// The `state` part of an instance file.
    Instance { path: String },
    Werner { p: f64, bell: BellState },
    /// Ginibre sample drawn from stream `state/ginibre/<index>` of the run seed.
    Ginibre { dims: [usize; 2], index: u64 },
    /// Computational basis projector |index⟩⟨index|.
    Basis { dims: [usize; 2], index: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HamiltonianSource {
    File { path: String },
    Instance { path: String },
    Named { model: NamedHamiltonian },
    /// Random sample drawn from stream `hamiltonian/random/<index>` of the run seed.
    Random { dims: [usize; 2], include_local: bool, index: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    Bounds { state: StateSource, hamiltonian: HamiltonianSource },
    WernerSweep { hamiltonian: HamiltonianSource, bell: BellState, grid: Vec<f64> },
    RandomCompare { dims: [usize; 2], count: usize, include_local: bool },
    Witness { state: StateSource, hamiltonian: HamiltonianSource },
    ThresholdScan { hamiltonian: HamiltonianSource, bell: BellState, grid: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub command: Command,
    pub seed: u64,
    pub restarts: usize,
    /// Overrides the SDP relative-gap target.
    pub tol: Option<f64>,
    pub dps_level: u32,
    pub format: Format,
    pub out: Option<String>,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            seed: 0,
            restarts: DirectOptions::default().restarts,
            tol: None,
            dps_level: 0,
            format: Format::Csv,
            out: None,
        }
    }

    pub fn direct_options(&self) -> DirectOptions {
        DirectOptions { restarts: self.restarts, ..DirectOptions::with_seed(self.seed) }
    }

    pub fn sdp_options(&self) -> ChoiSdpOptions {
        let mut o = ChoiSdpOptions { dps_level: self.dps_level, ..Default::default() };
        if let Some(t) = self.tol {
            o.sdp.gap_tol = t;
        }
        o
    }

    pub fn witness_options(&self) -> WitnessOptions {
        WitnessOptions { direct: self.direct_options(), ..WitnessOptions::with_seed(self.seed) }
    }
}

/// Evenly spaced grid with `n` points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// p ∈ {0.30, 0.31, …, 0.65}.
pub fn default_threshold_grid() -> Vec<f64> {
    (30..=65).map(|k| k as f64 / 100.0).collect()
}

pub fn load_state_source(src: &StateSource, seed: u64) -> Result<QuantumState> {
    match src {
        StateSource::File { path } => crate::io::load_state(path),
        StateSource::Instance { path } => Ok(crate::io::load_instance(path)?.0),
        StateSource::Werner { p, bell } => werner_state(*p, *bell),
        StateSource::Ginibre { dims, index } => {
            let dims = Dims::new(dims[0], dims[1])?;
            Ok(ginibre_state(dims, &mut RngSpec::new(seed, format!("state/ginibre/{index}")).rng()))
        }
        StateSource::Basis { dims, index } => {
            let dims = Dims::new(dims[0], dims[1])?;
            if *index >= dims.total() {
                return Err(Error::InvalidParameter(format!("basis index {index} out of range")));
            }
            let mut rho = CMat::zeros(dims.total(), dims.total());
            rho[(*index, *index)] = c(1.0, 0.0);
            QuantumState::new(dims, rho)
        }
    }
}

pub fn load_hamiltonian_source(src: &HamiltonianSource, seed: u64) -> Result<BipartiteHamiltonian> {
    match src {
        HamiltonianSource::File { path } => crate::io::load_hamiltonian(path),
        HamiltonianSource::Instance { path } => Ok(crate::io::load_instance(path)?.1),
        HamiltonianSource::Named { model } => named_hamiltonian(model),
        HamiltonianSource::Random { dims, include_local, index } => {
            let dims = Dims::new(dims[0], dims[1])?;
            let mut rng = RngSpec::new(seed, format!("hamiltonian/random/{index}")).rng();
            Ok(random_hamiltonian(dims, *include_local, &mut rng))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Missing,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:?}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Cell::Bool(b) => Some(*b),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Column {
    pub name: &'static str,
    pub method: &'static str,
}

const fn col(name: &'static str, method: &'static str) -> Column {
    Column { name, method }
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub schema: &'static str,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Values of one column, in row order.
    pub fn values(&self, name: &str) -> Vec<&Cell> {
        match self.column(name) {
            Some(k) => self.rows.iter().map(|r| &r[k]).collect(),
            None => Vec::new(),
        }
    }
}

/// Result of a run: the table plus any ordering or invariant violations.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub config: ExperimentConfig,
    pub table: Table,
    pub violations: Vec<String>,
    /// Notes for the operator, not part of the output file.
    pub notices: Vec<String>,
}

const BOUNDS_SCHEMA: &str = "bounds/1";
const BOUNDS_COLUMNS: [Column; 13] = [
    col("e_global", "spectral rearrangement"),
    col("pe_lower", "direct local-unitary optimization"),
    col("pe_sdp", "min(choi sdp, global)"),
    col("pe_sdp_raw", "choi sdp, unitality + ppt"),
    col("sdp_binding", "which of sdp or global is smaller"),
    col("pe_analytic", "singular-value bound"),
    col("analytic_exact", "bound is tight (two qubits)"),
    col("cp_lower", "direct max minus min energy"),
    col("cp_analytic", "singular-value capacity bound"),
    col("c_global", "spectral rearrangement"),
    col("hypothesis", "maximally mixed marginals / no local terms"),
    col("sdp_iterations", "interior-point iterations"),
    col("flags", "ordering checks"),
];

struct BoundsRow {
    cells: Vec<Cell>,
    flags: Vec<String>,
}

fn bounds_row(state: &QuantumState, ham: &BipartiteHamiltonian, cfg: &ExperimentConfig) -> Result<BoundsRow> {
    let direct = cfg.direct_options();
    let e_global = global_ergotropy(state, ham)?.value;
    let c_global = global_capacity(state, ham)?;
    let pe_lower = pe_lower_bound(state, ham, &direct)?.value;
    let cp_lower = parallel_capacity_lower(state, ham, &direct)?.value;
    let sdp = pe_sdp_bound(state, ham, &cfg.sdp_options())?;
    let hyp = hypothesis_check(state, ham);
    let (pe_an, cp_an, exact) = if hyp.holds() && state.dims().a == state.dims().b {
        let pe = pe_upper_bound_lmm(state, ham)?;
        let cp = pc_upper_bound(state, ham)?;
        (Some(pe.value), Some(cp.value), Some(pe.exact))
    } else {
        (None, None, None)
    };

    let mut flags = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            flags.push(what.to_string());
        }
    };
    let s = ORDERING_SLACK;
    check(pe_lower <= sdp.upper_bound + s, "pe_lower>pe_sdp");
    check(pe_lower <= e_global + s, "pe_lower>e_global");
    check(pe_lower <= cp_lower + s, "pe_lower>cp_lower");
    check(cp_lower <= c_global + s, "cp_lower>c_global");
    if let Some(a) = pe_an {
        check(pe_lower <= a + s, "pe_lower>pe_analytic");
    }
    if let Some(a) = cp_an {
        check(cp_lower <= a + s, "cp_lower>cp_analytic");
    }
    let binding = match sdp.binding {
        BoundSource::Sdp => "sdp",
        BoundSource::GlobalErgotropy => "global",
    };
    let flag_text = if flags.is_empty() { "ok".to_string() } else { flags.join(";") };
    let cells = vec![
        e_global.into(),
        pe_lower.into(),
        sdp.usable_bound.into(),
        sdp.upper_bound.into(),
        binding.into(),
        pe_an.into(),
        exact.map_or(Cell::Missing, Cell::Bool),
        cp_lower.into(),
        cp_an.into(),
        c_global.into(),
        Cell::Text(format!("{hyp:?}").to_lowercase()),
        sdp.solver.iterations.into(),
        Cell::Text(flag_text),
    ];
    Ok(BoundsRow { cells, flags })
}

const SWEEP_SCHEMA: &str = "werner-sweep/1";
const SWEEP_COLUMNS: [Column; 7] = [
    col("p", "Werner visibility"),
    col("e_global", "spectral rearrangement"),
    col("pe_sdp", "choi sdp, unitality + ppt"),
    col("pe_analytic", "singular-value bound"),
    col("pe_lower", "direct local-unitary optimization"),
    col("sdp_binding", "which of sdp or global is smaller"),
    col("flags", "ordering checks"),
];

const COMPARE_SCHEMA: &str = "random-compare/1";
const COMPARE_COLUMNS: [Column; 10] = [
    col("index", "instance number"),
    col("pe_lower", "direct local-unitary optimization"),
    col("pe_sdp", "choi sdp, unitality + ppt"),
    col("pe_analytic", "singular-value bound"),
    col("ratio_sdp", "pe_sdp / pe_lower"),
    col("ratio_analytic", "pe_analytic / pe_lower"),
    col("e_global", "spectral rearrangement"),
    col("state_purity", "tr rho^2"),
    col("sdp_iterations", "interior-point iterations"),
    col("flags", "ordering checks"),
];

const WITNESS_SCHEMA: &str = "witness/1";
const WITNESS_COLUMNS: [Column; 11] = [
    col("parallel_capacity", "direct max minus min energy"),
    col("ceiling_c1", "width minus product-state gaps"),
    col("h_norm_inf", "E_max - E_0"),
    col("gap_plus", "see-saw product minimum of H"),
    col("gap_minus", "see-saw product minimum of -H"),
    col("capacity_detects", "capacity above ceiling + margin"),
    col("fluctuation_lhs", "scaled correlation norm"),
    col("fluctuation_rhs", "local-vector threshold"),
    col("fluctuation_detects", "lhs > rhs"),
    col("hamiltonian_max_capacity", "best capacity over eigenvectors of H"),
    col("hamiltonian_discriminating", "max capacity above ceiling"),
];

const SCAN_SCHEMA: &str = "threshold-scan/1";
const SCAN_COLUMNS: [Column; 8] = [
    col("p", "Werner visibility"),
    col("parallel_capacity", "direct max minus min energy"),
    col("ceiling_c1", "width minus product-state gaps"),
    col("capacity_detects", "capacity above ceiling + margin"),
    col("fluctuation_lhs", "scaled correlation norm"),
    col("fluctuation_rhs", "local-vector threshold"),
    col("fluctuation_detects", "lhs > rhs"),
    col("entangled", "p > 1/3"),
];

fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start {jobs} worker threads: {e}")))?;
    Ok(pool.install(f))
}

/// Upfront wall-clock estimate for a random comparison.
pub fn random_compare_estimate(dims: Dims, count: usize) -> Duration {
    let per = match dims.total() {
        0..=4 => 0.3,
        5..=6 => 2.0,
        _ => QUTRIT_SDP_SECONDS,
    };
    Duration::from_secs_f64(per * count as f64)
}

/// Instance `index` of a random comparison: a Ginibre state and a random
/// Hamiltonian from streams keyed by the index.
pub fn random_compare_instance(
    dims: Dims,
    include_local: bool,
    seed: u64,
    index: usize,
) -> (QuantumState, BipartiteHamiltonian) {
    let base = RngSpec::new(seed, format!("random-compare/{index}"));
    let state = ginibre_state(dims, &mut base.child("state").rng());
    let ham = random_hamiltonian(dims, include_local, &mut base.child("hamiltonian").rng());
    (state, ham)
}

/// Runs `config`; `jobs` (0 = rayon default) only changes scheduling, and
/// `progress` is called with the number of finished instances.
pub fn run(config: &ExperimentConfig, jobs: usize, progress: &(dyn Fn(usize, usize) + Sync)) -> Result<RunOutput> {
    if config.dps_level != 0 {
        return Err(Error::NotImplemented(format!(
            "symmetric-extension level {} (only level 0 is available)",
            config.dps_level
        )));
    }
    let mut config = config.clone();
    let mut notices = Vec::new();
    let mut violations = Vec::new();
    if let Command::RandomCompare { dims, count, .. } = &mut config.command {
        if dims[0] * dims[1] >= 9 && *count > QUTRIT_COUNT_CAP {
            notices.push(format!("count capped from {count} to {QUTRIT_COUNT_CAP}"));
            *count = QUTRIT_COUNT_CAP;
        }
    }
    let command = config.command.clone();
    let table = match &command {
        Command::Bounds { state, hamiltonian } => {
            let st = load_state_source(state, config.seed)?;
            let h = load_hamiltonian_source(hamiltonian, config.seed)?;
            let row = bounds_row(&st, &h, &config)?;
            violations.extend(row.flags);
            progress(1, 1);
            Table { schema: BOUNDS_SCHEMA, columns: BOUNDS_COLUMNS.to_vec(), rows: vec![row.cells] }
        }
        Command::WernerSweep { hamiltonian, bell, grid } => {
            let h = load_hamiltonian_source(hamiltonian, config.seed)?;
            let (bell, grid) = (*bell, grid.clone());
            let done = std::sync::atomic::AtomicUsize::new(0);
            let cfg = &config;
            let rows: Vec<Result<(Vec<Cell>, Vec<String>)>> = with_jobs(jobs, || {
                grid.par_iter()
                    .map(|&p| {
                        let st = werner_state(p, bell)?;
                        let r = bounds_row(&st, &h, cfg)?;
                        let k = done.fetch_add(1, std::sync::atomic::Ordering::SeqCst) + 1;
                        progress(k, grid.len());
                        let pick = |name: &str| {
                            r.cells[BOUNDS_COLUMNS.iter().position(|c| c.name == name).expect("column")].clone()
                        };
                        let cells = vec![
                            p.into(),
                            pick("e_global"),
                            pick("pe_sdp_raw"),
                            pick("pe_analytic"),
                            pick("pe_lower"),
                            pick("sdp_binding"),
                            pick("flags"),
                        ];
                        Ok((cells, r.flags.iter().map(|f| format!("p={p}: {f}")).collect()))
                    })
                    .collect()
            })?;
            let mut out = Vec::new();
            for r in rows {
                let (cells, flags) = r?;
                violations.extend(flags);
                out.push(cells);
            }
            Table { schema: SWEEP_SCHEMA, columns: SWEEP_COLUMNS.to_vec(), rows: out }
        }
        Command::RandomCompare { dims, count, include_local } => {
            let d = Dims::new(dims[0], dims[1])?;
            let (count, include_local) = (*count, *include_local);
            let done = std::sync::atomic::AtomicUsize::new(0);
            let cfg = &config;
            let rows: Vec<Result<(Vec<Cell>, Vec<String>)>> = with_jobs(jobs, || {
                (0..count)
                    .into_par_iter()
                    .map(|i| {
                        let (st, h) = random_compare_instance(d, include_local, cfg.seed, i);
                        let r = compare_row(i, &st, &h, cfg)?;
                        let k = done.fetch_add(1, std::sync::atomic::Ordering::SeqCst) + 1;
                        progress(k, count);
                        Ok(r)
                    })
                    .collect()
            })?;
            let mut out = Vec::new();
            for r in rows {
                let (cells, flags) = r?;
                violations.extend(flags);
                out.push(cells);
            }
            Table { schema: COMPARE_SCHEMA, columns: COMPARE_COLUMNS.to_vec(), rows: out }
        }
        Command::Witness { state, hamiltonian } => {
            let st = load_state_source(state, config.seed)?;
            let h = load_hamiltonian_source(hamiltonian, config.seed)?;
            let opts = config.witness_options();
            let profile = hamiltonian_profile(&h, &opts)?;
            let w = witness_report_with(&st, &h, &profile, &opts)?;
            if (w.ceiling_c1 - (w.h_norm_inf - w.gap_plus - w.gap_minus)).abs() > 1e-8 {
                violations.push("ceiling_c1 inconsistent with its parts".into());
            }
            if w.gap_plus < -1e-9 || w.gap_minus < -1e-9 {
                violations.push("negative entanglement gap".into());
            }
            if !w.hamiltonian_discriminating {
                notices.push("Hamiltonian is non-discriminating: no state beats the product ceiling".into());
            }
            progress(1, 1);
            let row = vec![
                w.parallel_capacity.into(),
                w.ceiling_c1.into(),
                w.h_norm_inf.into(),
                w.gap_plus.into(),
                w.gap_minus.into(),
                w.capacity_detects.into(),
                w.fluctuation.map(|f| f.lhs).into(),
                w.fluctuation.map(|f| f.rhs).into(),
                w.fluctuation_detects.map_or(Cell::Missing, Cell::Bool),
                w.hamiltonian_max_capacity.into(),
                w.hamiltonian_discriminating.into(),
            ];
            Table { schema: WITNESS_SCHEMA, columns: WITNESS_COLUMNS.to_vec(), rows: vec![row] }
        }
        Command::ThresholdScan { hamiltonian, bell, grid } => {
            let h = load_hamiltonian_source(hamiltonian, config.seed)?;
            let opts = config.witness_options();
            let profile = hamiltonian_profile(&h, &opts)?;
            let (bell, grid) = (*bell, grid.clone());
            let done = std::sync::atomic::AtomicUsize::new(0);
            let rows: Vec<Result<Vec<Cell>>> = with_jobs(jobs, || {
                grid.par_iter()
                    .map(|&p| {
                        let st = werner_state(p, bell)?;
                        let w = witness_report_with(&st, &h, &profile, &opts)?;
                        let k = done.fetch_add(1, std::sync::atomic::Ordering::SeqCst) + 1;
                        progress(k, grid.len());
                        Ok(vec![
                            p.into(),
                            w.parallel_capacity.into(),
                            w.ceiling_c1.into(),
                            w.capacity_detects.into(),
                            w.fluctuation.map(|f| f.lhs).into(),
                            w.fluctuation.map(|f| f.rhs).into(),
                            w.fluctuation_detects.map_or(Cell::Missing, Cell::Bool),
                            (p > 1.0 / 3.0).into(),
                        ])
                    })
                    .collect()
            })?;
            let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
            // Werner states with p ≤ 1/3 are separable; a detection there is unsound.
            for r in &rows {
                let p = r[0].as_f64().unwrap_or(0.0);
                if p <= 1.0 / 3.0 && (r[3].as_bool() == Some(true) || r[6].as_bool() == Some(true)) {
                    violations.push(format!("p={p}: separable state flagged as entangled"));
                }
            }
            Table { schema: SCAN_SCHEMA, columns: SCAN_COLUMNS.to_vec(), rows }
        }
    };
    Ok(RunOutput { config, table, violations, notices })
}

fn compare_row(
    index: usize,
    state: &QuantumState,
    ham: &BipartiteHamiltonian,
    cfg: &ExperimentConfig,
) -> Result<(Vec<Cell>, Vec<String>)> {
    let direct = cfg.direct_options();
    let pe_lower = pe_lower_bound(state, ham, &direct)?.value;
    let sdp = pe_sdp_bound(state, ham, &cfg.sdp_options())?;
    let analytic = if hypothesis_check(state, ham).holds() && state.dims().a == state.dims().b {
        Some(pe_upper_bound_lmm(state, ham)?.value)
    } else {
        None
    };
    let e_global = global_ergotropy(state, ham)?.value;
    let ratio = |b: f64| if pe_lower > 0.0 { Some(b / pe_lower) } else { None };
    let mut flags = Vec::new();
    if pe_lower > sdp.upper_bound + ORDERING_SLACK {
        flags.push(format!("instance {index}: pe_lower>pe_sdp"));
    }
    if let Some(a) = analytic {
        if pe_lower > a + ORDERING_SLACK {
            flags.push(format!("instance {index}: pe_lower>pe_analytic"));
        }
    }
    let flag_text = if flags.is_empty() {
        "ok".to_string()
    } else {
        flags.iter().map(|f| f.split(": ").nth(1).unwrap_or(f)).collect::<Vec<_>>().join(";")
    };
    let cells = vec![
        index.into(),
        pe_lower.into(),
        sdp.upper_bound.into(),
        analytic.into(),
        ratio(sdp.upper_bound).into(),
        analytic.and_then(ratio).into(),
        e_global.into(),
        state.purity().into(),
        sdp.solver.iterations.into(),
        Cell::Text(flag_text),
    ];
    Ok((cells, flags))
}

fn config_json(config: &ExperimentConfig) -> String {
    serde_json::to_string(config).expect("config serializes")
}

pub fn render(output: &RunOutput) -> Result<String> {
    let t = &output.table;
    match output.config.format {
        Format::Csv => {
            let mut s = String::new();
            s.push_str(&format!("# artifact: {ARTIFACT_VERSION}\n"));
            s.push_str(&format!("# schema: {}\n", t.schema));
            s.push_str(&format!("# config: {}\n", config_json(&output.config)));
            let methods: Vec<String> = t.columns.iter().map(|c| format!("{}={}", c.name, c.method)).collect();
            s.push_str(&format!("# methods: {}\n", methods.join("; ")));
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(t.columns.iter().map(|c| c.name)).map_err(csv_err)?;
            for row in &t.rows {
                w.write_record(row.iter().map(Cell::render)).map_err(csv_err)?;
            }
            let body = w.into_inner().map_err(|e| Error::Parse(format!("CSV writer: {e}")))?;
            s.push_str(std::str::from_utf8(&body).expect("CSV of UTF-8 cells is UTF-8"));
            Ok(s)
        }
        Format::Json => {
            let rows: Vec<serde_json::Map<String, serde_json::Value>> = t
                .rows
                .iter()
                .map(|r| {
                    t.columns
                        .iter()
                        .zip(r)
                        .map(|(c, v)| (c.name.to_string(), serde_json::to_value(v).expect("cell serializes")))
                        .collect()
                })
                .collect();
            let doc = serde_json::json!({
                "artifact": ARTIFACT_VERSION,
                "schema": t.schema,
                "config": output.config,
                "columns": t.columns,
                "rows": rows,
            });
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            Ok(s)
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("CSV writer: {e}"))
}

/// Reads the embedded config from a CSV or JSON output file.
pub fn embedded_config(text: &str) -> Result<ExperimentConfig> {
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(text)?;
        let cfg = v.get("config").ok_or_else(|| Error::Parse("JSON output has no `config` field".into()))?;
        return Ok(serde_json::from_value(cfg.clone())?);
    }
    let line = text
        .lines()
        .find_map(|l| l.strip_prefix("# config: "))
        .ok_or_else(|| Error::Parse("CSV output has no `# config:` header line".into()))?;
    serde_json::from_str(line).map_err(|e| Error::Parse(format!("embedded config: {e}")))
}

#[derive(Debug, Clone)]
pub struct Replay {
    pub identical: bool,
    pub original: String,
    pub regenerated: String,
    /// First differing line number (1-based), if any.
    pub first_difference: Option<usize>,
}

pub fn replay(path: impl AsRef<Path>, jobs: usize) -> Result<Replay> {
    let original = std::fs::read_to_string(path)?;
    let config = embedded_config(&original)?;
    let regenerated = render(&run(&config, jobs, &|_, _| {})?)?;
    let first_difference = original
        .lines()
        .zip(regenerated.lines())
        .position(|(a, b)| a != b)
        .or_else(|| (original.lines().count() != regenerated.lines().count()).then(|| original.lines().count().min(regenerated.lines().count())))
        .map(|k| k + 1);
    Ok(Replay { identical: original == regenerated, original, regenerated, first_difference })
}
